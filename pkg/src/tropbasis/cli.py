"""Command-line front end.

Every command prints one report, as text (default) or as JSON with sorted
keys.  Rationals are written ``p/q`` and infinity as ``"inf"``.

Exit codes: 0 success, 1 negative verdict (lift rejected or not
constructible), 2 bad input, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .assignment import trop_permanent
from .core import INF, BudgetExceeded, MatrixFormatError, format_scalar, parse_matrix_text, pattern
from .lift import (
    LiftError,
    classify_pattern_case,
    construct_lift_case_iii,
    construct_lift_case_iv,
    verify_lift,
)
from .puiseux import KSyntaxError, format_k_matrix, parse_k_matrix
from .rank import DEFAULT_RANK_BUDGET, MAX_DEPENDENCE_ROWS, find_dependence, rank_with_witness
from .witness import BASIS_HOLDS, is_tropical_basis, witness

EXIT_OK, EXIT_REJECTED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
THREADS_ENV = "TROPBASIS_THREADS"


class InputError(ValueError):
    pass


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction) or x == INF:
        return format_scalar(x)
    if isinstance(x, float):
        raise TypeError(f"refusing to serialize float {x!r}")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _matrix_rows(M):
    return [[format_scalar(x) for x in row] for row in M]


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_matrix(path):
    try:
        return parse_matrix_text(_read(path))
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _require_finite(M, path, what):
    if not M.finite_only:
        raise InputError(f"{path}: {what} needs finite entries; 'inf' is allowed only for permanent and singular")


def _thread_cap():
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return None
    if not raw.isdigit() or int(raw) < 1:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return int(raw)


# --- commands ----------------------------------------------------------------

def cmd_rank(args):
    M = _load_matrix(args.file)
    _require_finite(M, args.file, "rank")
    res = rank_with_witness(M, args.budget or DEFAULT_RANK_BUDGET)
    result = {"tropical_rank": res.rank, "witness_rows": list(res.rows), "witness_cols": list(res.cols)}
    text = [f"tropical rank: {res.rank}", f"nonsingular witness: rows {list(res.rows)}, columns {list(res.cols)}"]
    return {"file": args.file, "shape": [M.rows, M.cols]}, result, {}, text


def cmd_permanent(args):
    M = _load_matrix(args.file)
    if M.rows != M.cols:
        raise InputError(f"{args.file}: permanent needs a square matrix, got {M.rows}x{M.cols}")
    res = trop_permanent(M)
    result = {"value": res.value, "witness": list(res.witness) if res.witness else None, "unique": res.unique}
    text = [f"permanent: {format_scalar(res.value)}", f"attained uniquely: {'yes' if res.unique else 'no'}"]
    if res.witness:
        text.append(f"optimal permutation: {list(res.witness)}")
    return {"file": args.file, "shape": [M.rows, M.cols]}, result, {}, text


def cmd_singular(args):
    M = _load_matrix(args.file)
    if M.rows != M.cols:
        raise InputError(f"{args.file}: singularity needs a square matrix, got {M.rows}x{M.cols}")
    res = trop_permanent(M)
    singular = not res.unique
    result = {"singular": singular, "permanent": res.value}
    text = [f"tropically {'singular' if singular else 'nonsingular'} (permanent {format_scalar(res.value)})"]
    return {"file": args.file, "shape": [M.rows, M.cols]}, result, {}, text


def cmd_pattern(args):
    M = _load_matrix(args.file)
    _require_finite(M, args.file, "pattern")
    P = pattern(M)
    supports = [sorted(s) for s in P.supports()]
    result = {"pattern": _matrix_rows(P), "supports": supports}
    text = [" ".join("0" if x == 0 else "inf" for x in row) for row in P]
    text.append("supports: " + " ".join("{" + ",".join(map(str, s)) + "}" for s in supports))
    return {"file": args.file, "shape": [M.rows, M.cols]}, result, {}, text


def cmd_dependence(args):
    M = _load_matrix(args.file)
    _require_finite(M, args.file, "dependence")
    limit = args.budget or MAX_DEPENDENCE_ROWS
    if M.rows > limit:
        raise BudgetExceeded(f"{M.rows} rows exceed the dependence budget {limit}")
    cert = find_dependence(M)
    result = {"dependent": cert is not None}
    certs = {}
    if cert is None:
        text = ["rows are tropically independent"]
    else:
        certs["dependence"] = list(cert)
        text = ["rows are tropically dependent", "certificate: " + " ".join(format_scalar(x) for x in cert)]
    return {"file": args.file, "shape": [M.rows, M.cols]}, result, certs, text


def _lift_payload(lift):
    serialized = format_k_matrix(lift.F)
    result = {"rank_over_K": lift.verified_rank_bound, "shape": [lift.F.rows, lift.F.cols]}
    text = [f"rank over K: {lift.verified_rank_bound}", "lift:"] + serialized.rstrip("\n").split("\n")
    return result, {"lift": serialized.rstrip("\n").split("\n")}, text


def cmd_lift_verify(args):
    A = _load_matrix(args.matrix)
    try:
        F = parse_k_matrix(_read(args.lift))
    except (KSyntaxError, ValueError) as exc:
        raise InputError(f"{args.lift}: {exc}") from None
    if F.shape != A.shape:
        raise InputError(f"lift shape {F.rows}x{F.cols} differs from matrix shape {A.rows}x{A.cols}")
    lift = verify_lift(F, A)
    result = {"verified": True, "rank_over_K": lift.verified_rank_bound}
    text = ["lift verified: degrees match entrywise", f"rank over K: {lift.verified_rank_bound}"]
    return {"matrix": args.matrix, "lift": args.lift}, result, {}, text


def _cmd_construct(builder):
    def run(args):
        W = _load_matrix(args.file)
        _require_finite(W, args.file, "lift construction")
        lift = builder(W)
        result, certs, text = _lift_payload(lift)
        return {"file": args.file, "shape": [W.rows, W.cols]}, result, certs, text
    return run


def cmd_lift_classify(args):
    M = _load_matrix(args.file)
    _require_finite(M, args.file, "classification")
    if M.rows != 6:
        raise InputError(f"{args.file}: classification needs 6 rows, got {M.rows}")
    try:
        label, W, trace = classify_pattern_case(M, args.budget or 60)
    except ValueError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    result = {"case": label, "matrix": _matrix_rows(W)}
    certs = {"trace": [t.describe() for t in trace]}
    text = [f"case: {label}", "equivalent matrix:"] + [" ".join(row) for row in _matrix_rows(W)]
    text.append("transforms: " + (", ".join(certs["trace"]) or "none"))
    return {"file": args.file, "shape": [M.rows, M.cols]}, result, certs, text


def _dims(args):
    d, n, r = args.d, args.n, args.r
    if d < 1 or n < 1 or not 1 <= r <= min(d, n):
        raise InputError(f"need 1 <= r <= min(d, n), got d={d}, n={n}, r={r}")
    return {"d": d, "n": n, "r": r}


def cmd_witness(args):
    inputs = _dims(args)
    rep = witness(args.d, args.n, args.r)
    if rep == BASIS_HOLDS:
        return inputs, {"basis_holds": True}, {}, [f"{args.r}x{args.r} minors form a tropical basis: no witness exists"]
    result = {
        "basis_holds": False,
        "matrix": _matrix_rows(rep.matrix),
        "claimed_trop_rank": rep.claimed_trop_rank,
        "claimed_kapranov_lower": rep.claimed_kapranov_lower,
        "trop_rank_verified": rep.trop_rank_verified,
        "kapranov_verified": rep.kapranov_verified,
        "provenance": list(rep.provenance),
    }
    text = [
        f"tropical rank {rep.claimed_trop_rank} ({'verified' if rep.trop_rank_verified else 'not verified'})",
        f"Kapranov rank >= {rep.claimed_kapranov_lower} (claimed, not verified)",
        "construction: " + " -> ".join(rep.provenance),
    ] + [" ".join(row) for row in _matrix_rows(rep.matrix)]
    return inputs, result, {}, text


def cmd_classify_basis(args):
    inputs = _dims(args)
    basis = is_tropical_basis(args.d, args.n, args.r)
    verdict = "tropical basis" if basis else "NOT a tropical basis"
    text = [f"{args.r}x{args.r} minors of {args.d}x{args.n} matrices: {verdict}"]
    return inputs, {"tropical_basis": basis}, {}, text


# --- parser and entry point --------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget", type=int, default=None, help="size budget for exhaustive searches")
    parser = argparse.ArgumentParser(prog="tropbasis", description="Exact tropical rank and Kapranov rank tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, hlp in [
        ("rank", cmd_rank, "tropical rank with a nonsingular witness"),
        ("permanent", cmd_permanent, "tropical permanent and uniqueness of the optimum"),
        ("singular", cmd_singular, "tropical singularity of a square matrix"),
        ("pattern", cmd_pattern, "0/inf pattern of the column minima"),
        ("dependence", cmd_dependence, "tropical dependence of the rows"),
    ]:
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("file")
        p.set_defaults(func=func, name=name)

    lift = sub.add_parser("lift", help="lifts to the Puiseux field")
    lsub = lift.add_subparsers(dest="lift_command", required=True)
    p = lsub.add_parser("verify", parents=[common], help="check that F lifts A")
    p.add_argument("matrix")
    p.add_argument("lift")
    p.set_defaults(func=cmd_lift_verify, name="lift verify")
    for name, builder in [("case-iv", construct_lift_case_iv), ("case-iii", construct_lift_case_iii)]:
        p = lsub.add_parser(name, parents=[common], help=f"rank-3 lift of a {name} matrix")
        p.add_argument("file")
        p.set_defaults(func=_cmd_construct(builder), name=f"lift {name}")
    p = lsub.add_parser("classify", parents=[common], help="search for a case shape")
    p.add_argument("file")
    p.set_defaults(func=cmd_lift_classify, name="lift classify")

    for name, func, hlp in [
        ("witness", cmd_witness, "matrix with Kapranov rank above tropical rank"),
        ("classify-basis", cmd_classify_basis, "do the r x r minors form a tropical basis"),
    ]:
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("d", type=int)
        p.add_argument("n", type=int)
        p.add_argument("r", type=int)
        p.set_defaults(func=func, name=name)
    return parser


def _emit(fmt, report, text_lines, out):
    if fmt == "json":
        out.write(json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def run(argv=None, out=None):
    """Parse ``argv``, execute, print the report and return ``(exit code, report)``."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_INPUT), None
    report = {"command": args.name, "inputs": {}, "result": {}, "certificates": {}, "status": "ok"}
    try:
        _thread_cap()
        if args.budget is not None and args.budget < 1:
            raise InputError("--budget must be positive")
        inputs, result, certs, text = args.func(args)
        report.update(inputs=inputs, result=result, certificates=certs)
        code = EXIT_OK
    except InputError as exc:
        code, text = EXIT_INPUT, [f"error: {exc}"]
        report.update(status="error", message=str(exc))
    except BudgetExceeded as exc:
        code, text = EXIT_BUDGET, [f"budget exceeded: {exc}"]
        report.update(status="error", message=f"budget exceeded: {exc}")
    except LiftError as exc:
        code, text = EXIT_REJECTED, [f"rejected: {exc}"]
        report.update(status="error", message=str(exc))
    _emit(args.format, report, text, out)
    return code, report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
