"""Lifts of tropical matrices to the Puiseux field and rank-3 lift constructions.

A lift of ``A`` is a matrix ``F`` over K with ``deg F = A`` entrywise; the
classical rank of any lift bounds the Kapranov rank of ``A`` from above.
The builders here produce rank-3 lifts of 6-row matrices of tropical rank 3
whose patterns have one of five shapes (labelled ``i`` to ``v``).  Every
builder checks its own output: degrees entrywise and the rank over K.

Rows and columns are 0-based.  "Generic" scalar choices are made by trying
small positive integers in a fixed order and keeping the first choice for
which every required degree equality holds.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    INF,
    Transform,
    TropMatrix,
    column_gap,
    normalize_columns,
    pattern,
    perturbation_trace,
    replay,
    to_trop,
    ttimes,
)
from .puiseux import (
    K_ONE,
    K_ZERO,
    KMatrix,
    cofactor,
    cramer_solve,
    determinant,
    left_kernel_vector,
    rank_over_K,
    t_pow,
    to_k,
)
from .rank import check_dependence, dependence_range, find_dependence

GENERIC_LIMIT = 12
CASE_LABELS = ("i", "ii", "iii", "iv", "v", "unclassified")


class LiftError(ValueError):
    """A lift could not be verified or constructed.

    ``step`` names the construction step that failed and ``position`` the
    offending entry or column when there is one.
    """

    def __init__(self, message, step=None, position=None):
        self.step = step
        self.position = position
        prefix = f"[{step}] " if step else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class LiftMatrix:
    F: KMatrix
    target: TropMatrix
    verified_rank_bound: int | None = None

    def __post_init__(self):
        if self.F.shape != self.target.shape:
            raise LiftError(f"shape {self.F.shape} differs from target {self.target.shape}")
        for i in range(self.F.rows):
            for j in range(self.F.cols):
                d = self.F[i, j].degree()
                if d != self.target[i, j]:
                    raise LiftError(
                        f"entry ({i}, {j}) has degree {_fmt(d)}, target is {_fmt(self.target[i, j])}",
                        position=(i, j),
                    )


def _fmt(x):
    return "inf" if x == INF else str(x)


def verify_lift(F: KMatrix, A: TropMatrix) -> LiftMatrix:
    """Check ``deg F = A`` entrywise and attach ``rank_over_K(F)`` when within budget."""
    if not isinstance(A, TropMatrix):
        A = TropMatrix(A)
    if not isinstance(F, KMatrix):
        F = KMatrix(F)
    lift = LiftMatrix(F, A)
    if min(F.shape) <= 6:
        lift = LiftMatrix(F, A, rank_over_K(F))
    return lift


def monomial_lift(A: TropMatrix, coefficients=None) -> KMatrix:
    """The lift ``(c_ij * t^a_ij)``; coefficients default to 1."""
    rows = []
    for i, row in enumerate(A):
        out = []
        for j, a in enumerate(row):
            c = 1 if coefficients is None else coefficients[i][j]
            out.append(K_ZERO if a == INF else t_pow(a, c))
        rows.append(out)
    return KMatrix(rows)


def _generic(count, limit=GENERIC_LIMIT):
    """Tuples of positive integers of the given length, ordered by largest entry."""
    if count == 0:
        yield ()
        return
    for top in range(1, limit + 1):
        for tup in itertools.product(range(1, top + 1), repeat=count):
            if top in tup:
                yield tup


def _degrees(vec):
    return [x.degree() for x in vec]


# --- linear systems with prescribed degrees ---------------------------------

def solve_single_equation(l, a) -> list:
    """``x`` with ``deg x_j = a_j`` and ``sum_j l_j x_j = 0``.

    Requires ``deg l`` to realize the tropical dependence of the vector
    ``a``.  All unknowns but one are monomials ``t^a_j``; the last index
    attaining ``min(a_j + deg l_j)`` is solved for.  When leading terms
    cancel, the coefficients of the other minimal monomials are varied.
    """
    l = [to_k(x) for x in l]
    a = [to_trop(x) for x in a]
    if len(l) != len(a) or not l:
        raise LiftError("l and a must be nonempty and of equal length", step="single-equation")
    if any(x == INF for x in a):
        raise LiftError("prescribed degrees must be finite", step="single-equation")
    degs = _degrees(l)
    if all(d == INF for d in degs) or not check_dependence(TropMatrix([[x] for x in a]), degs):
        raise LiftError("deg l does not realize the tropical dependence of a", step="single-equation")
    vals = [ttimes(d, x) for d, x in zip(degs, a)]
    low = min(vals)
    ties = [j for j, v in enumerate(vals) if v == low]
    j1 = ties[-1]
    varied = ties[:-1]
    for coefs in itertools.chain([(1,) * len(varied)], _generic(len(varied))):
        c = dict(zip(varied, coefs))
        x = [t_pow(a[j], c.get(j, 1)) for j in range(len(a))]
        s = K_ZERO
        for j in range(len(a)):
            if j != j1 and l[j]:
                s = s + l[j] * x[j]
        x[j1] = -s / l[j1]
        if x[j1].degree() == a[j1]:
            return x
    raise LiftError("no coefficient choice avoids cancellation", step="single-equation")


def _theta(A: KMatrix, h, col):
    vals = [ttimes(A[j, col].degree(), h[j]) for j in range(A.rows)]
    low = min(vals)
    return low, frozenset(j for j, v in enumerate(vals) if v == low)


def two_equation_thetas(A: KMatrix, h):
    """The sets of rows attaining ``min(deg a_ji + h_j)`` for both columns."""
    h = [to_trop(x) for x in h]
    return _theta(A, h, 0)[1], _theta(A, h, 1)[1]


def solve_two_equations(A: KMatrix, h) -> list:
    """``x`` in K^5 with ``deg x = h`` and ``sum_j a_ji x_j = 0`` for both columns ``i``."""
    step = "two-equations"
    if A.shape != (5, 2):
        raise LiftError(f"expected a 5x2 matrix, got {A.rows}x{A.cols}", step=step)
    h = [to_trop(x) for x in h]
    if len(h) != 5 or any(x == INF for x in h):
        raise LiftError("h must be 5 finite rationals", step=step)
    problems = []
    for i in range(2):
        if not any(A[j, i] for j in range(5)):
            problems.append(f"column {i} has no nonzero entry")
    for p, q in itertools.combinations(range(5), 2):
        minor = A[p, 0] * A[q, 1] - A[q, 0] * A[p, 1]
        want = min(ttimes(A[p, 0].degree(), A[q, 1].degree()), ttimes(A[q, 0].degree(), A[p, 1].degree()))
        if minor.degree() != want:
            problems.append(f"minor on rows ({p}, {q}) has degree {_fmt(minor.degree())}, expected {_fmt(want)}")
    if problems:
        raise LiftError("; ".join(problems), step=step)
    th1, th2 = two_equation_thetas(A, h)
    if len(th1) < 2:
        problems.append(f"|Theta_1| = {len(th1)} < 2")
    if len(th2) < 2:
        problems.append(f"|Theta_2| = {len(th2)} < 2")
    if len(th1 | th2) < 3:
        problems.append(f"|Theta_1 u Theta_2| = {len(th1 | th2)} < 3")
    if problems:
        raise LiftError("; ".join(problems), step=step)
    for p in sorted(th1):
        for q in sorted(th2):
            if p == q or not (th1 - {p, q}) or not (th2 - {p, q}):
                continue
            rest = [r for r in range(5) if r not in (p, q)]
            M = KMatrix([[A[p, 0] * t_pow(h[p]), A[q, 0] * t_pow(h[q])],
                         [A[p, 1] * t_pow(h[p]), A[q, 1] * t_pow(h[q])]])
            if determinant(M).is_zero():
                continue
            for xi in _generic(3):
                x = [None] * 5
                for r, c in zip(rest, xi):
                    x[r] = t_pow(h[r], c)
                rhs = [-sum((A[r, i] * x[r] for r in rest), K_ZERO) for i in range(2)]
                y = cramer_solve(M, rhs)
                if all(v.degree() == 0 for v in y):
                    x[p] = y[0] * t_pow(h[p])
                    x[q] = y[1] * t_pow(h[q])
                    _check_system(A, x, h, step)
                    return x
    raise LiftError("no generic choice produced the prescribed degrees", step=step)


def _check_system(A: KMatrix, x, h, step):
    for j, (v, d) in enumerate(zip(x, h)):
        if v.degree() != d:
            raise LiftError(f"unknown {j} has degree {_fmt(v.degree())}, expected {_fmt(d)}", step=step)
    for i in range(A.cols):
        s = K_ZERO
        for j in range(A.rows):
            if A[j, i]:
                s = s + A[j, i] * x[j]
        if s:
            raise LiftError(f"equation {i} is not satisfied", step=step)


def three_equation_bound(A: KMatrix, h):
    """``D = sum_i min_j (deg a_ji + h_j)``."""
    return sum(min(ttimes(A[j, i].degree(), h[j]) for j in range(A.rows)) for i in range(A.cols))


def check_three_equation_hypothesis(A: KMatrix, h, uvyz):
    """The first triple of ``uvyz`` violating the minor-degree condition, or ``None``."""
    D = three_equation_bound(A, h)
    if D == INF:
        return "D"
    for tri in itertools.combinations(uvyz, 3):
        d = determinant(A.submatrix(list(tri), [0, 1, 2])).degree()
        if d != D - sum(h[k] for k in tri):
            return tri
    return None


def solve_three_equations(A: KMatrix, h, uvyz) -> list:
    """``x`` in K^6 with ``deg x = h`` and ``sum_j a_ji x_j = 0`` for the three columns."""
    step = "three-equations"
    if A.shape != (6, 3):
        raise LiftError(f"expected a 6x3 matrix, got {A.rows}x{A.cols}", step=step)
    h = [to_trop(x) for x in h]
    if len(h) != 6 or any(x == INF for x in h):
        raise LiftError("h must be 6 finite rationals", step=step)
    uvyz = tuple(uvyz)
    if len(set(uvyz)) != 4 or not all(0 <= k < 6 for k in uvyz):
        raise LiftError("uvyz must be 4 distinct row indices", step=step)
    bad = check_three_equation_hypothesis(A, h, uvyz)
    if bad == "D":
        raise LiftError("D is infinite", step=step)
    if bad is not None:
        raise LiftError(f"minor-degree condition fails for rows {bad}", step=step, position=bad)
    u, v, y, z = uvyz
    solved = [u, v, y]
    fixed = [k for k in range(6) if k not in uvyz]
    M = KMatrix([[A[k, i] for k in solved] for i in range(3)])
    for (xi,) in _generic(1, 4 * GENERIC_LIMIT):
        x = [None] * 6
        x[z] = t_pow(h[z], xi)
        for k in fixed:
            x[k] = t_pow(h[k])
        rhs = [-sum((A[k, i] * x[k] for k in [z] + fixed), K_ZERO) for i in range(3)]
        sol = cramer_solve(M, rhs)
        if all(s.degree() == h[k] for s, k in zip(sol, solved)):
            for s, k in zip(sol, solved):
                x[k] = s
            _check_system(A, x, h, step)
            return x
    raise LiftError("no generic choice produced the prescribed degrees", step=step)


# --- structured coefficient matrices ----------------------------------------

CASE_III_TRIPLES = (frozenset({0, 1, 2}), frozenset({0, 3, 4}), frozenset({1, 3, 5}), frozenset({2, 4, 5}))


def _finite(x, name):
    x = to_trop(x)
    if x == INF:
        raise LiftError(f"parameter {name} must be finite", step="build-lambda")
    return x


def build_lambda(case: str, *params) -> KMatrix:
    """The coefficient matrix used by the case construction, with its degree facts checked.

    ``"iv"`` takes ``(a, b)`` with ``a, b > 0`` and returns a 3x3 matrix whose
    entries have degree 0, cofactors degree ``a`` and determinant degree
    ``2a + b``.  ``"iii"`` takes ``(a, b, c, d) >= 0`` and returns a 6x3
    matrix whose top 3x3 block ``L`` has ``deg det L = a`` and cofactors of
    degree 0, and whose 3x3 minors avoiding the four support triples have
    degree 0.  ``"i"`` takes ``(mu1, mu2, mu3, y1, y2, y3)``.
    """
    step = "build-lambda"
    if case == "iv":
        if len(params) != 2:
            raise LiftError("case iv takes (a, b)", step=step)
        a, b = (_finite(p, n) for p, n in zip(params, "ab"))
        if a <= 0 or b <= 0:
            raise LiftError("case iv needs a > 0 and b > 0", step=step)
        ta = t_pow(a)
        lam = KMatrix([
            [K_ONE + ta, K_ONE, K_ONE],
            [K_ONE, K_ONE + ta, K_ONE],
            [K_ONE, K_ONE, 2 / (2 + ta) + t_pow(a + b)],
        ])
        _self_check(all(x.degree() == 0 for row in lam for x in row), "entries of degree 0")
        _self_check(all(cofactor(lam, i, j).degree() == a for i in range(3) for j in range(3)), "cofactors of degree a")
        _self_check(determinant(lam).degree() == 2 * a + b, "determinant of degree 2a+b")
        return lam
    if case == "iii":
        if len(params) != 4:
            raise LiftError("case iii takes (a, b, c, d)", step=step)
        a, b, c, d = (_finite(p, n) for p, n in zip(params, "abcd"))
        if min(a, b, c, d) < 0:
            raise LiftError("case iii needs a, b, c, d >= 0", step=step)
        corner = (2 + t_pow(b) - 10 * t_pow(b + c + d) - 5 * t_pow(d)) / (-1 + 4 * t_pow(c) + 2 * t_pow(a + c))
        lam = KMatrix([
            [2 + t_pow(a), K_ONE, -t_pow(b)],
            [K_ONE, 2 * t_pow(c), K_ONE],
            [5 * t_pow(d), K_ONE, corner],
            [-K_ONE, K_ZERO, K_ZERO],
            [K_ZERO, -K_ONE, K_ZERO],
            [K_ZERO, K_ZERO, -K_ONE],
        ])
        L = lam.submatrix([0, 1, 2])
        _self_check(determinant(L).degree() == a, "deg det L = a")
        _self_check(all(cofactor(L, i, j).degree() == 0 for i in range(3) for j in range(3)), "cofactors of L of degree 0")
        for tri in itertools.combinations(range(6), 3):
            if frozenset(tri) not in CASE_III_TRIPLES:
                _self_check(determinant(lam.submatrix(list(tri))).degree() == 0, f"minor {tri} of degree 0")
        return lam
    if case == "i":
        if len(params) != 6:
            raise LiftError("case i takes (mu1, mu2, mu3, y1, y2, y3)", step=step)
        mu1, mu2, mu3, y1, y2, y3 = (_finite(p, n) for p, n in zip(params, ("mu1", "mu2", "mu3", "y1", "y2", "y3")))
        return KMatrix([
            [K_ONE, t_pow(y2), 2 * t_pow(mu3)],
            [K_ONE, K_ZERO, K_ZERO],
            [2 * t_pow(mu1), K_ONE, t_pow(y3)],
            [K_ZERO, K_ONE, K_ZERO],
            [t_pow(y1), 2 * t_pow(mu2), K_ONE],
            [K_ZERO, K_ZERO, K_ONE],
        ])
    raise LiftError(f"no coefficient matrix for case {case!r}", step=step)


def _self_check(ok, what):
    if not ok:
        raise RuntimeError(f"internal self-check failed: {what}")


# --- shared plumbing for the 6-row constructions ----------------------------

def _prepare(W: TropMatrix, step):
    if not isinstance(W, TropMatrix):
        W = TropMatrix(W)
    W.require_finite(step)
    if W.rows != 6:
        raise LiftError(f"expected 6 rows, got {W.rows}", step=step)
    Wn, trace = normalize_columns(W)
    shifts = [Fraction(0)] * W.cols
    for t in trace:
        shifts[t.index] = -t.amount
    return W, Wn, shifts


def _supports(P, rows_order=None):
    order = list(range(P.rows)) if rows_order is None else rows_order
    pos = {r: k for k, r in enumerate(order)}
    return [frozenset(pos[i] for i in range(P.rows) if P[i, j] == 0) for j in range(P.cols)]


def _finish(W, perm, columns, shifts, step, rank_bound=3):
    """Undo the row permutation and column normalization, then verify."""
    n = len(columns)
    rows = [[None] * n for _ in range(6)]
    for j, col in enumerate(columns):
        for k, r in enumerate(perm):
            rows[r][j] = col[k] * t_pow(shifts[j]) if shifts[j] else col[k]
    F = KMatrix(rows)
    lift = verify_lift(F, W)
    if lift.verified_rank_bound is None or lift.verified_rank_bound > rank_bound:
        raise LiftError(f"constructed lift has rank {lift.verified_rank_bound} > {rank_bound}", step=step)
    return lift


def _positive_parameter(M, lambdas, free, what, step):
    rng = dependence_range(M, lambdas, free)
    if rng is not None:
        low, high = rng
        if high == low:
            if low > 0:
                return low
        else:
            return low if low > 0 else Fraction(1)
    raise LiftError(f"no positive {what} realizes the required dependence tuple", step=step)


# --- case (iv) --------------------------------------------------------------

def find_case_iv_layout(P):
    """A row order (top three, bottom three) fitting the case-(iv) pattern, or ``None``."""
    for top in itertools.combinations(range(6), 3):
        order = list(top) + [r for r in range(6) if r not in top]
        sup = _supports(P, order)
        T, B = frozenset({0, 1, 2}), frozenset({3, 4, 5})
        if T not in sup or B not in sup:
            continue
        if all(s in (T, B) or (len(s & T) >= 2 and len(s & B) >= 2) for s in sup):
            return order
    return None


def construct_lift_case_iv(W: TropMatrix) -> LiftMatrix:
    """A rank-3 lift of a 6-row matrix whose pattern has the case-(iv) shape.

    Rows split into halves T, B; some column has support exactly T, some
    exactly B, and every other support meets each half in at least two rows.
    The lift satisfies ``Lam (f_T) = t^a (f_B)`` columnwise.
    """
    step = "case-iv"
    W, Wn, shifts = _prepare(W, step)
    P = pattern(Wn)
    perm = find_case_iv_layout(P)
    if perm is None:
        raise LiftError("pattern does not have the case-(iv) shape", step=step)
    V = Wn.submatrix(perm)
    a = _positive_parameter(V.submatrix([0, 1, 2, 3]), [0, 0, 0, INF], 3, "a in (0,0,0,a)", step)
    b = _positive_parameter(V.submatrix([2, 3, 4, 5]), [INF, 0, 0, 0], 0, "b in (b,0,0,0)", step)
    lam = build_lambda("iv", a, b)
    cof = [[cofactor(lam, k, i) for i in range(3)] for k in range(3)]
    det = determinant(lam)
    ta = t_pow(a)

    def top_from_bottom(fb):
        return [ta * sum((fb[k] * cof[k][i] for k in range(3)), K_ZERO) / det for i in range(3)]

    def bottom_from_top(ft):
        return [sum((lam[i, k] * ft[k] for k in range(3)), K_ZERO) / ta for i in range(3)]

    columns = []
    for j in range(V.cols):
        w = V.col(j)
        top, bot = w[:3], w[3:]
        col = None
        if all(x == 0 for x in top) and all(x > 0 for x in bot):
            low = min(bot)
            ties = [k for k in range(3) if bot[k] == low]
            if len(ties) == 1:
                fb = [t_pow(x) for x in bot]
                col = top_from_bottom(fb) + fb
            else:
                al, be = ties[0], ties[1]
                ga = 3 - al - be
                for (g1,) in _generic(1, 4 * GENERIC_LIMIT):
                    fb = [None] * 3
                    fb[al] = t_pow(low, g1)
                    fb[ga] = t_pow(bot[ga])
                    fb[be] = (-(fb[al] * cof[al][0]) - fb[ga] * cof[ga][0]) / cof[be][0] + t_pow(b)
                    cand = top_from_bottom(fb) + fb
                    if _degrees(cand) == list(w):
                        col = cand
                        break
        elif all(x == 0 for x in bot) and all(x > 0 for x in top):
            low = min(top)
            ties = [k for k in range(3) if top[k] == low]
            if len(ties) == 1:
                ft = [t_pow(x) for x in top]
                col = ft + bottom_from_top(ft)
            else:
                al, be = ties[0], ties[1]
                ga = 3 - al - be
                for (g2,) in _generic(1, 4 * GENERIC_LIMIT):
                    ft = [None] * 3
                    ft[al] = t_pow(low, g2)
                    ft[ga] = t_pow(top[ga])
                    ft[be] = (-(ft[al] * lam[0, al]) - ft[ga] * lam[0, ga]) / lam[0, be] + ta
                    cand = ft + bottom_from_top(ft)
                    if _degrees(cand) == list(w):
                        col = cand
                        break
        else:
            zt = [k for k in range(3) if top[k] == 0]
            zb = [k for k in range(3) if bot[k] == 0]
            if len(zt) < 2 or len(zb) < 2:
                raise LiftError(f"column {j} does not fit the case-(iv) shape", step=step, position=j)
            p3 = next((k for k in range(3) if top[k] != 0), 2)
            q1, q2 = [k for k in range(3) if bot[k] == 0][:2]
            q3 = 3 - q1 - q2
            alpha, beta = top[p3], bot[q3]
            for (zeta,) in _generic(1, 4 * GENERIC_LIMIT):
                fb = [None] * 3
                fb[q2] = to_k(zeta)
                fb[q3] = t_pow(beta)
                fb[q1] = (-(zeta * cof[q2][p3]) - fb[q3] * cof[q3][p3]) / cof[q1][p3] + t_pow(b + alpha)
                cand = top_from_bottom(fb) + fb
                if _degrees(cand) == list(w):
                    col = cand
                    break
        if col is None:
            raise LiftError(f"no generic choice gives the prescribed degrees in column {j}", step=step, position=j)
        if lam.apply(col[:3]) != [ta * x for x in col[3:]]:
            raise LiftError(f"column {j} violates the linear relation", step=step, position=j)
        columns.append(col)
    return _finish(W, perm, columns, shifts, step)


def case_iv_parameters(W: TropMatrix):
    """The values ``(a, b)`` used by :func:`construct_lift_case_iv`, or ``None``."""
    W = TropMatrix(W)
    Wn, _ = normalize_columns(W)
    perm = find_case_iv_layout(pattern(Wn))
    if perm is None:
        return None
    V = Wn.submatrix(perm)
    try:
        a = _positive_parameter(V.submatrix([0, 1, 2, 3]), [0, 0, 0, INF], 3, "a", "case-iv")
        b = _positive_parameter(V.submatrix([2, 3, 4, 5]), [INF, 0, 0, 0], 0, "b", "case-iv")
    except LiftError:
        return None
    return a, b


# --- case (iii) -------------------------------------------------------------

def _free_four_subsets(s, supports):
    """4-subsets of ``s`` properly containing no support from ``supports``.

    A 4-element support is its own free subset unless a smaller support
    sits inside it.
    """
    out = []
    for sub in itertools.combinations(sorted(s), 4):
        fs = frozenset(sub)
        if not any(t < fs for t in supports):
            out.append(sub)
    return out


def _case_iii_fits(sup):
    if any(len(s) < 3 for s in sup):
        return False
    if any(len(s) == 3 and s not in CASE_III_TRIPLES for s in sup):
        return False
    distinct = set(sup)
    for s in distinct:
        if len(s) == 4 and any(t < s for t in distinct):
            return False
        if len(s) >= 4 and not _free_four_subsets(s, distinct):
            return False
    return set().union(*sup) == set(range(6))


def find_case_iii_layout(P):
    """A row order under which the pattern has the case-(iii) shape, or ``None``."""
    base = _supports(P)
    for order in itertools.permutations(range(6)):
        pos = {r: k for k, r in enumerate(order)}
        sup = [frozenset(pos[r] for r in s) for s in base]
        if _case_iii_fits(sup):
            return list(order)
    return None


def case_iii_parameters(V: TropMatrix, sup):
    """``(a, b, c, d)`` for a normalized matrix already in the case-(iii) layout."""
    step = "case-iii"
    specs = [
        (CASE_III_TRIPLES[0], [2, 3, 4, 5], [INF, 0, 0, 0], 0, "a"),
        (CASE_III_TRIPLES[1], [0, 1, 2, 5], [INF, 0, 0, 0], 0, "b"),
        (CASE_III_TRIPLES[2], [0, 1, 2, 4], [0, INF, 0, 0], 1, "c"),
        (CASE_III_TRIPLES[3], [0, 1, 2, 3], [0, 0, INF, 0], 2, "d"),
    ]
    out = []
    for tri, rows, lams, free, name in specs:
        if tri in sup:
            out.append(_positive_parameter(V.submatrix(rows), lams, free, name, step))
        else:
            out.append(Fraction(0))
    return tuple(out)


def construct_lift_case_iii(W: TropMatrix) -> LiftMatrix:
    """A rank-3 lift of a 6-row matrix whose pattern has the case-(iii) shape.

    Supports of size 3 are among {0,1,2}, {0,3,4}, {1,3,5}, {2,4,5} (after a
    searched row relabelling); larger supports contain a 4-subset holding no
    other support.  The lift satisfies ``Lam^T f = 0`` columnwise.
    """
    step = "case-iii"
    W, Wn, shifts = _prepare(W, step)
    P = pattern(Wn)
    perm = find_case_iii_layout(P)
    if perm is None:
        raise LiftError("pattern does not have the case-(iii) shape", step=step)
    V = Wn.submatrix(perm)
    sup = _supports(pattern(V))
    distinct = set(sup)
    a, b, c, d = case_iii_parameters(V, distinct)
    lam = build_lambda("iii", a, b, c, d)
    L = lam.submatrix([0, 1, 2])
    cofL = [[cofactor(L, i, k) for k in range(3)] for i in range(3)]
    detL = determinant(L)

    def top_from_bottom(fb):
        return [sum((cofL[i][k] * fb[k] for k in range(3)), K_ZERO) / detL for i in range(3)]

    single_column = {CASE_III_TRIPLES[1]: 2, CASE_III_TRIPLES[2]: 1, CASE_III_TRIPLES[3]: 0}
    columns = []
    for j in range(V.cols):
        w = list(V.col(j))
        s = sup[j]
        col = None
        if s == CASE_III_TRIPLES[0]:
            bot = w[3:]
            low = min(bot)
            ties = [k for k in range(3) if bot[k] == low]
            if len(ties) == 1:
                fb = [t_pow(x) for x in bot]
                col = top_from_bottom(fb) + fb
            else:
                al, be = ties[0], ties[1]
                ga = 3 - al - be
                for (g,) in _generic(1, 4 * GENERIC_LIMIT):
                    fb = [None] * 3
                    fb[al] = t_pow(low, g)
                    fb[ga] = t_pow(bot[ga])
                    fb[be] = (-(fb[al] * cofL[0][al]) - fb[ga] * cofL[0][ga]) / cofL[0][be] + t_pow(a)
                    cand = top_from_bottom(fb) + fb
                    if _degrees(cand) == w:
                        col = cand
                        break
        elif s in single_column:
            i0 = single_column[s]
            rows = [0, 1, 2, 3 + i0]
            x = solve_single_equation([lam[r, i0] for r in rows], [w[r] for r in rows])
            ft = x[:3]
            cand = [None] * 6
            cand[:3] = ft
            cand[3 + i0] = x[3]
            for i in range(3):
                if i != i0:
                    cand[3 + i] = sum((lam[k, i] * ft[k] for k in range(3)), K_ZERO)
            if _degrees(cand) == w:
                col = cand
        elif len(s) >= 4:
            for sub in _free_four_subsets(s, distinct):
                try:
                    col = solve_three_equations(lam, w, sub)
                    break
                except LiftError:
                    continue
        else:
            raise LiftError(f"column {j} does not fit the case-(iii) shape", step=step, position=j)
        if col is None:
            raise LiftError(f"no construction gives the prescribed degrees in column {j}", step=step, position=j)
        _check_system(lam, col, w, step)
        columns.append(col)
    return _finish(W, perm, columns, shifts, step)


# --- completion of a 5-row lift (cases v, ii, i) ----------------------------

CASE_V_SUPPORTS = (frozenset({3, 4, 5}), frozenset({4, 5}), frozenset({0, 1, 2}))
CASE_II_PAIR = frozenset({0, 1})
CASE_II_OTHERS = (
    frozenset({2, 3, 4}), frozenset({2, 3, 5}), frozenset({2, 4, 5}), frozenset({3, 4, 5}), frozenset({2, 3, 4, 5}),
)
CASE_I_SUPPORTS = (frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5}))
COMPLETION_CASES = ("i", "ii", "v")


def _fits_v(sup):
    return set(sup) == set(CASE_V_SUPPORTS)


def _fits_ii(sup):
    s = set(sup)
    return (
        CASE_II_PAIR in s
        and frozenset({2, 3, 4}) in s
        and s <= {CASE_II_PAIR, *CASE_II_OTHERS}
        and set().union(*s) == set(range(6))
    )


def _fits_i(sup):
    return set(sup) == set(CASE_I_SUPPORTS)


_COMPLETION_FITS = {"v": _fits_v, "ii": _fits_ii, "i": _fits_i}
_DESIGNATED = {"v": slice(0, 5), "ii": slice(1, 6), "i": slice(0, 5)}


def _search_layout(P, fits):
    base = _supports(P)
    for order in itertools.permutations(range(6)):
        pos = {r: k for k, r in enumerate(order)}
        if fits([frozenset(pos[r] for r in s) for s in base]):
            return list(order)
    return None


def _ii_layout(Wn):
    """A case-(ii) row order, preferring one where the columns that stay positive in
    rows 0 and 1 after the shift of ``_complete_ii`` have support {2,3,4} or {2,3,4,5}."""
    base = _supports(pattern(Wn))
    first = None
    for order in itertools.permutations(range(6)):
        pos = {r: k for k, r in enumerate(order)}
        sup = [frozenset(pos[r] for r in s) for s in base]
        if not _fits_ii(sup):
            continue
        if first is None:
            first = list(order)
        others = [j for j, s in enumerate(sup) if s != CASE_II_PAIR]
        m = min(Wn[order[i], j] for i in (0, 1) for j in others)
        if all(
            sup[j] in (CASE_II_OTHERS[0], CASE_II_OTHERS[4])
            for j in others
            if Wn[order[0], j] > m and Wn[order[1], j] > m
        ):
            return list(order)
    return first


def _completion_layout(W, case):
    if case not in _COMPLETION_FITS:
        raise LiftError(f"completion is defined for cases {COMPLETION_CASES}, not {case!r}", step="precondition")
    W, Wn, shifts = _prepare(W, f"case-{case}")
    if case == "ii":
        perm = _ii_layout(Wn)
    else:
        perm = _search_layout(pattern(Wn), _COMPLETION_FITS[case])
    if perm is None:
        raise LiftError(f"pattern does not have the case-({case}) shape", step="precondition")
    return W, Wn, shifts, perm


def designated_rows(W: TropMatrix, case: str) -> tuple:
    """Rows of ``W`` (in order) that the 5-row lift passed to the completion must lift."""
    _, _, _, perm = _completion_layout(W, case)
    return tuple(perm[_DESIGNATED[case]])


def complete_lift_with_submatrix(W: TropMatrix, case: str, F5: KMatrix) -> LiftMatrix:
    """Extend a rank-<=3 lift of five designated rows to a rank-<=3 lift of ``W``.

    ``F5`` lifts ``W.submatrix(designated_rows(W, case))``.  The sixth row
    and, where needed, some entries of the given rows are recomputed from
    three linear relations among the rows.
    """
    W, Wn, shifts, perm = _completion_layout(W, case)
    rows5 = perm[_DESIGNATED[case]]
    if not isinstance(F5, KMatrix):
        F5 = KMatrix(F5)
    if F5.shape != (5, W.cols):
        raise LiftError(f"F5 must be 5x{W.cols}, got {F5.rows}x{F5.cols}", step="precondition")
    try:
        pre = verify_lift(F5, W.submatrix(rows5))
    except LiftError as exc:
        raise LiftError(f"F5 is not a lift of rows {list(rows5)}: {exc}", step="precondition") from None
    if pre.verified_rank_bound > 3:
        raise LiftError(f"F5 has rank {pre.verified_rank_bound} > 3", step="precondition")
    G = KMatrix([[F5[k, j] / t_pow(shifts[j]) if shifts[j] else F5[k, j] for j in range(W.cols)] for k in range(5)])
    V = Wn.submatrix(perm)
    builder = {"v": _complete_v, "ii": _complete_ii, "i": _complete_i}[case]
    columns = builder(V, G)
    return _finish(W, perm, columns, shifts, f"case-{case}")


def _kernel_relation(G, rows, step):
    lam = left_kernel_vector(G.submatrix(rows))
    if lam is None:
        raise LiftError(f"rows {rows} of F5 are linearly independent", step=step)
    low = min(x.degree() for x in lam)
    return [x / t_pow(low) for x in lam]


def _solve_for(coeffs, values, k, step, what):
    """Value at index ``k`` making ``sum coeffs[i] * values[i]`` vanish."""
    if not coeffs[k]:
        raise LiftError(f"{what}: zero coefficient", step=step)
    s = K_ZERO
    for i, (c, v) in enumerate(zip(coeffs, values)):
        if i != k and c and v is not None:
            s = s + c * v
    return -s / coeffs[k]


def _require_degrees(col, w, step, j):
    for k, (x, d) in enumerate(zip(col, w)):
        if x.degree() != d:
            raise LiftError(
                f"entry ({k}, {j}) has degree {_fmt(x.degree())}, expected {_fmt(d)}", step=step, position=(k, j)
            )


def _complete_v(V, G):
    """Rows 1, 2, 5 become combinations of rows 0, 3, 4."""
    step = "case-v"
    sup = _supports(pattern(V))
    lam = _kernel_relation(G, [0, 1, 3, 4], step)
    mu = _kernel_relation(G, [0, 2, 3, 4], step)
    h = find_dependence(V.submatrix([0, 3, 4, 5]))
    if h is None or h[2] != 0 or h[3] != 0:
        raise LiftError("rows 0, 3, 4, 5 lack a dependence vanishing on rows 4, 5", step=step)
    near = [j for j in range(V.cols) if sup[j] != CASE_V_SUPPORTS[2]]
    nu4 = None
    for (xi,) in _generic(1, 4 * GENERIC_LIMIT):
        cand = t_pow(h[1], xi)
        if all((cand * G[3, j] + G[4, j]).degree() == 0 for j in near):
            nu4 = cand
            break
    if nu4 is None:
        raise LiftError("no coefficient for row 3 keeps degree 0 in the first two blocks", step=step)
    nu = [t_pow(h[0]), nu4, K_ONE, K_ONE]
    columns = []
    for j in range(V.cols):
        w = list(V.col(j))
        if j in near:
            col = list(G.col(j)) + [None]
            col[5] = _solve_for(nu, [col[0], col[3], col[4], None], 3, "row 5", "row 5")
            _require_degrees(col, w, step + ":row-5", j)
        else:
            x = solve_single_equation(nu, [w[0], w[3], w[4], w[5]])
            col = [x[0], None, None, x[1], x[2], x[3]]
            col[1] = _solve_for(lam, [col[0], None, col[3], col[4]], 1, step, "row 1")
            col[2] = _solve_for(mu, [col[0], None, col[3], col[4]], 1, step, "row 2")
            _require_degrees(col, w, step + ":rows-1-2", j)
        columns.append(col)
    return columns


def _lambda_ok(lam, pairs_cols):
    for p, q in itertools.combinations(range(lam.rows), 2):
        for i1, i2 in pairs_cols:
            a, b = lam[p, i1] * lam[q, i2], lam[q, i1] * lam[p, i2]
            if (a - b).degree() != min(a.degree(), b.degree()):
                return False
    return True


def _complete_ii(V, G):
    """Rows 0, 2, 3 become combinations of rows 1, 4, 5 (after shifting the first two rows)."""
    step = "case-ii"
    sup = _supports(pattern(V))
    block0 = [j for j in range(V.cols) if sup[j] == CASE_II_PAIR]
    others = [j for j in range(V.cols) if sup[j] != CASE_II_PAIR]
    m = min(V[i, j] for i in (0, 1) for j in others)
    V2 = TropMatrix([
        [V[i, j] - (m if i < 2 else 0) + (m if j in block0 else 0) for j in range(V.cols)] for i in range(6)
    ])
    tm = t_pow(m)
    G2 = KMatrix([
        [G[k, j] / (tm if k == 0 else K_ONE) * (tm if j in block0 else K_ONE) for j in range(V.cols)] for k in range(5)
    ])
    c0 = _kernel_relation(G2, [0, 2, 3, 4], step)
    c1 = _kernel_relation(G2, [0, 1, 2, 4], step)
    h = find_dependence(V2.submatrix([0, 1, 4, 5]))
    if h is None:
        raise LiftError("rows 0, 1, 4, 5 are tropically independent", step=step)
    lam = None
    for (xi,) in _generic(1, 4 * GENERIC_LIMIT):
        cand = KMatrix([
            [K_ZERO, K_ZERO, t_pow(h[0])],
            [c0[0], c1[0], t_pow(h[1])],
            [K_ZERO, c1[1], K_ZERO],
            [c0[1], c1[2], K_ZERO],
            [c0[2], K_ZERO, t_pow(h[2])],
            [c0[3], c1[3], t_pow(h[3], xi)],
        ])
        r1, r2 = cand[5, 0] * cand[4, 2], cand[4, 0] * cand[5, 2]
        r3 = (cand[3, 1] * cand[5, 0] - cand[5, 1] * cand[3, 0]) * cand[4, 2]
        r4 = cand[3, 1] * cand[4, 0] * cand[5, 2]
        if (r1 - r2).degree() == min(r1.degree(), r2.degree()) and (r3 - r4).degree() == min(r3.degree(), r4.degree()):
            lam = cand
            break
    if lam is None:
        raise LiftError("no coefficient for the third relation satisfies the cancellation conditions", step=step)
    columns = []
    for j in range(V.cols):
        w = list(V2.col(j))
        col = _solve_ii_column(lam, G2, w, j, step)
        _check_system(lam, col, w, step)
        col = [x * tm if k < 2 else x for k, x in enumerate(col)]
        if j in block0:
            col = [x / tm for x in col]
        columns.append(col)
    return columns


def _solve_ii_column(lam, G2, w, j, step):
    vals = [ttimes(lam[k, 2].degree(), w[k]) for k in range(6)]
    low = min(vals)
    argmin = {k for k, v in enumerate(vals) if v == low}
    if argmin == {0, 1}:
        col = [None] + list(G2.col(j))
        col[0] = _solve_for(lam.col(2), col, 0, step, "row 0")
        if [x.degree() for x in col] == w:
            return col
    for sub in itertools.combinations(range(6), 4):
        try:
            return solve_three_equations(lam, w, sub)
        except LiftError:
            continue
    for (xi,) in _generic(1, 4 * GENERIC_LIMIT):
        for g in (0, 1):
            col = [None] * 6
            col[5] = t_pow(w[5])
            col[4] = t_pow(w[4], xi)
            col[1 - g] = t_pow(w[1 - g])
            col[g] = _solve_for(lam.col(2), col, g, step, f"row {g}")
            col[3] = _solve_for(lam.col(0), col, 3, step, "row 3")
            col[2] = _solve_for(lam.col(1), col, 2, step, "row 2")
            if [x.degree() for x in col] == w:
                return col
    raise LiftError(f"no construction gives the prescribed degrees in column {j}", step=step, position=j)


def _third_relation_candidates(V):
    """Dependence tuples of rows 0, 2, 4, 5 with a few variations of the first two coordinates."""
    sub = V.submatrix([0, 2, 4, 5])
    base = find_dependence(sub)
    if base is None:
        return []
    out = [tuple(base)]
    for free in (0, 1):
        rng = dependence_range(sub, list(base), free)
        if rng is None:
            continue
        low, high = rng
        for v in (low, low + 1 if high == INF else None):
            if v is not None and v != -INF:
                cand = list(base)
                cand[free] = v
                if min(cand) == 0 and tuple(cand) not in out:
                    out.append(tuple(cand))
    return out


def _complete_i(V, G):
    """Rows 1, 3, 5 become combinations of rows 0, 2, 4; two blocks go through the 5x2 solver."""
    step = "case-i"
    sup = _supports(pattern(V))
    c0 = _kernel_relation(G, [0, 1, 2, 4], step)
    c1 = _kernel_relation(G, [0, 2, 3, 4], step)
    col0 = [c0[0], c0[1], c0[2], K_ZERO, c0[3], K_ZERO]
    col1 = [c1[0], K_ZERO, c1[1], c1[2], c1[3], K_ZERO]
    last_error = None
    for l3 in _third_relation_candidates(V):
        for xi in itertools.islice(_generic(4), 200):
            col2 = [t_pow(l3[0], xi[0]), K_ZERO, t_pow(l3[1], xi[1]), K_ZERO, t_pow(l3[2], xi[2]), t_pow(l3[3], xi[3])]
            lam = KMatrix([[col0[k], col1[k], col2[k]] for k in range(6)])
            if _lambda_ok(lam, [(0, 2), (1, 2)]):
                break
        else:
            continue
        try:
            return [_solve_i_column(lam, G, list(V.col(j)), sup[j], j, step) for j in range(V.cols)]
        except LiftError as exc:
            last_error = exc
    raise last_error or LiftError("no admissible third relation", step=step)


def _solve_i_column(lam, G, w, s, j, step):
    if s == CASE_I_SUPPORTS[2]:
        col = list(G.col(j)) + [None]
        col[5] = _solve_for(lam.col(2), col, 5, step, "row 5")
    elif s == CASE_I_SUPPORTS[0]:
        rows = [0, 2, 3, 4, 5]
        x = solve_two_equations(lam.submatrix(rows, [1, 2]), [w[k] for k in rows])
        col = [None] * 6
        for k, v in zip(rows, x):
            col[k] = v
        col[1] = _solve_for(lam.col(0), col, 1, step, "row 1")
    else:
        rows = [0, 1, 2, 4, 5]
        x = solve_two_equations(lam.submatrix(rows, [0, 2]), [w[k] for k in rows])
        col = [None] * 6
        for k, v in zip(rows, x):
            col[k] = v
        col[3] = _solve_for(lam.col(1), col, 3, step, "row 3")
    _require_degrees(col, w, step, j)
    _check_system(lam, col, w, step)
    return col


# --- heuristic rank-3 lifts of 5-row matrices -------------------------------

def find_lift_5xn(M: TropMatrix, attempts: int = 40) -> LiftMatrix:
    """Search for a rank-<=3 lift of a finite 5-row matrix.

    Two linear relations on the rows are guessed as generic monomials whose
    degrees are dependence tuples of two different 4-row subsets; every
    column is then solved against both relations.  Raises ``LiftError``
    when the bounded search finds nothing.
    """
    step = "lift-5xn"
    if not isinstance(M, TropMatrix):
        M = TropMatrix(M)
    M.require_finite(step)
    if M.rows != 5:
        raise LiftError(f"expected 5 rows, got {M.rows}", step=step)
    Mn, trace = normalize_columns(M)
    shifts = [Fraction(0)] * M.cols
    for tr in trace:
        shifts[tr.index] = -tr.amount
    certs = {}
    for a in range(5):
        rows = [r for r in range(5) if r != a]
        c = find_dependence(Mn.submatrix(rows))
        if c is not None:
            full = list(c)
            full.insert(a, INF)
            certs[a] = full
    for a, b in itertools.permutations(sorted(certs), 2):
        if a > b:
            continue
        tried = 0
        for xi in _generic(8):
            if tried >= attempts:
                break
            tried += 1
            it = iter(xi)
            lam = KMatrix([
                [K_ZERO if certs[a][k] == INF else t_pow(certs[a][k], next(it)),
                 K_ZERO if certs[b][k] == INF else t_pow(certs[b][k], next(it))]
                for k in range(5)
            ])
            if not _lambda_ok(lam, [(0, 1)]):
                continue
            try:
                cols = [solve_two_equations(lam, Mn.col(j)) for j in range(M.cols)]
            except LiftError:
                break
            F = KMatrix([[cols[j][k] * t_pow(shifts[j]) for j in range(M.cols)] for k in range(5)])
            lift = verify_lift(F, M)
            if lift.verified_rank_bound <= 3:
                return lift
    raise LiftError("bounded search found no rank-3 lift", step=step)


# --- classification of 6-row patterns ---------------------------------------

def _pattern_predicates():
    return {
        "i": lambda sup: _search_sets(sup, _fits_i, _i_precheck),
        "ii": lambda sup: _search_sets(sup, _fits_ii_statement, _ii_precheck),
        "iii": lambda sup: _search_sets(sup, _fits_iii_statement, _iii_precheck),
        "iv": lambda sup: _search_sets(sup, _fits_iv, _iv_precheck),
        "v": lambda sup: _search_sets(sup, _fits_v_statement, _v_precheck),
    }


def _i_precheck(distinct):
    return len(distinct) == 3 and all(len(s) == 2 for s in distinct) and len(set().union(*distinct)) == 6


def _v_precheck(distinct):
    sizes = sorted(len(s) for s in distinct)
    return len(distinct) == 3 and sizes == [2, 3, 3] and len(set().union(*distinct)) == 6


def _ii_precheck(distinct):
    pairs = [s for s in distinct if len(s) == 2]
    if len(pairs) != 1:
        return False
    rest = [s for s in distinct if s != pairs[0]]
    return bool(rest) and all(not (s & pairs[0]) and len(s) >= 3 for s in rest)


def _iv_precheck(distinct):
    triples = [s for s in distinct if len(s) == 3]
    return any(not (a & b) for a, b in itertools.combinations(triples, 2))


def _fits_ii_statement(sup):
    s = set(sup)
    return CASE_II_PAIR in s and bool(s & set(CASE_II_OTHERS[:4])) and s <= {CASE_II_PAIR, *CASE_II_OTHERS}


def _fits_iii_statement(sup):
    distinct = set(sup)
    for s in distinct:
        if len(s) < 3 or (len(s) == 3 and s not in CASE_III_TRIPLES):
            return False
        if len(s) == 4 and any(t < s for t in distinct):
            return False
    return True


def _iii_precheck(sup):
    distinct = set(sup)
    if any(len(s) < 3 for s in distinct):
        return False
    triples = [s for s in distinct if len(s) == 3]
    return len(triples) <= 4 and all(len(a & b) == 1 for a, b in itertools.combinations(triples, 2))


def _fits_iv(sup):
    T, B = frozenset({0, 1, 2}), frozenset({3, 4, 5})
    s = set(sup)
    return T in s and B in s and all(x in (T, B) or (len(x & T) >= 2 and len(x & B) >= 2) for x in s)


def _fits_v_statement(sup):
    return set(sup) == {frozenset({0, 1}), frozenset({0, 1, 2}), frozenset({3, 4, 5})}


def _search_sets(sup, fits, precheck=None):
    distinct = sorted(set(sup), key=sorted)
    if precheck is not None and not precheck(distinct):
        return None
    for order in itertools.permutations(range(6)):
        pos = {r: k for k, r in enumerate(order)}
        if fits([frozenset(pos[r] for r in s) for s in distinct]):
            return list(order)
    return None


def match_case(W: TropMatrix):
    """``(label, row order)`` for the first case whose pattern shape ``W`` has, else ``None``.

    Every row must contain a zero of the pattern; labels are tried in the
    order v, i, iv, ii, iii.
    """
    P = pattern(W)
    if any(all(x != 0 for x in row) for row in P):
        return None
    sup = _supports(P)
    preds = _pattern_predicates()
    for label in ("v", "i", "iv", "ii", "iii"):
        order = preds[label](sup)
        if order is not None:
            return label, order
    return None


def _lower_rows(M):
    """Lower every row without a pattern zero until it gets one (columns already normalized)."""
    trace = []
    for i in range(M.rows):
        low = min(M.row(i))
        if low > 0:
            trace.append(Transform.row_scale(i, -low))
    return trace


def _settle(M):
    """Normalize columns, then lower rows lacking zeros; returns (matrix, trace)."""
    M1, t1 = normalize_columns(M)
    t2 = tuple(_lower_rows(M1))
    return replay(M1, t2), t1 + t2


def classify_pattern_case(M: TropMatrix, budget: int = 60):
    """Search the equivalence class of a rank-3 6-row matrix for a case-(i)..(v) shape.

    Returns ``(label, W, trace)`` with ``W = replay(M, trace)``; the final
    row permutation puts ``W`` in the canonical layout of its case.  When no
    shape is found within ``budget`` visited matrices the label is
    ``"unclassified"`` and ``W`` is the last settled matrix.
    """
    from .rank import tropical_rank

    if not isinstance(M, TropMatrix):
        M = TropMatrix(M)
    M.require_finite("classify_pattern_case")
    if M.rows != 6:
        raise ValueError(f"expected 6 rows, got {M.rows}")
    r = tropical_rank(M)
    if r != 3:
        raise ValueError(f"classification needs tropical rank 3, got {r}")
    M0, t0 = normalize_columns(M)
    cert = find_dependence(M0)
    scale = tuple(Transform.row_scale(i, c) for i, c in enumerate(cert) if c != 0)
    M1, t1 = _settle(replay(M0, scale))
    start = (M1, t0 + scale + t1)
    queue = [start]
    seen = {M1}
    visited = 0
    last = start
    while queue and visited < budget:
        W, trace = queue.pop(0)
        visited += 1
        last = (W, trace)
        hit = match_case(W)
        if hit is not None:
            label, order = hit
            perm = () if order == list(range(6)) else (Transform.row_perm(order),)
            W2 = replay(W, perm)
            full = trace + perm
            assert replay(M, full) == W2
            assert _revalidate(label, W2)
            return label, W2, full
        if column_gap(W) is None:
            continue
        for size in (1, 2):
            for rows in itertools.combinations(range(6), size):
                for direction in (1, -1):
                    step = perturbation_trace(W, rows, direction)
                    N, settle = _settle(replay(W, step))
                    if N not in seen:
                        seen.add(N)
                        queue.append((N, trace + step + settle))
    W, trace = last
    return "unclassified", W, trace


def _revalidate(label, W):
    """Check the canonical-layout predicate of ``label`` directly on ``W``."""
    P = pattern(W)
    if any(all(x != 0 for x in row) for row in P):
        return False
    sup = _supports(P)
    direct = {
        "i": _fits_i,
        "ii": _fits_ii_statement,
        "iii": _fits_iii_statement,
        "iv": _fits_iv,
        "v": _fits_v_statement,
    }[label]
    return direct(sup)
