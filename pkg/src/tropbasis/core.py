"""Exact min-plus scalars and matrices, patterns, and equivalence transforms.

Finite entries are :class:`fractions.Fraction`; the adjoined infinite element
of the completed semiring is ``math.inf``.  Indices are 0-based throughout.
"""
from __future__ import annotations

import math
import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

INF = math.inf


class BudgetExceeded(RuntimeError):
    """An exhaustive computation was refused because its input is too large."""


class MatrixFormatError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


def to_trop(x):
    """Coerce ``x`` to a tropical scalar (a ``Fraction`` or ``INF``).

    Accepts integers (including numpy integers), fractions, strings such as
    ``"3/2"`` or ``"inf"``, and ``math.inf``.  Finite floats are rejected:
    entries are exact by construction and are never rounded.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not tropical scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if s in ("inf", "+inf", "∞"):
            return INF
        if not _RATIONAL_RE.fullmatch(s):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    if isinstance(x, float):
        if x == INF:
            return INF
        raise TypeError(f"floating-point entry {x!r} rejected; use an exact rational")
    raise TypeError(f"cannot interpret {x!r} as a tropical scalar")


_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?")


def tplus(a, b):
    """Tropical addition (minimum)."""
    return a if a <= b else b


def ttimes(a, b):
    """Tropical multiplication (sum); ``INF`` is absorbing."""
    if a == INF or b == INF:
        return INF
    return a + b


def format_scalar(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class TropMatrix:
    """An immutable rectangular matrix over the completed tropical semiring."""

    __slots__ = ("_rows",)

    def __init__(self, entries: Iterable[Iterable]):
        if isinstance(entries, TropMatrix):
            self._rows = entries._rows
            return
        rows = tuple(tuple(to_trop(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("a matrix needs at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} entries, expected {width}")
        self._rows = rows

    @classmethod
    def _trusted(cls, rows):
        obj = cls.__new__(cls)
        obj._rows = rows
        return obj

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def finite_only(self) -> bool:
        return all(x != INF for row in self._rows for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i):
        return self._rows[i]

    def col(self, j):
        return tuple(row[j] for row in self._rows)

    def __iter__(self):
        return iter(self._rows)

    def tolist(self):
        return [list(row) for row in self._rows]

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None):
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        return type(self)._trusted(tuple(tuple(self._rows[i][j] for j in cols) for i in rows))

    def transpose(self):
        return type(self)._trusted(tuple(zip(*self._rows)))

    def __eq__(self, other):
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in row) for row in self._rows)
        return f"{type(self).__name__}([{body}])"

    def require_finite(self, what="this operation"):
        if not self.finite_only:
            raise ValueError(f"{what} is defined only for matrices with finite entries")


class Pattern(TropMatrix):
    """A matrix over the boolean semiring ({0, inf}, min, +)."""

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        for row in self._rows:
            for x in row:
                if x != 0 and x != INF:
                    raise ValueError("pattern entries must be 0 or inf")

    def support(self, j: int) -> frozenset:
        """Rows holding a 0 in column ``j``."""
        return frozenset(i for i in range(self.rows) if self._rows[i][j] == 0)

    def supports(self) -> list:
        return [self.support(j) for j in range(self.cols)]

    def __str__(self):
        return "\n".join(" ".join("0" if x == 0 else "∞" for x in row) for row in self._rows)


def pattern(M: TropMatrix) -> Pattern:
    """Mark with 0 the entries equal to their column minimum, everything else inf."""
    M.require_finite("the pattern")
    mins = [min(M.col(j)) for j in range(M.cols)]
    return Pattern._trusted(
        tuple(tuple(Fraction(0) if x == mins[j] else INF for j, x in enumerate(row)) for row in M)
    )


# --- equivalence transforms -------------------------------------------------

@dataclass(frozen=True)
class Transform:
    """One equivalent transformation.

    ``kind`` is ``"row_perm"``/``"col_perm"`` (``perm[i]`` is the old index
    that moves to position ``i``) or ``"row_scale"``/``"col_scale"`` (add the
    finite ``amount`` to line ``index``).
    """

    kind: str
    perm: tuple = ()
    index: int = -1
    amount: Fraction = Fraction(0)

    @classmethod
    def row_perm(cls, perm):
        return cls("row_perm", perm=tuple(perm))

    @classmethod
    def col_perm(cls, perm):
        return cls("col_perm", perm=tuple(perm))

    @classmethod
    def row_scale(cls, index, amount):
        return cls("row_scale", index=index, amount=_finite_amount(amount))

    @classmethod
    def col_scale(cls, index, amount):
        return cls("col_scale", index=index, amount=_finite_amount(amount))

    def inverse(self) -> "Transform":
        if self.kind in ("row_perm", "col_perm"):
            inv = [0] * len(self.perm)
            for new, old in enumerate(self.perm):
                inv[old] = new
            return Transform(self.kind, perm=tuple(inv))
        return Transform(self.kind, index=self.index, amount=-self.amount)

    def describe(self) -> str:
        if self.kind.endswith("perm"):
            return f"{self.kind}{list(self.perm)}"
        return f"{self.kind}({self.index}, {format_scalar(self.amount)})"


def _finite_amount(u):
    u = to_trop(u)
    if u == INF:
        raise ValueError("scale factors must be finite")
    return u


def apply_transform(M: TropMatrix, t: Transform) -> TropMatrix:
    rows = M._rows
    if t.kind == "row_perm":
        _check_perm(t.perm, M.rows)
        out = tuple(rows[k] for k in t.perm)
    elif t.kind == "col_perm":
        _check_perm(t.perm, M.cols)
        out = tuple(tuple(row[k] for k in t.perm) for row in rows)
    elif t.kind == "row_scale":
        if not 0 <= t.index < M.rows:
            raise IndexError(f"row {t.index} out of range")
        out = tuple(
            tuple(ttimes(x, t.amount) for x in row) if i == t.index else row
            for i, row in enumerate(rows)
        )
    elif t.kind == "col_scale":
        if not 0 <= t.index < M.cols:
            raise IndexError(f"column {t.index} out of range")
        out = tuple(
            tuple(ttimes(x, t.amount) if j == t.index else x for j, x in enumerate(row))
            for row in rows
        )
    else:
        raise ValueError(f"unknown transform kind {t.kind!r}")
    return type(M)._trusted(out)


def _check_perm(perm, n):
    if sorted(perm) != list(range(n)):
        raise IndexError(f"{list(perm)} is not a permutation of range({n})")


def replay(M: TropMatrix, trace: Iterable[Transform]) -> TropMatrix:
    for t in trace:
        M = apply_transform(M, t)
    return M


def invert_trace(trace: Sequence[Transform]) -> tuple:
    return tuple(t.inverse() for t in reversed(trace))


def normalize_columns(M: TropMatrix):
    """Shift every column so that its minimum is exactly 0.

    Returns the new matrix and the trace of column scales (empty when the
    input is already normalized).
    """
    M.require_finite("normalize_columns")
    trace = []
    for j in range(M.cols):
        m = min(M.col(j))
        if m != 0:
            trace.append(Transform.col_scale(j, -m))
    return replay(M, trace), tuple(trace)


def normalize_rows(M: TropMatrix):
    M.require_finite("normalize_rows")
    trace = []
    for i in range(M.rows):
        m = min(M.row(i))
        if m != 0:
            trace.append(Transform.row_scale(i, -m))
    return replay(M, trace), tuple(trace)


def column_gap(M: TropMatrix):
    """Smallest positive difference between two values of a common column."""
    M.require_finite("column_gap")
    best = None
    for j in range(M.cols):
        vals = sorted(set(M.col(j)))
        for lo, hi in zip(vals, vals[1:]):
            if best is None or hi - lo < best:
                best = hi - lo
    return best


def perturbation_epsilon(M: TropMatrix) -> Fraction:
    g = column_gap(M)
    if g is None:
        raise ValueError("no positive gap: every column of the matrix is constant")
    return g / 2


def perturb_rows(M: TropMatrix, rows: Iterable[int], direction: int) -> TropMatrix:
    """Add ``direction * eps`` to the given rows, with eps half the smallest column gap."""
    return replay(M, perturbation_trace(M, rows, direction))


def perturbation_trace(M: TropMatrix, rows: Iterable[int], direction: int) -> tuple:
    rows = sorted(set(rows))
    if not rows:
        raise ValueError("perturb_rows needs at least one row")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    eps = perturbation_epsilon(M)
    return tuple(Transform.row_scale(i, direction * eps) for i in rows)


# --- text format ------------------------------------------------------------

def parse_matrix_text(text: str) -> TropMatrix:
    """Parse ``d n`` followed by ``d`` lines of ``n`` entries (int, ``p/q`` or ``inf``)."""
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx == len(lines):
        raise MatrixFormatError("empty input", line=1)
    header = lines[idx].split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise MatrixFormatError("header must be two positive integers 'd n'", line=idx + 1, column=1)
    d, n = int(header[0]), int(header[1])
    if d < 1 or n < 1:
        raise MatrixFormatError("dimensions must be positive", line=idx + 1, column=1)
    rows = []
    for lineno in range(idx + 1, len(lines)):
        raw = lines[lineno]
        if not raw.strip():
            continue
        if len(rows) == d:
            raise MatrixFormatError(f"more than {d} rows", line=lineno + 1, column=1)
        row = []
        for m in re.finditer(r"\S+", raw):
            tok = m.group()
            try:
                row.append(to_trop(tok))
            except (ValueError, TypeError):
                raise MatrixFormatError(f"bad entry {tok!r}", line=lineno + 1, column=m.start() + 1) from None
        if len(row) != n:
            raise MatrixFormatError(f"expected {n} entries, found {len(row)}", line=lineno + 1, column=1)
        rows.append(row)
    if len(rows) != d:
        raise MatrixFormatError(f"expected {d} rows, found {len(rows)}", line=len(lines) + 1)
    return TropMatrix(rows)


def format_matrix(M: TropMatrix) -> str:
    out = [f"{M.rows} {M.cols}"]
    out.extend(" ".join(format_scalar(x) for x in row) for row in M)
    return "\n".join(out) + "\n"
