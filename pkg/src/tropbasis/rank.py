"""Tropical rank, dependence certificates and their pattern-level analogues."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .assignment import _assign, _integer_costs
from .core import INF, BudgetExceeded, Pattern, TropMatrix, to_trop

DEFAULT_RANK_BUDGET = 8
MAX_DEPENDENCE_ROWS = 7


@dataclass(frozen=True)
class DependenceCertificate:
    """Coefficients ``lambdas`` (rationals or ``INF``, not all ``INF``)."""

    lambdas: tuple

    def __post_init__(self):
        vals = tuple(to_trop(x) for x in self.lambdas)
        if not vals:
            raise ValueError("empty certificate")
        if all(x == INF for x in vals):
            raise ValueError("a certificate needs at least one finite entry")
        object.__setattr__(self, "lambdas", vals)

    @property
    def normalized(self) -> bool:
        return min(self.lambdas) == 0

    def normalize(self) -> "DependenceCertificate":
        low = min(self.lambdas)
        return DependenceCertificate(tuple(INF if x == INF else x - low for x in self.lambdas))

    def shift(self, c) -> "DependenceCertificate":
        return DependenceCertificate(tuple(INF if x == INF else x + c for x in self.lambdas))

    def __len__(self):
        return len(self.lambdas)

    def __iter__(self):
        return iter(self.lambdas)

    def __getitem__(self, i):
        return self.lambdas[i]


@dataclass(frozen=True)
class BSupportCertificate:
    index_set: frozenset

    def __post_init__(self):
        s = frozenset(self.index_set)
        if not s:
            raise ValueError("a B-dependence needs a nonempty index set")
        object.__setattr__(self, "index_set", s)


@dataclass(frozen=True)
class RankResult:
    rank: int
    rows: tuple
    cols: tuple


def _as_certificate(cert) -> DependenceCertificate:
    return cert if isinstance(cert, DependenceCertificate) else DependenceCertificate(tuple(cert))


def check_dependence(M: TropMatrix, cert) -> bool:
    """Does every column minimum of ``lambda_i + a_ik`` occur at least twice?"""
    M.require_finite("tropical dependence")
    cert = _as_certificate(cert)
    if len(cert) != M.rows:
        raise ValueError(f"certificate has length {len(cert)}, matrix has {M.rows} rows")
    active = [i for i, x in enumerate(cert) if x != INF]
    for j in range(M.cols):
        vals = [cert[i] + M[i, j] for i in active]
        low = min(vals)
        if vals.count(low) < 2:
            return False
    return True


# --- dependence search ------------------------------------------------------
#
# A certificate with full support exists whenever any certificate exists (a
# row with lambda = inf can be given a finite value large enough to stay out
# of every column minimum), so the search works with finite x only.  Each
# column must have its minimum at some pair (p, q); that choice is a set of
# difference constraints on x.  Constraint sets are kept as closed
# difference-bound matrices: D[p][q] bounds x_p - x_q from above.

def _add_constraint(D, p, q, c):
    """Tighten x_p - x_q <= c in the closed matrix D; returns False on a negative cycle."""
    if D[p][q] <= c:
        return True
    if D[q][p] + c < 0:
        return False
    m = len(D)
    col_p = [D[i][p] for i in range(m)]
    row_q = D[q]
    for i in range(m):
        dip = col_p[i]
        if dip == INF:
            continue
        base = dip + c
        Di = D[i]
        for j in range(m):
            dqj = row_q[j]
            if dqj != INF and base + dqj < Di[j]:
                Di[j] = base + dqj
    return all(D[i][i] >= 0 for i in range(m))


def _cone(D, col, p, q):
    """Restrict D so that column ``col`` attains its minimum at rows p and q."""
    E = [row[:] for row in D]
    m = len(col)
    if not _add_constraint(E, p, q, col[q] - col[p]):
        return None
    if not _add_constraint(E, q, p, col[p] - col[q]):
        return None
    for r in range(m):
        if r != p and r != q and not _add_constraint(E, p, r, col[r] - col[p]):
            return None
    return E


def _point(D):
    m = len(D)
    return [min(0, min(D[p][q] for q in range(m))) for p in range(m)]


def _column_ok(x, col):
    vals = [a + b for a, b in zip(x, col)]
    low = min(vals)
    return vals.count(low) >= 2


def _search(D, cols, failed):
    key = tuple(map(tuple, D))
    if key in failed:
        return None
    x = _point(D)
    bad = [col for col in cols if not _column_ok(x, col)]
    if not bad:
        return x
    m = len(D)
    best = None
    for col in bad:
        options = []
        for p, q in itertools.combinations(range(m), 2):
            E = _cone(D, col, p, q)
            if E is not None:
                options.append(E)
        if not options:
            failed.add(key)
            return None
        if best is None or len(options) < len(best):
            best = options
            if len(options) == 1:
                break
    for E in best:
        found = _search(E, cols, failed)
        if found is not None:
            return found
    failed.add(key)
    return None


def find_dependence(M: TropMatrix) -> DependenceCertificate | None:
    """A normalized dependence certificate for the rows of ``M``, or ``None`` if independent."""
    M.require_finite("find_dependence")
    m = M.rows
    if m == 1:
        return None
    cost, den = _integer_costs(M)
    cols = sorted({tuple(cost[i][j] for i in range(m)) for j in range(M.cols)})
    D = [[0 if p == q else INF for q in range(m)] for p in range(m)]
    x = _search(D, cols, set())
    if x is None:
        return None
    cert = DependenceCertificate(tuple(Fraction(v, den) for v in x)).normalize()
    assert check_dependence(M, cert)
    return cert


def dependence_range(M: TropMatrix, lambdas, free: int):
    """Values of coordinate ``free`` completing ``lambdas`` to a certificate.

    The other coordinates are fixed (``INF`` allowed); the entry at ``free``
    is ignored.  Returns ``None`` when no value works, else ``(low, high)``
    with ``high == low`` for a single point or ``high == INF`` for the ray
    ``[low, inf)``.
    """
    M.require_finite("dependence_range")
    lambdas = [to_trop(x) for x in lambdas]
    if len(lambdas) != M.rows:
        raise ValueError("length mismatch")
    low, point = -INF, None
    others = [i for i in range(M.rows) if i != free and lambdas[i] != INF]
    for j in range(M.cols):
        vals = [lambdas[i] + M[i, j] for i in others]
        if not vals:
            return None
        m = min(vals)
        bound = m - M[free, j]
        if vals.count(m) >= 2:
            low = max(low, bound)
        elif point is None or point == bound:
            point = bound
        else:
            return None
    if point is not None:
        return (point, point) if point >= low else None
    return (low, INF)


def positive_dependence_value(M: TropMatrix, lambdas, free: int):
    """A positive value for coordinate ``free`` completing a certificate, or ``None``."""
    rng = dependence_range(M, lambdas, free)
    if rng is None:
        return None
    low, high = rng
    if high == low:
        return low if low > 0 else None
    return low if low > 0 else Fraction(1)


# --- rank -------------------------------------------------------------------

def _int_singular(cost):
    best = _assign(cost)
    if best is None:
        return True
    value, perm = best
    for i, j in enumerate(perm):
        saved = cost[i][j]
        cost[i][j] = INF
        alt = _assign(cost)
        cost[i][j] = saved
        if alt is not None and alt[0] == value:
            return True
    return False


def _first_occurrences(M):
    seen, keep = set(), []
    for i, row in enumerate(M):
        if row not in seen:
            seen.add(row)
            keep.append(i)
    return keep


def _has_repeat(lines):
    return len(set(lines)) < len(lines)


def rank_with_witness(M: TropMatrix, budget: int = DEFAULT_RANK_BUDGET) -> RankResult:
    """Largest nonsingular square submatrix, searched from the largest size down.

    Submatrices are tried in lexicographic order of (rows, cols) and the first
    nonsingular one is reported.
    """
    M.require_finite("tropical rank")
    # A square submatrix with two equal rows (or columns) is singular, so
    # repeated lines can be dropped before the search.
    keep_rows = _first_occurrences(M)
    keep_cols = _first_occurrences(M.transpose())
    k = min(len(keep_rows), len(keep_cols))
    if k > budget:
        raise BudgetExceeded(f"min(d, n) = {k} after removing repeated lines exceeds the rank budget {budget}")
    cost, _ = _integer_costs(M.submatrix(keep_rows, keep_cols))
    for r in range(k, 0, -1):
        for rows in itertools.combinations(range(len(keep_rows)), r):
            sub_rows = [cost[i] for i in rows]
            if _has_repeat([tuple(row) for row in sub_rows]):
                continue
            for cols in itertools.combinations(range(len(keep_cols)), r):
                sub = [[row[j] for j in cols] for row in sub_rows]
                if r > 1 and (_has_repeat([tuple(row) for row in sub]) or _has_repeat(list(zip(*sub)))):
                    continue
                if not _int_singular(sub):
                    return RankResult(r, tuple(keep_rows[i] for i in rows), tuple(keep_cols[j] for j in cols))
    raise AssertionError("every 1x1 submatrix of a finite matrix is nonsingular")


def tropical_rank(M: TropMatrix, budget: int = DEFAULT_RANK_BUDGET) -> int:
    return rank_with_witness(M, budget).rank


def max_independent_rows(M: TropMatrix) -> int:
    """Size of the largest row subset admitting no dependence certificate."""
    M.require_finite("max_independent_rows")
    if M.rows > MAX_DEPENDENCE_ROWS:
        raise BudgetExceeded(f"{M.rows} rows exceed the dependence budget {MAX_DEPENDENCE_ROWS}")
    for size in range(M.rows, 1, -1):
        for rows in itertools.combinations(range(M.rows), size):
            if find_dependence(M.submatrix(rows)) is None:
                return size
    return 1


# --- pattern-level dependence -----------------------------------------------

def b_dependence_from(M: TropMatrix, cert) -> BSupportCertificate:
    """Rows where the certificate takes its minimum."""
    cert = _as_certificate(cert)
    if not check_dependence(M, cert):
        raise ValueError("not a dependence certificate for this matrix")
    low = min(cert)
    return BSupportCertificate(frozenset(i for i, x in enumerate(cert) if x == low))


def check_b_dependence(P: Pattern, I) -> bool:
    """Every column has zero or at least two zeros among the rows of ``I``."""
    index_set = I.index_set if isinstance(I, BSupportCertificate) else frozenset(I)
    if not index_set:
        raise ValueError("empty index set")
    if not all(0 <= i < P.rows for i in index_set):
        raise IndexError("index set out of range")
    for j in range(P.cols):
        zeros = sum(1 for i in index_set if P[i, j] == 0)
        if zeros == 1:
            return False
    return True


def min_combine(c1, c2) -> DependenceCertificate:
    c1, c2 = _as_certificate(c1), _as_certificate(c2)
    if len(c1) != len(c2):
        raise ValueError("certificates differ in length")
    return DependenceCertificate(tuple(min(a, b) for a, b in zip(c1, c2)))


def largest_b_nonsingular(P: Pattern) -> int:
    """Size of the largest square submatrix of ``P`` with exactly one zero transversal."""
    k = min(P.rows, P.cols)
    for r in range(k, 1, -1):
        for rows in itertools.combinations(range(P.rows), r):
            for cols in itertools.combinations(range(P.cols), r):
                cost = [[P[i, j] for j in cols] for i in rows]
                cost = [[INF if x == INF else 0 for x in row] for row in cost]
                if not _int_singular(cost):
                    return r
    return 1 if any(x == 0 for row in P for x in row) else 0
