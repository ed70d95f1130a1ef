"""Matrices whose Kapranov rank exceeds their tropical rank, and when minors form a tropical basis.

The r x r minors of d x n matrices form a tropical basis exactly when every
d x n matrix of tropical rank below r also has Kapranov rank below r.  That
happens iff r <= 3, r = min(d, n), or r = 4 with min(d, n) <= 6.  For every
other triple :func:`witness` builds a d x n matrix of tropical rank r - 1
whose Kapranov rank is at least r.  Its tropical rank is machine-checked;
the Kapranov lower bound is carried as an unverified claim.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .assignment import trop_permanent
from .core import TropMatrix
from .puiseux import K_ZERO, KMatrix, rank_over_K
from .rank import DEFAULT_RANK_BUDGET, tropical_rank

BASIS_HOLDS = "basis holds"
VERIFY_LIMIT = 8

_EXAMPLES = {
    "A6": (
        (0, 0, 4, 4, 4, 4),
        (0, 0, 2, 4, 1, 4),
        (4, 4, 0, 0, 4, 4),
        (2, 4, 0, 0, 2, 4),
        (4, 4, 4, 4, 0, 0),
        (2, 4, 1, 4, 0, 0),
    ),
    "C7": (
        (1, 1, 0, 1, 0, 0, 0),
        (0, 1, 1, 0, 1, 0, 0),
        (0, 0, 1, 1, 0, 1, 0),
        (0, 0, 0, 1, 1, 0, 1),
        (1, 0, 0, 0, 1, 1, 0),
        (0, 1, 0, 0, 0, 1, 1),
        (1, 0, 1, 0, 0, 0, 1),
    ),
}

# (tropical rank, claimed Kapranov rank) of the two base examples.
_EXAMPLE_RANKS = {"A6": (4, 5), "C7": (3, 4)}


@dataclass(frozen=True)
class WitnessReport:
    matrix: TropMatrix
    claimed_trop_rank: int
    claimed_kapranov_lower: int
    trop_rank_verified: bool
    provenance: tuple
    kapranov_verified: bool = False

    def __post_init__(self):
        if self.claimed_kapranov_lower <= self.claimed_trop_rank:
            raise ValueError("a witness must claim Kapranov rank above its tropical rank")


def example_matrix(name: str) -> TropMatrix:
    """``"A6"`` (tropical rank 4, Kapranov rank 5) or ``"C7"`` (tropical rank 3, Kapranov rank 4)."""
    try:
        rows = _EXAMPLES[name]
    except KeyError:
        raise ValueError(f"unknown example {name!r}; expected one of {sorted(_EXAMPLES)}") from None
    return TropMatrix(rows)


def pad(M: TropMatrix, d: int, n: int) -> TropMatrix:
    """Repeat the last row and last column until the matrix is d x n."""
    if d < M.rows or n < M.cols:
        raise ValueError(f"cannot pad a {M.rows}x{M.cols} matrix down to {d}x{n}")
    rows = [list(r) + [r[-1]] * (n - M.cols) for r in M]
    rows += [rows[-1][:] for _ in range(d - M.rows)]
    return TropMatrix(rows)


def max_permanent(M: TropMatrix, r: int) -> Fraction:
    """Largest tropical permanent over all r x r submatrices."""
    best = None
    for rows in itertools.combinations(range(M.rows), r):
        for cols in itertools.combinations(range(M.cols), r):
            v = trop_permanent(M.submatrix(rows, cols)).value
            if best is None or v > best:
                best = v
    return best


def border(M: TropMatrix, r: int, budget: int = DEFAULT_RANK_BUDGET) -> TropMatrix:
    """Raise the tropical rank of a rank-r matrix by one.

    Appends the last column plus ``P + 1`` as a new column and the last row
    plus ``P + 1`` as a new row, with 0 in the corner, where ``P`` is the
    largest tropical permanent of an r x r submatrix.
    """
    M.require_finite("border")
    actual = tropical_rank(M, budget)
    if actual != r:
        raise ValueError(f"border needs tropical rank {r}, the matrix has {actual}")
    shift = max_permanent(M, r) + 1
    rows = [list(row) + [shift + row[-1]] for row in M]
    rows.append([shift + x for x in M.row(M.rows - 1)] + [Fraction(0)])
    return TropMatrix(rows)


def eliminate_border(F: KMatrix, B: TropMatrix):
    """Clear the last column of a lift of a bordered matrix by row operations.

    ``F`` lifts ``B = border(A, r)``.  Subtracting multiples of the last
    row from the others zeroes the last column; the top-left block is then
    a lift of ``A`` and the rank of ``F`` is one more than the rank of that
    block.  Returns ``(block, rank_F, rank_block)`` with ranks ``None``
    beyond the exact-rank budget.  Raises ``ValueError`` if ``F`` is not a
    lift of ``B`` or the block is not a lift of the top-left part of ``B``.
    """
    if F.degrees() != B:
        raise ValueError("F is not a lift of the bordered matrix")
    d, n = B.rows - 1, B.cols - 1
    pivot = F[d, n]
    rows = []
    for k in range(d):
        factor = F[k, n] / pivot
        new = [F[k, j] - factor * F[d, j] for j in range(n + 1)]
        if new[n] != K_ZERO:
            raise ArithmeticError("last column was not cleared")
        rows.append(new[:n])
    block = KMatrix(rows)
    if block.degrees() != B.submatrix(range(d), range(n)):
        raise ValueError("the eliminated block is not a lift of the top-left part")
    rank_f = rank_block = None
    if min(F.shape) <= 6:
        rank_f = rank_over_K(F)
    if min(block.shape) <= 6:
        rank_block = rank_over_K(block)
    if rank_f is not None and rank_block is not None and rank_f != rank_block + 1:
        raise ArithmeticError(f"rank {rank_f} of F is not one more than the block rank {rank_block}")
    return block, rank_f, rank_block


@functools.lru_cache(maxsize=None)
def _bordered_a6(count: int) -> TropMatrix:
    """A6 after ``count`` applications of :func:`border`."""
    if count == 0:
        return example_matrix("A6")
    M = _bordered_a6(count - 1)
    return border(M, _EXAMPLE_RANKS["A6"][0] + count - 1, budget=max(DEFAULT_RANK_BUDGET, M.rows))


def is_tropical_basis(d: int, n: int, r: int) -> bool:
    """Do the r x r minors of a d x n matrix form a tropical basis?"""
    m = min(d, n)
    if d < 1 or n < 1 or not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= min(d, n), got d={d}, n={n}, r={r}")
    return r <= 3 or r == m or (r == 4 and m <= 6)


def witness(d: int, n: int, r: int, verify: bool = True):
    """A d x n matrix of tropical rank r - 1 and Kapranov rank at least r, or ``BASIS_HOLDS``."""
    if is_tropical_basis(d, n, r):
        return BASIS_HOLDS
    if r == 4:
        base = "C7"
        M = example_matrix(base)
        steps = [base]
        trop, kap = _EXAMPLE_RANKS[base]
    else:
        base = "A6"
        trop, kap = _EXAMPLE_RANKS[base]
        count = r - 1 - trop
        M = _bordered_a6(count)
        steps = [base] + [f"border(r={trop + k})" for k in range(count)]
        trop, kap = trop + count, kap + count
    if (M.rows, M.cols) != (d, n):
        steps.append(f"pad({d}, {n})")
        M = pad(M, d, n)
    verified = False
    if verify and min(d, n) <= VERIFY_LIMIT:
        actual = tropical_rank(M, VERIFY_LIMIT)
        if actual != trop:
            raise AssertionError(f"witness for {(d, n, r)} has tropical rank {actual}, expected {trop}")
        verified = True
    return WitnessReport(M, trop, kap, verified, tuple(steps))


def basis_table(limit: int = 10):
    """``{(d, n, r): is_tropical_basis(d, n, r)}`` for all ``1 <= r <= min(d, n)``, ``d, n <= limit``."""
    return {
        (d, n, r): is_tropical_basis(d, n, r)
        for d in range(1, limit + 1)
        for n in range(1, limit + 1)
        for r in range(1, min(d, n) + 1)
    }

