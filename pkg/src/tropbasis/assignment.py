"""Tropical permanents as optimal assignments, with exact uniqueness tests."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import INF, Pattern, TropMatrix

BRUTEFORCE_LIMIT = 9


@dataclass(frozen=True)
class PermanentResult:
    value: object
    witness: tuple | None
    unique: bool


def _require_square(S: TropMatrix):
    if S.rows != S.cols:
        raise ValueError(f"expected a square matrix, got {S.rows}x{S.cols}")


def _integer_costs(S: TropMatrix):
    """Scale finite entries to integers; returns (cost rows, common denominator)."""
    den = 1
    for row in S:
        for x in row:
            if x != INF:
                den = den * x.denominator // math.gcd(den, x.denominator)
    costs = [[INF if x == INF else int(x * den) for x in row] for row in S]
    return costs, den


def _assign(cost):
    """Min-cost perfect matching by shortest augmenting paths with potentials.

    ``cost`` holds ints or ``INF`` (a missing edge).  Returns ``(value, p)``
    where ``p[i]`` is the column matched to row ``i``, or ``None`` when no
    perfect matching exists.
    """
    n = len(cost)
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row (1-based) assigned to column j
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            row = cost[i0 - 1]
            delta = INF
            j1 = -1
            ui = u[i0]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                c = row[j - 1]
                if c != INF:
                    cur = c - ui - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if delta == INF:
                return None
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    p = [0] * n
    for j in range(1, n + 1):
        p[match[j] - 1] = j - 1
    return sum(cost[i][p[i]] for i in range(n)), tuple(p)


def trop_permanent(S: TropMatrix) -> PermanentResult:
    """Minimum over permutations of the diagonal sums, with an exact uniqueness flag.

    Uniqueness: forbid each edge of one optimal assignment in turn and
    re-solve; the optimum is unique iff every re-solve is strictly worse.
    """
    _require_square(S)
    cost, den = _integer_costs(S)
    best = _assign(cost)
    if best is None:
        return PermanentResult(INF, None, False)
    value, perm = best
    unique = True
    for i, j in enumerate(perm):
        saved = cost[i][j]
        cost[i][j] = INF
        alt = _assign(cost)
        cost[i][j] = saved
        if alt is not None and alt[0] == value:
            unique = False
            break
    return PermanentResult(Fraction(value, den), perm, unique)


def permanent_bruteforce(S: TropMatrix) -> PermanentResult:
    """Same contract as :func:`trop_permanent`, by enumerating all permutations."""
    _require_square(S)
    n = S.rows
    if n > BRUTEFORCE_LIMIT:
        raise ValueError(f"brute-force permanent is limited to n <= {BRUTEFORCE_LIMIT}")
    best = INF
    witness = None
    count = 0
    for perm in itertools.permutations(range(n)):
        total = Fraction(0)
        for i, j in enumerate(perm):
            x = S[i, j]
            if x == INF:
                total = INF
                break
            total += x
        if total == INF:
            continue
        if total < best:
            best, witness, count = total, perm, 1
        elif total == best:
            count += 1
    if best == INF:
        return PermanentResult(INF, None, False)
    return PermanentResult(best, witness, count == 1)


def is_trop_singular(S: TropMatrix) -> bool:
    return not trop_permanent(S).unique


def is_b_singular(P: Pattern) -> bool:
    """True unless exactly one permutation picks only zeros of ``P``."""
    _require_square(P)
    if P.rows < 2:
        raise ValueError("B-singularity is defined for n > 1 only")
    for row in P:
        for x in row:
            if x != 0 and x != INF:
                raise ValueError("pattern entries must be 0 or inf")
    return not trop_permanent(P).unique
