"""Random instance generators and brute-force oracles shared by the tests."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from tropbasis.assignment import permanent_bruteforce
from tropbasis.core import INF, TropMatrix, ttimes
from tropbasis.lift import build_lambda, two_equation_thetas
from tropbasis.puiseux import KMatrix, determinant, t_pow

COEFFS = (1, 2, 3, -1, -2, -3)


def random_matrix(rng: random.Random, d: int, n: int, hi: int = 4, inf_prob: float = 0.0) -> TropMatrix:
    return TropMatrix([
        [INF if rng.random() < inf_prob else rng.randint(0, hi) for _ in range(n)]
        for _ in range(d)
    ])


def from_columns(cols) -> TropMatrix:
    return TropMatrix([list(r) for r in zip(*cols)])


def brute_trop_rank(M: TropMatrix) -> int:
    """Largest square submatrix with a finite, uniquely attained permanent (INF allowed)."""
    for r in range(min(M.shape), 0, -1):
        for rows in itertools.combinations(range(M.rows), r):
            for cols in itertools.combinations(range(M.cols), r):
                res = permanent_bruteforce(M.submatrix(rows, cols))
                if res.value != INF and res.unique:
                    return r
    return 0


# --- 6-row pattern samplers ---------------------------------------------------

def support_column(sup, rng, hi=4, rows=6):
    return [0 if i in sup else rng.randint(1, hi) for i in range(rows)]


def sample_case_iv(rng) -> TropMatrix:
    T, B = {0, 1, 2}, {3, 4, 5}
    cols = [support_column(T, rng), support_column(B, rng)]
    for _ in range(rng.randint(0, 4)):
        s = set(rng.sample(sorted(T), 2)) | set(rng.sample(sorted(B), 2))
        cols.append(support_column(s, rng))
    rng.shuffle(cols)
    return from_columns(cols)


def sample_case_iii(rng) -> TropMatrix:
    triples = [{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}]
    cols = [support_column(s, rng) for s in rng.sample(triples, rng.randint(2, 4))]
    for _ in range(rng.randint(0, 2)):
        cols.append(support_column(set(rng.sample(range(6), rng.choice([4, 5]))), rng))
    rng.shuffle(cols)
    return from_columns(cols)


COMPLETION_SUPPORTS = {
    "v": [{3, 4, 5}, {4, 5}, {0, 1, 2}],
    "i": [{0, 1}, {2, 3}, {4, 5}],
    "ii": [{0, 1}, {2, 3, 4}, {2, 3, 5}, {3, 4, 5}],
}


def sample_completion(rng, case) -> TropMatrix:
    sups = COMPLETION_SUPPORTS[case]
    cols = [support_column(s, rng) for s in sups]
    for _ in range(rng.randint(0, 2)):
        cols.append(support_column(rng.choice(sups), rng))
    rng.shuffle(cols)
    return from_columns(cols)


# --- admissible instances for the linear-system solvers ----------------------

def single_instance(rng):
    """``(l, a)`` where ``deg l`` realizes the tropical dependence of ``a``."""
    n = rng.randint(2, 6)
    a = [Fraction(rng.randint(0, 6), rng.choice([1, 2])) for _ in range(n)]
    low = Fraction(rng.randint(-3, 3))
    tied = set(rng.sample(range(n), rng.randint(2, n)))
    l = []
    for j in range(n):
        if j in tied:
            e = low - a[j]
        elif rng.random() < 0.3:
            l.append(0)
            continue
        else:
            e = low - a[j] + rng.randint(1, 3)
        val = t_pow(e, rng.choice(COEFFS))
        if rng.random() < 0.5:
            val = val + t_pow(e + rng.randint(1, 2), rng.choice(COEFFS))
        l.append(val)
    return l, a


def _minors_generic(A: KMatrix) -> bool:
    for p, q in itertools.combinations(range(5), 2):
        minor = A[p, 0] * A[q, 1] - A[q, 0] * A[p, 1]
        want = min(ttimes(A[p, 0].degree(), A[q, 1].degree()), ttimes(A[q, 0].degree(), A[p, 1].degree()))
        if minor.degree() != want:
            return False
    return True


def two_instance(rng):
    """``(A, h)`` with A 5x2 meeting the minor and Theta hypotheses."""
    while True:
        A = KMatrix([[t_pow(rng.randint(0, 2), rng.choice(COEFFS)) for _ in range(2)] for _ in range(5)])
        h = [Fraction(rng.randint(0, 2)) for _ in range(5)]
        th1, th2 = two_equation_thetas(A, h)
        if len(th1) < 2 or len(th2) < 2 or len(th1 | th2) < 3:
            continue
        if _minors_generic(A):
            return A, h


def three_instances(rng, count, hmax=3):
    """``count`` admissible ``(A, h, uvyz)`` sharing one case-(iii) coefficient matrix."""
    params = [Fraction(rng.randint(0, 6), rng.choice([1, 2])) for _ in range(4)]
    A = build_lambda("iii", *params)
    minor_deg = {
        tri: determinant(A.submatrix(list(tri), [0, 1, 2])).degree()
        for tri in itertools.combinations(range(6), 3)
    }
    col_deg = [[A[j, i].degree() for i in range(3)] for j in range(6)]
    good = []
    for h in itertools.product(range(hmax + 1), repeat=6):
        D = sum(min(ttimes(col_deg[j][i], h[j]) for j in range(6)) for i in range(3))
        for quad in itertools.combinations(range(6), 4):
            if all(minor_deg[tri] == D - sum(h[k] for k in tri) for tri in itertools.combinations(quad, 3)):
                good.append((h, quad))
    out = []
    for h, quad in rng.sample(good, min(count, len(good))):
        quad = list(quad)
        rng.shuffle(quad)
        out.append((A, [Fraction(x) for x in h], tuple(quad)))
    return params, out


# --- hypothesis strategies ----------------------------------------------------

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def trop_matrices(draw, min_size=1, max_size=4, rows=None, cols=None, entries=None, inf=False):
    d = rows if rows is not None else draw(st.integers(min_size, max_size))
    n = cols if cols is not None else draw(st.integers(min_size, max_size))
    elem = entries if entries is not None else st.integers(0, 6)
    if inf:
        elem = st.one_of(elem, st.just(INF))
    return TropMatrix([[draw(elem) for _ in range(n)] for _ in range(d)])
