import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropbasis.core import INF, BudgetExceeded, TropMatrix
from tropbasis.lift import build_lambda, monomial_lift
from tropbasis.puiseux import (
    K_ONE,
    K_ZERO,
    KElement,
    KMatrix,
    KSyntaxError,
    PuiseuxPoly,
    cofactor,
    cramer_solve,
    deg_dependence_from_kernel,
    degree,
    determinant,
    determinant_by_permutations,
    format_k,
    format_k_matrix,
    gauss,
    identity,
    k_field_ops,
    kernel_vector,
    left_kernel_vector,
    parse_k,
    parse_k_matrix,
    poly_gcd,
    rank_over_K,
    t_pow,
)
from tropbasis.rank import check_dependence
from tropbasis.witness import example_matrix

F = Fraction
t = t_pow(1)


@st.composite
def k_elements(draw, max_terms=3):
    """Small rational functions with Gaussian-rational coefficients."""

    def poly():
        terms = {}
        for _ in range(draw(st.integers(1, max_terms))):
            e = draw(st.fractions(-2, 3, max_denominator=2))
            c = gauss(draw(st.integers(-3, 3)), draw(st.sampled_from([0, 0, 1, -1])))
            terms[e] = c
        return PuiseuxPoly(terms)

    num = poly()
    den = poly() if draw(st.booleans()) else PuiseuxPoly({0: 1})
    if den.is_zero():
        den = PuiseuxPoly({0: 1})
    return KElement(num, den)


class TestGaussRat:
    def test_arithmetic(self):
        i = gauss(0, 1)
        assert i * i == gauss(-1)
        assert (gauss(1, 1) / gauss(1, -1)) == i
        assert gauss(3, 4).norm() == 25

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            gauss(1) / gauss(0)


class TestField:
    def test_half_powers(self):
        assert t_pow(F(1, 2)) * t_pow(F(1, 2)) == t

    def test_fraction_form(self):
        x = 1 / (2 + t)
        assert x.degree() == 0
        assert x * (2 + t) == K_ONE

    def test_cancellation(self):
        assert (1 + t) - (1 + t) == K_ZERO
        assert ((1 + t) - (1 + t)).degree() == INF

    def test_degrees(self):
        assert degree(t_pow(F(1, 2)) + 3 * t_pow(2)) == F(1, 2)
        assert degree(K_ZERO) == INF
        assert degree(2 / (2 + t)) == 0
        assert degree(t_pow(-3) / (t_pow(F(1, 3)) + t_pow(5))) == F(-10, 3)

    def test_field_ops_dispatch(self):
        assert k_field_ops(t, t, "×") == t_pow(2)
        assert k_field_ops(t, t, "÷") == K_ONE
        with pytest.raises(ValueError):
            k_field_ops(t, t, "^")

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            t / K_ZERO

    def test_lowest_terms(self):
        x = (t_pow(2) - 1) / (t - 1)
        assert x == 1 + t
        assert x.den == PuiseuxPoly({0: 1})

    def test_gcd(self):
        g = poly_gcd((t_pow(2) - 1).num, (t_pow(2) + 2 * t + 1).num)
        assert KElement(g) == 1 + t

    @settings(max_examples=150, deadline=None)
    @given(k_elements(), k_elements(), k_elements())
    def test_field_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a - a == K_ZERO
        if a:
            assert a * a.inverse() == K_ONE

    @settings(max_examples=150, deadline=None)
    @given(k_elements(), k_elements())
    def test_degree_is_a_valuation(self, a, b):
        assert (a * b).degree() == a.degree() + b.degree() if a and b else (a * b).degree() == INF
        assert (a + b).degree() >= min(a.degree(), b.degree())
        if a.degree() != b.degree():
            assert (a + b).degree() == min(a.degree(), b.degree())

    @settings(max_examples=150, deadline=None)
    @given(k_elements())
    def test_text_round_trip(self, a):
        assert parse_k(format_k(a)) == a


class TestSyntax:
    def test_examples(self):
        assert parse_k("t^{1/2}") == t_pow(F(1, 2))
        assert parse_k("(1+t^{1})/(2+t^{1})") == (1 + t) / (2 + t)
        assert parse_k("(1/2+3/4 i)*t^{-1/2}") == t_pow(F(-1, 2), gauss(F(1, 2), F(3, 4)))
        assert parse_k("0") == K_ZERO

    @pytest.mark.parametrize("text", ["", "t^", "(1+t", "1 +* t", "t^{1/0}"])
    def test_errors(self, text):
        with pytest.raises((KSyntaxError, ZeroDivisionError)):
            parse_k(text)

    def test_matrix_round_trip(self):
        Fm = KMatrix([[1 + t, K_ZERO], [t_pow(F(-1, 2)), 2 / (2 + t)]])
        assert parse_k_matrix(format_k_matrix(Fm)) == Fm

    def test_matrix_error_line(self):
        with pytest.raises(KSyntaxError, match="line 2"):
            parse_k_matrix("1; t\n1; (t\n")


class TestDeterminant:
    def test_two_by_two(self):
        assert determinant(KMatrix([[1, t], [t, 1]])) == 1 - t_pow(2)

    def test_identity(self):
        assert determinant(identity(5)) == K_ONE

    def test_case_iv_coefficients(self):
        assert determinant(build_lambda("iv", 1, 1)).degree() == 3

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            determinant(identity(7))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.data())
    def test_matches_permutation_expansion(self, n, data):
        A = KMatrix([[data.draw(k_elements(max_terms=2)) for _ in range(n)] for _ in range(n)])
        assert determinant(A) == determinant_by_permutations(A)

    def test_cofactor_expansion(self):
        rng = random.Random(2)
        A = KMatrix([[t_pow(rng.randint(0, 3), rng.randint(-3, 3) or 1) for _ in range(4)] for _ in range(4)])
        expansion = sum((A[0, j] * cofactor(A, 0, j) for j in range(4)), K_ZERO)
        assert expansion == determinant(A)


class TestSolve:
    def test_identity_system(self):
        rhs = [1 + t, t_pow(2), K_ZERO]
        assert cramer_solve(identity(3), rhs) == rhs

    def test_small_system(self):
        assert cramer_solve(KMatrix([[1, 0], [1, 1]]), [1, 2]) == [K_ONE, K_ONE]

    def test_singular(self):
        with pytest.raises(ZeroDivisionError):
            cramer_solve(KMatrix([[1, t], [1, t]]), [1, 2])


class TestRank:
    def test_identity(self):
        assert rank_over_K(identity(6)) == 6

    def test_forced_combinations(self):
        rng = random.Random(5)
        base = [[t_pow(rng.randint(0, 3), rng.randint(1, 3)) for _ in range(6)] for _ in range(3)]
        rows = []
        for _ in range(6):
            c = [t_pow(rng.randint(0, 2), rng.randint(-2, 2) or 1) for _ in range(3)]
            rows.append([sum((c[k] * base[k][j] for k in range(3)), K_ZERO) for j in range(6)])
        assert rank_over_K(KMatrix(rows)) <= 3

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            rank_over_K(identity(7))

    def test_generic_lifts_of_a6(self):
        """Random-coefficient lifts of A6 have rank at least 5."""
        A6 = example_matrix("A6")
        rng = random.Random(6)
        for _ in range(5):
            coefs = [[rng.choice([1, 2, 3, -1, -2, 5]) for _ in range(6)] for _ in range(6)]
            Fm = monomial_lift(A6, coefs)
            assert Fm.degrees() == A6
            assert rank_over_K(Fm) >= 5


class TestKernel:
    def test_kernel_vector(self):
        A = KMatrix([[1, t, 1 + t], [t, 1, 1 + t]])
        x = kernel_vector(A)
        assert x is not None and all(v == K_ZERO for v in A.apply(x))

    def test_full_rank_has_no_kernel(self):
        assert kernel_vector(identity(3)) is None

    def test_certificate_from_equal_rows(self):
        A = TropMatrix([[0, 1], [0, 1], [2, 2]])
        Fm = KMatrix([[1, t], [1, t], [t_pow(2), t_pow(2)]])
        cert = deg_dependence_from_kernel([1, -1, 0], Fm, A)
        assert cert.lambdas == (0, 0, INF)

    def test_scaling_shifts_certificate(self):
        A = TropMatrix([[0, 1], [0, 1]])
        Fm = KMatrix([[1, t], [1, t]])
        cert = deg_dependence_from_kernel([t_pow(3), -t_pow(3)], Fm, A)
        assert cert.lambdas == (3, 3)

    def test_not_in_kernel(self):
        A = TropMatrix([[0, 1], [0, 1]])
        with pytest.raises(ValueError):
            deg_dependence_from_kernel([1, 1], KMatrix([[1, t], [1, t]]), A)

    def test_random_rank_deficient(self):
        rng = random.Random(9)
        for _ in range(20):
            top = [[t_pow(rng.randint(0, 3), rng.choice([1, 2, -1, 3])) for _ in range(4)] for _ in range(3)]
            c = [t_pow(rng.randint(0, 2), rng.choice([1, -1, 2])) for _ in range(3)]
            last = [sum((c[k] * top[k][j] for k in range(3)), K_ZERO) for j in range(4)]
            Fm = KMatrix(top + [last])
            lam = left_kernel_vector(Fm)
            assert lam is not None
            cert = deg_dependence_from_kernel(lam, Fm, Fm.degrees())
            assert check_dependence(Fm.degrees(), cert)
