import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_trop_rank, random_matrix, trop_matrices
from tropbasis.core import INF, BudgetExceeded, Pattern, TropMatrix, pattern
from tropbasis.rank import (
    BSupportCertificate,
    DependenceCertificate,
    b_dependence_from,
    check_b_dependence,
    check_dependence,
    dependence_range,
    find_dependence,
    largest_b_nonsingular,
    max_independent_rows,
    min_combine,
    positive_dependence_value,
    rank_with_witness,
    tropical_rank,
)
from tropbasis.witness import example_matrix


class TestCertificates:
    def test_equal_rows(self):
        assert check_dependence(TropMatrix([[0, 1], [0, 1]]), (0, 0))

    def test_single_minimum(self):
        assert not check_dependence(TropMatrix([[0, 1], [0, 2]]), (0, 0))

    def test_all_infinite_rejected(self):
        with pytest.raises(ValueError):
            DependenceCertificate((INF, INF))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            check_dependence(TropMatrix([[0], [1]]), (0, 0, 0))

    def test_normalize_and_shift(self):
        c = DependenceCertificate((2, INF, 3))
        assert c.normalize().lambdas == (0, INF, 1)
        assert c.shift(-2).lambdas == (0, INF, 1)
        assert not c.normalized


class TestFindDependence:
    def test_single_row(self):
        assert find_dependence(TropMatrix([[0, 1, 2]])) is None

    def test_equal_rows(self):
        assert find_dependence(TropMatrix([[0, 1], [0, 1]])).lambdas == (0, 0)

    def test_a6(self):
        A6 = example_matrix("A6")
        cert = find_dependence(A6)
        assert cert is not None and check_dependence(A6, cert)

    def test_independent_pair(self):
        assert find_dependence(TropMatrix([[0, 1], [1, 0]])) is None

    @settings(max_examples=150, deadline=None)
    @given(trop_matrices(min_size=2, max_size=4, entries=st.integers(0, 3)))
    def test_found_certificates_check(self, M):
        cert = find_dependence(M)
        if cert is not None:
            assert check_dependence(M, cert)
            assert cert.normalized

    @settings(max_examples=100, deadline=None)
    @given(trop_matrices(min_size=2, max_size=4, entries=st.integers(0, 3)))
    def test_independence_matches_rank(self, M):
        """The rows are independent iff the tropical rank equals the row count."""
        independent = find_dependence(M) is None
        assert independent == (tropical_rank(M) == M.rows)

    @settings(max_examples=100, deadline=None)
    @given(trop_matrices(min_size=2, max_size=4, entries=st.integers(0, 3)), st.data())
    def test_min_combine_keeps_validity(self, M, data):
        c1 = find_dependence(M)
        if c1 is None:
            return
        shift = data.draw(st.fractions(-2, 2, max_denominator=2))
        c2 = find_dependence(M.submatrix(list(reversed(range(M.rows)))))
        c2 = DependenceCertificate(tuple(reversed(c2.lambdas))).shift(shift)
        assert check_dependence(M, min_combine(c1, c2))


class TestDependenceRange:
    def test_ray(self):
        M = TropMatrix([[0, 1], [0, 1], [5, 5]])
        assert dependence_range(M, [0, 0, INF], 2) == (-4, INF)

    def test_point(self):
        M = TropMatrix([[2, 5], [0, 3]])
        assert dependence_range(M, [0, INF], 1) == (2, 2)

    def test_none(self):
        M = TropMatrix([[0, 3], [1, 1]])
        assert dependence_range(M, [0, INF], 1) is None

    def test_positive_value(self):
        assert positive_dependence_value(TropMatrix([[2, 5], [0, 3]]), [0, INF], 1) == 2
        assert positive_dependence_value(TropMatrix([[0, 5], [2, 3]]), [0, INF], 1) is None
        # a ray reaching below zero falls back to 1
        N = TropMatrix([[0, 1], [0, 1], [5, 5]])
        assert positive_dependence_value(N, [0, 0, INF], 2) == 1

    @settings(max_examples=100, deadline=None)
    @given(trop_matrices(min_size=2, max_size=4, entries=st.integers(0, 4)), st.data())
    def test_range_endpoints_are_certificates(self, M, data):
        free = data.draw(st.integers(0, M.rows - 1))
        lams = [data.draw(st.integers(0, 3)) for _ in range(M.rows)]
        rng = dependence_range(M, lams, free)
        if rng is None:
            return
        lams[free] = rng[0]
        assert check_dependence(M, lams)
        if rng[1] == INF:
            lams[free] = rng[0] + 7
            assert check_dependence(M, lams)


class TestRank:
    def test_a6(self):
        assert tropical_rank(example_matrix("A6")) == 4

    def test_c7(self):
        assert tropical_rank(example_matrix("C7")) == 3

    def test_zero_matrix(self):
        assert tropical_rank(TropMatrix([[0] * 3] * 3)) == 1

    def test_witness_is_nonsingular(self):
        from tropbasis.assignment import is_trop_singular

        A6 = example_matrix("A6")
        res = rank_with_witness(A6)
        assert len(res.rows) == len(res.cols) == 4
        assert not is_trop_singular(A6.submatrix(res.rows, res.cols))

    def test_budget(self):
        M = TropMatrix([[i * j for j in range(9)] for i in range(9)])
        with pytest.raises(BudgetExceeded):
            tropical_rank(M)

    def test_repeated_lines_do_not_count(self):
        rows = [[0, 1, 2]] * 10
        assert tropical_rank(TropMatrix(rows)) == 1

    def test_infinite_entries_rejected(self):
        with pytest.raises(ValueError):
            tropical_rank(TropMatrix([[0, INF]]))

    @settings(max_examples=150, deadline=None)
    @given(trop_matrices(min_size=1, max_size=5, entries=st.integers(0, 3)))
    def test_matches_bruteforce(self, M):
        assert tropical_rank(M) == brute_trop_rank(M)

    @settings(max_examples=100, deadline=None)
    @given(trop_matrices(min_size=1, max_size=5, entries=st.integers(0, 3)))
    def test_transpose_invariant(self, M):
        assert tropical_rank(M) == tropical_rank(M.transpose())


class TestMaxIndependentRows:
    def test_a6(self):
        assert max_independent_rows(example_matrix("A6")) == 4

    def test_single_column(self):
        assert max_independent_rows(TropMatrix([[0], [1], [2]])) == 1

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            max_independent_rows(TropMatrix([[0]] * 8))

    def test_random_agreement(self):
        rng = random.Random(3)
        for _ in range(100):
            M = random_matrix(rng, rng.randint(2, 5), rng.randint(2, 5))
            assert max_independent_rows(M) == tropical_rank(M)


class TestPatternDependence:
    def test_from_equal_rows(self):
        assert b_dependence_from(TropMatrix([[0, 1], [0, 1]]), (0, 0)).index_set == {0, 1}

    def test_argmin(self):
        M = TropMatrix([[0, 1], [0, 0], [0, 1]])
        assert b_dependence_from(M, (0, 3, 0)).index_set == {0, 2}

    def test_invalid_certificate(self):
        with pytest.raises(ValueError):
            b_dependence_from(TropMatrix([[0, 1], [0, 2]]), (0, 0))

    def test_check_examples(self):
        assert check_b_dependence(Pattern([[0, INF], [0, INF]]), {0, 1})
        assert not check_b_dependence(Pattern([[0, INF], [INF, 0]]), {0, 1})
        assert check_b_dependence(Pattern([[INF, INF], [INF, INF]]), BSupportCertificate({0, 1}))

    def test_min_combine(self):
        assert min_combine((0, INF, 2), (1, 0, INF)).lambdas == (0, 0, 2)
        c = DependenceCertificate((0, 1, INF))
        assert min_combine(c, c) == c

    @settings(max_examples=100, deadline=None)
    @given(trop_matrices(min_size=2, max_size=5, entries=st.integers(0, 3)))
    def test_support_of_certificate_is_b_dependent(self, M):
        cert = find_dependence(M)
        if cert is None:
            return
        assert check_b_dependence(pattern(M), b_dependence_from(M, cert))

    def test_largest_b_nonsingular(self):
        assert largest_b_nonsingular(Pattern([[0, INF], [INF, 0]])) == 2
        assert largest_b_nonsingular(Pattern([[0, 0], [0, 0]])) == 1
        assert largest_b_nonsingular(Pattern([[INF, INF], [INF, INF]])) == 0

    def test_pattern_rank_bounds_rank_of_normalized(self):
        rng = random.Random(4)
        for _ in range(50):
            M = random_matrix(rng, 4, 4)
            assert largest_b_nonsingular(pattern(M)) <= tropical_rank(M)
