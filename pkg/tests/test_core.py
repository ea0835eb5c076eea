import math
from itertools import product

import numpy as np
import pytest

from analogykit.core import (binary_ad, is_analogy, real_ad,
                             solve_binary_feature, solve_bitvector_equation,
                             solve_real_equation, solve_set_equation,
                             vector_ad)
from analogykit.errors import DimensionMismatch

# Ground truth for the one-bit dissimilarity, ordered by (u, v, w, x).
# Fourteen entries are unambiguous in the published table; the last two
# are forced by the axioms: (1,1,1,0) breaks determinism (1:1::1:x has
# only x=1), and (1,1,1,1) is the identity proportion.
BIT_TABLE = {
    (0, 0, 0, 0): 0, (0, 0, 0, 1): 1, (0, 0, 1, 0): 1, (0, 0, 1, 1): 0,
    (0, 1, 0, 0): 1, (0, 1, 0, 1): 0, (0, 1, 1, 0): 2, (0, 1, 1, 1): 1,
    (1, 0, 0, 0): 1, (1, 0, 0, 1): 2, (1, 0, 1, 0): 0, (1, 0, 1, 1): 1,
    (1, 1, 0, 0): 0, (1, 1, 0, 1): 1, (1, 1, 1, 0): 1, (1, 1, 1, 1): 0,
}

# Solutions of the one-bit equation a : b :: c : x, None when absent.
BIT_SOLUTIONS = {
    (0, 0, 0): 0, (0, 0, 1): 1, (0, 1, 0): 1, (0, 1, 1): None,
    (1, 0, 0): None, (1, 0, 1): 0, (1, 1, 0): 0, (1, 1, 1): 1,
}

ALL_BITS = list(product((0, 1), repeat=4))


class TestBinaryAd:
    def test_full_table(self):
        for tup, expected in BIT_TABLE.items():
            assert binary_ad(*tup) == expected

    def test_closed_form(self):
        for u, v, w, x in ALL_BITS:
            assert binary_ad(u, v, w, x) == abs(u + x - v - w)

    def test_range(self):
        assert {binary_ad(*t) for t in ALL_BITS} == {0, 1, 2}

    def test_rejects_non_bits(self):
        with pytest.raises(ValueError):
            binary_ad(0, 2, 0, 0)

    def test_coherence_with_solutions(self):
        # zero dissimilarity exactly on tuples matching the solution table
        for u, v, w, x in ALL_BITS:
            solvable = BIT_SOLUTIONS[(u, v, w)] == x
            assert (binary_ad(u, v, w, x) == 0) == solvable

    def test_symmetry_and_median_exchange(self):
        for u, v, w, x in ALL_BITS:
            assert binary_ad(u, v, w, x) == binary_ad(w, x, u, v)
            assert binary_ad(u, v, w, x) == binary_ad(u, w, v, x)

    def test_asymmetry_witness(self):
        # swapping the first pair is not an invariance
        assert binary_ad(0, 1, 1, 0) != binary_ad(1, 0, 1, 0)
        witnesses = [t for t in ALL_BITS
                     if binary_ad(*t) != binary_ad(t[1], t[0], t[2], t[3])]
        assert witnesses

    def test_triangle_inequality_exhaustive(self):
        for u, v, w, x, z, t in product((0, 1), repeat=6):
            assert binary_ad(u, v, z, t) <= (binary_ad(u, v, w, x)
                                             + binary_ad(w, x, z, t))


class TestVectorAd:
    def test_matches_per_bit_sum(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            d = int(rng.integers(1, 9))
            u, v, w, x = rng.integers(0, 2, size=(4, d))
            expected = sum(binary_ad(*col) for col in zip(u, v, w, x))
            assert vector_ad(u, v, w, x) == expected

    def test_pattern_pairs_are_proportions(self):
        assert vector_ad([0, 1, 1], [1, 0, 1], [0, 1, 1], [1, 0, 1]) == 0

    def test_double_swap_costs_four(self):
        assert vector_ad([0, 1], [1, 0], [1, 0], [0, 1]) == 4

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            vector_ad([0, 1], [1], [0, 1], [0, 1])

    def test_axioms_exhaustive_dim3(self):
        vectors = list(product((0, 1), repeat=3))
        for u, v, w, x in product(vectors, repeat=4):
            ad = vector_ad(u, v, w, x)
            assert ad == vector_ad(w, x, u, v)
            assert ad == vector_ad(u, w, v, x)

    def test_matches_real_ad_with_p1(self):
        vectors = list(product((0, 1), repeat=3))
        for u, v, w, x in product(vectors, repeat=4):
            assert vector_ad(u, v, w, x) == pytest.approx(
                real_ad(u, v, w, x, p=1))


class TestBitEquations:
    def test_feature_table(self):
        for (a, b, c), want in BIT_SOLUTIONS.items():
            assert solve_binary_feature(a, b, c) == want

    def test_vector_example(self):
        assert solve_bitvector_equation([0, 0], [0, 1], [1, 0]).tolist() == [1, 1]

    def test_determinism(self):
        c = [1, 0, 1]
        assert solve_bitvector_equation([0, 1], [0, 1], [1, 0]).tolist() == [1, 0]
        assert solve_bitvector_equation(c, c, [0, 0, 1]).tolist() == [0, 0, 1]

    def test_unsolvable_coordinate(self):
        assert solve_bitvector_equation([0, 1], [1, 0], [1, 0]) is None

    def test_solution_iff_zero_ad_exhaustive(self):
        # dim <= 3: a solution d exists iff some x has zero dissimilarity,
        # and then that x is the solution
        for d in (1, 2, 3):
            vectors = list(product((0, 1), repeat=d))
            for a, b, c in product(vectors, repeat=3):
                sol = solve_bitvector_equation(a, b, c)
                zeros = [x for x in vectors if vector_ad(a, b, c, x) == 0]
                if sol is None:
                    assert zeros == []
                else:
                    assert zeros == [tuple(sol)]


class TestSets:
    def test_published_example(self):
        sol = solve_set_equation({"t1", "t2", "t3", "t4"},
                                 {"t1", "t2", "t3", "t5"},
                                 {"t1", "t4", "t6", "t7"})
        assert sol == {"t1", "t5", "t6", "t7"}

    def test_determinism(self):
        a = {1, 2}
        assert solve_set_equation(a, a, {3}) == {3}

    def test_no_solution(self):
        assert solve_set_equation({"a"}, set(), set()) is None

    def test_add_and_remove_same_elements(self):
        a, b = {1, 2, 3}, {2, 3, 4}
        c = {1, 3, 5}
        sol = solve_set_equation(a, b, c)
        assert sol == {3, 4, 5}  # drop 1, add 4 on both sides


class TestRealVectors:
    def test_parallelogram_zero(self):
        for p in (1, 2, math.inf):
            assert real_ad([0, 0], [1, 0], [0, 1], [1, 1], p=p) == pytest.approx(0)

    def test_unit_displacement(self):
        assert real_ad([0], [1], [0], [0], p=2) == pytest.approx(1)

    def test_solver(self):
        assert solve_real_equation([1, 1], [2, 1], [1, 3]).tolist() == [2, 3]
        assert solve_real_equation([0, 0, 0], [1, 2, 3], [-1, 0, 1]).tolist() \
            == [0, 2, 4]

    def test_p_below_one_rejected(self):
        with pytest.raises(ValueError):
            real_ad([0.0], [1.0], [0.0], [0.0], p=0.5)

    def test_properties_randomized(self):
        rng = np.random.default_rng(1)
        for _ in range(400):
            d = int(rng.integers(1, 6))
            u, v, w, x, z, t = rng.normal(size=(6, d)) * 3
            for p in (1, 2, math.inf):
                ad = real_ad(u, v, w, x, p=p)
                assert ad >= 0
                assert ad == pytest.approx(real_ad(w, x, u, v, p=p))
                assert ad == pytest.approx(real_ad(u, w, v, x, p=p))
                lhs = real_ad(u, v, z, t, p=p)
                rhs = real_ad(u, v, w, x, p=p) + real_ad(w, x, z, t, p=p)
                assert lhs <= rhs + 1e-9
            sol = solve_real_equation(u, v, w)
            assert real_ad(u, v, w, sol, p=2) == pytest.approx(0, abs=1e-9)


class TestIsAnalogy:
    def test_bits(self):
        assert is_analogy(0, 0, 1, 1)
        assert not is_analogy(0, 1, 1, 0)

    def test_bitvectors(self):
        assert is_analogy([0, 1], [1, 1], [0, 0], [1, 0])

    def test_real_parallelograms(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            a, b, c = rng.normal(size=(3, 4))
            d = b + c - a
            assert is_analogy(a, b, c, d)
            assert not is_analogy(a, b, c, d + 0.5)
