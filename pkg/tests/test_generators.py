from fractions import Fraction

import pytest

from forestbalance.core import (
    BLUE,
    RED,
    InvalidInputError,
    ParityError,
    is_balanced,
    r_balanced_vertices,
)
from forestbalance.generators import (
    ForestSpec,
    PerturbedParams,
    choose_density_ratio,
    degree_interval,
    density_interval,
    make_forest,
    mod_to_one_based,
    perturbed_colouring,
    perturbed_red_count,
    random_balanced_colouring,
    split_parity_colouring,
)


class TestRandomBalanced:
    def test_half_red_at_n4(self):
        g = random_balanced_colouring(4, 0)
        assert g.red_edge_count == 3
        assert is_balanced(g)

    def test_parity_error_names_requirement(self):
        with pytest.raises(ParityError, match=r"0 or 1 \(mod 4\)"):
            random_balanced_colouring(6, 0)

    def test_deterministic_per_seed(self):
        a = random_balanced_colouring(9, 123)
        b = random_balanced_colouring(9, 123)
        c = random_balanced_colouring(9, 124)
        assert a == b
        assert a != c
        assert is_balanced(a)

    @pytest.mark.parametrize("n", [4, 5, 8, 9, 12, 13, 16, 17])
    def test_balanced_for_valid_n(self, n):
        assert is_balanced(random_balanced_colouring(n, 7))


class TestSplitParity:
    def test_n8_is_balanced_with_14_red(self):
        g = split_parity_colouring(8)
        assert is_balanced(g)
        assert g.red_edge_count == 14

    def test_every_vertex_skew_is_half_n_minus_1(self):
        g = split_parity_colouring(8)
        for v in range(8):
            assert abs(g.signed_degree(v)) == 3

    def test_every_vertex_is_quarter_balanced_at_n8(self):
        g = split_parity_colouring(8)
        assert all(min(g.red_degree(v), g.blue_degree(v)) == 2 for v in range(8))
        assert r_balanced_vertices(g, 2) == list(range(8))
        assert r_balanced_vertices(g, 3) == []

    def test_first_class_edges_are_blue(self):
        for n in (4, 8, 12):
            g = split_parity_colouring(n)
            assert g.colour(0, 1) == BLUE
            assert g.colour(n - 1, n - 2) == RED

    def test_cross_rule(self):
        n = 8
        g = split_parity_colouring(n)
        for i in range(4):
            for j in range(4):
                expected = BLUE if ((i + 1) + (j + 1)) % 2 == 1 else RED
                assert g.colour(i, 4 + j) == expected

    @pytest.mark.parametrize("n", list(range(4, 65, 4)))
    def test_balanced_up_to_64(self, n):
        assert is_balanced(split_parity_colouring(n))

    def test_rejects_bad_n(self):
        with pytest.raises(InvalidInputError):
            split_parity_colouring(10)


class TestDensityRatio:
    def test_epsilon_one_tenth_gives_two_fifths(self):
        assert choose_density_ratio(Fraction(1, 10)) == Fraction(2, 5)

    def test_interval_endpoints_at_one_tenth(self):
        lo, hi = degree_interval(Fraction(1, 10))
        assert lo == Fraction(31, 80)
        assert hi == Fraction(49, 120)

    @pytest.mark.parametrize("k", range(1, 50))
    def test_strictly_admissible_on_grid(self, k):
        eps = Fraction(k, 100)
        d = choose_density_ratio(eps)
        lo1, hi1 = degree_interval(eps)
        lo2, hi2 = density_interval(eps)
        assert lo1 < d < hi1
        assert lo2 < d < hi2

    @pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(1, 4), Fraction(3, 10)])
    def test_no_smaller_denominator_is_admissible(self, eps):
        d = choose_density_ratio(eps)
        lo1, hi1 = degree_interval(eps)
        lo2, hi2 = density_interval(eps)
        for q in range(1, d.denominator):
            for p in range(1, q):
                cand = Fraction(p, q)
                assert not (lo1 < cand < hi1 and lo2 < cand < hi2)

    def test_rejects_out_of_range_epsilon(self):
        with pytest.raises(InvalidInputError):
            choose_density_ratio(Fraction(1, 2))


class TestPerturbed:
    def test_mod_to_one_based(self):
        assert mod_to_one_based(5, 5) == 5
        assert mod_to_one_based(6, 5) == 1
        assert [mod_to_one_based(k, 3) for k in (1, 2, 3, 4)] == [1, 2, 3, 1]

    def test_red_count_matches_closed_form(self):
        params = PerturbedParams.for_ratio(50, Fraction(1, 10))
        g = perturbed_colouring(params)
        assert g.red_edge_count == perturbed_red_count(params)

    def test_block_colours(self):
        params = PerturbedParams.for_ratio(20, Fraction(1, 10))
        g = perturbed_colouring(params)
        a = len(params.part_a)
        assert all(
            g.colour(i, j) == BLUE for i in range(a) for j in range(i)
        )
        assert all(
            g.colour(i, j) == RED
            for i in range(a, 20)
            for j in range(a, i)
        )

    def test_near_full_ratio_boundary_rule(self):
        # d = 4/5 is outside the admissible window but the modular rule must
        # still apply: all cross edges red except residue y
        params = PerturbedParams(10, Fraction(1, 10), Fraction(4, 5), range(0, 4), range(4, 10))
        g = perturbed_colouring(params)
        for i in range(4):
            for j in range(6):
                expected = BLUE if mod_to_one_based((i + 1) + (j + 1), 5) == 5 else RED
                assert g.colour(i, 4 + j) == expected

    def test_density_and_degree_split_midsize(self):
        n = 200
        eps = Fraction(1, 10)
        params = PerturbedParams.for_ratio(n, eps, Fraction(2, 5))
        g = perturbed_colouring(params)
        density = g.red_edge_count / g.edge_count
        assert 0.4 <= density <= 0.6
        c = 4
        hi = (0.75 + 0.005) * n - c
        lo = (0.25 - 0.005) * n + c
        for v in range(n):
            assert g.red_degree(v) >= hi or g.red_degree(v) <= lo

    def test_for_ratio_rejects_inadmissible_d(self):
        with pytest.raises(InvalidInputError):
            PerturbedParams.for_ratio(100, Fraction(1, 10), Fraction(4, 5))

    def test_constructor_rejects_bad_parts(self):
        with pytest.raises(InvalidInputError):
            PerturbedParams(10, Fraction(1, 10), Fraction(2, 5), range(0, 4), range(5, 10))
        with pytest.raises(InvalidInputError):
            PerturbedParams(10, Fraction(1, 10), Fraction(0, 5), range(0, 4), range(4, 10))


class TestMakeForest:
    def test_star(self):
        f = make_forest(ForestSpec("star", 8))
        assert f.max_degree == 7 and f.edge_count == 7

    def test_star_with_wrong_degree_rejected(self):
        with pytest.raises(InvalidInputError):
            make_forest(ForestSpec("star", 8, max_degree=5))

    def test_path(self):
        f = make_forest(ForestSpec("path", 5))
        assert f.max_degree == 2 and f.min_degree == 1 and f.edge_count == 4

    def test_broom(self):
        f = make_forest(ForestSpec("broom", 12, max_degree=7))
        assert f.max_degree == 7
        assert f.edge_count == 11  # spanning tree
        assert f.degree[0] == 7

    def test_broom_is_star_at_full_degree(self):
        assert make_forest(ForestSpec("broom", 6, max_degree=5)) == make_forest(
            ForestSpec("star", 6)
        )

    def test_broom_needs_degree(self):
        with pytest.raises(InvalidInputError):
            make_forest(ForestSpec("broom", 6))

    def test_random_respects_cap_and_seed(self):
        a = make_forest(ForestSpec("random", 20, max_degree=5, seed=3))
        b = make_forest(ForestSpec("random", 20, max_degree=5, seed=3))
        c = make_forest(ForestSpec("random", 20, max_degree=5, seed=4))
        assert a == b
        assert a != c
        assert a.max_degree <= 5

    def test_random_cap_respected_over_many_seeds(self):
        for seed in range(50):
            f = make_forest(ForestSpec("random", 15, max_degree=3, seed=seed))
            assert f.max_degree <= 3

    def test_unknown_kind_rejected(self):
        with pytest.raises(InvalidInputError):
            ForestSpec("cycle", 5)
