import random
from itertools import permutations

import pytest

from forestbalance.core import (
    BLUE,
    RED,
    ColouredCompleteGraph,
    Forest,
    PartialEmbedding,
    subgraph_sum,
)
from forestbalance.generators import (
    ForestSpec,
    make_forest,
    random_balanced_colouring,
    split_parity_colouring,
)
from forestbalance.oracle import (
    BudgetExceededError,
    exact_min_imbalance,
    exact_sign,
    is_sign_fixing,
    minimal_sign_fixing_subset,
)
from forestbalance.core import PreconditionError


def all_red(n):
    return ColouredCompleteGraph.from_pair_function(n, lambda i, j: RED)


def random_colouring(n, seed):
    rng = random.Random(seed)
    return ColouredCompleteGraph.from_pair_function(
        n, lambda i, j: RED if rng.random() < 0.5 else BLUE
    )


def brute_min(forest, graph):
    """Independent full-permutation scan, no shortcuts, no early exit."""
    best = None
    for perm in permutations(range(forest.n)):
        s = abs(sum(graph.colour(perm[u], perm[v]) for u, v in forest.edges))
        if best is None or s < best:
            best = s
    return best


class TestExactMinImbalance:
    def test_star_in_split_parity(self):
        g = split_parity_colouring(8)
        star = make_forest(ForestSpec("star", 8))
        value, witness = exact_min_imbalance(star, g)
        assert value == 3
        assert abs(subgraph_sum(g, witness, star)) == 3

    def test_edgeless_is_zero(self):
        g = random_colouring(6, 1)
        value, _ = exact_min_imbalance(Forest(6, []), g)
        assert value == 0

    def test_p4_is_odd_and_positive(self):
        for seed in range(10):
            g = random_colouring(4, seed)
            value, _ = exact_min_imbalance(make_forest(ForestSpec("path", 4)), g)
            assert value % 2 == 1 and value >= 1

    @pytest.mark.parametrize("kind", ["star", "path", "random"])
    def test_matches_independent_brute_force_at_n6(self, kind):
        for seed in range(8):
            g = random_colouring(6, 100 + seed)
            if kind == "random":
                forest = make_forest(ForestSpec("random", 6, max_degree=3, seed=seed))
            else:
                forest = make_forest(ForestSpec(kind, 6))
            value, witness = exact_min_imbalance(forest, g)
            assert value == brute_min(forest, g)
            assert abs(subgraph_sum(g, witness, forest)) == value

    def test_refuses_large_n(self):
        g = random_colouring(11, 2)
        forest = make_forest(ForestSpec("path", 11))
        with pytest.raises(BudgetExceededError):
            exact_min_imbalance(forest, g)

    def test_star_bypasses_guard(self):
        g = split_parity_colouring(16)
        star = make_forest(ForestSpec("star", 16))
        value, _ = exact_min_imbalance(star, g, max_n=10)
        assert value == 7


class TestExactSign:
    def test_full_embedding_is_degenerate(self):
        g = random_colouring(6, 3)
        forest = make_forest(ForestSpec("path", 6))
        partial = PartialEmbedding({v: v for v in range(6)})
        verdict = exact_sign(forest, g, partial)
        s = subgraph_sum(g, _full_embedding(partial, forest, g), forest)
        assert verdict.min_sum == verdict.max_sum == s
        assert verdict.extensions == 1

    def test_all_red_is_red(self):
        g = all_red(5)
        forest = make_forest(ForestSpec("path", 5))
        verdict = exact_sign(forest, g, PartialEmbedding({}))
        assert verdict.is_red and not verdict.is_blue
        assert verdict.min_sum == forest.edge_count

    def test_empty_partial_on_balanced_is_mixed(self):
        g = random_balanced_colouring(8, 5)
        forest = make_forest(ForestSpec("path", 8))
        verdict = exact_sign(forest, g, PartialEmbedding({}), budget=50_000)
        assert verdict.kind == "mixed"
        assert verdict.min_sum < 0 < verdict.max_sum
        assert subgraph_sum(g, verdict.min_witness, forest) == verdict.min_sum
        assert subgraph_sum(g, verdict.max_witness, forest) == verdict.max_sum

    def test_negation_duality(self):
        g = random_colouring(6, 9)
        forest = make_forest(ForestSpec("random", 6, max_degree=3, seed=4))
        a = exact_sign(forest, g, PartialEmbedding({}))
        b = exact_sign(forest, g.negated(), PartialEmbedding({}))
        assert a.min_sum == -b.max_sum
        assert a.max_sum == -b.min_sum

    def test_budget_refusal(self):
        g = random_colouring(9, 2)
        forest = make_forest(ForestSpec("path", 9))
        with pytest.raises(BudgetExceededError):
            exact_sign(forest, g, PartialEmbedding({}), budget=1000)


def _full_embedding(partial, forest, graph):
    from forestbalance.core import Embedding

    fwd = [partial[v] for v in range(forest.n)]
    return Embedding.build(fwd, forest, graph)


def spanning_star_with_mixed_degrees(n=6, start_seed=0):
    """Colouring where the per-vertex colour skew takes both signs."""
    for seed in range(start_seed, start_seed + 100):
        g = random_colouring(n, seed)
        skews = [g.signed_degree(v) for v in range(n)]
        if any(s > 0 for s in skews) and any(s < 0 for s in skews):
            return g
    raise AssertionError("no suitable colouring found")


class TestSignFixing:
    def test_all_red_empty_set_fixing(self):
        g = all_red(5)
        forest = make_forest(ForestSpec("path", 5))
        assert is_sign_fixing(forest, g, [], list(range(5)))

    def test_balanced_k4_path_not_fixing(self):
        g = random_balanced_colouring(4, 3)
        forest = make_forest(ForestSpec("path", 4))
        res = is_sign_fixing(forest, g, [], list(range(4)))
        assert not res
        v = res.counterexample.verdict
        assert v.min_sum < 0 < v.max_sum

    def test_vacuous_when_l_bigger_than_u(self):
        g = random_colouring(5, 1)
        forest = make_forest(ForestSpec("path", 5))
        assert is_sign_fixing(forest, g, [0, 1, 2], [0, 1])

    def test_star_centre_fixes_sign(self):
        g = spanning_star_with_mixed_degrees()
        star = make_forest(ForestSpec("star", 6))
        u = list(range(6))
        assert is_sign_fixing(star, g, [0], u)
        assert not is_sign_fixing(star, g, [], u)

    def test_monotone_supersets_at_n6(self):
        g = spanning_star_with_mixed_degrees()
        star = make_forest(ForestSpec("star", 6))
        u = list(range(6))
        from itertools import combinations

        others = [1, 2, 3, 4, 5]
        for k in range(len(others) + 1):
            for extra in combinations(others, k):
                sup = [0, *extra]
                if len(sup) <= len(u):
                    assert is_sign_fixing(star, g, sup, u), sup

    def test_budget_refusal(self):
        g = random_colouring(8, 4)
        forest = make_forest(ForestSpec("path", 8))
        with pytest.raises(BudgetExceededError):
            is_sign_fixing(forest, g, [0], list(range(8)), budget=100)


class TestMinimalSignFixing:
    def test_all_red_minimises_to_empty(self):
        g = all_red(5)
        forest = make_forest(ForestSpec("path", 5))
        m_set, n_set = minimal_sign_fixing_subset(forest, g, [0, 2, 4], list(range(5)))
        assert m_set == [] and n_set == []

    def test_star_centre_is_minimal(self):
        g = spanning_star_with_mixed_degrees()
        star = make_forest(ForestSpec("star", 6))
        m_set, n_set = minimal_sign_fixing_subset(star, g, [0], list(range(6)))
        assert m_set == [0]
        assert n_set == []  # no edges inside the single-vertex induced forest

    def test_precondition_error_carries_counterexample(self):
        g = random_balanced_colouring(4, 3)
        forest = make_forest(ForestSpec("path", 4))
        with pytest.raises(PreconditionError) as err:
            minimal_sign_fixing_subset(forest, g, [], list(range(4)))
        assert err.value.payload is not None

    def test_high_degree_core_is_proper_subset(self):
        g = spanning_star_with_mixed_degrees(start_seed=50)
        star = make_forest(ForestSpec("star", 6))
        for l_set in ([0], [0, 1], [0, 1, 2]):
            m_set, n_set = minimal_sign_fixing_subset(star, g, l_set, list(range(6)))
            if m_set:
                assert set(n_set) < set(m_set)
