"""Colouring constructions and forest families used by the solver and tests."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    BLUE,
    RED,
    ColouredCompleteGraph,
    Forest,
    InvalidInputError,
    ParityError,
)

# Probability that a fresh vertex attaches to an earlier one in the random
# forest process; the remaining mass leaves it as a new component root.
_ATTACH_PROB = 0.9


def random_balanced_colouring(n: int, seed: int) -> ColouredCompleteGraph:
    """Uniformly random colouring with exactly half the edges of each colour.

    Requires an even number of edges, i.e. n = 0 or 1 (mod 4).  Deterministic
    for a fixed seed: the edge list is shuffled with a seeded RNG and the
    first half painted red.
    """
    npairs = n * (n - 1) // 2
    if npairs % 2 != 0:
        raise ParityError(
            f"K_{n} has {npairs} edges, which cannot be split evenly; "
            "a balanced colouring needs n = 0 or 1 (mod 4)"
        )
    rng = random.Random(seed)
    edges = [(i, j) for i in range(1, n) for j in range(i)]
    rng.shuffle(edges)
    red = set(edges[: npairs // 2])
    return ColouredCompleteGraph.from_pair_function(
        n, lambda i, j: RED if (i, j) in red else BLUE
    )


def split_parity_colouring(n: int) -> ColouredCompleteGraph:
    """Balanced colouring on two vertex classes forcing every spanning star to be skewed.

    Vertices split into a first class (indices 0..n/2-1, 1-based labels i) and
    a second class (indices n/2..n-1, labels j).  Edges inside the first class
    are blue, inside the second class red, and a cross edge is blue exactly
    when i + j is odd.  Every vertex ends up with |red - blue degree| = n/2 - 1,
    so every embedding of the n-vertex star has |sum| = (n-2)/2.
    """
    if n % 4 != 0:
        raise InvalidInputError(f"split-parity colouring needs n divisible by 4, got {n}")
    half = n // 2

    def colour(i: int, j: int) -> int:
        # labels are 1-based within each class
        a_side = i < half
        b_side = j < half
        if a_side and b_side:
            return BLUE
        if not a_side and not b_side:
            return RED
        li = (i % half) + 1
        lj = (j % half) + 1
        return BLUE if (li + lj) % 2 == 1 else RED

    return ColouredCompleteGraph.from_pair_function(n, colour)


def degree_interval(epsilon: Fraction) -> tuple[Fraction, Fraction]:
    """Open interval of cross-edge densities keeping every vertex colour-skewed."""
    e = Fraction(epsilon)
    lo = (Fraction(1, 4) + e * e / 2 - e) / (Fraction(1, 2) - e)
    hi = (Fraction(1, 4) - e * e / 2) / (Fraction(1, 2) + e)
    return lo, hi


def density_interval(epsilon: Fraction) -> tuple[Fraction, Fraction]:
    """Open interval of cross-edge densities keeping the red edge density near 1/2."""
    e = Fraction(epsilon)
    lo = (Fraction(1, 8) - e - e * e / 2) / (Fraction(1, 4) - e * e)
    return lo, Fraction(1, 2)


def choose_density_ratio(epsilon: Fraction) -> Fraction:
    """Smallest-denominator rational strictly inside both admissible intervals.

    Ties between numerators are broken towards the smaller one.  The first
    interval is contained in the second for 0 < epsilon < 1/2, but both are
    checked explicitly.
    """
    e = Fraction(epsilon)
    if not 0 < e < Fraction(1, 2):
        raise InvalidInputError(f"epsilon must be in (0, 1/2), got {e}")
    lo1, hi1 = degree_interval(e)
    lo2, hi2 = density_interval(e)
    lo = max(lo1, lo2)
    hi = min(hi1, hi2)
    if not lo < hi:
        raise InvalidInputError(f"empty admissible interval for epsilon={e}")
    for q in range(1, 10_000):
        p_min = math.floor(lo * q) + 1
        p_max = math.ceil(hi * q) - 1
        for p in range(max(p_min, 1), p_max + 1):
            d = Fraction(p, q)
            if lo1 < d < hi1 and lo2 < d < hi2:
                return d
    raise InvalidInputError(f"no admissible rational found for epsilon={e}")


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


@dataclass(frozen=True)
class PerturbedParams:
    """Parameters for the two-block colouring with a modular cross-edge rule."""

    n: int
    epsilon: Fraction
    d: Fraction
    part_a: range
    part_b: range

    def __post_init__(self):
        if not 0 < self.d < 1:
            raise InvalidInputError(f"d must be in (0, 1), got {self.d}")
        if self.d.numerator <= 0 or self.d.numerator >= self.d.denominator:
            raise InvalidInputError(f"d = x/y needs 0 < x < y, got {self.d}")
        if not 0 < self.epsilon < Fraction(1, 2):
            raise InvalidInputError(f"epsilon must be in (0, 1/2), got {self.epsilon}")
        if (
            self.part_a.start != 0
            or self.part_a.stop != self.part_b.start
            or self.part_b.stop != self.n
        ):
            raise InvalidInputError("parts must partition [0, n) contiguously")
        if len(self.part_a) < 1 or len(self.part_b) < 1:
            raise InvalidInputError("both parts must be non-empty")

    @classmethod
    def for_ratio(
        cls, n: int, epsilon: Fraction, d: Fraction | None = None
    ) -> "PerturbedParams":
        """Standard parameters: |A| = round((1/2 - epsilon) n), admissible d.

        When d is given explicitly it is validated against both admissible
        intervals; omit it to take the smallest-denominator choice.
        """
        e = Fraction(epsilon)
        if d is None:
            d = choose_density_ratio(e)
        else:
            d = Fraction(d)
            lo1, hi1 = degree_interval(e)
            lo2, hi2 = density_interval(e)
            if not (lo1 < d < hi1 and lo2 < d < hi2):
                raise InvalidInputError(
                    f"d={d} is not strictly inside both admissible intervals for epsilon={e}"
                )
        size_a = _round_half_up((Fraction(1, 2) - e) * n)
        return cls(n, e, d, range(0, size_a), range(size_a, n))

    def is_admissible(self) -> bool:
        lo1, hi1 = degree_interval(self.epsilon)
        lo2, hi2 = density_interval(self.epsilon)
        return lo1 < self.d < hi1 and lo2 < self.d < hi2


def mod_to_one_based(value: int, y: int) -> int:
    """The representative of value mod y within {1, ..., y}."""
    r = value % y
    return y if r == 0 else r


def perturbed_colouring(params: PerturbedParams) -> ColouredCompleteGraph:
    """Two-block colouring: blue inside A, red inside B, modular rule across.

    Cross edge between the i-th vertex of A and the j-th vertex of B (both
    1-based) is red exactly when (i + j) mod y lands in {1, ..., x}, where
    d = x/y.
    """
    n = params.n
    x = params.d.numerator
    y = params.d.denominator
    size_a = len(params.part_a)
    red = np.zeros((n, n), dtype=bool)
    red[size_a:, size_a:] = True
    # residues of (i + j) for 1-based i in A, j in B, mapped to {1..y}
    ia = np.arange(1, size_a + 1)
    jb = np.arange(1, n - size_a + 1)
    res = (ia[:, None] + jb[None, :]) % y
    res[res == 0] = y
    cross_red = res <= x
    red[:size_a, size_a:] = cross_red
    red[size_a:, :size_a] = cross_red.T
    np.fill_diagonal(red, False)
    return ColouredCompleteGraph.from_red_matrix(red)


def perturbed_red_count(params: PerturbedParams) -> int:
    """Closed-form red-edge count of the perturbed colouring (exact)."""
    x = params.d.numerator
    y = params.d.denominator
    size_a = len(params.part_a)
    size_b = len(params.part_b)
    cross = sum(
        1
        for i in range(1, size_a + 1)
        for j in range(1, size_b + 1)
        if mod_to_one_based(i + j, y) <= x
    )
    return size_b * (size_b - 1) // 2 + cross


@dataclass(frozen=True)
class ForestSpec:
    """Description of a forest family instance."""

    kind: str
    n: int
    max_degree: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("star", "path", "random", "broom"):
            raise InvalidInputError(f"unknown forest kind {self.kind!r}")
        if self.n < 1:
            raise InvalidInputError(f"forest needs at least one vertex, got n={self.n}")


def make_forest(spec: ForestSpec) -> Forest:
    """Build a forest from a spec.  Star, path and broom are deterministic."""
    n = spec.n
    if spec.kind == "star":
        if spec.max_degree is not None and spec.max_degree != n - 1:
            raise InvalidInputError(
                f"a spanning star on {n} vertices has max degree {n - 1}, "
                f"not {spec.max_degree}"
            )
        return Forest(n, [(0, i) for i in range(1, n)])

    if spec.kind == "path":
        if spec.max_degree is not None and n >= 3 and spec.max_degree != 2:
            raise InvalidInputError("a path on 3+ vertices has max degree 2")
        return Forest(n, [(i, i + 1) for i in range(n - 1)])

    if spec.kind == "broom":
        cap = spec.max_degree
        if cap is None or not 1 <= cap <= n - 1:
            raise InvalidInputError(f"broom needs a max degree in [1, {n - 1}], got {cap}")
        edges = [(0, i) for i in range(1, cap + 1)]
        edges.extend((i, i + 1) for i in range(cap, n - 1))
        return Forest(n, edges)

    # random: sequential attachment, rejecting vertices at the degree cap.
    cap = spec.max_degree if spec.max_degree is not None else n - 1
    if cap < 1:
        raise InvalidInputError(f"random forest needs max degree >= 1, got {cap}")
    rng = random.Random(spec.seed)
    degree = [0] * n
    edges = []
    for v in range(1, n):
        if rng.random() >= _ATTACH_PROB:
            continue
        eligible = [u for u in range(v) if degree[u] < cap]
        if not eligible:
            continue
        u = rng.choice(eligible)
        edges.append((u, v))
        degree[u] += 1
        degree[v] += 1
    forest = Forest(n, edges)
    if forest.max_degree > cap:
        raise AssertionError("degree cap violated by construction")
    return forest
