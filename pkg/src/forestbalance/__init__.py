"""Embed spanning forests into 2-coloured complete graphs with small colour imbalance."""

from .bounds import (
    BoundReport,
    crossing_epsilon,
    fits,
    margin_bound,
    midrange_bound,
    optimized_midrange_bound,
    refined_bound,
    split_parity_star_imbalance,
    universal_bound,
)
from .core import (
    BLUE,
    RED,
    ColouredCompleteGraph,
    Embedding,
    Forest,
    InvalidInputError,
    ParityError,
    PartialEmbedding,
    PreconditionError,
    embedding_from_json,
    embedding_to_json,
    is_balanced,
    parse_colouring,
    parse_forest,
    r_balanced_vertices,
    serialize_colouring,
    serialize_forest,
    subgraph_sum,
    swap_images,
)
from .generators import (
    ForestSpec,
    PerturbedParams,
    choose_density_ratio,
    make_forest,
    perturbed_colouring,
    random_balanced_colouring,
    split_parity_colouring,
)
from .interpolate import (
    InterpolationTrace,
    SignedPair,
    interpolate,
    interpolate_traced,
    partial_interpolation_sequence,
)
from .oracle import (
    BudgetExceededError,
    SignVerdict,
    exact_min_imbalance,
    exact_sign,
    is_sign_fixing,
    minimal_sign_fixing_subset,
)
from .solver import (
    SignSearchFailure,
    SolveResult,
    SolverConfig,
    find_signed_pair,
    greedy_star_balance,
    large_degree_set,
    solve,
)

__version__ = "0.1.0"
