"""Thresholding greedy algorithm and democracy-type constants for the L_p Haar system."""
from .dyadic import (
    CONSTANT,
    DyadicIndex,
    Exponent,
    HaarExpansion,
    Interval,
    UniformStepFunction,
    analyze,
    lp_norm,
    natural_rank,
    norm,
    pairing,
    synthesize,
)
from .greedy import (
    GreedyOrdering,
    greedy_ordering,
    greedy_sum,
    lebesgue_ratio,
    project,
    sign_flip,
)
from .closed_form import (
    cg_bounds,
    constants,
    disjoint_family,
    nested_chain,
    super_fundamental_upper,
)
from .estimators import (
    IndexUniverse,
    SearchReport,
    bm_search,
    democracy_search,
    fundamental_search,
    inequality_audit,
    lebesgue_witness,
)

__version__ = "0.1.0"
