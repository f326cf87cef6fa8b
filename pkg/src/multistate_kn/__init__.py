"""Reliability of multi-state k-out-of-n systems through monomial ideals.

Typical flow: describe a system (``systems``), build its level-``j`` ideal,
resolve it with a Mayer-Vietoris tree (``mvt``) and evaluate the Hilbert
numerator against component survival probabilities (``reliability``).
"""

from .errors import DimensionError, DomainError, ResourceError, ValidationError
from .monomial import Monomial, MonomialIdeal, canonical_order, divides, ideal_sum, intersect_principal, lcm, minimalize
from .mvt import BettiSummary, HilbertNumerator, MayerVietorisTree, betti_bounds, build_mvt, hilbert_numerator
from .reliability import (
    BoundSequence,
    ProbabilityModel,
    classic_lower_bounds,
    evaluate,
    evaluate_tree,
    level_reliabilities,
    weight,
)
from .systems import (
    ConsecutiveKN,
    GeneralizedKN,
    SimpleKN,
    StandardPair,
    SumThreshold,
    build_reliability_ideal,
    lower_boundary_points,
    maximal_standard_pairs,
    minimal_cuts,
    structure_function,
    upper_boundary_points,
)

__version__ = "0.1.0"
