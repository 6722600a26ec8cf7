"""Executable metric-space concepts on finite spaces.

Chains and components, nets and packings, Lebesgue numbers of covers,
local finiteness, property P and Menger/metric convexity, plus generators
for the classical counterexample families.
"""

from .space import (
    FiniteMetricSpace,
    MetricError,
    MetricViolation,
    ball,
    build_space_from_matrix,
    build_space_from_points,
    diameter,
    isolation,
    point_set,
)
from .chains import (
    chainability_profile,
    chainability_threshold,
    eps_chain,
    eps_components,
    finite_chainability_check,
)
from .boundedness import covering_profile, greedy_eps_net, max_separated_subset
from .covers import (
    Cover,
    CoverElement,
    ParametricBallFamily,
    adversarial_cover,
    covers_check,
    finite_subcover,
    lebesgue_ball_bound,
    lebesgue_exact,
    lebesgue_witness,
    local_finiteness_profile,
)
from .convexity import menger_check, metric_convexity_check, property_p_check, spectrum

__version__ = "0.1.0"

__all__ = [
    "Cover",
    "CoverElement",
    "FiniteMetricSpace",
    "MetricError",
    "MetricViolation",
    "ParametricBallFamily",
    "adversarial_cover",
    "ball",
    "build_space_from_matrix",
    "build_space_from_points",
    "chainability_profile",
    "chainability_threshold",
    "covering_profile",
    "covers_check",
    "diameter",
    "eps_chain",
    "eps_components",
    "finite_chainability_check",
    "finite_subcover",
    "greedy_eps_net",
    "isolation",
    "lebesgue_ball_bound",
    "lebesgue_exact",
    "lebesgue_witness",
    "local_finiteness_profile",
    "max_separated_subset",
    "menger_check",
    "metric_convexity_check",
    "point_set",
    "property_p_check",
    "spectrum",
]
