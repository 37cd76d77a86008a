"""Bandwidth selection for two-population kernel discriminant analysis."""

from ._bwclass import (
    BandwidthPlan,
    Classifier,
    CrossingSet,
    Density,
    DensityPair,
    Kernel,
    ParameterError,
    RiskReport,
    Selection,
    SelectorConfig,
    bayes_risk,
    crossings,
    cv_err,
    cv_select,
    draw_training,
    empirical_risk,
    optimal_bandwidths,
    pareto_pair,
    reference_pair,
    select_bandwidths,
)

__all__ = [
    "BandwidthPlan",
    "Classifier",
    "CrossingSet",
    "Density",
    "DensityPair",
    "Kernel",
    "ParameterError",
    "RiskReport",
    "Selection",
    "SelectorConfig",
    "bayes_risk",
    "crossings",
    "cv_err",
    "cv_select",
    "draw_training",
    "empirical_risk",
    "optimal_bandwidths",
    "pareto_pair",
    "reference_pair",
    "select_bandwidths",
]
