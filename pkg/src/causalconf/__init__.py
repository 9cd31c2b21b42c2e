"""Total causal effects in linear Gaussian SCMs under variance constraints.

Set-valued dual-likelihood effect estimation and test-inversion confidence
regions under three error-variance regimes (arbitrary, pair-equal, all
equal), plus the Monte-Carlo benchmark harness that compares them.
"""

from .benchmark import BenchmarkConfig, run_benchmark, simulate_datasets
from .confidence import (
    ConfidenceRegion,
    chi2_quantile,
    conf_ev,
    conf_general,
    conf_pev,
)
from .dualml import (
    EffectEstimate,
    dual_loglik,
    effect_from_ordering,
    estimate_effects,
    sup_ev,
    sup_general,
    sup_pev,
)
from .exceptions import (
    CausalConfError,
    DegenerateQuadratic,
    DimensionTooLarge,
    GenerationExhausted,
    InvalidSampleCount,
    ParseError,
    SingularBlock,
    SingularCovariance,
)
from .matrixcore import (
    ConditionalCache,
    PDMatrix,
    SampleMatrix,
    conditional_block,
    empirical_covariance,
    invert_pd,
    log_det,
)
from .orderings import (
    CompleteOrdering,
    EvSearchResult,
    HypothesisClass,
    enumerate_all_orderings,
    enumerate_parent_sets,
    enumerate_pev_classes,
    ev_optimal_orderings,
    tie_equal,
)
from .scm import (
    LinearScm,
    Regime,
    covariance_of,
    fit_along_order,
    generate_benchmark_scm,
    is_descendant,
    sample,
    true_effect,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkConfig",
    "CausalConfError",
    "CompleteOrdering",
    "ConditionalCache",
    "ConfidenceRegion",
    "DegenerateQuadratic",
    "DimensionTooLarge",
    "EffectEstimate",
    "EvSearchResult",
    "GenerationExhausted",
    "HypothesisClass",
    "InvalidSampleCount",
    "LinearScm",
    "PDMatrix",
    "ParseError",
    "Regime",
    "SampleMatrix",
    "SingularBlock",
    "SingularCovariance",
    "chi2_quantile",
    "conditional_block",
    "conf_ev",
    "conf_general",
    "conf_pev",
    "covariance_of",
    "dual_loglik",
    "effect_from_ordering",
    "empirical_covariance",
    "enumerate_all_orderings",
    "enumerate_parent_sets",
    "enumerate_pev_classes",
    "estimate_effects",
    "ev_optimal_orderings",
    "fit_along_order",
    "generate_benchmark_scm",
    "invert_pd",
    "is_descendant",
    "log_det",
    "run_benchmark",
    "sample",
    "simulate_datasets",
    "sup_ev",
    "sup_general",
    "sup_pev",
    "tie_equal",
    "true_effect",
]
