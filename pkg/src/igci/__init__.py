"""Information-geometric causal inference for pairs of variables."""

__version__ = "0.1.0"

from .counting import (  # noqa: E402
    CountModel,
    brute_force_enumerate,
    continuum_score,
    count_interpolants,
    count_monotone,
    likelihood_ratio,
)
from .density import (  # noqa: E402
    GridDensity,
    MonotoneMap,
    SamplePair,
    cdf,
    differential_entropy_kl_estimator,
    kl_divergence,
    log_slope_covariance,
    pushforward,
)
from .inference import (  # noqa: E402
    CausalVerdict,
    igci_entropy_score,
    igci_slope_score,
    infer_direction,
    normalize,
)
from .learning import (  # noqa: E402
    DiscreteFunction,
    SSLProblem,
    discrete_log_posterior,
    permutation_equivalence_experiment,
    ssl_interpolate,
    unsupervised_error,
    unsupervised_estimator,
)
from .synth import GeneratorConfig, random_density, random_diffeomorphism, sample_pair  # noqa: E402
from .typicality import (  # noqa: E402
    TypicalityReport,
    log_jacobian_score,
    product_map_bound,
    verify_markov_bound,
)
