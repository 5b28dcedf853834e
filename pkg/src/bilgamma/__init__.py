"""Distributions, approximation bounds, simulation, and option pricing for
linear combinations of bilateral-gamma random variables."""

from .bilateral import BilateralGamma
from .combo import (
    LevyDensity,
    LinearCombinationModel,
    MixtureRepresentation,
    build_mixture,
    load_model,
)
from .errors import (
    BilgammaError,
    DomainError,
    EmptySampleError,
    GridError,
    InversionNotIntegrableError,
    KappaUndefinedError,
    ModelFileError,
    ModelMismatchError,
    NonConvergenceError,
    OutOfStripError,
    SeriesDivergenceError,
    SingularPointError,
    TruncationFailureError,
)
from .pricing import (
    PricingInputs,
    martingale_diagnostics,
    martingale_gap,
    price_call_atm,
    price_call_gamma_series,
    price_call_integral,
    price_call_monte_carlo,
)
from .quadrature import (
    DEFAULT_QUAD,
    QuadratureSpec,
    conf_hypergeom_F,
    integrate_real_line,
    integrate_zero_to_inf,
    upper_incomplete_gamma,
)
from .sampling import (
    RandomStream,
    sample_compound_poisson,
    sample_direct,
    sample_mixture,
    sample_path,
)
from .stein import (
    BoundConstants,
    KappaInputs,
    TestFunction,
    bound_compound_poisson_k,
    bound_d3_bg,
    bound_d3_normal,
    bound_d3_vg,
    bound_two_sums,
    empirical_kolmogorov,
    empirical_wasserstein1,
    kappa_inputs,
    stein_apply,
    stein_identity_check,
)

__version__ = "0.1.0"

__all__ = [
    "BilateralGamma",
    "LinearCombinationModel",
    "MixtureRepresentation",
    "LevyDensity",
    "build_mixture",
    "load_model",
    "QuadratureSpec",
    "DEFAULT_QUAD",
    "conf_hypergeom_F",
    "upper_incomplete_gamma",
    "integrate_real_line",
    "integrate_zero_to_inf",
    "RandomStream",
    "sample_direct",
    "sample_mixture",
    "sample_compound_poisson",
    "sample_path",
    "BoundConstants",
    "KappaInputs",
    "TestFunction",
    "stein_apply",
    "stein_identity_check",
    "empirical_kolmogorov",
    "empirical_wasserstein1",
    "kappa_inputs",
    "bound_two_sums",
    "bound_compound_poisson_k",
    "bound_d3_bg",
    "bound_d3_vg",
    "bound_d3_normal",
    "PricingInputs",
    "martingale_gap",
    "martingale_diagnostics",
    "price_call_integral",
    "price_call_gamma_series",
    "price_call_atm",
    "price_call_monte_carlo",
    "BilgammaError",
    "DomainError",
    "SingularPointError",
    "OutOfStripError",
    "InversionNotIntegrableError",
    "NonConvergenceError",
    "TruncationFailureError",
    "SeriesDivergenceError",
    "ModelMismatchError",
    "EmptySampleError",
    "GridError",
    "ModelFileError",
    "KappaUndefinedError",
]
