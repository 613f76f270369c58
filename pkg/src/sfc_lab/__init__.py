"""Stochastic Fourier coefficients on a discretized Wiener space.

The package simulates processes dX = b dt + a dW on [0, 1] with m equal
cells and left-tagged sums, computes Fourier coefficients of dX and dW
against e_n(t) = exp(2 pi i n t), and recovers the coefficient processes a
and b from those coefficients by local averaging in the frequency domain.
Everything is seeded and deterministic; see ``experiment`` for the contract.
"""

__version__ = "0.1.0"

from .errors import ConfigError, NumericalFailureError, UnsupportedModeError
from .grid import (
    TimeGrid,
    dirichlet_closed_form,
    dirichlet_kernel,
    eval_basis,
    kernel_difference_table,
    kernel_l2_identity,
    make_grid,
)
from .brownian import BrownianPath, SeedSpec, path_from_xi, sample_path, substream, wiener_integral
from .malliavin import (
    DiscreteFunctional,
    FunctionalArray,
    deterministic_array,
    discrete_divergence,
    divergence_with_partials,
    lemma_fdelta_residual,
    pairing,
    prop1_residual,
    prop2_residual,
)
from .catalog import (
    ADAPTED_W,
    CATALOG_KINDS,
    CONST,
    DET,
    DRIFT_DET,
    DRIFT_KINDS,
    DRIFT_NONE,
    DRIFT_W1,
    EXACT_ALGEBRA_KINDS,
    EXACT_FOURIER_A_KINDS,
    NONCAUSAL_BRIDGE,
    NONCAUSAL_MIDPOINT,
    NONCAUSAL_W1,
    PathFunctionals,
    ProcessSpec,
    TrigPoly,
    constant,
    cosine,
    eval_functionals,
    exact_diffusion_sfc,
    make_process,
    true_fourier_a,
    true_fourier_b,
)
from .sfc import CoefficientSet, sfc_dx, sfc_range, wiener_sfc, wiener_sfc_range
from .bohr import (
    CLOSED_FORM,
    SYNTHESIZED,
    BohrConfig,
    RemainderTerms,
    bohr_product,
    grid_supports,
    identify_a,
    iterated_divergence_term,
    recover_b,
    remainder_terms,
    synthesize,
)
from .experiment import (
    DecayFit,
    ExperimentConfig,
    ExperimentResult,
    config_from_jsonable,
    config_hash,
    config_jsonable,
    fit_decay,
    fit_loglog,
    run_convergence,
)

__all__ = [
    "__version__",
    "ConfigError",
    "NumericalFailureError",
    "UnsupportedModeError",
    "TimeGrid",
    "make_grid",
    "eval_basis",
    "dirichlet_kernel",
    "dirichlet_closed_form",
    "kernel_l2_identity",
    "kernel_difference_table",
    "SeedSpec",
    "BrownianPath",
    "substream",
    "sample_path",
    "path_from_xi",
    "wiener_integral",
    "DiscreteFunctional",
    "FunctionalArray",
    "deterministic_array",
    "pairing",
    "discrete_divergence",
    "divergence_with_partials",
    "lemma_fdelta_residual",
    "prop1_residual",
    "prop2_residual",
    "CONST",
    "DET",
    "ADAPTED_W",
    "NONCAUSAL_W1",
    "NONCAUSAL_BRIDGE",
    "NONCAUSAL_MIDPOINT",
    "CATALOG_KINDS",
    "EXACT_ALGEBRA_KINDS",
    "EXACT_FOURIER_A_KINDS",
    "DRIFT_NONE",
    "DRIFT_DET",
    "DRIFT_W1",
    "DRIFT_KINDS",
    "TrigPoly",
    "cosine",
    "constant",
    "ProcessSpec",
    "make_process",
    "PathFunctionals",
    "eval_functionals",
    "true_fourier_a",
    "true_fourier_b",
    "exact_diffusion_sfc",
    "CoefficientSet",
    "sfc_dx",
    "sfc_range",
    "wiener_sfc",
    "wiener_sfc_range",
    "CLOSED_FORM",
    "SYNTHESIZED",
    "BohrConfig",
    "grid_supports",
    "bohr_product",
    "identify_a",
    "synthesize",
    "recover_b",
    "RemainderTerms",
    "remainder_terms",
    "iterated_divergence_term",
    "ExperimentConfig",
    "ExperimentResult",
    "DecayFit",
    "config_jsonable",
    "config_from_jsonable",
    "config_hash",
    "run_convergence",
    "fit_decay",
    "fit_loglog",
]
