"""Excess growth rate of rebalanced portfolios: identities and optimization.

The excess growth rate of a weight vector against gross returns is the gap
between the log of the weighted arithmetic mean and the weighted mean of the
logs.  This package computes it in its additive, logarithmic, and divergence
forms, exposes its information-theoretic identities (relative entropy on the
Aitchison simplex, Gibbs free energy, coding lengths, scaled Dirichlet
densities and the order-``1+sigma`` divergence), and maximizes it exactly,
under entropy penalties and constraints, and in expectation over scenarios.
"""

from ._kernels import BACKEND
from .backtest import (
    DecompositionReport,
    EqualOnTopK,
    Fixed,
    ReturnsPanel,
    load_panel,
    rebalanced_decomposition,
    rolling_egr,
    synthetic_panel,
)
from .dirichlet import (
    LocationParams,
    RenyiCheck,
    ScaledDirichletParams,
    aitchison_quadrature,
    density_aitchison,
    ldp_gap,
    log_density_aitchison,
    log_mu_density,
    mu_density,
    renyi_identity_check,
    renyi_identity_residual,
    sample,
)
from .egr import (
    CodeSpec,
    EnergySpec,
    campbell_length,
    chain_decompose,
    egr,
    egr_div,
    egr_log,
    free_energy,
    gibbs,
    shannon_length,
    weighted_variance,
)
from .errors import (
    BoundaryPoint,
    DimensionMismatch,
    DomainViolation,
    ExcessGrowthError,
    GeneratorViolation,
    NoConvergence,
    NonPositiveReturn,
    ParseError,
    QuadratureFailure,
    RaggedRows,
    TangencyViolation,
    ZeroOnSupport,
)
from .info import (
    ExpCoordinates,
    NegCrossEntropy,
    RenyiPotential,
    cross_entropy,
    egr_div_identity,
    egr_identity_lhs_rhs,
    fisher_rao_form,
    from_exp_coords,
    log_divergence,
    perturbation_invariance_residual,
    relative_entropy,
    renyi_divergence,
    renyi_divergence_mc,
    shannon_entropy,
    to_exp_coords,
)
from .optimize import (
    DualSolveResult,
    MaxEgrResult,
    MaximizeResult,
    ScenarioSet,
    constrained_joint,
    expected_egr,
    load_scenarios,
    max_egr,
    maximize_expected_egr,
    penalized_joint,
    phi_eta,
    quadratic_approx_solution,
    relative_growth_bound_check,
    supergradient,
    variational_max,
)
from .simplex import (
    CompositeSpec,
    Weights,
    barycenter,
    closure,
    comp_inverse,
    composite,
    hadamard,
    perturb,
    power,
    subtract,
    support,
    weights,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # simplex
    "Weights",
    "weights",
    "closure",
    "perturb",
    "subtract",
    "power",
    "CompositeSpec",
    "composite",
    "barycenter",
    "support",
    "hadamard",
    "comp_inverse",
    # excess growth rate
    "egr",
    "egr_log",
    "egr_div",
    "chain_decompose",
    "EnergySpec",
    "gibbs",
    "free_energy",
    "CodeSpec",
    "campbell_length",
    "shannon_length",
    "weighted_variance",
    # information quantities
    "relative_entropy",
    "cross_entropy",
    "shannon_entropy",
    "renyi_divergence",
    "renyi_divergence_mc",
    "egr_identity_lhs_rhs",
    "egr_div_identity",
    "NegCrossEntropy",
    "RenyiPotential",
    "log_divergence",
    "perturbation_invariance_residual",
    "fisher_rao_form",
    "ExpCoordinates",
    "to_exp_coords",
    "from_exp_coords",
    # scaled Dirichlet
    "ScaledDirichletParams",
    "LocationParams",
    "sample",
    "density_aitchison",
    "log_density_aitchison",
    "mu_density",
    "log_mu_density",
    "ldp_gap",
    "RenyiCheck",
    "renyi_identity_check",
    "renyi_identity_residual",
    "aitchison_quadrature",
    # optimization
    "ScenarioSet",
    "load_scenarios",
    "MaxEgrResult",
    "DualSolveResult",
    "MaximizeResult",
    "variational_max",
    "max_egr",
    "penalized_joint",
    "phi_eta",
    "constrained_joint",
    "expected_egr",
    "supergradient",
    "maximize_expected_egr",
    "quadratic_approx_solution",
    "relative_growth_bound_check",
    # panels
    "ReturnsPanel",
    "DecompositionReport",
    "EqualOnTopK",
    "Fixed",
    "load_panel",
    "rebalanced_decomposition",
    "rolling_egr",
    "synthetic_panel",
    # errors
    "ExcessGrowthError",
    "ZeroOnSupport",
    "BoundaryPoint",
    "DimensionMismatch",
    "DomainViolation",
    "GeneratorViolation",
    "TangencyViolation",
    "QuadratureFailure",
    "NoConvergence",
    "ParseError",
    "RaggedRows",
    "NonPositiveReturn",
]
