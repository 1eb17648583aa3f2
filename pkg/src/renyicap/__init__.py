"""Sandwiched Renyi divergences, channel information radii and strong converse bounds."""

from . import capacity, channels, converse, divergences, linalg, verify
from .capacity import (
    OptimizerConfig,
    RadiusResult,
    alpha_holevo,
    alpha_holevo_of_ensemble,
    c_constant,
    covariant_radius_bound,
    fixed_sigma_subadditivity_gap,
    generalized_holevo,
    holevo_capacity,
    info_radius,
    info_radius_around,
    subadditivity_gap,
)
from .channels import CqState, Ensemble, Isometry, KrausChannel, Povm
from .converse import (
    BoundReport,
    CodeSpec,
    choose_alpha,
    eb_exponent_bound,
    gap_inequality_check,
    generic_bound,
    pgm_decoder,
    simulate_code,
    sqrt_n_bound,
    weak_converse_rate,
)
from .divergences import (
    DivergenceValue,
    binary_cq_divergence,
    classical_renyi,
    max_output_alpha_norm,
    min_output_renyi,
    renyi_d,
    renyi_entropy,
    sandwiched_alpha_norm,
    sandwiched_d,
    sandwiched_q,
    vn_relative_entropy,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    InvalidStateError,
    InvariantViolation,
    NotPSDError,
    RegimeError,
    RenyiCapError,
)

__version__ = "0.1.0"
