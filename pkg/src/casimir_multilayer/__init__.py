"""Casimir pressure between planar multilayer walls from imaginary-frequency Lifshitz theory."""

from .asymptotics import (
    PowerLaw,
    classify_distance_law,
    local_exponent,
    long_distance_slab,
    long_distance_standard,
    short_distance_closed_form,
    short_distance_error_bound,
    short_distance_numeric,
    slab_coefficients,
    static_average,
    validity_scales,
)
from .errors import CasimirError, ConfigError, DomainError, NumericFailure, UsageError
from .force import (
    ForceResult,
    casimir_ideal,
    force_finite_temperature,
    force_vs_distance,
    force_zero_temperature,
    gap_integrand,
)
from .materials import (
    PRESETS,
    DrudeLorentz,
    DrudeLorentzParams,
    PerfectMirror,
    Tabulated,
    Vacuum,
    epsilon_imag_axis,
    preset,
)
from .oned import (
    OneDForceResult,
    casimir_ideal_1d,
    force_1d_identical_plates,
    force_1d_zero_temperature,
    reflect_1d,
)
from .quadrature import MatsubaraSettings, QuadratureSettings
from .specialfn import oscillator_moment, polylog, tilde_li2, zeta4
from .stack import SEMI_INFINITE, Layer, ReflectionPair, Stack, reflection_pair

__version__ = "0.1.0"
