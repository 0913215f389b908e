"""One-dimensional analogue of the Casimir pressure, at zero temperature.

Waves travel only along the stack normal, so the walls are described by their
normal-incidence s-polarization coefficients. After rotating the frequency
integral to the imaginary axis, one field channel gives

    F A = (hbar / pi) int_0^inf dxi kappa x e / (1 - x e),   e = exp(-2 kappa d),

with ``kappa = xi / c`` and ``x = r_plus * r_minus``. In ``t = 2 kappa d`` this
is ``hbar c / (4 pi d**2) int_0^inf dt t exp(-t) x / (1 - x exp(-t))``. Results
are forces on the normalization area ``A = 1 m**2``, in newtons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c, hbar

from .errors import DomainError, NumericFailure
from .quadrature import graded_half_line_rule
from .stack import Stack, reflection_pair

__all__ = [
    "OneDForceResult",
    "casimir_ideal_1d",
    "reflect_1d",
    "force_1d_zero_temperature",
    "force_1d_identical_plates",
]

PANEL_ORDER = 16
FAIL_REL_ERR = 1e-3


@dataclass(frozen=True)
class OneDForceResult:
    """Force on the unit normalization area (N) and its ratio to perfect mirrors."""

    force_per_area_unit: float
    f_over_f0_1d: float
    rel_err_estimate: float
    d: float
    channels: int = 1


def casimir_ideal_1d(d, channels=1):
    """Perfect-mirror value ``channels * pi hbar c / (24 d**2)`` in newtons."""
    arr = np.asarray(d, dtype=float)
    if np.any(~(arr > 0)) or not np.all(np.isfinite(arr)):
        raise DomainError(f"separation must be finite and > 0, got {d!r}")
    out = channels * math.pi * hbar * c / (24.0 * arr**2)
    return float(out) if out.ndim == 0 else out


def reflect_1d(stack, xi):
    """Normal-incidence coefficients of both walls (the s coefficients at ``q = 0``)."""
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(~(xi_arr > 0)):
        raise DomainError("xi must be > 0")
    return reflection_pair(stack, "s", xi, 0.0)


def _integral(stack, order):
    d = stack.gap_thickness
    t, w = graded_half_line_rule(order)
    r = reflect_1d(stack, c * t / (2.0 * d))
    x = r.r_plus * r.r_minus
    e = np.exp(-t)
    return float(np.dot(w, t * e * x / (1.0 - x * e)))


def _evaluate(stack, channels):
    d = stack.gap_thickness
    fine = _integral(stack, PANEL_ORDER)
    coarse = _integral(stack, PANEL_ORDER // 2)
    rel_err = 0.0 if fine == coarse else abs(fine - coarse) / max(abs(fine), 1e-300)
    if not math.isfinite(rel_err) or rel_err > FAIL_REL_ERR:
        raise NumericFailure("1D quadrature did not converge", d=d, rel_err_estimate=rel_err)
    force = channels * hbar * c / (4.0 * math.pi * d * d) * fine
    return OneDForceResult(
        force_per_area_unit=force,
        f_over_f0_1d=force / casimir_ideal_1d(d, channels),
        rel_err_estimate=rel_err,
        d=d,
        channels=channels,
    )


def force_1d_zero_temperature(stack):
    """Single-channel 1D force across the gap of ``stack``."""
    return _evaluate(stack, 1)


def force_1d_identical_plates(wall, d):
    """Two-channel 1D force between two copies of ``wall`` (layers listed outward)."""
    return _evaluate(Stack.symmetric(wall, d), 2)
