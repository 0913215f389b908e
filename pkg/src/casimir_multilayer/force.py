"""Casimir pressure in the vacuum gap of a planar multilayer.

Zero temperature uses polar coordinates ``xi/c = kappa cos(phi)``,
``q = kappa sin(phi)`` in the gap, so the pressure becomes

    F = hbar c / (32 pi**2 d**4) * J,
    J = int_0^inf dt t**3 exp(-t) int_0^1 dw  sum_sigma x / (1 - x exp(-t)),

with ``t = 2 kappa d``, ``w = cos(phi)`` and ``x = r_plus * r_minus``. The
``laguerre`` scheme integrates ``t`` directly; ``finite_domain`` substitutes
``u = exp(-t)`` and integrates ``(-ln u)**3`` over ``(0, 1]``.

Attractive pressure is reported as positive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c, hbar, k as k_B

from .errors import CasimirError, DomainError, NumericFailure
from .quadrature import (
    MatsubaraSettings,
    QuadratureSettings,
    _matsubara_sum_detail,
    gauss_laguerre_nodes,
    graded_unit_rule,
)
from .stack import reflection_coefficients

__all__ = [
    "ForceResult",
    "casimir_ideal",
    "gap_integrand",
    "force_zero_temperature",
    "force_finite_temperature",
    "force_vs_distance",
]

log = logging.getLogger(__name__)

# Relative error above which a result is refused rather than returned.
FAIL_REL_ERR = 1e-3


@dataclass(frozen=True)
class ForceResult:
    """Pressure between the walls and how it was obtained.

    ``f_over_f0`` is ``pressure / casimir_ideal(d)`` computed exactly that way.
    """

    pressure: float
    f_over_f0: float
    rel_err_estimate: float
    evaluations: int
    scheme_used: str
    d: float
    diagnostics: dict = field(default_factory=dict, compare=False)


def casimir_ideal(d):
    """Pressure between perfect mirrors, hbar c pi**2 / (240 d**4), in N/m**2."""
    arr = np.asarray(d, dtype=float)
    if np.any(~(arr > 0)) or not np.all(np.isfinite(arr)):
        raise DomainError(f"separation must be finite and > 0, got {d!r}")
    out = hbar * c * math.pi**2 / (240.0 * arr**4)
    return float(out) if out.ndim == 0 else out


def _kernel(stack, xi, q, u):
    """sum over polarizations of x / (1 - x u), with x = r_plus r_minus."""
    coeffs = reflection_coefficients(stack, xi, q)
    total = 0.0
    for sigma in ("s", "p"):
        x = coeffs[sigma].r_plus * coeffs[sigma].r_minus
        total = total + x / (1.0 - x * u)
    return total


def gap_integrand(stack, kappa, phi):
    """Angular-radial integrand at gap wavenumber ``kappa`` and angle ``phi``."""
    kappa = np.asarray(kappa, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(kappa <= 0):
        raise DomainError("kappa must be > 0")
    if np.any((phi < 0) | (phi > math.pi / 2)):
        raise DomainError("phi must lie in [0, pi/2]")
    d = stack.gap_thickness
    xi = c * kappa * np.cos(phi)
    q = kappa * np.sin(phi)
    out = _kernel(stack, xi, q, np.exp(-2.0 * kappa * d))
    return float(out) if np.ndim(out) == 0 else out


def _radial_rule(settings):
    """Nodes in t and weights that already include t**3 and the exp(-t) measure."""
    if settings.scheme == "laguerre":
        t, w = gauss_laguerre_nodes(settings.radial_order)
        return t, w * t**3, np.exp(-t)
    u, w = graded_unit_rule(settings.panel_order, 200, settings.u_min)
    t = -np.log(u)
    return t, w * t**3, u


def _zero_t_integral(stack, settings):
    d = stack.gap_thickness
    t, wt, u = _radial_rule(settings)
    w, ww = graded_unit_rule(settings.angular_order, settings.angular_panels)
    kap = (t / (2.0 * d))[:, None]
    xi = c * kap * w[None, :]
    q = kap * np.sqrt((1.0 - w) * (1.0 + w))[None, :]
    g = _kernel(stack, xi, q, u[:, None])
    g = np.broadcast_to(g, (len(t), len(w)))
    return float(wt @ (g @ ww)), len(t) * len(w)


def _result(stack, pressure, rel_err, evaluations, scheme, diagnostics=None):
    d = stack.gap_thickness
    if not math.isfinite(rel_err) or rel_err > FAIL_REL_ERR:
        raise NumericFailure(
            "quadrature did not converge", pressure=pressure, rel_err_estimate=rel_err, d=d
        )
    return ForceResult(
        pressure=pressure,
        f_over_f0=pressure / casimir_ideal(d),
        rel_err_estimate=rel_err,
        evaluations=evaluations,
        scheme_used=scheme,
        d=d,
        diagnostics=diagnostics or {},
    )


def _rel_change(new, old):
    if new == old:
        return 0.0
    return abs(new - old) / max(abs(new), 1e-300)


def _reference(settings):
    """Rule compared against ``settings`` for the error estimate.

    Normally the embedded half-order rule; at the minimum orders halving is a
    no-op, so the doubled rule is used instead to keep the estimate honest.
    """
    low = settings.halved()
    radial = "radial_order" if settings.scheme == "laguerre" else "panel_order"
    orders = lambda s: (getattr(s, radial), s.angular_order)
    return low if orders(low) != orders(settings) else settings.doubled()


def force_zero_temperature(stack, settings=None):
    """Zero-temperature Casimir pressure on the gap of ``stack``.

    The error estimate compares against a rule of half (or, at the minimum
    orders, double) the order; if it
    exceeds ``settings.target_rel_err`` the orders are doubled up to
    ``settings.max_refinements`` times.
    """
    settings = settings or QuadratureSettings()
    d = stack.gap_thickness
    prefactor = hbar * c / (32.0 * math.pi**2 * d**4)

    j_low, n_low = _zero_t_integral(stack, _reference(settings))
    j_val, n_val = _zero_t_integral(stack, settings)
    evaluations = n_low + n_val
    rel_err = _rel_change(j_val, j_low)
    current = settings
    for _ in range(settings.max_refinements):
        if rel_err <= settings.target_rel_err:
            break
        current = current.doubled()
        j_new, n_new = _zero_t_integral(stack, current)
        evaluations += n_new
        rel_err = _rel_change(j_new, j_val)
        j_val = j_new
    if rel_err > settings.target_rel_err:
        log.debug("zero-T quadrature at d=%g: rel_err %.2e above target", d, rel_err)
    return _result(stack, prefactor * j_val, rel_err, evaluations, settings.scheme)


def _matsubara_term(stack, nodes, weights):
    d = stack.gap_thickness
    s = nodes[None, :]

    def term(m, xi):
        t0 = (2.0 * d / c) * xi[:, None]
        q = np.sqrt(s * (s + 2.0 * t0)) / (2.0 * d)
        g = _kernel(stack, xi[:, None], q, np.exp(-(t0 + s)))
        g = np.broadcast_to(g, (len(xi), len(nodes)))
        inner = ((t0 + s) ** 2 * g) @ weights
        return np.exp(-t0[:, 0]) * inner / (2.0 * d) ** 3

    return term


def force_finite_temperature(stack, temperature, msettings=None, qsettings=None):
    """Casimir pressure at temperature ``T`` (kelvin) from the Matsubara sum.

    Each term integrates over the gap wavenumber from ``xi_m / c`` upward with
    Gauss-Laguerre in ``t = 2 kappa d`` shifted by its lower limit.
    """
    msettings = msettings or MatsubaraSettings()
    qsettings = qsettings or QuadratureSettings()
    if not (temperature > 0 and math.isfinite(temperature)):
        raise DomainError(f"temperature must be finite and > 0, got {temperature!r}")

    def run(order):
        nodes, weights = gauss_laguerre_nodes(order)
        return _matsubara_sum_detail(_matsubara_term(stack, nodes, weights), msettings, temperature)

    ref_order = qsettings.halved().radial_order
    if ref_order == qsettings.radial_order:
        ref_order = qsettings.doubled().radial_order
    low, n_low, _, _ = run(ref_order)
    value, n_terms, tail, info = run(qsettings.radial_order)
    scale = max(abs(value), 1e-300)
    rel_err = _rel_change(value, low) + tail / scale
    pressure = k_B * temperature / math.pi * value
    evaluations = n_terms * qsettings.radial_order + n_low * ref_order
    diagnostics = {
        "matsubara_terms": n_terms,
        "tail_estimate": tail / scale,
        # shift of the result had the zero-frequency term been taken at xi0 itself
        "xi0_sensitivity": 0.5 * abs(info["zero_term_raw"] - info["zero_term"]) / scale,
        "zero_term_extrapolation_error": 0.5 * info["zero_term_extrapolation_error"] / scale,
    }
    return _result(
        stack, pressure, rel_err, evaluations, f"matsubara(T={temperature:g} K)", diagnostics
    )


def force_vs_distance(stack, d_grid, temperature=None, settings=None, msettings=None):
    """Evaluate the pressure for every gap thickness in ``d_grid``.

    Returns ``[(d, ForceResult or CasimirError), ...]``; a failing point does not
    stop the batch.
    """
    d_grid = [float(d) for d in d_grid]
    if any(d <= 0 for d in d_grid) or any(b <= a for a, b in zip(d_grid, d_grid[1:])):
        raise DomainError("d_grid must be positive and strictly increasing")
    out = []
    for d in d_grid:
        try:
            s = stack.with_gap(d)
            if temperature:
                res = force_finite_temperature(s, temperature, msettings, settings)
            else:
                res = force_zero_temperature(s, settings)
        except CasimirError as exc:
            log.warning("force at d=%g failed: %s", d, exc)
            res = exc
        out.append((d, res))
    return out
