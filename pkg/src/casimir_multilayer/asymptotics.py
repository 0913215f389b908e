"""Long- and short-distance laws and tools to check them against full integrals.

At large separations only small gap wavenumbers survive the ``exp(-2 kappa d)``
weight, so the force is governed by reflection coefficients in the limit
``kappa -> 0+``. Walls with a semi-infinite medium keep a finite limit and
give the ``d**-4`` law; a wall made of one thin dielectric slab reflects only
``O(kappa)``, which turns one or both factors of ``d**-4`` into ``d**-5`` or
``d**-6``. At short separations only the layers touching the gap matter and
retardation drops out, which gives the ``d**-3`` non-retarded law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c, hbar

from .errors import DomainError, NumericFailure, UsageError
from .force import casimir_ideal
from .materials import DrudeLorentz, PerfectMirror, Tabulated, Vacuum
from .quadrature import (
    gauss_laguerre_nodes,
    graded_unit_rule,
    richardson_limit,
)
from .specialfn import TILDE_LI2_MAX, polylog, tilde_li2, zeta4
from .stack import reflection_coefficients, wall_is_single_slab

__all__ = [
    "PowerLaw",
    "StaticLimit",
    "SlabCoefficients",
    "default_kappa_ladder",
    "static_average",
    "static_li4_average",
    "slab_coefficients",
    "long_distance_standard",
    "long_distance_slab",
    "classify_distance_law",
    "validity_scales",
    "characteristic_frequency",
    "short_distance_numeric",
    "short_distance_closed_form",
    "short_distance_error_bound",
    "local_exponent",
]

LADDER_RUNGS = 8
# Ladder starts at kappa = LADDER_START / d_ref, well inside the static regime.
LADDER_START = 1e-2
# Extrapolations whose own error estimate exceeds this fraction are refused.
EXTRAPOLATION_TOL = 1e-4
# Angular panels for the static integrals; metals need deep grading at tiny kappa.
_STATIC_PANELS = 40
_STATIC_ORDER = 16


@dataclass(frozen=True)
class PowerLaw:
    """``F(d) = coefficient * d**exponent`` in N/m**2 for ``d`` in metres."""

    coefficient: float
    exponent: int

    def __call__(self, d):
        d = np.asarray(d, dtype=float)
        if np.any(~(d > 0)):
            raise DomainError("separation must be > 0")
        out = self.coefficient * d**self.exponent
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class StaticLimit:
    """A ``kappa -> 0+`` limit with its extrapolation error and ladder samples."""

    value: float
    error: float
    samples: tuple = ()


@dataclass(frozen=True)
class SlabCoefficients:
    """Limits of ``kappa**-2`` times the angular average of ``r_plus r_minus`` (m**2)."""

    s: StaticLimit
    p: StaticLimit

    @property
    def total(self):
        return self.s.value + self.p.value


# ---------------------------------------------------------------- scales


def characteristic_frequency(material):
    """Lowest resonance-like frequency of a material, or ``None`` if it has none.

    Drude-Lorentz media use ``omega0``, or ``omega_p`` for a Drude metal.
    Tables use the frequency where ``eps - 1`` has fallen to half its first
    tabulated value.
    """
    if isinstance(material, DrudeLorentz):
        p = material.params
        if p.omega_p == 0:
            return None
        return p.omega0 if p.omega0 > 0 else p.omega_p
    if isinstance(material, Tabulated):
        xs, es = material.xi_nodes, material.eps_nodes
        excess = es - 1.0
        if excess[0] <= 0:
            return None
        below = np.nonzero(excess <= 0.5 * excess[0])[0]
        if len(below) == 0:
            return float(xs[-1] * math.sqrt(2.0))  # 1/xi**2 tail halves by then
        return float(xs[below[0]])
    return None


def _wall_layers(stack):
    j = stack.gap_index
    return [layer for i, layer in enumerate(stack.layers) if i != j]


def validity_scales(stack):
    """Separations beyond which the long-distance laws may hold.

    Returns ``(d_min_freq, d_min_geom)``: the largest ``c / xi_l`` over wall
    materials, and the largest ``sqrt(eps_l(i xi_l)) * d_l`` over finite wall
    layers. Both are zero when no layer carries a material scale. Callers
    should require a margin (typically x100) beyond these values.
    """
    d_freq = 0.0
    d_geom = 0.0
    for layer in _wall_layers(stack):
        xi = characteristic_frequency(layer.material)
        if xi is None or xi <= 0:
            continue
        d_freq = max(d_freq, c / xi)
        if not layer.semi_infinite:
            eps = float(layer.material.epsilon(xi))
            d_geom = max(d_geom, math.sqrt(eps) * layer.thickness)
    return d_freq, d_geom


def classify_distance_law(stack):
    """Expected long-distance exponent: -6, -5 or -4.

    A wall that is exactly one finite dielectric slab backed by vacuum
    contributes one extra power of ``1/d``.
    """
    slabs = wall_is_single_slab(stack.lower_wall) + wall_is_single_slab(stack.upper_wall)
    return -4 - slabs


# ---------------------------------------------------------------- statics


def default_kappa_ladder(stack, rungs=LADDER_RUNGS):
    """Decreasing gap wavenumbers ``kappa_start * 2**-k`` used for static limits."""
    d_ref = max(validity_scales(stack))
    if d_ref <= 0:
        d_ref = 1.0
    return LADDER_START / d_ref * 0.5 ** np.arange(rungs)


def _products(stack, kappa, w):
    """``x_sigma = r_plus r_minus`` for both polarizations at gap wavenumber ``kappa``."""
    xi = c * kappa * w
    q = kappa * np.sqrt((1.0 - w) * (1.0 + w))
    coeffs = reflection_coefficients(stack, xi, q)
    shape = np.shape(w)
    return {
        s: np.broadcast_to(coeffs[s].r_plus * coeffs[s].r_minus, shape) for s in ("s", "p")
    }


def _ladder_limit(samples, what):
    samples = np.asarray(samples, dtype=float)
    value, err = richardson_limit(samples)
    scale = max(np.max(np.abs(samples)), 1e-300)
    diffs = np.diff(samples)
    # an alternating, non-shrinking sequence cannot be extrapolated
    tail = diffs[-3:]
    oscillating = np.all(tail[1:] * tail[:-1] < 0) and np.all(
        np.abs(tail[1:]) >= np.abs(tail[:-1])
    )
    if not math.isfinite(value) or (oscillating and np.max(np.abs(tail)) > 1e-12 * scale):
        raise NumericFailure(f"{what}: ladder does not converge", samples=samples.tolist())
    # a vanishing limit is judged against the size of the samples
    if err > EXTRAPOLATION_TOL * max(abs(value), 1e-8 * scale):
        raise NumericFailure(
            f"{what}: extrapolation error too large", value=value, error=err,
            samples=samples.tolist(),
        )
    return StaticLimit(value, err, tuple(samples.tolist()))


def _check_sigma(sigma):
    if sigma not in ("s", "p"):
        raise UsageError(f"polarization must be 's' or 'p', got {sigma!r}")


def _angular_averages(stack, ladder, fn):
    """``int_0^1 dw fn(x_sigma(kappa, w), kappa)`` for every ladder rung and polarization."""
    ladder = np.asarray(ladder, dtype=float)
    if ladder.ndim != 1 or len(ladder) < 2 or np.any(ladder <= 0) or np.any(np.diff(ladder) >= 0):
        raise DomainError("kappa_ladder must be a decreasing sequence of positive values")
    w, ww = graded_unit_rule(_STATIC_ORDER, _STATIC_PANELS)
    out = {"s": [], "p": []}
    for kap in ladder:
        x = _products(stack, kap, w)
        for sigma in out:
            out[sigma].append(float(np.dot(ww, fn(x[sigma], kap))))
    return out


def static_average(stack, sigma, m, kappa_ladder=None):
    """``lim_{kappa->0+} int_0^{pi/2} dphi sin(phi) (r_plus r_minus)**m`` for one polarization."""
    _check_sigma(sigma)
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"power m must be an integer >= 1, got {m!r}")
    ladder = default_kappa_ladder(stack) if kappa_ladder is None else kappa_ladder
    samples = _angular_averages(stack, ladder, lambda x, k: x ** int(m))[sigma]
    return _ladder_limit(samples, f"static average ({sigma}, m={m})")


def static_li4_average(stack, sigma, kappa_ladder=None, terms=None):
    """Static angular average of ``Li_4(r_plus r_minus)``.

    With ``terms=None`` the polylogarithm is evaluated directly. An integer
    ``terms`` instead sums ``static_average(m) / m**4`` for ``m = 1..terms``;
    that truncation leaves a remainder of at most ``sum_{m>terms} m**-4``.
    """
    _check_sigma(sigma)
    ladder = kappa_ladder if kappa_ladder is not None else default_kappa_ladder(stack)
    if terms is None:
        samples = _angular_averages(stack, ladder, lambda x, k: polylog(4, x))[sigma]
        return _ladder_limit(samples, f"static Li4 average ({sigma})")
    m = np.arange(1, int(terms) + 1, dtype=float)
    samples = _angular_averages(
        stack, ladder, lambda x, k: (x[:, None] ** m / m**4).sum(axis=1)
    )[sigma]
    return _ladder_limit(samples, f"termwise static Li4 average ({sigma})")


def slab_coefficients(stack, kappa_ladder=None):
    """``lim kappa**-2 int_0^{pi/2} dphi sin(phi) r_minus r_plus`` for s and p (m**2).

    Requires both walls to be single dielectric slabs backed by vacuum.
    """
    if classify_distance_law(stack) != -6:
        raise UsageError("slab coefficients need two single-slab walls")
    ladder = default_kappa_ladder(stack) if kappa_ladder is None else kappa_ladder
    avg = _angular_averages(stack, ladder, lambda x, k: x / (k * k))
    return SlabCoefficients(
        s=_ladder_limit(avg["s"], "slab coefficient (s)"),
        p=_ladder_limit(avg["p"], "slab coefficient (p)"),
    )


# ---------------------------------------------------------------- long distance


def long_distance_standard(stack, kappa_ladder=None):
    """Large-``d`` law ``F0(d) / (2 zeta(4)) * sum_sigma <Li_4(r_plus r_minus)>``.

    Only valid when neither wall is a single slab; never exceeds ``F0(d)``.
    """
    law = classify_distance_law(stack)
    if law != -4:
        raise UsageError(f"the standard d**-4 law does not apply to a d**{law} stack")
    total = sum(static_li4_average(stack, s, kappa_ladder).value for s in ("s", "p"))
    coefficient = casimir_ideal(1.0) * total / (2.0 * zeta4())
    return PowerLaw(coefficient, -4)


def long_distance_slab(stack, kappa_ladder=None):
    """Large-``d`` law ``15 hbar c / (16 pi**2) * sum_sigma Rbar_sigma * d**-6``."""
    coeffs = slab_coefficients(stack, kappa_ladder)
    return PowerLaw(15.0 * hbar * c / (16.0 * math.pi**2) * coeffs.total, -6)


def local_exponent(pressure_curve, at_index):
    """Centered estimate of ``-d ln F / d ln d`` at an interior point of a curve.

    ``pressure_curve`` is a sequence of ``(d, F)`` pairs with positive values.
    """
    pts = list(pressure_curve)
    i = int(at_index)
    if not 0 < i < len(pts) - 1:
        raise UsageError(f"index {at_index} is not an interior point of a {len(pts)}-point curve")
    (d0, f0), (d1, f1) = pts[i - 1], pts[i + 1]
    if min(d0, d1, f0, f1) <= 0:
        raise DomainError("local_exponent needs positive separations and pressures")
    return -(math.log(f1) - math.log(f0)) / (math.log(d1) - math.log(d0))


# ---------------------------------------------------------------- short distance

_SHORT_V_ORDER = 64
_SHORT_PANELS = 24
_SHORT_PANEL_ORDER = 24


def _adjacent_materials(stack):
    j = stack.gap_index
    return stack.layers[j - 1].material, stack.layers[j + 1].material


def _short_kernel_value(eps_a, eps_b, v, wv):
    """``int_0^inf dv v**2 / (A e**v - 1)`` for each frequency node, by Gauss-Laguerre."""
    inv_a = (eps_a - 1.0) * (eps_b - 1.0) / ((eps_a + 1.0) * (eps_b + 1.0))
    # v**2 / (A e**v - 1) = e**-v * v**2 * inv_a / (1 - inv_a e**-v)
    g = v**2 * inv_a[:, None] / (1.0 - inv_a[:, None] * np.exp(-v))
    return g @ wv


def _short_frequency_integral(mat_a, mat_b, scale, panels, order):
    """``int_0^inf dxi int dv ...`` using ``xi = scale * s / (1 - s)`` on graded panels."""
    v, wv = gauss_laguerre_nodes(_SHORT_V_ORDER)
    # grade toward both ends of s in (0, 1)
    lo, wlo = graded_unit_rule(order, panels)
    s = np.concatenate([0.5 * lo, 1.0 - 0.5 * lo[::-1]])
    ws = np.concatenate([0.5 * wlo, 0.5 * wlo[::-1]])
    xi = scale * s / (1.0 - s)
    jac = scale / (1.0 - s) ** 2
    eps_a = np.broadcast_to(mat_a.epsilon(xi), xi.shape)
    eps_b = np.broadcast_to(mat_b.epsilon(xi), xi.shape)
    return float(np.dot(ws * jac, _short_kernel_value(eps_a, eps_b, v, wv)))


def short_distance_numeric(stack):
    """Non-retarded law ``F = hbar / (16 pi**2 d**3) * int dxi int dv v**2 / (A e**v - 1)``.

    ``A = (eps_+ + 1)(eps_- + 1) / ((eps_+ - 1)(eps_- - 1))`` uses the two
    media touching the gap. Meaningful only when those layers are thick
    compared with ``d`` and ``d`` is well below ``c`` over their plasma
    frequencies.

    Returns
    -------
    PowerLaw
        With exponent ``-3``; ``rel_err`` of the frequency quadrature is
        checked against a rule with half the panels.
    """
    mat_a, mat_b = _adjacent_materials(stack)
    if isinstance(mat_a, PerfectMirror) or isinstance(mat_b, PerfectMirror):
        raise UsageError("the non-retarded law is undefined for perfect mirrors")
    if isinstance(mat_a, Vacuum) or isinstance(mat_b, Vacuum):
        return PowerLaw(0.0, -3)
    freqs = [characteristic_frequency(m) for m in (mat_a, mat_b)]
    freqs = [f for f in freqs if f]
    if not freqs:
        return PowerLaw(0.0, -3)
    scale = max(freqs)
    fine = _short_frequency_integral(mat_a, mat_b, scale, _SHORT_PANELS, _SHORT_PANEL_ORDER)
    coarse = _short_frequency_integral(mat_a, mat_b, scale, _SHORT_PANELS, _SHORT_PANEL_ORDER // 2)
    if fine != 0 and abs(fine - coarse) > 1e-6 * abs(fine):
        raise NumericFailure(
            "short-distance frequency integral did not converge", fine=fine, coarse=coarse
        )
    return PowerLaw(hbar / (16.0 * math.pi**2) * fine, -3)


def _closed_form_checks(params):
    if not params.gamma0 <= 0.2 * params.omega_p:
        raise DomainError(
            "closed form needs gamma0 << 2*omega_p (gamma0 <= 0.2*omega_p); "
            f"got gamma0={params.gamma0!r}, omega_p={params.omega_p!r}"
        )
    if not params.gamma0**2 / 4.0 < params.omega0**2:
        raise DomainError(
            "closed form needs gamma0**2/4 < omega0**2; "
            f"got gamma0={params.gamma0!r}, omega0={params.omega0!r}"
        )


def short_distance_closed_form(params, d):
    """Non-retarded pressure between identical weakly damped oscillator half-spaces.

    ``F = hbar / (2 pi d**3) * sqrt(w2) * tilde_li2(Omega**4 / (64 w2**2))`` with
    ``w2 = omega0**2 + Omega**2 / 2``; damping enters only through
    :func:`short_distance_error_bound`.
    """
    _closed_form_checks(params)
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise DomainError("separation must be > 0")
    w2 = params.omega0**2 + params.omega_p**2 / 2.0
    z = params.omega_p**4 / (64.0 * w2 * w2)
    out = hbar / (2.0 * math.pi * d**3) * math.sqrt(w2) * tilde_li2(min(z, TILDE_LI2_MAX))
    return float(out) if out.ndim == 0 else out


def short_distance_error_bound(params):
    """Relative size of the damping correction to the closed form, ``(gamma0/Omega) f(x)``.

    ``f(x) = Li_3(x**-2 / 4) / (8 pi sqrt(x) tilde_li2(x**-2 / 64))`` at
    ``x = alpha**2 + 1/2``, ``alpha**2 = (omega0**2 - gamma0**2/4) / Omega**2``.
    """
    _closed_form_checks(params)
    if params.gamma0 == 0 or params.omega_p == 0:
        return 0.0
    x = (params.omega0**2 - params.gamma0**2 / 4.0) / params.omega_p**2 + 0.5
    f = polylog(3, 0.25 / x**2) / (8.0 * math.pi * math.sqrt(x) * tilde_li2(1.0 / (64.0 * x**2)))
    return params.gamma0 / params.omega_p * f
