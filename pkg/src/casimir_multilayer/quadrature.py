"""Fixed quadrature rules and the Matsubara summation driver.

Node tables come from :mod:`scipy.special` and are cached read-only. Composite
Gauss-Legendre rules graded geometrically toward zero handle the two
awkward endpoints of the force integrals: the ``ln**3 u`` singularity of the
finite-domain radial variable and the boundary layer of metal-like walls at
grazing angles (``cos(phi) -> 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.constants import hbar, k as k_B
from scipy.special import roots_laguerre, roots_legendre

from .errors import ConfigError, NumericFailure

__all__ = [
    "MAX_ORDER",
    "MAX_LAGUERRE_ORDER",
    "QuadratureSettings",
    "MatsubaraSettings",
    "gauss_laguerre_nodes",
    "gauss_legendre_nodes",
    "graded_unit_rule",
    "graded_half_line_rule",
    "matsubara_frequency",
    "matsubara_sum",
    "richardson_limit",
]

MAX_ORDER = 512
# scipy's Laguerre recurrence loses the weights somewhere past order 300
MAX_LAGUERRE_ORDER = 300
SCHEMES = ("laguerre", "finite_domain")


@dataclass(frozen=True)
class QuadratureSettings:
    """Orders and tolerance for the zero-temperature double integral.

    Attributes
    ----------
    radial_order : int
        Gauss-Laguerre order in ``t = 2 kappa d`` (``laguerre`` scheme; also
        the q-integral order at finite temperature).
    angular_order : int
        Gauss-Legendre order per angular panel. The angular variable is
        ``w = cos(phi)`` on ``[0, 1]``.
    angular_panels : int
        Number of geometric refinements of the ``w`` panels toward ``w = 0``.
    panel_order : int
        Gauss-Legendre order per ``u`` panel (``finite_domain`` scheme).
    u_min : float
        Smallest ``u`` reached by the geometric panels before the last
        ``[0, u_min]`` panel.
    scheme : str
        ``"laguerre"`` or ``"finite_domain"``.
    target_rel_err : float
        Accepted self-convergence estimate.
    max_refinements : int
        Order doublings attempted when the estimate exceeds the target.
    """

    radial_order: int = 80
    angular_order: int = 16
    angular_panels: int = 6
    panel_order: int = 16
    u_min: float = 1e-12
    scheme: str = "laguerre"
    target_rel_err: float = 1e-8
    max_refinements: int = 1

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise ConfigError(problems)

    def violations(self, prefix="quadrature"):
        out = []
        limits = {
            "radial_order": MAX_LAGUERRE_ORDER,
            "angular_order": MAX_ORDER,
            "panel_order": MAX_ORDER,
        }
        for name, top in limits.items():
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 4 <= v <= top:
                out.append((f"{prefix}.{name}", f"must be an integer in [4, {top}], got {v!r}"))
        if not isinstance(self.angular_panels, (int, np.integer)) or not 0 <= self.angular_panels <= 40:
            out.append((f"{prefix}.angular_panels", "must be an integer in [0, 40]"))
        if not (isinstance(self.u_min, (int, float)) and 0 < self.u_min < 0.5):
            out.append((f"{prefix}.u_min", "must lie in (0, 0.5)"))
        if self.scheme not in SCHEMES:
            out.append((f"{prefix}.scheme", f"must be one of {SCHEMES}, got {self.scheme!r}"))
        t = self.target_rel_err
        if not (isinstance(t, (int, float)) and 0 < t < 0.1):
            out.append((f"{prefix}.target_rel_err", "must lie in (0, 0.1)"))
        if not isinstance(self.max_refinements, (int, np.integer)) or not 0 <= self.max_refinements <= 4:
            out.append((f"{prefix}.max_refinements", "must be an integer in [0, 4]"))
        return out

    def halved(self):
        """Embedded lower-order rule used for the error estimate."""
        return replace(
            self,
            radial_order=max(4, self.radial_order // 2),
            angular_order=max(4, self.angular_order // 2),
            panel_order=max(4, self.panel_order // 2),
        )

    def doubled(self):
        return replace(
            self,
            radial_order=min(MAX_LAGUERRE_ORDER, 2 * self.radial_order),
            angular_order=min(MAX_ORDER, 2 * self.angular_order),
            panel_order=min(MAX_ORDER, 2 * self.panel_order),
        )


@dataclass(frozen=True)
class MatsubaraSettings:
    """Controls for the finite-temperature frequency sum.

    The zero-frequency term is never evaluated at ``xi = 0``: it is sampled
    from ``xi0_fraction * xi_1`` downward and extrapolated to ``xi -> 0+``.
    The sum stops once the geometric tail estimate falls below
    ``tail_rel_tol`` times the partial sum.
    """

    xi0_fraction: float = 1e-3
    tail_rel_tol: float = 1e-8
    max_terms: int = 200_000

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise ConfigError(problems)

    def violations(self, prefix="matsubara"):
        out = []
        f = self.xi0_fraction
        if not (isinstance(f, (int, float)) and 0 < f <= 0.1):
            out.append((f"{prefix}.xi0_fraction", "must lie in (0, 0.1]"))
        if not (isinstance(self.tail_rel_tol, (int, float)) and self.tail_rel_tol > 0):
            out.append((f"{prefix}.tail_rel_tol", "must be > 0"))
        if not isinstance(self.max_terms, (int, np.integer)) or self.max_terms < 3:
            out.append((f"{prefix}.max_terms", "must be an integer >= 3"))
        return out


def _check_order(order, top=MAX_ORDER):
    if not isinstance(order, (int, np.integer)) or order < 2:
        raise ConfigError([("order", f"must be an integer >= 2, got {order!r}")])
    if order > top:
        raise ConfigError([("order", f"exceeds supported maximum {top}")])


@lru_cache(maxsize=None)
def _laguerre(order):
    x, w = roots_laguerre(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _legendre(order):
    x, w = roots_legendre(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_laguerre_nodes(order):
    """Nodes and weights with ``sum(w * f(t)) ~ integral_0^inf exp(-t) f(t) dt``."""
    _check_order(order, MAX_LAGUERRE_ORDER)
    return _laguerre(int(order))


def gauss_legendre_nodes(order, a=-1.0, b=1.0):
    """Gauss-Legendre nodes and weights mapped to ``[a, b]``."""
    _check_order(order)
    if not a < b:
        raise ConfigError([("interval", f"need a < b, got [{a}, {b}]")])
    x, w = _legendre(int(order))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@lru_cache(maxsize=None)
def _graded(order, depth, floor):
    edges = [1.0]
    lo = 1.0
    for _ in range(depth):
        lo *= 0.5
        if lo < floor:
            break
        edges.append(lo)
    edges.append(0.0)
    xs, ws = [], []
    for b, a in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre_nodes(order, a, b)
        xs.append(x)
        ws.append(w)
    x = np.concatenate(xs[::-1])
    w = np.concatenate(ws[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def graded_unit_rule(order, depth, floor=0.0):
    """Composite Gauss-Legendre rule on ``[0, 1]`` refined toward zero.

    Panels are ``[2**-(k+1), 2**-k]`` for ``k < depth`` (stopping once the
    lower edge would drop below ``floor``) plus a final panel down to zero.
    """
    _check_order(order)
    return _graded(int(order), int(depth), float(floor))


def graded_half_line_rule(order, depth=40, top=6):
    """Composite Gauss-Legendre rule for ``integral_0^inf exp(-t) g(t) dt``-type integrals.

    Panels double from ``[0, 2**-depth]`` up to ``2**top``; the returned
    weights integrate over ``[0, 2**top]`` without any weight function. Suits
    integrands with ``sqrt(t)``-like behaviour at the origin, where
    Gauss-Laguerre converges slowly.
    """
    _check_order(order)
    x, w = graded_unit_rule(order, depth)
    xs, ws = [x], [w]
    for k in range(int(top)):
        a, b = 2.0**k, 2.0 ** (k + 1)
        xk, wk = gauss_legendre_nodes(order, a, b)
        xs.append(xk)
        ws.append(wk)
    return np.concatenate(xs), np.concatenate(ws)


def matsubara_frequency(m, temperature):
    """``xi_m = 2 pi m k_B T / hbar`` in rad/s."""
    return 2.0 * math.pi * np.asarray(m, dtype=float) * k_B * temperature / hbar


def _tail_estimates(a):
    """Geometric tail estimate after each term, from the last three terms."""
    n = len(a)
    tails = np.full(n, np.inf)
    if n < 3:
        return tails
    a2, a1, a0 = np.abs(a[:-2]), np.abs(a[1:-1]), np.abs(a[2:])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.maximum(a0 / a1, a1 / a2)
        tail = np.where(ratio < 1.0, a0 * ratio / (1.0 - ratio), np.inf)
    zero = (a0 == 0) & (a1 == 0)
    tail = np.where(zero, 0.0, tail)
    tails[2:] = np.nan_to_num(tail, nan=np.inf)
    return tails


def richardson_limit(values, ratio=2.0, first_power=1):
    """Extrapolate a sequence sampled at ``h0 * ratio**-k`` to ``h = 0``.

    Assumes an error expansion in consecutive integer powers of ``h`` starting
    at ``first_power``. ``values`` may carry extra trailing axes; the
    extrapolation runs along axis 0.

    Returns
    -------
    value, error
        The highest-order diagonal entry of the Neville table and the larger of
        its distances to the two entries it was built from.
    """
    rows = [np.asarray(v, dtype=float) for v in values]
    if len(rows) < 2:
        raise ConfigError([("values", "need at least two samples to extrapolate")])
    table = [rows]
    for level in range(1, len(rows)):
        prev = table[-1]
        factor = ratio ** (first_power + level - 1) - 1.0
        table.append([prev[i] + (prev[i] - prev[i - 1]) / factor for i in range(1, len(prev))])
    best = table[-1][-1]
    err = np.maximum(np.abs(best - table[-2][-1]), np.abs(best - table[-2][-2]))
    if best.ndim == 0:
        return float(best), float(err)
    return best, err


# Samples of the zero-frequency term taken at xi0 * 2**-k before extrapolating.
_XI0_LADDER = 6


def _zero_frequency_term(term, xi0):
    xi = xi0 * 0.5 ** np.arange(_XI0_LADDER)
    values = np.asarray(term(np.zeros(_XI0_LADDER, dtype=int), xi), dtype=float)
    limit, err = richardson_limit(values)
    return limit, err, float(values[0])


def _matsubara_sum_detail(term, settings, temperature, chunk=256):
    """Returns ``(value, terms_used, tail_estimate, info)``.

    The ``m = 0`` term is sampled on a ladder starting at
    ``xi0_fraction * xi_1`` and extrapolated to ``xi -> 0+``; ``info`` holds the
    raw first sample and the extrapolation error.
    """
    if not (temperature > 0 and math.isfinite(temperature)):
        raise ConfigError([("temperature", f"must be finite and > 0, got {temperature!r}")])
    xi1 = float(matsubara_frequency(1, temperature))
    zero, zero_err, zero_raw = _zero_frequency_term(term, settings.xi0_fraction * xi1)
    info = {"zero_term": zero, "zero_term_raw": zero_raw, "zero_term_extrapolation_error": zero_err}
    terms = [np.array([0.5 * zero])]
    m_next = 1
    size = min(chunk, settings.max_terms)
    while m_next < settings.max_terms:
        m = np.arange(m_next, min(m_next + size, settings.max_terms))
        values = np.asarray(term(m, m * xi1), dtype=float).reshape(m.shape)
        terms.append(values)
        m_next = int(m[-1]) + 1
        a = np.concatenate(terms)
        tails = _tail_estimates(a)
        partial = np.abs(np.cumsum(a))
        done = np.nonzero(tails <= settings.tail_rel_tol * partial)[0]
        if len(done):
            k = int(done[0])
            return math.fsum(a[: k + 1]), k + 1, float(tails[k]), info
        size = min(2 * size, 8192)
    a = np.concatenate(terms)
    raise NumericFailure(
        "Matsubara sum did not converge",
        partial_sum=math.fsum(a),
        tail_estimate=float(_tail_estimates(a)[-1]),
        terms=len(a),
    )


def matsubara_sum(term, settings, temperature):
    """Sum ``(1 - delta_m0/2) * term(m, xi_m)`` over ``m >= 0``.

    ``term`` is called with integer arrays ``m`` and matching frequency arrays
    ``xi`` and must return an array of the same length. The ``m = 0`` term is
    taken as the ``xi -> 0+`` limit, extrapolated from samples starting at
    ``xi0_fraction * xi_1`` (the integrand is never evaluated at ``xi = 0``).
    """
    return _matsubara_sum_detail(term, settings, temperature)[0]
