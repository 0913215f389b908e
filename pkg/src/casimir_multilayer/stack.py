"""Planar multilayer geometry and generalized reflection coefficients.

Layers are indexed ``0..n`` from bottom to top; layers ``0`` and ``n`` are
semi-infinite and the vacuum gap sits at ``gap_index``. Everything here lives
on the imaginary frequency axis, where the coefficients are real and bounded
by one in magnitude.

The recursion is written with the single-interface coefficient
``rho = (a - b) / (a + b)`` and the round-trip factor ``e = exp(-2 kappa d)``,

    r_l = (rho + e * r_next) / (1 + rho * e * r_next),

which never overflows even for metal-like permittivities around 1e14.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import c

from .errors import UsageError
from .materials import PerfectMirror, Vacuum, is_dielectric

__all__ = [
    "SEMI_INFINITE",
    "Layer",
    "Stack",
    "ReflectionPair",
    "kappa",
    "single_interface",
    "reflect_up",
    "reflect_down",
    "reflection_pair",
    "reflection_coefficients",
]

SEMI_INFINITE = math.inf

# exp(-x) is below the smallest subnormal double past this point
_UNDERFLOW = 745.0


@dataclass(frozen=True)
class Layer:
    """One homogeneous layer; ``thickness`` in metres, ``math.inf`` if semi-infinite."""

    thickness: float
    material: object

    @property
    def semi_infinite(self):
        return math.isinf(self.thickness)


@dataclass(frozen=True)
class Stack:
    """Ordered layers ``0..n`` with a vacuum gap at ``gap_index``.

    A non-vacuum gap material is replaced by :class:`Vacuum` with a warning,
    since the stress tensor is only defined in free space.
    """

    layers: tuple
    gap_index: int

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        n = len(layers) - 1
        j = self.gap_index
        if n < 2:
            raise UsageError("a stack needs at least three layers (wall, gap, wall)")
        if not isinstance(j, (int, np.integer)) or not 0 < j < n:
            raise UsageError(f"gap_index must satisfy 0 < gap_index < {n}, got {j!r}")
        for i, layer in enumerate(layers):
            if not isinstance(layer, Layer):
                raise UsageError(f"layer {i} is not a Layer")
            if i in (0, n):
                if not layer.semi_infinite:
                    raise UsageError(f"layer {i} must be semi-infinite")
            elif not (math.isfinite(layer.thickness) and layer.thickness > 0):
                raise UsageError(
                    f"layer {i} must have finite thickness > 0, got {layer.thickness!r}"
                )
        if not isinstance(layers[j].material, Vacuum):
            warnings.warn("gap permittivity set equal to unity", stacklevel=3)
            layers = layers[:j] + (Layer(layers[j].thickness, Vacuum()),) + layers[j + 1 :]
            object.__setattr__(self, "layers", layers)

    @property
    def n(self):
        return len(self.layers) - 1

    @property
    def gap_thickness(self):
        return self.layers[self.gap_index].thickness

    def with_gap(self, d):
        """Copy of the stack with the gap thickness replaced by ``d``."""
        return self.with_layer(self.gap_index, thickness=d)

    def with_layer(self, index, **changes):
        layers = list(self.layers)
        layers[index] = replace(layers[index], **changes)
        return Stack(tuple(layers), self.gap_index)

    def reversed(self):
        """Same structure seen upside down; swaps the roles of the two walls."""
        return Stack(self.layers[::-1], self.n - self.gap_index)

    @property
    def upper_wall(self):
        """Layers above the gap, ordered outward."""
        return self.layers[self.gap_index + 1 :]

    @property
    def lower_wall(self):
        """Layers below the gap, ordered outward."""
        return self.layers[: self.gap_index][::-1]

    @classmethod
    def from_walls(cls, lower, upper, d):
        """Build a stack from two walls, each listed outward from the gap."""
        lower, upper = tuple(lower), tuple(upper)
        return cls(lower[::-1] + (Layer(d, Vacuum()),) + upper, len(lower))

    @classmethod
    def symmetric(cls, wall, d):
        """Two identical walls (listed outward from the gap) separated by ``d``."""
        return cls.from_walls(wall, wall, d)


def wall_is_single_slab(wall):
    """True for exactly one finite dielectric slab backed by semi-infinite vacuum."""
    if len(wall) != 2:
        return False
    slab, backing = wall
    return (
        not slab.semi_infinite
        and is_dielectric(slab.material)
        and isinstance(backing.material, Vacuum)
    )


@dataclass(frozen=True)
class ReflectionPair:
    """Reflection coefficients off the upper (``r_plus``) and lower (``r_minus``) wall."""

    r_plus: object
    r_minus: object


def _check_sigma(sigma):
    if sigma not in ("s", "p"):
        raise UsageError(f"polarization must be 's' or 'p', got {sigma!r}")


def kappa(material, xi, q):
    """Imaginary-axis propagation constant sqrt(xi**2 eps(i xi) / c**2 + q**2), in 1/m."""
    xi = np.asarray(xi, dtype=float)
    q = np.asarray(q, dtype=float)
    eps = material.epsilon(xi)
    k = np.sqrt((xi / c) ** 2 * eps + q * q)
    return float(k) if k.ndim == 0 else k


def single_interface(sigma, kappa_a, kappa_b, eps_a, eps_b):
    """Fresnel coefficient for a wave in medium ``a`` hitting medium ``b``."""
    _check_sigma(sigma)
    ka, kb = np.asarray(kappa_a, dtype=float), np.asarray(kappa_b, dtype=float)
    if sigma == "s":
        r = (ka - kb) / (ka + kb)
    else:
        ea, eb = np.asarray(eps_a, dtype=float), np.asarray(eps_b, dtype=float)
        r = (ka * eb - kb * ea) / (ka * eb + kb * ea)
    return float(r) if r.ndim == 0 else r


def _layer_fields(stack, xi, q):
    """Permittivity and kappa of every layer; ``None`` for perfect mirrors."""
    xi_c2 = (xi / c) ** 2
    q2 = q * q
    cache = {}
    eps, kap = [], []
    for layer in stack.layers:
        mat = layer.material
        if isinstance(mat, PerfectMirror):
            eps.append(None)
            kap.append(None)
            continue
        if mat not in cache:
            if isinstance(mat, Vacuum):
                e = 1.0
                k = np.sqrt(xi_c2 + q2)
            else:
                e = mat.epsilon(xi)
                k = np.sqrt(xi_c2 * e + q2)
            cache[mat] = (e, k)
        e, k = cache[mat]
        eps.append(e)
        kap.append(k)
    return eps, kap


def _recurse(stack, order, eps, kap, shape):
    """Walk from the outermost layer in ``order`` back to ``order[0]``.

    ``order`` lists layer indices outward from the gap. Returns ``(r_s, r_p)``
    at the gap-side boundary.
    """
    layers = stack.layers
    r_s = np.zeros(shape)
    r_p = np.zeros(shape)
    for pos in range(len(order) - 2, -1, -1):
        here, nxt = order[pos], order[pos + 1]
        if isinstance(layers[nxt].material, PerfectMirror):
            r_s = np.full(shape, -1.0)
            r_p = np.full(shape, 1.0)
            continue
        if kap[here] is None:
            # value inside a mirror is never used: the next step overrides it
            continue
        k_a, k_b = kap[here], kap[nxt]
        e_a, e_b = eps[here], eps[nxt]
        rho_s = (k_a - k_b) / (k_a + k_b)
        rho_p = (k_a * e_b - k_b * e_a) / (k_a * e_b + k_b * e_a)
        thick = layers[nxt].thickness
        if math.isinf(thick):
            r_s = np.broadcast_to(rho_s, shape).copy()
            r_p = np.broadcast_to(rho_p, shape).copy()
            continue
        arg = 2.0 * k_b * thick
        trip = np.where(arg > _UNDERFLOW, 0.0, np.exp(-np.minimum(arg, _UNDERFLOW)))
        er_s = trip * r_s
        er_p = trip * r_p
        r_s = (rho_s + er_s) / (1.0 + rho_s * er_s)
        r_p = (rho_p + er_p) / (1.0 + rho_p * er_p)
    return r_s, r_p


def reflection_coefficients(stack, xi, q):
    """Both walls, both polarizations, from one pass over the layer permittivities.

    Returns a dict ``{"s": ReflectionPair, "p": ReflectionPair}``; ``xi`` and
    ``q`` broadcast against each other.
    """
    xi = np.asarray(xi, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(q < 0) or not np.all(np.isfinite(q)):
        raise UsageError("q must be finite and >= 0")
    shape = np.broadcast_shapes(xi.shape, q.shape)
    eps, kap = _layer_fields(stack, xi, q)
    j = stack.gap_index
    up_s, up_p = _recurse(stack, list(range(j, stack.n + 1)), eps, kap, shape)
    dn_s, dn_p = _recurse(stack, list(range(j, -1, -1)), eps, kap, shape)
    if shape == ():
        up_s, up_p, dn_s, dn_p = (float(v) for v in (up_s, up_p, dn_s, dn_p))
    return {"s": ReflectionPair(up_s, dn_s), "p": ReflectionPair(up_p, dn_p)}


def reflection_pair(stack, sigma, xi, q):
    """Generalized coefficients ``(r_{j+}, r_{j-})`` for one polarization."""
    _check_sigma(sigma)
    return reflection_coefficients(stack, xi, q)[sigma]


def reflect_up(stack, sigma, xi, q):
    """Reflection coefficient of the wall above the gap."""
    return reflection_pair(stack, sigma, xi, q).r_plus


def reflect_down(stack, sigma, xi, q):
    """Reflection coefficient of the wall below the gap."""
    return reflection_pair(stack, sigma, xi, q).r_minus
