"""Permittivity models evaluated on the positive imaginary frequency axis.

On ``omega = i*xi`` every causal permittivity is real and at least one, which
is the only regime the force formulas need. All frequencies are angular
frequencies in rad/s.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, UsageError

__all__ = [
    "Vacuum",
    "PerfectMirror",
    "DrudeLorentzParams",
    "DrudeLorentz",
    "Tabulated",
    "PermittivityModel",
    "epsilon_imag_axis",
    "epsilon_static",
    "PRESETS",
    "preset",
]


def _as_xi(xi):
    arr = np.asarray(xi, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("imaginary frequency xi must be finite")
    if np.any(arr < 0):
        raise DomainError("imaginary frequency xi must be >= 0")
    return arr


def _ret(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


@dataclass(frozen=True)
class Vacuum:
    """Empty space, eps = 1 at every frequency."""

    def epsilon(self, xi):
        arr = _as_xi(xi)
        return _ret(np.ones_like(arr), xi)


@dataclass(frozen=True)
class PerfectMirror:
    """Ideal conductor (plasma frequency taken to infinity).

    Never evaluated as a permittivity; the reflection recursion forces the
    ideal coefficients whenever it meets one of these.
    """

    def epsilon(self, xi):
        raise UsageError(
            "PerfectMirror has no finite permittivity; reflection "
            "coefficients must be short-circuited by the stack"
        )


@dataclass(frozen=True)
class DrudeLorentzParams:
    """Single-resonance oscillator parameters (all rad/s).

    Attributes
    ----------
    omega0 : float
        Transverse resonance frequency; zero gives a Drude metal.
    omega_p : float
        Plasma frequency (oscillator strength).
    gamma0 : float
        Absorption (damping) parameter.
    """

    omega0: float
    omega_p: float
    gamma0: float

    def __post_init__(self):
        for name in ("omega0", "omega_p", "gamma0"):
            value = getattr(self, name)
            if not isinstance(value, numbers.Real) or isinstance(value, bool):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, float(value))


@dataclass(frozen=True)
class DrudeLorentz:
    """Drude-Lorentz medium, eps(i xi) = 1 + omega_p**2 / (xi**2 + gamma0*xi + omega0**2)."""

    params: DrudeLorentzParams

    @classmethod
    def from_values(cls, omega0, omega_p, gamma0):
        return cls(DrudeLorentzParams(omega0, omega_p, gamma0))

    def epsilon(self, xi):
        p = self.params
        arr = _as_xi(xi)
        denom = arr * arr + p.gamma0 * arr + p.omega0 * p.omega0
        if p.omega_p == 0.0:
            return _ret(np.ones_like(arr), xi)
        if np.any(denom == 0.0):
            raise DomainError(
                "Drude-Lorentz permittivity diverges at xi = 0 when omega0 = 0; "
                "use a small non-zero xi instead"
            )
        return _ret(1.0 + p.omega_p * p.omega_p / denom, xi)


@dataclass(frozen=True)
class Tabulated:
    """Permittivity given at discrete imaginary frequencies.

    Interpolation is linear in ``(log xi, log(eps - 1))``. Segments that start
    at ``xi = 0`` or touch ``eps = 1`` fall back to linear interpolation in
    ``(xi, eps)``. Below the first node the first value is held; above the
    last node ``eps = 1 + C / xi**2`` matched at that node.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple((float(x), float(e)) for x, e in self.points)
        if len(pts) < 2:
            raise DomainError("a tabulated permittivity needs at least two points")
        xs = np.array([p[0] for p in pts])
        es = np.array([p[1] for p in pts])
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(es))):
            raise DomainError("tabulated points must be finite")
        if xs[0] < 0:
            raise DomainError("tabulated xi values must be >= 0")
        if np.any(np.diff(xs) <= 0):
            raise DomainError("tabulated xi values must be strictly increasing")
        if np.any(es < 1.0):
            bad = int(np.argmax(es < 1.0))
            raise DomainError(
                f"tabulated eps must be >= 1 on the imaginary axis (point {bad}: {es[bad]!r})"
            )
        object.__setattr__(self, "points", pts)

    @property
    def xi_nodes(self):
        return np.array([p[0] for p in self.points])

    @property
    def eps_nodes(self):
        return np.array([p[1] for p in self.points])

    def epsilon(self, xi):
        arr = _as_xi(xi)
        xs, es = self.xi_nodes, self.eps_nodes
        flat = np.atleast_1d(arr).ravel()
        out = np.empty_like(flat)

        below = flat <= xs[0]
        above = flat >= xs[-1]
        out[below] = es[0]
        out[above] = 1.0 + (es[-1] - 1.0) * (xs[-1] / flat[above]) ** 2

        inner = ~(below | above)
        if np.any(inner):
            x = flat[inner]
            k = np.searchsorted(xs, x, side="right") - 1
            x0, x1 = xs[k], xs[k + 1]
            e0, e1 = es[k], es[k + 1]
            loglog = (x0 > 0) & (e0 > 1.0) & (e1 > 1.0)
            res = np.empty_like(x)
            lin = ~loglog
            res[lin] = e0[lin] + (e1[lin] - e0[lin]) * (x[lin] - x0[lin]) / (x1[lin] - x0[lin])
            if np.any(loglog):
                lx, lx0, lx1 = np.log(x[loglog]), np.log(x0[loglog]), np.log(x1[loglog])
                ly0, ly1 = np.log(e0[loglog] - 1.0), np.log(e1[loglog] - 1.0)
                res[loglog] = 1.0 + np.exp(ly0 + (ly1 - ly0) * (lx - lx0) / (lx1 - lx0))
            out[inner] = res
        return _ret(out.reshape(np.shape(arr)), xi)


PermittivityModel = Union[Vacuum, PerfectMirror, DrudeLorentz, Tabulated]


def epsilon_imag_axis(model, xi):
    """Return eps(i*xi) for ``model``; accepts scalars or arrays of xi >= 0."""
    return model.epsilon(xi)


def epsilon_static(model):
    """Return eps(0)."""
    return model.epsilon(0.0)


def is_dielectric(model):
    """True if the material reflects and has a finite static permittivity."""
    if isinstance(model, DrudeLorentz):
        return model.params.omega_p > 0 and model.params.omega0 > 0
    if isinstance(model, Tabulated):
        return bool(np.any(model.eps_nodes > 1.0))
    return False


# Reference parameter sets (rad/s): a metal-like and a silicon-like oscillator.
PRESETS = {
    "mg_like": DrudeLorentzParams(omega0=1.0e9, omega_p=1.6176e16, gamma0=9.7e14),
    "si_like": DrudeLorentzParams(omega0=2.0e15, omega_p=6.536e15, gamma0=9.859e12),
}


def preset(name):
    """Drude-Lorentz material for a named preset (``"mg_like"`` or ``"si_like"``)."""
    try:
        return DrudeLorentz(PRESETS[name])
    except KeyError:
        raise DomainError(f"unknown material preset {name!r}; known: {sorted(PRESETS)}") from None
