"""JSON run descriptions: parsing, validation and canonical serialization.

A run file looks like::

    {
      "materials": {"si": {"preset": "si_like"}},
      "stack": {
        "layers": [
          {"thickness": "semi_infinite", "material": "si"},
          {"thickness": 1e-6, "material": "vacuum"},
          {"thickness": "semi_infinite", "material": "si"}
        ],
        "gap_index": 1
      },
      "temperature": null,
      "quadrature": {"radial_order": 80},
      "sweep": {"axes": [{"parameter": "gap", "scale": "log",
                          "min": 1e-7, "max": 1e-5, "count": 20}]}
    }

Materials are referenced by name (``vacuum``, ``perfect_mirror`` and the
presets are always defined) or given inline. Every problem found is reported
with its field path; nothing stops at the first error.
"""

from __future__ import annotations

import copy
import json
import math
import numbers
import re
import warnings
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .errors import CasimirError, ConfigError
from .materials import (
    PRESETS,
    DrudeLorentz,
    DrudeLorentzParams,
    PerfectMirror,
    Tabulated,
    Vacuum,
)
from .quadrature import MatsubaraSettings, QuadratureSettings
from .stack import SEMI_INFINITE, Layer, Stack

__all__ = [
    "AxisSpec",
    "SweepSpec",
    "AsymptoteOptions",
    "RunDescription",
    "parse_config",
    "parse_config_dict",
    "serialize",
    "apply_parameter",
    "axis_values",
    "grid_points",
]

SEMI_INFINITE_TOKEN = "semi_infinite"
SCALES = ("linear", "log")
MODES = ("zero_T", "finite_T")
FORMATS = ("csv", "json")
MATERIAL_FIELDS = ("omega0", "omega_p", "gamma0")
_LAYER_PARAM = re.compile(r"^layers\.(\d+)\.(thickness|material\.(omega0|omega_p|gamma0))$")


@dataclass(frozen=True)
class AxisSpec:
    """One sweep axis: a parameter path and its grid."""

    parameter: str
    scale: str
    min: float
    max: float
    count: int


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple


@dataclass(frozen=True)
class AsymptoteOptions:
    """``margin`` multiplies the validity scales; ``distance`` overrides the test point."""

    margin: float = 100.0
    distance: float | None = None


@dataclass(frozen=True)
class RunDescription:
    stack: Stack
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    matsubara: MatsubaraSettings = field(default_factory=MatsubaraSettings)
    temperature: float | None = None
    sweep: SweepSpec | None = None
    asymptote: AsymptoteOptions = field(default_factory=AsymptoteOptions)
    oned_channels: int = 2
    output_path: str | None = None
    output_format: str = "csv"


class _Collector:
    def __init__(self):
        self.items = []

    def add(self, path, msg):
        self.items.append((path, msg))

    def extend(self, items):
        self.items.extend(items)


def _is_number(v):
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _positive(v):
    return _is_number(v) and math.isfinite(v) and v > 0


def _check_keys(obj, allowed, path, errs):
    for key in obj:
        if key not in allowed:
            errs.add(f"{path}.{key}" if path else key, "unknown field")


# ---------------------------------------------------------------- materials


def _builtin_material(name):
    if name == "vacuum":
        return Vacuum()
    if name == "perfect_mirror":
        return PerfectMirror()
    if name in PRESETS:
        return DrudeLorentz(PRESETS[name])
    return None


def _parse_material(spec, path, errs):
    if isinstance(spec, str):
        mat = _builtin_material(spec)
        if mat is None:
            errs.add(path, f"unknown material {spec!r}")
        return mat
    if not isinstance(spec, dict):
        errs.add(path, "material must be a name or an object")
        return None
    if "preset" in spec:
        _check_keys(spec, {"preset"}, path, errs)
        name = spec["preset"]
        if name not in PRESETS:
            errs.add(f"{path}.preset", f"unknown preset {name!r}; known: {sorted(PRESETS)}")
            return None
        return DrudeLorentz(PRESETS[name])
    model = spec.get("model")
    if model in ("vacuum", "perfect_mirror"):
        _check_keys(spec, {"model"}, path, errs)
        return _builtin_material(model)
    if model == "drude_lorentz":
        _check_keys(spec, {"model", *MATERIAL_FIELDS}, path, errs)
        values = {}
        for name in MATERIAL_FIELDS:
            v = spec.get(name)
            if v is None:
                errs.add(f"{path}.{name}", "required")
            elif not (_is_number(v) and math.isfinite(v) and v >= 0):
                errs.add(f"{path}.{name}", f"must be a finite number >= 0, got {v!r}")
            else:
                values[name] = float(v)
        if len(values) == 3:
            return DrudeLorentz(DrudeLorentzParams(**values))
        return None
    if model == "tabulated":
        _check_keys(spec, {"model", "points"}, path, errs)
        pts = spec.get("points")
        if not isinstance(pts, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(_is_number(v) for v in p) for p in pts
        ):
            errs.add(f"{path}.points", "must be a list of [xi, eps] number pairs")
            return None
        try:
            return Tabulated(tuple(tuple(p) for p in pts))
        except CasimirError as exc:
            errs.add(f"{path}.points", str(exc))
            return None
    errs.add(f"{path}.model", f"unknown model {model!r}")
    return None


def _material_to_json(mat):
    if isinstance(mat, Vacuum):
        return {"model": "vacuum"}
    if isinstance(mat, PerfectMirror):
        return {"model": "perfect_mirror"}
    if isinstance(mat, DrudeLorentz):
        return {"model": "drude_lorentz", **asdict(mat.params)}
    if isinstance(mat, Tabulated):
        return {"model": "tabulated", "points": [list(p) for p in mat.points]}
    raise TypeError(f"cannot serialize material {mat!r}")


# ---------------------------------------------------------------- stack


def _parse_stack(spec, materials, errs, declared=()):
    if not isinstance(spec, dict):
        errs.add("stack", "required object")
        return None
    _check_keys(spec, {"layers", "gap_index"}, "stack", errs)
    layers_spec = spec.get("layers")
    if not isinstance(layers_spec, list) or len(layers_spec) < 3:
        errs.add("stack.layers", "must list at least three layers")
        return None
    n = len(layers_spec) - 1
    gap_index = spec.get("gap_index", 1 if n == 2 else None)
    if not isinstance(gap_index, int) or isinstance(gap_index, bool) or not 0 < gap_index < n:
        errs.add("stack.gap_index", f"must be an integer in 1..{n - 1}, got {gap_index!r}")
        gap_index = None
    layers = []
    for i, lay in enumerate(layers_spec):
        path = f"stack.layers[{i}]"
        if not isinstance(lay, dict):
            errs.add(path, "must be an object")
            layers.append(None)
            continue
        _check_keys(lay, {"thickness", "material"}, path, errs)
        thick = lay.get("thickness")
        outer = i in (0, n)
        if thick == SEMI_INFINITE_TOKEN:
            if not outer:
                errs.add(f"{path}.thickness", f"layer {i} is interior and cannot be semi-infinite")
            thick = SEMI_INFINITE
        elif outer:
            errs.add(f"{path}.thickness", f"layer {i} is outermost and must be 'semi_infinite'")
            thick = None
        elif not _positive(thick):
            errs.add(f"{path}.thickness", f"layer {i} thickness must be a finite number > 0, got {thick!r}")
            thick = None
        name = lay.get("material")
        if isinstance(name, str) and name in materials:
            mat = materials[name]
        elif isinstance(name, str) and name in declared:
            mat = None  # already reported under "materials"
        else:
            mat = _parse_material(name, f"{path}.material", errs)
        layers.append(None if thick is None or mat is None else Layer(float(thick), mat))
    if gap_index is None or any(lay is None for lay in layers):
        return None
    gap_mat = layers[gap_index].material
    if not isinstance(gap_mat, Vacuum):
        warnings.warn("gap permittivity set equal to unity", stacklevel=4)
        layers[gap_index] = Layer(layers[gap_index].thickness, Vacuum())
    return Stack(tuple(layers), gap_index)


def _stack_to_json(stack):
    return {
        "layers": [
            {
                "thickness": SEMI_INFINITE_TOKEN if lay.semi_infinite else lay.thickness,
                "material": _material_to_json(lay.material),
            }
            for lay in stack.layers
        ],
        "gap_index": stack.gap_index,
    }


# ---------------------------------------------------------------- settings


def _parse_settings(cls, spec, key, errs):
    if spec is None:
        return cls()
    if not isinstance(spec, dict):
        errs.add(key, "must be an object")
        return None
    names = {f.name for f in fields(cls)}
    _check_keys(spec, names, key, errs)
    kwargs = {k: v for k, v in spec.items() if k in names}
    # build without validation, then collect every violation at once
    obj = object.__new__(cls)
    for f in fields(cls):
        object.__setattr__(obj, f.name, kwargs.get(f.name, f.default))
    problems = obj.violations(key)
    if problems:
        errs.extend(problems)
        return None
    return cls(**kwargs)


# ---------------------------------------------------------------- sweeps


def _check_parameter(param, stack, path, errs):
    if param in ("gap", "slab_thickness", *MATERIAL_FIELDS):
        return
    m = _LAYER_PARAM.match(param) if isinstance(param, str) else None
    if not m:
        errs.add(path, f"unknown sweep parameter {param!r}")
        return
    if stack is None:
        return
    i = int(m.group(1))
    if i > stack.n:
        errs.add(path, f"layer index {i} out of range 0..{stack.n}")
    elif m.group(2) == "thickness" and stack.layers[i].semi_infinite:
        errs.add(path, f"layer {i} is semi-infinite; its thickness cannot be swept")
    elif m.group(3) and not isinstance(stack.layers[i].material, DrudeLorentz):
        errs.add(path, f"layer {i} is not a Drude-Lorentz material")


def _parse_sweep(spec, stack, errs):
    if spec is None:
        return None
    if not isinstance(spec, dict):
        errs.add("sweep", "must be an object")
        return None
    _check_keys(spec, {"axes"}, "sweep", errs)
    axes_spec = spec.get("axes")
    if not isinstance(axes_spec, list) or not 1 <= len(axes_spec) <= 2:
        errs.add("sweep.axes", "must list one or two axes")
        return None
    axes = []
    for k, ax in enumerate(axes_spec):
        path = f"sweep.axes[{k}]"
        if not isinstance(ax, dict):
            errs.add(path, "must be an object")
            continue
        _check_keys(ax, {"parameter", "scale", "min", "max", "count"}, path, errs)
        ok = True
        _check_parameter(ax.get("parameter"), stack, f"{path}.parameter", errs)
        scale = ax.get("scale", "linear")
        if scale not in SCALES:
            errs.add(f"{path}.scale", f"must be one of {SCALES}")
            ok = False
        lo, hi, count = ax.get("min"), ax.get("max"), ax.get("count")
        if not (_is_number(lo) and math.isfinite(lo)):
            errs.add(f"{path}.min", "must be a finite number")
            ok = False
        if not (_is_number(hi) and math.isfinite(hi)):
            errs.add(f"{path}.max", "must be a finite number")
            ok = False
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            errs.add(f"{path}.count", "must be an integer >= 1")
            ok = False
        if ok and count >= 2 and not lo < hi:
            errs.add(f"{path}.max", "min must be < max")
            ok = False
        if ok and count == 1 and lo != hi:
            errs.add(f"{path}.max", "a single-point axis needs min == max")
            ok = False
        if ok and scale == "log" and lo <= 0:
            errs.add(f"{path}.min", "log scale requires min > 0")
            ok = False
        if ok:
            axes.append(AxisSpec(ax["parameter"], scale, float(lo), float(hi), count))
    if len(axes) != len(axes_spec):
        return None
    if len(axes) == 2 and axes[0].parameter == axes[1].parameter:
        errs.add("sweep.axes[1].parameter", "both axes sweep the same parameter")
        return None
    return SweepSpec(tuple(axes))


def axis_values(axis):
    """Grid values of one axis."""
    if axis.count == 1:
        return np.array([axis.min])
    if axis.scale == "log":
        return np.geomspace(axis.min, axis.max, axis.count)
    return np.linspace(axis.min, axis.max, axis.count)


def grid_points(sweep):
    """Axis-value tuples in row-major order (last axis varies fastest)."""
    grids = [axis_values(ax) for ax in sweep.axes]
    if len(grids) == 1:
        return [(float(v),) for v in grids[0]]
    return [(float(a), float(b)) for a in grids[0] for b in grids[1]]


def _replace_params(mat, name, value):
    return DrudeLorentz(replace(mat.params, **{name: value}))


def apply_parameter(stack, parameter, value):
    """Copy of ``stack`` with one sweep parameter set to ``value``.

    ``gap`` is the gap thickness; ``slab_thickness`` sets every finite wall
    layer; ``omega0``, ``omega_p`` and ``gamma0`` apply to every Drude-Lorentz
    wall layer; ``layers.<i>.thickness`` and ``layers.<i>.material.<field>``
    address one layer.
    """
    value = float(value)
    layers = list(stack.layers)
    j = stack.gap_index
    if parameter == "gap":
        return stack.with_gap(value)
    if parameter == "slab_thickness":
        for i, lay in enumerate(layers):
            if i != j and not lay.semi_infinite:
                layers[i] = Layer(value, lay.material)
    elif parameter in MATERIAL_FIELDS:
        for i, lay in enumerate(layers):
            if i != j and isinstance(lay.material, DrudeLorentz):
                layers[i] = Layer(lay.thickness, _replace_params(lay.material, parameter, value))
    else:
        m = _LAYER_PARAM.match(parameter)
        if not m:
            raise ConfigError([("sweep", f"unknown sweep parameter {parameter!r}")])
        i = int(m.group(1))
        lay = layers[i]
        if m.group(2) == "thickness":
            layers[i] = Layer(value, lay.material)
        else:
            layers[i] = Layer(lay.thickness, _replace_params(lay.material, m.group(3), value))
    return Stack(tuple(layers), j)


# ---------------------------------------------------------------- top level

_TOP_KEYS = {
    "materials", "stack", "distance", "temperature", "mode", "quadrature",
    "matsubara", "sweep", "asymptote", "oned", "output",
}


def parse_config_dict(raw):
    """Validate a decoded JSON run description; raises ConfigError listing every problem."""
    errs = _Collector()
    if not isinstance(raw, dict):
        raise ConfigError([("", "top level must be a JSON object")])
    _check_keys(raw, _TOP_KEYS, "", errs)

    materials = {}
    mats_spec = raw.get("materials", {})
    if not isinstance(mats_spec, dict):
        errs.add("materials", "must be an object")
    else:
        for name, spec in mats_spec.items():
            mat = _parse_material(spec, f"materials.{name}", errs)
            if mat is not None:
                materials[name] = mat

    declared = set(mats_spec) if isinstance(mats_spec, dict) else set()
    stack = _parse_stack(raw.get("stack"), materials, errs, declared)
    distance = raw.get("distance")
    if distance is not None:
        if not _positive(distance):
            errs.add("distance", f"must be a finite number > 0, got {distance!r}")
        elif stack is not None:
            stack = stack.with_gap(float(distance))

    mode = raw.get("mode")
    temperature = raw.get("temperature")
    if mode is not None and mode not in MODES:
        errs.add("mode", f"must be one of {MODES}")
    if temperature is not None and not _positive(temperature):
        errs.add("temperature", f"must be a finite number > 0 (kelvin), got {temperature!r}")
        temperature = None
    if mode == "finite_T" and raw.get("temperature") is None:
        errs.add("temperature", "required when mode is 'finite_T'")
    if mode == "zero_T":
        temperature = None

    quad = _parse_settings(QuadratureSettings, raw.get("quadrature"), "quadrature", errs)
    mats = _parse_settings(MatsubaraSettings, raw.get("matsubara"), "matsubara", errs)
    sweep = _parse_sweep(raw.get("sweep"), stack, errs)

    asym = AsymptoteOptions()
    a_spec = raw.get("asymptote")
    if a_spec is not None:
        if not isinstance(a_spec, dict):
            errs.add("asymptote", "must be an object")
        else:
            _check_keys(a_spec, {"margin", "distance"}, "asymptote", errs)
            margin = a_spec.get("margin", 100.0)
            dist = a_spec.get("distance")
            if not (_positive(margin) and margin >= 1):
                errs.add("asymptote.margin", "must be a number >= 1")
            if dist is not None and not _positive(dist):
                errs.add("asymptote.distance", "must be a finite number > 0")
            asym = AsymptoteOptions(float(margin) if _positive(margin) else 100.0,
                                    float(dist) if _positive(dist) else None)

    channels = 2
    o_spec = raw.get("oned")
    if o_spec is not None:
        if not isinstance(o_spec, dict):
            errs.add("oned", "must be an object")
        else:
            _check_keys(o_spec, {"channels"}, "oned", errs)
            channels = o_spec.get("channels", 2)
            if channels not in (1, 2) or isinstance(channels, bool):
                errs.add("oned.channels", "must be 1 or 2")
                channels = 2

    out_path, out_format = None, "csv"
    out_spec = raw.get("output")
    if out_spec is not None:
        if not isinstance(out_spec, dict):
            errs.add("output", "must be an object")
        else:
            _check_keys(out_spec, {"path", "format"}, "output", errs)
            out_path = out_spec.get("path")
            out_format = out_spec.get("format", "csv")
            if out_path is not None and not isinstance(out_path, str):
                errs.add("output.path", "must be a string")
            if out_format not in FORMATS:
                errs.add("output.format", f"must be one of {FORMATS}")

    if errs.items:
        raise ConfigError(errs.items)
    return RunDescription(
        stack=stack,
        quadrature=quad,
        matsubara=mats,
        temperature=None if temperature is None else float(temperature),
        sweep=sweep,
        asymptote=asym,
        oned_channels=channels,
        output_path=out_path,
        output_format=out_format,
    )


def parse_config(path):
    """Read and validate a JSON run file."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError([("--config", f"cannot read {path}: {exc.strerror or exc}")]) from None
    except json.JSONDecodeError as exc:
        raise ConfigError([("--config", f"invalid JSON at line {exc.lineno}: {exc.msg}")]) from None
    return parse_config_dict(raw)


def serialize(run):
    """Canonical JSON-ready dict; ``parse_config_dict(serialize(run)) == run``."""
    out = {
        "stack": _stack_to_json(run.stack),
        "temperature": run.temperature,
        "quadrature": asdict(run.quadrature),
        "matsubara": asdict(run.matsubara),
        "asymptote": asdict(run.asymptote),
        "oned": {"channels": run.oned_channels},
        "output": {"path": run.output_path, "format": run.output_format},
    }
    if run.sweep is not None:
        out["sweep"] = {"axes": [asdict(ax) for ax in run.sweep.axes]}
    return copy.deepcopy(out)
