"""Seeded random stacks and probe points shared by the property tests."""

import numpy as np

from casimir_multilayer import SEMI_INFINITE, DrudeLorentz, Layer, PerfectMirror, Stack, Vacuum
from casimir_multilayer.stack import reflection_coefficients


def random_material(rng, allow_mirror=True):
    pick = rng.random()
    if allow_mirror and pick < 0.05:
        return PerfectMirror()
    if pick < 0.15:
        return Vacuum()
    w0 = 0.0 if rng.random() < 0.2 else 10 ** rng.uniform(9, 16)
    wp = 10 ** rng.uniform(13, 17)
    g = 10 ** rng.uniform(10, 15)
    return DrudeLorentz.from_values(w0, wp, g)


def random_stack(rng):
    n_low = int(rng.integers(1, 4))
    n_up = int(rng.integers(1, 4))
    layers = [Layer(SEMI_INFINITE, random_material(rng))]
    layers += [Layer(10 ** rng.uniform(-9, -5), random_material(rng)) for _ in range(n_low - 1)]
    layers.append(Layer(10 ** rng.uniform(-9, -4), Vacuum()))
    layers += [Layer(10 ** rng.uniform(-9, -5), random_material(rng)) for _ in range(n_up - 1)]
    layers.append(Layer(SEMI_INFINITE, random_material(rng)))
    return Stack(tuple(layers), n_low)


def random_points(rng, count):
    xi = 10 ** rng.uniform(8, 18, count)
    q = np.where(rng.random(count) < 0.1, 0.0, 10 ** rng.uniform(2, 10, count))
    return xi, q


def check_stack(stack, xi, q, rng, tol=1e-12):
    """Return a list of property violations for one stack at the probe points."""
    problems = []
    base = reflection_coefficients(stack, xi, q)
    for sigma, pair in base.items():
        for name, r in (("r_plus", pair.r_plus), ("r_minus", pair.r_minus)):
            r = np.asarray(r)
            if r.dtype.kind != "f" or not np.all(np.isfinite(r)):
                problems.append(f"{sigma}.{name} not real/finite")
            elif np.any(np.abs(r) > 1 + tol):
                problems.append(f"{sigma}.{name} exceeds 1: {np.max(np.abs(r))}")

    flipped = reflection_coefficients(stack.reversed(), xi, q)
    for sigma in base:
        if not (
            np.allclose(flipped[sigma].r_plus, base[sigma].r_minus, rtol=0, atol=tol)
            and np.allclose(flipped[sigma].r_minus, base[sigma].r_plus, rtol=0, atol=tol)
        ):
            problems.append(f"mirror symmetry broken ({sigma})")

    for variant, label in _zero_contrast_variants(stack, rng):
        other = reflection_coefficients(variant, xi, q)
        for sigma in base:
            for a, b in ((other[sigma].r_plus, base[sigma].r_plus), (other[sigma].r_minus, base[sigma].r_minus)):
                if not np.allclose(a, b, rtol=0, atol=tol):
                    problems.append(f"{label} changed {sigma}: {np.max(np.abs(a - b))}")
    return problems


def _zero_contrast_variants(stack, rng):
    layers = list(stack.layers)
    j = stack.gap_index
    # a finite layer of the terminal medium next to each terminal half-space
    top = layers[-1].material
    if not isinstance(top, PerfectMirror) and len(layers) - 1 > j + 1:
        extra = Layer(10 ** rng.uniform(-9, -6), top)
        yield Stack(tuple(layers[:-1] + [extra] + layers[-1:]), j), "insertion at top"
    bottom = layers[0].material
    if not isinstance(bottom, PerfectMirror) and j > 1:
        extra = Layer(10 ** rng.uniform(-9, -6), bottom)
        yield Stack(tuple(layers[:1] + [extra] + layers[1:]), j + 1), "insertion at bottom"
    # splitting a finite wall layer in two keeps its total thickness
    for i, lay in enumerate(layers):
        if i in (0, j, len(layers) - 1) or isinstance(lay.material, PerfectMirror):
            continue
        f = rng.uniform(0.1, 0.9)
        parts = [Layer(f * lay.thickness, lay.material), Layer((1 - f) * lay.thickness, lay.material)]
        gap = j + 1 if i < j else j
        yield Stack(tuple(layers[:i] + parts + layers[i + 1 :]), gap), f"split of layer {i}"
        break
