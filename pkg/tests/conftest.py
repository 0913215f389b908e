import math

import pytest
from hypothesis import settings

from casimir_multilayer import (
    SEMI_INFINITE,
    Layer,
    PerfectMirror,
    Stack,
    Vacuum,
    preset,
)

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SI = preset("si_like")
MG = preset("mg_like")


def half_spaces(material, d=1e-6):
    return Stack.symmetric([Layer(SEMI_INFINITE, material)], d)


def single_slabs(material, thickness, d=1e-6):
    return Stack.symmetric([Layer(thickness, material), Layer(SEMI_INFINITE, Vacuum())], d)


def slab_and_half_space(material, thickness, d=1e-6):
    return Stack.from_walls(
        [Layer(thickness, material), Layer(SEMI_INFINITE, Vacuum())],
        [Layer(SEMI_INFINITE, material)],
        d,
    )


def bilayer_wall(high, low, t_high, t_low, count, backing=None):
    """``count`` (high, low) pairs listed outward from the gap, then a backing half-space."""
    layers = []
    for _ in range(count):
        layers += [Layer(t_high, high), Layer(t_low, low)]
    layers.append(Layer(SEMI_INFINITE, backing or Vacuum()))
    return layers


@pytest.fixture
def si():
    return SI


@pytest.fixture
def mg():
    return MG


@pytest.fixture
def mirrors():
    return half_spaces(PerfectMirror())


@pytest.fixture
def vacuum_walls():
    return half_spaces(Vacuum())


def rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a)


__all__ = ["half_spaces", "single_slabs", "slab_and_half_space", "bilayer_wall", "rel", "math"]


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
