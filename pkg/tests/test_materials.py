import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_multilayer.errors import DomainError, UsageError
from casimir_multilayer.materials import (
    PRESETS,
    DrudeLorentz,
    DrudeLorentzParams,
    PerfectMirror,
    Tabulated,
    Vacuum,
    epsilon_imag_axis,
    epsilon_static,
    is_dielectric,
    preset,
)


def test_vacuum_is_unity():
    np.testing.assert_array_equal(Vacuum().epsilon(np.array([0.0, 1e10, 1e20])), 1.0)


def test_perfect_mirror_has_no_permittivity():
    with pytest.raises(UsageError):
        PerfectMirror().epsilon(1e15)


def test_drude_lorentz_formula():
    m = DrudeLorentz.from_values(2.0e15, 6.536e15, 9.859e12)
    xi = 2.0e15
    expected = 1 + 6.536e15**2 / (xi**2 + 9.859e12 * xi + 2.0e15**2)
    assert m.epsilon(xi) == pytest.approx(expected, rel=1e-15)
    assert m.epsilon(xi) == pytest.approx(6.327, abs=1e-3)


def test_static_value_of_dielectric():
    p = PRESETS["si_like"]
    assert epsilon_static(preset("si_like")) == pytest.approx(1 + p.omega_p**2 / p.omega0**2)


def test_drude_metal_diverges_at_zero():
    metal = DrudeLorentz.from_values(0.0, 1e16, 1e14)
    with pytest.raises(DomainError):
        metal.epsilon(0.0)
    assert metal.epsilon(1e10) == pytest.approx(1 + 1e32 / (1e20 + 1e24))


@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_rejects_bad_frequencies(bad):
    with pytest.raises(DomainError):
        preset("si_like").epsilon(bad)


@pytest.mark.parametrize(
    "values", [(-1.0, 1.0, 1.0), (1.0, math.inf, 1.0), (1.0, 1.0, "x"), (True, 1.0, 1.0)]
)
def test_parameter_validation(values):
    with pytest.raises(DomainError):
        DrudeLorentzParams(*values)


def test_unknown_preset():
    with pytest.raises(DomainError, match="unknown material preset"):
        preset("gold")


def test_dielectric_classification():
    assert is_dielectric(preset("si_like"))
    assert is_dielectric(preset("mg_like"))  # omega0 > 0, however small
    assert not is_dielectric(DrudeLorentz.from_values(0.0, 1e16, 1e14))
    assert not is_dielectric(Vacuum())
    assert not is_dielectric(PerfectMirror())


class TestTabulated:
    table = Tabulated(((1e13, 12.0), (1e14, 11.0), (1e15, 5.0), (1e16, 1.5)))

    def test_reproduces_nodes(self):
        np.testing.assert_allclose(self.table.epsilon(self.table.xi_nodes), self.table.eps_nodes, rtol=1e-14)

    def test_log_log_midpoint(self):
        mid = math.sqrt(1e14 * 1e15)
        assert self.table.epsilon(mid) == pytest.approx(1 + math.sqrt(10.0 * 4.0), rel=1e-13)

    def test_extrapolation(self):
        assert self.table.epsilon(1e10) == 12.0
        assert self.table.epsilon(1e17) == pytest.approx(1 + 0.5 * 1e-2, rel=1e-13)

    def test_linear_fallback_from_zero(self):
        t = Tabulated(((0.0, 3.0), (1.0, 2.0)))
        assert t.epsilon(0.25) == pytest.approx(2.75)

    def test_matches_drude_lorentz_on_dense_grid(self):
        dl = preset("si_like")
        xs = np.geomspace(1e12, 1e18, 400)
        t = Tabulated(tuple(zip(xs, dl.epsilon(xs))))
        probe = np.geomspace(2e12, 5e17, 97)
        np.testing.assert_allclose(t.epsilon(probe), dl.epsilon(probe), rtol=2e-3)

    @pytest.mark.parametrize(
        "points",
        [((1.0, 2.0),), ((2.0, 2.0), (1.0, 3.0)), ((1.0, 0.5), (2.0, 2.0)), ((-1.0, 2.0), (1.0, 2.0))],
    )
    def test_invalid_tables(self, points):
        with pytest.raises(DomainError):
            Tabulated(points)


@given(
    w0=st.floats(0.0, 1e17),
    wp=st.floats(0.0, 1e17),
    g=st.floats(0.0, 1e16),
    xi=st.floats(1e-3, 1e20),
)
def test_imaginary_axis_permittivity_is_real_and_at_least_one(w0, wp, g, xi):
    eps = epsilon_imag_axis(DrudeLorentz.from_values(w0, wp, g), xi)
    assert np.isfinite(eps) and eps >= 1.0


@given(xi=st.lists(st.floats(1e10, 1e18), min_size=2, max_size=10))
def test_drude_lorentz_is_non_increasing(xi):
    xs = np.sort(np.array(xi))
    eps = preset("mg_like").epsilon(xs)
    assert np.all(np.diff(eps) <= 1e-12 * eps[:-1])
