import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_multilayer.errors import ConfigError, NumericFailure
from casimir_multilayer.quadrature import (
    MAX_LAGUERRE_ORDER,
    MatsubaraSettings,
    QuadratureSettings,
    gauss_laguerre_nodes,
    gauss_legendre_nodes,
    graded_half_line_rule,
    graded_unit_rule,
    matsubara_frequency,
    matsubara_sum,
    richardson_limit,
)

# int_0^inf t**3 exp(-t) / (1 - exp(-t)/2) dt = 12 Li_4(1/2), from mpmath adaptive quadrature
LAGUERRE_ORACLE = 6.20974874008679263596909794279


class TestLaguerre:
    def test_weight_integral(self):
        _, w = gauss_laguerre_nodes(8)
        assert w.sum() == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("order", [4, 20, 80])
    def test_cubic_is_exact(self, order):
        t, w = gauss_laguerre_nodes(order)
        assert np.dot(w, t**3) == pytest.approx(6.0, rel=1e-12)

    def test_against_adaptive_oracle(self):
        t, w = gauss_laguerre_nodes(80)
        val = np.dot(w, t**3 / (1 - 0.5 * np.exp(-t)))
        assert val == pytest.approx(LAGUERRE_ORACLE, rel=1e-10)

    def test_supported_range(self):
        t, w = gauss_laguerre_nodes(MAX_LAGUERRE_ORDER)
        assert np.all(np.isfinite(t)) and w.sum() == pytest.approx(1.0, abs=1e-12)
        for bad in (1, MAX_LAGUERRE_ORDER + 1, 2.5):
            with pytest.raises(ConfigError):
                gauss_laguerre_nodes(bad)

    def test_tables_are_read_only(self):
        t, _ = gauss_laguerre_nodes(10)
        with pytest.raises(ValueError):
            t[0] = 1.0


class TestLegendre:
    def test_sine(self):
        x, w = gauss_legendre_nodes(16, 0.0, math.pi / 2)
        assert np.dot(w, np.sin(x)) == pytest.approx(1.0, abs=1e-12)

    def test_quadratic_exact(self):
        x, w = gauss_legendre_nodes(2, 0.0, 1.0)
        assert np.dot(w, x**2) == pytest.approx(1 / 3, rel=1e-15)

    def test_graded_rule_handles_log_cubed(self):
        u, w = graded_unit_rule(16, 200, 1e-12)
        assert np.dot(w, np.log(u) ** 3) == pytest.approx(-6.0, abs=1e-6)

    def test_half_line_rule_handles_sqrt(self):
        t, w = graded_half_line_rule(16)
        assert np.dot(w, np.sqrt(t) * np.exp(-t)) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)

    def test_interval_check(self):
        with pytest.raises(ConfigError):
            gauss_legendre_nodes(4, 1.0, 0.0)


class TestSettings:
    def test_defaults_valid(self):
        QuadratureSettings()
        MatsubaraSettings()

    def test_collects_all_violations(self):
        with pytest.raises(ConfigError) as info:
            QuadratureSettings(radial_order=2, scheme="trapezoid", target_rel_err=0.5)
        paths = [p for p, _ in info.value.violations]
        assert paths == ["quadrature.radial_order", "quadrature.scheme", "quadrature.target_rel_err"]

    @pytest.mark.parametrize("frac", [0.0, 0.2, -1e-3])
    def test_xi0_fraction_range(self, frac):
        with pytest.raises(ConfigError):
            MatsubaraSettings(xi0_fraction=frac)

    def test_halving_and_doubling(self):
        s = QuadratureSettings(radial_order=200)
        assert s.halved().radial_order == 100
        assert s.doubled().radial_order == MAX_LAGUERRE_ORDER


class TestMatsubara:
    def test_first_frequency_at_room_temperature(self):
        assert matsubara_frequency(1, 300.0) == pytest.approx(2.468e14, rel=1e-3)

    def test_zero_term(self):
        assert matsubara_sum(lambda m, xi: np.zeros(len(m)), MatsubaraSettings(), 300.0) == 0.0

    def test_geometric_series_halves_first_term(self):
        val = matsubara_sum(lambda m, xi: 0.5 ** m.astype(float), MatsubaraSettings(), 300.0)
        assert val == pytest.approx(1.5, rel=1e-8)

    def test_zero_term_is_extrapolated_to_zero_frequency(self):
        xi1 = matsubara_frequency(1, 10.0)
        # term depends linearly and quadratically on xi, limit at xi -> 0 is 1
        term = lambda m, xi: np.where(m == 0, 1.0 + xi / xi1 + (xi / xi1) ** 2, 0.0)
        val = matsubara_sum(term, MatsubaraSettings(xi0_fraction=0.1, max_terms=10), 10.0)
        assert val == pytest.approx(0.5, rel=1e-12)

    def test_non_convergence_reports_partial_sum(self):
        with pytest.raises(NumericFailure) as info:
            matsubara_sum(lambda m, xi: np.ones(len(m)), MatsubaraSettings(max_terms=50), 300.0)
        diag = info.value.diagnostics
        assert diag["terms"] == 50 and diag["partial_sum"] == pytest.approx(49.5)


def test_richardson_removes_linear_and_quadratic_error():
    h = 0.1 * 0.5 ** np.arange(5)
    value, err = richardson_limit(2.0 + 3 * h - 7 * h**2)
    assert value == pytest.approx(2.0, rel=1e-13) and err < 1e-12


@given(st.floats(1e-3, 10.0), st.floats(-5, 5))
def test_richardson_exact_for_polynomials(a, b):
    h = 0.5 ** np.arange(6)
    value, _ = richardson_limit(a + b * h + b * h**3)
    assert value == pytest.approx(a, rel=1e-10, abs=1e-10)
