import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from casimir_multilayer.errors import DomainError
from casimir_multilayer.specialfn import (
    TILDE_LI2_MAX,
    oscillator_moment,
    polylog,
    tilde_li2,
    zeta4,
)

mp.mp.dps = 40

GRID = [-1.0, -0.999, -0.9, -0.6, -0.5, -0.3, -1e-8, 0.0, 1e-8, 0.1, 0.4999, 0.5, 0.5001,
        0.7, 0.9, 0.99, 0.999999, 1.0]


def mp_tilde_li2(z, terms):
    z = mp.mpf(z)
    return mp.fsum(
        mp.gamma(4 * m - 1) / mp.gamma(2 * m) ** 2 * z**m / m**3 for m in range(1, terms + 1)
    ) / 2


class TestPolylog:
    def test_li4_at_one_is_zeta4(self):
        assert polylog(4, 1.0) == pytest.approx(math.pi**4 / 90, rel=1e-13)
        assert zeta4() == math.pi**4 / 90

    @pytest.mark.parametrize("s", [2, 3, 4])
    @pytest.mark.parametrize("x", GRID)
    def test_against_high_precision(self, s, x):
        ref = float(mp.polylog(s, x))
        assert polylog(s, x) == pytest.approx(ref, rel=1e-12, abs=1e-300)

    def test_li4_half(self):
        assert polylog(4, 0.5) == pytest.approx(0.517479061673899386330758161899, rel=1e-14)

    def test_vectorized_shape(self):
        x = np.linspace(-1, 1, 12).reshape(3, 4)
        out = polylog(3, x)
        assert out.shape == (3, 4)
        assert out[1, 2] == polylog(3, x[1, 2])

    @given(st.floats(-1.0, 1.0))
    def test_monotone_and_bounded(self, x):
        lo, hi = polylog(4, -1.0), polylog(4, 1.0)
        assert lo <= polylog(4, x) <= hi
        assert polylog(4, x) <= polylog(4, min(1.0, x + 1e-3))

    @pytest.mark.parametrize("s, x", [(1, 0.5), (5, 0.5), (4, 1.0000001), (2, math.nan)])
    def test_domain(self, s, x):
        with pytest.raises(DomainError):
            polylog(s, x)


class TestTildeLi2:
    @pytest.mark.parametrize("z", [1e-6, 1e-3, 0.01, 0.0443, 0.03])
    def test_against_high_term_series(self, z):
        assert tilde_li2(z) == pytest.approx(float(mp_tilde_li2(z, 400)), rel=1e-12)

    def test_silicon_like_argument(self):
        # mpmath series to 400 terms at the si_like argument Omega**4 / (64 w2**2)
        ref = 0.0473616118662321590308712602758
        assert tilde_li2(0.044338577727393386) == pytest.approx(ref, rel=1e-12)
        assert tilde_li2(0.0443) == pytest.approx(0.0473170639253169066771195956077, rel=1e-12)

    def test_near_radius(self):
        z = TILDE_LI2_MAX
        n = 4000
        head = mp_tilde_li2(z, n)
        # remaining terms are below t_n * n / 2.5 (ratios < (m/(m+1))**3.5)
        t_n = mp.gamma(4 * n - 1) / mp.gamma(2 * n) ** 2 * mp.mpf(z) ** n / n**3 / 2
        val = tilde_li2(z)
        assert float(head) <= val * (1 + 1e-13)
        assert val <= float(head + t_n * n / mp.mpf(2.5)) * (1 + 1e-12)

    def test_zero(self):
        assert tilde_li2(0.0) == 0.0

    @given(st.floats(0.0, 0.06))
    def test_positive_and_above_linear_term(self, z):
        assert tilde_li2(z) >= z

    @given(st.floats(0.0, 0.06), st.floats(0.0, 0.06))
    def test_monotone(self, a, b):
        a, b = sorted((a, b))
        assert tilde_li2(a) <= tilde_li2(b)

    @pytest.mark.parametrize("z", [-1e-9, 1 / 16, 0.1, math.inf])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            tilde_li2(z)


def numeric_moment(m, a):
    """``2**-(2m+1) int_R dy (y**2 + a)**-2m`` by adaptive quadrature."""
    val, _ = quad(lambda y: (y * y + a) ** (-2 * m), 0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return 2 * val / 2 ** (2 * m + 1)


# Frozen values of the defining integral (scipy.quad, independent of the closed form).
FROZEN_MOMENTS = {
    (1, 1.0): 0.19634954084936207,
    (2, 1.0): 0.03067961575771282,
    (3, 1.0): 0.006040049352299712,
    (4, 1.0): 0.0012853081210994926,
    (5, 1.0): 0.0002845083080558772,
    (1, 4.0): 0.02454369260617026,
    (2, 4.0): 0.00023968449810713146,
    (3, 4.0): 2.949242847802594e-06,
    (4, 4.0): 3.9224491000350727e-08,
    (5, 4.0): 5.42656532394175e-10,
}


class TestOscillatorMoment:
    def test_first_moment(self):
        assert oscillator_moment(1, 0.5) == pytest.approx(math.pi / 16, rel=1e-15)
        assert numeric_moment(1, 1.0) == pytest.approx(math.pi / 16, rel=1e-10)

    @pytest.mark.parametrize("m, a", sorted(FROZEN_MOMENTS))
    def test_against_frozen_integrals(self, m, a):
        assert oscillator_moment(m, a - 0.5) == pytest.approx(FROZEN_MOMENTS[(m, a)], rel=1e-8)

    @given(st.integers(1, 5), st.floats(0.05, 20.0))
    def test_against_quadrature(self, m, a):
        assert oscillator_moment(m, a - 0.5) == pytest.approx(numeric_moment(m, a), rel=1e-8)

    @given(st.floats(0.1, 10.0))
    def test_moment_sum_builds_tilde_li2(self, alpha_sq):
        x = alpha_sq + 0.5
        total = sum(oscillator_moment(m, alpha_sq) / m**3 for m in range(1, 400))
        assert total == pytest.approx(4 * math.pi * math.sqrt(x) * tilde_li2(1 / (64 * x * x)),
                                      rel=1e-12)

    @pytest.mark.parametrize("m", [0, 1.5, True])
    def test_order_domain(self, m):
        with pytest.raises(DomainError):
            oscillator_moment(m, 1.0)

    def test_argument_domain(self):
        with pytest.raises(DomainError):
            oscillator_moment(1, -0.5)
