from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import beta

from ahls.autocorr import (
    autocorr_profile,
    autocorrelation,
    autocorrelation_mc,
    l2_difference,
    l2_difference_mc,
)
from ahls.funcspace import (
    HlsExtremal,
    Indicator,
    SConcaveSimplex,
    SimplexExponential,
    lp_functional,
)
from ahls.starbody import Ball, Box, CenteredEllipsoid, CrossPolytope, Cube, LinearImage, Simplex


def hls1d_oracle(alpha: float, t: float) -> float:
    q = (1 + alpha) / 2
    val, _ = quad(lambda x: (1 + x * x) ** -q * (1 + (x + t) ** 2) ** -q, -np.inf, np.inf,
                  epsabs=0, epsrel=1e-12, limit=500)
    return val


class TestClosedForms:
    def test_simplex_exponential_1d(self, spec):
        assert autocorrelation(SimplexExponential(1), [1.0], spec) == pytest.approx(
            math.exp(-1) / 2, rel=1e-14)

    def test_simplex_exponential_2d_profile(self, spec):
        prof = autocorr_profile(SimplexExponential(2), [1.0, 0.0], spec)
        t = np.array([0.0, 0.3, 2.0])
        np.testing.assert_allclose(prof(t), np.exp(-t) / 4, rtol=1e-14)
        assert prof.decay == "exponential"

    @pytest.mark.parametrize("y", [[0.3, -0.2, 0.1], [1.0, 1.0, 1.0]])
    def test_simplex_exponential_3d(self, spec, y):
        val = autocorrelation(SimplexExponential(3), y, spec)
        assert val == pytest.approx(math.exp(-np.abs(y).sum()) / 8, rel=1e-14)

    def test_zero_shift_is_l2(self, spec):
        for f in (HlsExtremal(2, 1.0), SimplexExponential(2), Indicator(Cube(2)),
                  SConcaveSimplex(2, 1.0)):
            assert autocorrelation(f, np.zeros(2), spec) == pytest.approx(
                lp_functional(f, 2.0, spec) ** 2, rel=spec.rel_tol)

    def test_interval(self, spec):
        assert autocorrelation(Indicator(Simplex(1)), [0.25], spec) == pytest.approx(0.75)

    def test_box_product(self, spec):
        f = Indicator(Box((-0.5, 0.0), (1.5, 1.0)))
        assert autocorrelation(f, [0.5, -0.25], spec) == pytest.approx(1.5 * 0.75, rel=1e-14)

    def test_disk_lens(self, spec):
        # overlap of two unit disks at distance d
        d = 0.7
        lens = 2 * math.acos(d / 2) - d / 2 * math.sqrt(4 - d * d)
        f = Indicator(Ball(1.0, 2))
        assert autocorrelation(f, [d / math.sqrt(2), d / math.sqrt(2)], spec) == pytest.approx(
            lens, rel=1e-10)

    def test_triangle_overlap(self, spec):
        # Delta_2 shifted by (t, 0): similar triangle of side 1 - t
        t = 0.3
        assert autocorrelation(Indicator(Simplex(2)), [t, 0.0], spec) == pytest.approx(
            (1 - t) ** 2 / 2, rel=1e-10)

    def test_crosspolytope_overlap(self, spec):
        # B_1^2 and its shift by (0.4, 0) overlap in a square of diagonal 1.6
        got = autocorrelation(Indicator(CrossPolytope(2)), [0.4, 0.0], spec)
        assert got == pytest.approx(2 * (1 - 0.2) ** 2, rel=1e-10)

    @pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0, 5.0])
    def test_hls_extremal_1d(self, spec, t):
        val = autocorrelation(HlsExtremal(1, 0.5), [t], spec)
        assert val == pytest.approx(hls1d_oracle(0.5, t), rel=1e-8)

    def test_hls_extremal_profile_shape(self, spec):
        prof = autocorr_profile(HlsExtremal(1, 0.5), [1.0], spec)
        g = prof(np.array([0.0, 1.0, 2.0]))
        assert np.all(g > 0) and np.all(np.diff(g) < 0)
        assert prof.decay == "polynomial" and prof.order == pytest.approx(1.5)
        assert autocorrelation(HlsExtremal(1, 0.5), [-2.0], spec) == pytest.approx(g[2])

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("n", [2, 3])
    def test_sconcave_hyperplane(self, spec, s, n):
        y = np.zeros(n)
        y[0], y[1] = 0.3, -0.3
        a = beta(n, 1 + 2 / s) / math.factorial(n - 1)
        expected = a * (1 - np.abs(y).sum() / 2) ** (n + 2 / s)
        assert autocorrelation(SConcaveSimplex(n, s), y, spec) == pytest.approx(expected, rel=1e-12)

    def test_sconcave_off_hyperplane_1d(self, spec):
        # n=1, s=1: int_0^{1-t} (1-x)(1-x-t) dx
        t = 0.4
        ref, _ = quad(lambda x: (1 - x) * (1 - x - t), 0, 1 - t)
        assert autocorrelation(SConcaveSimplex(1, 1.0), [t], spec) == pytest.approx(ref, rel=1e-10)

    def test_linear_image_scaling(self, spec):
        A = np.array([[2.0, 0.5], [0.0, 0.5]])
        f = Indicator(LinearImage(A, Cube(2)))
        y = np.array([0.3, 0.1])
        z = np.linalg.solve(A, y)
        expected = abs(np.linalg.det(A)) * (1 - abs(z[0])) * (1 - abs(z[1]))
        assert autocorrelation(f, y, spec) == pytest.approx(expected, rel=1e-12)

    def test_compact_profile(self, spec):
        prof = autocorr_profile(Indicator(Cube(3)), [1.0, 0.0, 0.0], spec)
        assert prof.decay == "compact" and prof.support == pytest.approx(1.0)
        assert prof(np.array([1.5]))[0] == 0.0

    def test_wrong_dimension(self, spec):
        with pytest.raises(ValueError):
            autocorrelation(SimplexExponential(2), [1.0, 0.0, 0.0], spec)


def hls2d_oracle(q: float, t: float) -> float:
    # polar coordinates about the midpoint of x and x + t e_1
    def inner(th):
        c, s = math.cos(th), math.sin(th)
        return quad(lambda r: r * ((1 + (r * c - t / 2) ** 2 + (r * s) ** 2)
                                   * (1 + (r * c + t / 2) ** 2 + (r * s) ** 2)) ** -q,
                    0, np.inf, epsabs=0, epsrel=1e-13, limit=400)[0]

    return 2 * quad(inner, 0, math.pi, epsabs=0, epsrel=1e-12, limit=400)[0]


# frozen from hls2d_oracle(1.25, t)
HLS2D_FROZEN = {1e-4: 2.0943950967832086, 1e-3: 2.0943945413946508, 4e-3: 2.094386126450905,
                0.02: 2.094170725865565, 0.1: 2.088799423061528, 1.0: 1.6478683625177757,
                10.0: 0.05475309091746515}


@pytest.mark.parametrize("t", sorted(HLS2D_FROZEN))
def test_hls_extremal_2d_small_and_large_shifts(spec, kernel_backend, t):
    got = autocorrelation(HlsExtremal(2, 0.5), [t, 0.0], spec)
    assert got == pytest.approx(HLS2D_FROZEN[t], rel=1e-12)


def test_hls2d_oracle_is_frozen():
    assert hls2d_oracle(1.25, 0.02) == pytest.approx(HLS2D_FROZEN[0.02], rel=1e-12)


class TestL2Difference:
    def test_zero(self, spec):
        assert l2_difference(HlsExtremal(2, 1.0), [0.0, 0.0], spec) == 0.0

    def test_interval(self, spec):
        assert l2_difference(Indicator(Simplex(1)), [0.25], spec) == pytest.approx(0.5)

    def test_simplex_exponential(self, spec):
        val = l2_difference(SimplexExponential(1), [1.0], spec)
        assert val == pytest.approx(1 - math.exp(-1), rel=1e-14)

    def test_small_shift_no_cancellation(self, spec):
        val = l2_difference(SimplexExponential(1), [1e-9], spec)
        assert val == pytest.approx(-math.expm1(-1e-9), rel=1e-9)

    @pytest.mark.parametrize("f,y", [(Indicator(Cube(2)), [0.3, 0.2]),
                                     (SimplexExponential(2), [0.5, -0.25]),
                                     (HlsExtremal(1, 0.5), [1.0])])
    def test_self_check(self, spec, f, y):
        l2_difference(f, y, spec.with_(mc_samples=200_000), self_check=True)

    def test_mc_agrees(self, spec):
        est, err = l2_difference_mc(Indicator(Ball(1.0, 2)), [0.5, 0.0], spec, samples=200_000)
        assert abs(est - l2_difference(Indicator(Ball(1.0, 2)), [0.5, 0.0], spec)) <= 4 * err


class TestMonteCarlo:
    @pytest.mark.parametrize("f,y", [
        (SimplexExponential(2), [0.5, 0.2]),
        (SimplexExponential(1), [1.0]),
        (Indicator(Cube(2)), [0.3, -0.4]),
        (SConcaveSimplex(2, 1.0), [0.2, -0.2]),
        (HlsExtremal(1, 0.5), [1.0]),
    ])
    def test_closed_form_vs_mc(self, spec, f, y):
        exact = autocorrelation(f, y, spec)
        est, err = autocorrelation_mc(f, y, spec, samples=10**6)
        assert abs(est - exact) <= 2e-2 * exact
        assert abs(est - exact) <= 5 * err

    @pytest.mark.parametrize("t", [0.0, 1.0, 2.0])
    def test_hls_profile_mc(self, spec, t):
        est, err = autocorrelation_mc(HlsExtremal(1, 0.5), [t], spec, samples=10**6)
        assert abs(est - hls1d_oracle(0.5, t)) <= 5 * err


class TestProperties:
    @given(st.floats(-2, 2), st.floats(-2, 2))
    def test_even_and_peak(self, a, b):
        y = np.array([a, b])
        for f in (SimplexExponential(2), Indicator(CenteredEllipsoid([[1.0, 0.4], [0.0, 0.7]])),
                  HlsExtremal(2, 0.5, matrix=[[1.0, 0.3], [0.0, 2.0]])):
            g = autocorrelation(f, y)
            assert g == pytest.approx(autocorrelation(f, -y), rel=1e-9, abs=1e-14)
            assert g <= autocorrelation(f, np.zeros(2)) * (1 + 1e-12)

    @given(st.floats(0.01, 3.0), st.floats(0.01, 3.0), st.floats(0, 2 * math.pi))
    def test_logconcave_propagation(self, t1, t2, th):
        # s = 0: the autocorrelation of a log-concave f is log-concave along rays
        f = SimplexExponential(2, matrix=[[1.0, 0.5], [0.0, 1.0]])
        prof = autocorr_profile(f, [math.cos(th), math.sin(th)])
        lg = np.log(prof(np.array([t1, t2, 0.5 * (t1 + t2)])))
        assert lg[2] >= 0.5 * (lg[0] + lg[1]) - 1e-9

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0, 2 * math.pi))
    def test_sconcave_propagation(self, u1, u2, th):
        # s = 1, n = 2: g^(1/4) is concave on the support
        f = SConcaveSimplex(2, 1.0)
        prof = autocorr_profile(f, [math.cos(th), math.sin(th)])
        sup = prof.support if math.isfinite(prof.support) else 2.0
        t = np.array([u1, u2, 0.5 * (u1 + u2)]) * sup * 0.999
        r = prof(t) ** 0.25
        assert r[2] >= 0.5 * (r[0] + r[1]) - 1e-7

    @given(st.floats(0.01, 0.99))
    def test_profile_bounds(self, t):
        prof = autocorr_profile(Indicator(Simplex(3)), np.ones(3) / math.sqrt(3))
        g = prof(np.array([0.0, t, min(1.0, t + 0.1)]))
        assert g[0] == pytest.approx(1 / 6)
        assert 0 <= g[2] <= g[1] <= g[0] * (1 + 1e-12)
