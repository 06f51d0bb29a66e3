from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from ahls.funcspace import (
    CustomRadialDecreasing,
    HlsExtremal,
    Indicator,
    SConcaveSimplex,
    SimplexExponential,
    concavity_check,
    eval_function,
    lp_functional,
    rearrangement_level_error,
    schwarz_rearrangement,
    superlevel_volume,
)
from ahls.starbody import Ball, Box, CrossPolytope, Cube, Simplex


class TestEval:
    def test_indicator(self):
        assert eval_function(Indicator(Cube(2)), [0.5, 0.5]) == 1.0
        assert eval_function(Indicator(Cube(2)), [1.5, 0.5]) == 0.0

    def test_simplex_exponential(self):
        assert eval_function(SimplexExponential(1), [2.0]) == pytest.approx(math.exp(-2.0))
        assert eval_function(SimplexExponential(1), [-0.1]) == 0.0

    def test_hls_extremal(self):
        f = HlsExtremal(1, 0.5)
        assert eval_function(f, [1.0]) == pytest.approx(2.0 ** -0.75, rel=1e-15)

    def test_hls_extremal_high_alpha(self):
        f = HlsExtremal(1, 2.0)
        assert eval_function(f, [1.0]) == pytest.approx(2.0 ** -1.5, rel=1e-15)

    def test_sconcave(self):
        f = SConcaveSimplex(2, 0.5)
        assert eval_function(f, [0.25, 0.25]) == pytest.approx(0.5**2)

    def test_nonnegative(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(100, 2)) * 3
        for f in (HlsExtremal(2, 1.0), SimplexExponential(2), SConcaveSimplex(2, 1.0),
                  Indicator(CrossPolytope(2))):
            assert np.all(f(x) >= 0)

    def test_validation(self):
        with pytest.raises(ValueError):
            HlsExtremal(2, 2.0)
        with pytest.raises(ValueError):
            HlsExtremal(2, 1.0, lam=0.0)
        with pytest.raises(ValueError):
            SConcaveSimplex(2, 0.0)
        with pytest.raises(ValueError):
            Indicator(Cube(2), amplitude=-1.0)


class TestLp:
    @pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 4.0 / 3.0])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_cube(self, spec, p, n):
        assert lp_functional(Indicator(Cube(n)), p, spec) == pytest.approx(1.0, rel=1e-14)

    def test_simplex_exponential_l2(self, spec):
        assert lp_functional(SimplexExponential(1), 2.0, spec) ** 2 == pytest.approx(0.5, rel=1e-14)

    def test_hls_extremal_quad_oracle(self, spec):
        f = HlsExtremal(1, 0.5)
        p = 4.0 / 3.0
        ref, _ = quad(lambda x: (1 + x * x) ** (-0.75 * p), -np.inf, np.inf,
                      epsabs=0, epsrel=1e-13, limit=400)
        assert lp_functional(f, p, spec) == pytest.approx(ref ** (1 / p), rel=1e-8)

    def test_hls_extremal_2d_closed(self, spec):
        # int (1+|x|^2)^(-q) over R^2 = pi/(q-1)
        f = HlsExtremal(2, 1.0)
        assert lp_functional(f, 1.0, spec) == pytest.approx(math.pi / 0.5, rel=1e-12)

    def test_sconcave_l1(self, spec):
        # int_0^1 (1 - x)^2 dx
        f = SConcaveSimplex(1, 0.5)
        assert lp_functional(f, 1.0, spec) == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_p_below_one(self, spec):
        f = SimplexExponential(1)
        assert lp_functional(f, 0.5, spec) == pytest.approx(4.0, rel=1e-12)

    def test_divergent(self, spec):
        from ahls.errors import NonFinite

        with pytest.raises(NonFinite):
            lp_functional(HlsExtremal(1, 0.5), 0.5, spec)

    @pytest.mark.parametrize("c", [0.5, 3.0])
    @pytest.mark.parametrize("p", [0.8, 2.0])
    def test_scaling(self, spec, c, p):
        f = HlsExtremal(2, 1.0, lam=2.0)
        assert lp_functional(f.with_amplitude(c), p, spec) == pytest.approx(
            c * lp_functional(f, p, spec), rel=1e-13)

    def test_bad_p(self, spec):
        with pytest.raises(ValueError):
            lp_functional(SimplexExponential(1), 0.0, spec)


class TestRearrangement:
    def test_extremal_fixed(self, spec):
        f = HlsExtremal(2, 1.0)
        g = schwarz_rearrangement(f, spec)
        x = np.array([[0.3, -1.2], [2.0, 0.0]])
        np.testing.assert_allclose(g(x), f(x), rtol=1e-14)

    def test_interval(self, spec):
        g = schwarz_rearrangement(Indicator(Simplex(1)), spec)
        assert isinstance(g, Indicator)
        assert g.E.radius == pytest.approx(0.5)

    def test_square(self, spec):
        g = schwarz_rearrangement(Indicator(Cube(2)), spec)
        assert g.E.radius == pytest.approx(1 / math.sqrt(math.pi))

    @pytest.mark.parametrize("f", [SimplexExponential(2), SConcaveSimplex(2, 0.5),
                                   HlsExtremal(2, 1.0, matrix=[[2.0, 0.3], [0.0, 0.5]]),
                                   Indicator(CrossPolytope(3))])
    def test_level_volumes(self, spec, f):
        g = schwarz_rearrangement(f, spec)
        assert rearrangement_level_error(f, g) <= spec.rel_tol

    @pytest.mark.parametrize("f", [SimplexExponential(2), SConcaveSimplex(2, 1.0),
                                   HlsExtremal(2, 1.0, matrix=[[2.0, 0.3], [0.0, 0.5]])])
    def test_lp_preserved(self, spec, f):
        g = schwarz_rearrangement(f, spec)
        for p in (1.0, 2.0, 2 * 2 / (2 + 1.0)):
            assert lp_functional(g, p, spec) == pytest.approx(lp_functional(f, p, spec),
                                                              rel=10 * spec.rel_tol)

    def test_idempotent(self, spec):
        g = schwarz_rearrangement(SimplexExponential(2), spec)
        h = schwarz_rearrangement(g, spec)
        assert rearrangement_level_error(g, h) <= spec.rel_tol

    def test_superlevel_closed_form(self):
        f = SimplexExponential(2)
        # {e^{-||x||} >= t} = (log 1/t) Delta_2, area (log 1/t)^2 / 2
        t = np.array([0.5, 0.1])
        np.testing.assert_allclose(superlevel_volume(f, t), np.log(1 / t) ** 2 / 2, rtol=1e-13)
        assert superlevel_volume(f, np.array([2.0]))[0] == 0.0


class TestConcavity:
    def test_simplex_exponential(self, spec):
        assert concavity_check(SimplexExponential(2), 0.0, spec)

    def test_sconcave_simplex(self, spec):
        assert concavity_check(SConcaveSimplex(2, 1.0), 1.0, spec)

    def test_hls_not_logconcave(self, spec):
        assert not concavity_check(HlsExtremal(1, 0.5), 0.0, spec)

    def test_second_difference_oracle(self):
        # log f = -(n+alpha)/2 log(1+x^2) has positive second difference at |x| > 1
        h = 0.1
        lf = lambda x: -0.75 * math.log1p(x * x)  # noqa: E731
        assert lf(2 + h) + lf(2 - h) - 2 * lf(2) > 0

    def test_indicator_convex(self, spec):
        assert concavity_check(Indicator(Box((-1.0, 0.0), (1.0, 2.0))), 0.0, spec)

    def test_custom_profile(self, spec):
        f = CustomRadialDecreasing(2, lambda r: np.exp(-np.asarray(r) ** 2), name="gauss",
                                   log_concave=True, concavity=0.0)
        assert concavity_check(f, 0.0, spec)

    @given(st.floats(0.1, 3.0), st.floats(0.2, 5.0))
    def test_sconcave_is_r_concave_below_s(self, s, t):
        # s-concave implies r-concave for every r <= s
        assert concavity_check(SConcaveSimplex(2, s), min(s, t), pairs=500)


def test_ball_indicator_l2(spec):
    f = Indicator(Ball(2.0, 3))
    assert lp_functional(f, 2.0, spec) ** 2 == pytest.approx(8 * 4 * math.pi / 3, rel=1e-14)
