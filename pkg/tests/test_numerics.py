from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import beta, gamma

from ahls.errors import DivergentIntegral, NonConvergent
from ahls.numerics import (
    QuadratureSpec,
    SphereGrid,
    adaptive_gl,
    gauss_legendre,
    integrate_powerweight,
    make_rng,
    mc_expectation,
    powerweight_quad,
    sphere_area,
    sphere_grid,
    unit_ball_volume,
)


def exp_neg(t):
    return np.exp(-np.asarray(t, dtype=float))


class TestQuadratureSpec:
    def test_defaults_valid(self):
        s = QuadratureSpec()
        assert s.rel_tol > 0 and s.abs_tol > 0

    @pytest.mark.parametrize("field,value", [("rel_tol", 0.0), ("abs_tol", -1.0),
                                             ("radial_nodes", 0), ("mc_samples", 0),
                                             ("seed", -1), ("tail_cut", 0.0)])
    def test_rejects_bad_values(self, field, value):
        with pytest.raises(ValueError):
            QuadratureSpec(**{field: value})

    def test_with_and_dict(self):
        s = QuadratureSpec().with_(rel_tol=1e-8)
        assert s.rel_tol == 1e-8
        assert QuadratureSpec(**s.to_dict()) == s


class TestPowerweight:
    def test_gamma_two(self, spec):
        assert integrate_powerweight(exp_neg, 2.0, None, spec) == pytest.approx(1.0, rel=spec.rel_tol)

    def test_gamma_continuation(self, spec):
        val = integrate_powerweight(exp_neg, -0.5, 1.0, spec)
        assert val == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-9)

    def test_beta_hat(self, spec):
        val = integrate_powerweight(lambda t: np.maximum(1.0 - t, 0.0), 0.5, None, spec,
                                    breaks=(1.0,))
        assert val == pytest.approx(4.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("a", [0.25, 0.5, 1.0, 2.5, -0.75, -0.5, -0.25])
    def test_gamma_grid(self, spec, a):
        val = integrate_powerweight(exp_neg, a, 1.0 if a < 0 else None, spec)
        assert val == pytest.approx(gamma(a), rel=spec.rel_tol)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("a", [-0.5, 0.5, 1.5])
    def test_beta_grid(self, spec, s, a):
        def g(t):
            return np.maximum(1.0 - s * np.asarray(t), 0.0) ** (1.0 / s)

        val = integrate_powerweight(g, a, 1.0 if a < 0 else None, spec, breaks=(1.0 / s,))
        assert val == pytest.approx(s ** (-a) * beta(a, 1.0 + 1.0 / s), rel=spec.rel_tol)

    def test_near_minus_one(self, spec):
        val = integrate_powerweight(exp_neg, -0.99, 1.0, spec)
        assert val == pytest.approx(gamma(-0.99), rel=1e-8)

    def test_gdiff_is_used(self, spec):
        val = integrate_powerweight(exp_neg, -0.9, 1.0, spec,
                                    gdiff=lambda t: np.expm1(-np.asarray(t)))
        assert val == pytest.approx(gamma(-0.9), rel=1e-9)

    def test_divergent_growth(self, spec):
        with pytest.raises(DivergentIntegral):
            integrate_powerweight(lambda t: np.ones_like(t), 0.5, None, spec)

    def test_requires_g0(self, spec):
        with pytest.raises(ValueError):
            integrate_powerweight(exp_neg, -0.5, None, spec)

    @pytest.mark.parametrize("a", [0.0, -1.0, -2.0])
    def test_alpha_domain(self, spec, a):
        with pytest.raises(ValueError):
            integrate_powerweight(exp_neg, a, 1.0, spec)

    def test_error_estimate_reported(self, spec):
        res = powerweight_quad(exp_neg, 1.5, None, spec)
        assert res.error <= 10 * spec.rel_tol * abs(res.value)
        assert res.evaluations > 0

    @given(a=st.floats(-0.9, 3.0).filter(lambda a: abs(a) > 0.05),
           t0=st.floats(0.3, 3.0))
    def test_split_invariance(self, a, t0):
        spec = QuadratureSpec()
        g0 = 1.0 if a < 0 else None
        ref = integrate_powerweight(exp_neg, a, g0, spec, split=1.0)
        val = integrate_powerweight(exp_neg, a, g0, spec, split=t0)
        assert abs(val - ref) <= 10 * spec.rel_tol * abs(ref)


class TestAdaptive:
    def test_polynomial_exact(self):
        res = adaptive_gl(lambda x: x**5, 0.0, 2.0)
        assert res.value == pytest.approx(64.0 / 6.0, rel=1e-14)

    def test_kink_with_break(self):
        res = adaptive_gl(lambda x: np.abs(x - 0.3), 0.0, 1.0, breaks=[0.3])
        assert res.value == pytest.approx(0.5 * (0.09 + 0.49), rel=1e-14)

    def test_stall_raises(self):
        with pytest.raises(NonConvergent):
            adaptive_gl(lambda x: np.sign(np.sin(1.0 / np.maximum(x, 1e-300))), 0.0, 1.0,
                        max_panels=8, rel_tol=1e-12)

    def test_gauss_legendre_unit_interval(self):
        x, w = gauss_legendre(10)
        assert np.all((x > 0) & (x < 1))
        assert w.sum() == pytest.approx(1.0, rel=1e-15)


class TestSphere:
    def test_n1(self):
        g = sphere_grid(1, 17)
        assert g.directions.tolist() == [[1.0], [-1.0]]
        assert g.weights.tolist() == [1.0, 1.0]

    def test_n2_four(self):
        g = sphere_grid(2, 4)
        assert len(g) == 4
        np.testing.assert_allclose(g.weights, np.pi / 2)
        assert g.weights.sum() == pytest.approx(2 * np.pi)

    @pytest.mark.parametrize("res", [8, 32, 64])
    def test_n3_area(self, res):
        g = sphere_grid(3, res)
        assert g.integrate(np.ones(len(g))) == pytest.approx(4 * np.pi, rel=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_unit_directions_and_weight_sum(self, n):
        g = sphere_grid(n, 16)
        np.testing.assert_allclose(np.linalg.norm(g.directions, axis=1), 1.0, atol=1e-12)
        assert g.weights.sum() == pytest.approx(sphere_area(n), rel=1e-6)

    def test_n3_integrates_polynomials(self):
        g = sphere_grid(3, 64)
        z = g.directions[:, 2]
        assert g.integrate(z**2) == pytest.approx(4 * np.pi / 3, rel=1e-12)

    def test_ball_volumes(self):
        assert unit_ball_volume(2) == pytest.approx(np.pi)
        assert unit_ball_volume(3) == pytest.approx(4 * np.pi / 3)
        for n in range(1, 7):
            assert sphere_area(n) == pytest.approx(n * unit_ball_volume(n))

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            SphereGrid(2, np.zeros((3, 3)), np.ones(3))
        with pytest.raises(ValueError):
            sphere_grid(0, 4)


class TestMonteCarlo:
    def test_constant_one(self, spec):
        m, e = mc_expectation(lambda rng, k: rng.random((k, 1)), lambda x: np.ones(len(x)), spec)
        assert (m, e) == (1.0, 0.0)

    def test_constant_zero(self, spec):
        m, e = mc_expectation(lambda rng, k: rng.random((k, 1)), lambda x: np.zeros(len(x)), spec)
        assert (m, e) == (0.0, 0.0)

    def test_second_moment(self, spec):
        m, e = mc_expectation(lambda rng, k: rng.random(k), lambda x: x**2, spec, samples=10**6)
        assert abs(m - 1.0 / 3.0) <= 3 * e

    def test_deterministic(self, spec):
        a = mc_expectation(lambda rng, k: rng.random(k), lambda x: x, spec, stream=4)
        b = mc_expectation(lambda rng, k: rng.random(k), lambda x: x, spec, stream=4)
        assert a == b

    def test_streams_independent(self):
        x = make_rng(1, 0).random(4)
        y = make_rng(1, 1).random(4)
        assert not np.array_equal(x, y)
