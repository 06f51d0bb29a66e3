"""Cross-module invariants under amplitude, dilation and translation."""

from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from ahls import (
    SimplexExponential,
    autocorrelation,
    hls_body,
    radial_mean_function_body,
    sphere_grid,
)

GRID = sphere_grid(2, 8)
alphas = st.sampled_from([0.5, 1.0, 2.0, 3.0])


@settings(max_examples=12)
@given(alphas, st.floats(0.2, 5.0))
def test_hls_body_amplitude_law(alpha, a):
    # G(a f) = a^2 G(f), so rho scales by a^(2/alpha)
    base = hls_body(SimplexExponential(2), alpha, GRID).radii
    scaled = hls_body(SimplexExponential(2, amplitude=a), alpha, GRID).radii
    assert np.allclose(scaled, a ** (2 / alpha) * base, rtol=1e-7)


@settings(max_examples=12)
@given(alphas, st.floats(0.3, 3.0))
def test_hls_body_dilation_law(alpha, lam):
    # f(x/lam) has G(y) = lam^n G(y/lam): rho scales by lam^((n + alpha)/alpha)
    base = hls_body(SimplexExponential(2), alpha, GRID).radii
    g = SimplexExponential(2, matrix=np.eye(2) / lam)
    assert np.allclose(hls_body(g, alpha, GRID).radii, lam ** ((2 + alpha) / alpha) * base,
                       rtol=1e-7)


@settings(max_examples=12)
@given(st.floats(-0.5, 2.0).filter(lambda a: abs(a) > 1e-3), st.floats(0.2, 5.0))
def test_radial_mean_body_amplitude_free(alpha, a):
    # R_alpha f is normalised by ||f||_2^2, so the amplitude drops out
    base = radial_mean_function_body(SimplexExponential(2), alpha, GRID).radii
    scaled = radial_mean_function_body(SimplexExponential(2, amplitude=a), alpha, GRID).radii
    assert np.allclose(scaled, base, rtol=1e-7)


@settings(max_examples=20)
@given(st.lists(st.floats(-3.0, 3.0), min_size=2, max_size=2),
       st.lists(st.floats(-2.0, 2.0), min_size=2, max_size=2))
def test_autocorrelation_translation_and_symmetry(x0, y):
    f = SimplexExponential(2)
    g = SimplexExponential(2, center=np.array(x0))
    v = autocorrelation(f, y)
    assert np.isclose(autocorrelation(g, y), v, rtol=1e-10, atol=1e-300)
    assert np.isclose(autocorrelation(f, -np.asarray(y)), v, rtol=1e-10, atol=1e-300)
