"""Autocorrelation G f(y) = int f(x) f(x + y) dx and the L^2 difference.

Closed forms cover the simplex exponential, boxes, balls, simplices and
their linear images, and the s-concave simplex power.  Radial profiles
(HLS extremals and custom radial functions) use a polar quadrature whose
inner loop is compiled with numba.  Other convex indicators go through
chord decompositions.  Anything else falls back to seeded Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import betainc, betaln, gammaln, roots_jacobi

from . import _kernels
from .chords import chord_decomposition
from .errors import NonFinite, SelfCheckFailed
from .funcspace import (
    CustomRadialDecreasing,
    HlsExtremal,
    Indicator,
    SConcaveSimplex,
    SimplexExponential,
    TestFunction,
    lp_functional,
)
from .numerics import QuadratureSpec, gauss_legendre, mc_expectation, sphere_area
from .starbody import Ball, Box, LinearImage, Simplex, StarBody

__all__ = [
    "AutocorrProfile",
    "autocorrelation",
    "autocorrelation_mc",
    "autocorr_profile",
    "l2_difference",
    "l2_difference_mc",
    "radial_autocorr",
]


@dataclass(frozen=True)
class AutocorrProfile:
    """t -> G f(t xi) along a unit direction, with decay metadata.

    ``decay`` is "exponential", "polynomial" (with ``order``) or "compact"
    (with ``support``).  ``diff`` returns g(t) - g(0) without cancellation
    when the family allows it.
    """

    direction: np.ndarray
    func: Callable[[np.ndarray], np.ndarray]
    g0: float
    decay: str
    order: float | None = None
    support: float = math.inf
    diff: Callable[[np.ndarray], np.ndarray] | None = None
    breaks: tuple = ()
    method: str = "closed-form"
    scale: float = 1.0  # natural length scale along the ray

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.asarray(self.func(np.abs(t)), dtype=float)

    def difference(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.diff is not None:
            d = np.asarray(self.diff(np.abs(t)), dtype=float)
        else:
            d = self(t) - self.g0
        return np.where(t == 0, 0.0, d)


def _polar(y: np.ndarray) -> tuple[float, np.ndarray | None]:
    """(|y|, y/|y|), scaled first so that tiny shifts keep a unit direction."""
    m = float(np.max(np.abs(y))) if y.size else 0.0
    if m == 0.0:
        return 0.0, None
    v = y / m
    nv = float(np.linalg.norm(v))
    return m * nv, v / nv


def _unit(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float).reshape(-1)
    nrm = np.linalg.norm(xi)
    if not abs(nrm - 1.0) <= 1e-10:
        raise ValueError("direction must be a unit vector")
    return xi / nrm


# ------------------------------------------------------------------ radial profiles


@lru_cache(maxsize=None)
def _polar_nodes(n: int, panels: int = 4, per: int = 16):
    """Angle nodes (weights include the sphere factor) and ray nodes."""
    x, w = gauss_legendre(per)
    if n == 1:
        th = np.array([0.0, np.pi])
        thw = np.array([1.0, 1.0])
    else:
        edges = np.linspace(0.0, np.pi, 2 * panels + 1)
        a, b = edges[:-1], edges[1:]
        th = (a[:, None] + (b - a)[:, None] * x[None, :]).ravel()
        thw = ((b - a)[:, None] * w[None, :]).ravel()
        thw = thw * sphere_area(n - 1) * np.sin(th) ** (n - 2)
    edges = np.linspace(0.0, 1.0, 9)
    vs = (edges[:-1, None] + np.diff(edges)[:, None] * x[None, :]).ravel()
    vw = (np.diff(edges)[:, None] * w[None, :]).ravel()
    for arr in (th, thw, vs, vw):
        arr.setflags(write=False)
    return th, thw, vs, vw


def radial_autocorr(f: TestFunction, taus) -> np.ndarray:
    """Autocorrelation of the unit radial profile h(x) = F(|x|) at distance tau.

    Used for families with Euclidean gauge: G f(y) = a^2 / |det M| G h(|M y|).
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    n = f.dim
    th, thw, vs, vw = _polar_nodes(n)
    if isinstance(f, HlsExtremal):
        return _kernels.qp_polar_autocorr(taus, f.q, 1.0, th, thw, vs, vw, float(n - 1))
    return _kernels.profile_polar_autocorr(taus, f.profile, th, thw, vs, vw, float(n - 1))


def _radial_profile(f: TestFunction, xi: np.ndarray, g0: float) -> AutocorrProfile:
    s = float(np.linalg.norm(f.matrix @ xi))
    c = f.amplitude**2 / f.det

    def func(t):
        t = np.asarray(t, dtype=float)
        return c * radial_autocorr(f, (t * s).ravel()).reshape(t.shape)

    if isinstance(f, HlsExtremal):
        return AutocorrProfile(xi, func, g0, "polynomial", order=f.decay_order,
                               method="polar-quadrature", scale=1.0 / s)
    support = f.support_radius
    if math.isfinite(support):
        sup = 2.0 * support / s
        return AutocorrProfile(xi, func, g0, "compact", support=sup, breaks=(sup,),
                               method="polar-quadrature", scale=1.0 / s)
    return AutocorrProfile(xi, func, g0, f.decay, order=f.decay_order,
                           method="polar-quadrature", scale=1.0 / s)


# ------------------------------------------------------------------ indicators


def _indicator_profile(E: StarBody, xi: np.ndarray, spec: QuadratureSpec):
    """(g, diff, support, method) for the autocorrelation of chi_E along xi."""
    n = E.dim
    if isinstance(E, LinearImage):
        eta = E.inverse @ xi
        s = float(np.linalg.norm(eta))
        g, d, sup, method = _indicator_profile(E.body, eta / s, spec)
        J = abs(E.det)
        return (lambda t: J * g(t * s)), (lambda t: J * d(t * s)), sup / s, method
    if isinstance(E, Box):
        L = E.lengths
        a = np.abs(xi) / L
        sup = float(1.0 / np.max(a))
        vol = float(np.prod(L))

        def logfac(t):
            t = np.asarray(t, dtype=float)
            u = np.minimum(t[..., None] * a, 1.0)
            with np.errstate(divide="ignore"):
                return np.sum(np.log1p(-u), axis=-1)

        g = lambda t: vol * np.exp(logfac(t))  # noqa: E731
        d = lambda t: vol * np.expm1(logfac(t))  # noqa: E731
        return g, d, sup, "closed-form box"
    if isinstance(E, Ball):
        r = E.radius
        vol = E.exact_volume
        h = 0.5 * (n + 1)

        def g(t):
            x = np.clip(np.asarray(t, dtype=float) / (2.0 * r), 0.0, 1.0) ** 2
            return vol * betainc(h, 0.5, 1.0 - x)

        def d(t):
            x = np.clip(np.asarray(t, dtype=float) / (2.0 * r), 0.0, 1.0) ** 2
            return -vol * betainc(0.5, h, x)

        return g, d, 2.0 * r, "closed-form ball"
    if isinstance(E, Simplex):
        m = max(float(np.sum(np.maximum(xi, 0))), float(np.sum(np.maximum(-xi, 0))))
        c = math.exp(-gammaln(n + 1))

        def lf(t):
            u = np.minimum(np.asarray(t, dtype=float) * m, 1.0)
            with np.errstate(divide="ignore"):
                return n * np.log1p(-u)

        return (lambda t: c * np.exp(lf(t))), (lambda t: c * np.expm1(lf(t))), 1.0 / m, \
            "closed-form simplex"
    if getattr(E, "convex", False) and hasattr(E, "chord_param"):
        cd = chord_decomposition(E, xi, spec)

        def g(t):
            t = np.asarray(t, dtype=float)
            return cd.autocorr(t.ravel()).reshape(t.shape)

        def d(t):
            t = np.asarray(t, dtype=float)
            return cd.autocorr_diff(t.ravel()).reshape(t.shape)

        return g, d, cd.max_chord, f"chords ({cd.method})"
    return None


# ------------------------------------------------------------------ s-concave simplex


def _sconcave_general(f: SConcaveSimplex, y: np.ndarray, nodes: int = 48) -> np.ndarray:
    """The one-dimensional reduction valid for every shift y.

    G f(y) = a^2/(n-1)! int_0^inf r^(n-1) d(r + |y_-|_1) d(r + |y_+|_1) dr with
    d(u) = (1 - u)_+^(1/s).  With m the larger and l the smaller of the two
    norms, substitute r = (1 - m) v and integrate the remaining smooth factor
    against the Jacobi weight v^(n-1) (1 - v)^(1/s).
    """
    n, s = f.dim, f.s
    y = np.atleast_2d(y)
    yp = np.sum(np.maximum(y, 0.0), axis=1)
    ym = np.sum(np.maximum(-y, 0.0), axis=1)
    m = np.maximum(yp, ym)
    l = np.minimum(yp, ym)
    x, w = roots_jacobi(nodes, 1.0 / s, n - 1.0)  # weight (1-x)^(1/s) (1+x)^(n-1)
    v = 0.5 * (x + 1.0)
    w = w * 0.5 ** (n + 1.0 / s)
    one_m = np.maximum(1.0 - m, 0.0)
    inner = np.maximum(one_m[:, None] * (1.0 - v[None, :]) + (m - l)[:, None], 0.0) ** (1.0 / s)
    integral = one_m ** (n + 1.0 / s) * (inner @ w)
    return f.amplitude**2 * np.exp(-gammaln(n)) * np.where(m < 1.0, integral, 0.0)


def _sconcave_hyperplane_const(f: SConcaveSimplex) -> float:
    n, s = f.dim, f.s
    return float(np.exp(betaln(n, 1.0 + 2.0 / s) - gammaln(n)))


def _on_hyperplane(y: np.ndarray) -> bool:
    return abs(float(np.sum(y))) <= 1e-13 * max(1.0, float(np.sum(np.abs(y))))


# ------------------------------------------------------------------ public API


def _l2sq(f: TestFunction) -> float:
    return lp_functional(f, 2.0) ** 2


def autocorr_profile(f: TestFunction, xi, spec: QuadratureSpec | None = None) -> AutocorrProfile:
    """Package t -> G f(t xi) with decay class and an accurate g - g(0)."""
    spec = spec or QuadratureSpec()
    xi = _unit(xi)
    if xi.size != f.dim:
        raise ValueError("direction has the wrong dimension")
    g0 = _l2sq(f)
    n = f.dim

    if isinstance(f, SimplexExponential):
        rate = float(np.sum(np.abs(f.matrix @ xi)))
        c = f.amplitude**2 / (f.det * 2.0**n)
        return AutocorrProfile(
            xi, lambda t: c * np.exp(-rate * np.asarray(t, float)), g0, "exponential",
            diff=lambda t: c * np.expm1(-rate * np.asarray(t, float)), scale=1.0 / rate,
        )

    if isinstance(f, Indicator):
        got = _indicator_profile(f.E, xi, spec)
        if got is not None:
            g, d, sup, method = got
            a2 = f.amplitude**2
            return AutocorrProfile(
                xi, lambda t: a2 * g(t), g0, "compact", support=float(sup),
                diff=lambda t: a2 * d(t), breaks=(float(sup),), method=method, scale=float(sup),
            )

    if isinstance(f, SConcaveSimplex):
        if _on_hyperplane(xi):
            a = _sconcave_hyperplane_const(f) * f.amplitude**2
            k = n + 2.0 / f.s
            half = 0.5 * float(np.sum(np.abs(xi)))

            def lf(t):
                u = np.minimum(np.asarray(t, float) * half, 1.0)
                with np.errstate(divide="ignore"):
                    return k * np.log1p(-u)

            return AutocorrProfile(
                xi, lambda t: a * np.exp(lf(t)), g0, "compact", support=1.0 / half,
                diff=lambda t: a * np.expm1(lf(t)), breaks=(1.0 / half,),
                method="closed-form hyperplane", scale=1.0 / half,
            )
        m = max(float(np.sum(np.maximum(xi, 0))), float(np.sum(np.maximum(-xi, 0))))

        def func(t):
            t = np.asarray(t, dtype=float)
            return _sconcave_general(f, t.reshape(-1, 1) * xi[None, :]).reshape(t.shape)

        return AutocorrProfile(xi, func, g0, "compact", support=1.0 / m, breaks=(1.0 / m,),
                               method="gauss-jacobi reduction", scale=1.0 / m)

    if isinstance(f, (HlsExtremal, CustomRadialDecreasing)):
        return _radial_profile(f, xi, g0)

    # Monte Carlo fallback, one fixed stream per direction
    def func(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([autocorrelation_mc(f, tk * xi, spec)[0] for tk in t.ravel()]).reshape(t.shape)

    support = math.inf
    if isinstance(f, Indicator):
        support = 2.0 * f.E.bounding_radius()
    return AutocorrProfile(xi, func, g0, "compact" if math.isfinite(support) else "exponential",
                           support=support, method="monte-carlo")


def autocorrelation(f: TestFunction, y, spec: QuadratureSpec | None = None) -> float:
    """G f(y) = int f(x) f(x + y) dx."""
    spec = spec or QuadratureSpec()
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != f.dim:
        raise ValueError("shift has the wrong dimension")
    t, xi = _polar(y)
    if t == 0.0:
        return _l2sq(f)
    if isinstance(f, SConcaveSimplex) and not _on_hyperplane(y):
        val = float(_sconcave_general(f, y)[0])
    else:
        val = float(autocorr_profile(f, xi, spec)(np.array([t]))[0])
    if not math.isfinite(val):
        raise NonFinite("autocorrelation is not finite")
    return val


def autocorrelation_mc(
    f: TestFunction, y, spec: QuadratureSpec | None = None, *, samples: int | None = None,
    stream: int = 0,
) -> tuple[float, float]:
    """Monte Carlo estimate (value, stderr) with X drawn from f / ||f||_1."""
    spec = spec or QuadratureSpec()
    y = np.asarray(y, dtype=float).reshape(-1)
    l1 = lp_functional(f, 1.0)
    mean, err = mc_expectation(
        lambda rng, k: f.sample(rng, k, 1.0), lambda x: f(x + y), spec,
        stream=stream, samples=samples,
    )
    return l1 * mean, l1 * err


def l2_difference(
    f: TestFunction, y, spec: QuadratureSpec | None = None, *, self_check: bool = False
) -> float:
    """int |f(x + y) - f(x)|^2 dx = 2 (G f(0) - G f(y))."""
    spec = spec or QuadratureSpec()
    y = np.asarray(y, dtype=float).reshape(-1)
    t, xi = _polar(y)
    if t == 0.0:
        return 0.0
    if isinstance(f, SConcaveSimplex) and not _on_hyperplane(y):
        val = 2.0 * (_l2sq(f) - float(_sconcave_general(f, y)[0]))
    else:
        prof = autocorr_profile(f, xi, spec)
        val = -2.0 * float(prof.difference(np.array([t]))[0])
    if self_check:
        est, err = l2_difference_mc(f, y, spec)
        if abs(est - val) > 3.0 * err + 1e-12 * max(abs(val), 1.0):
            raise SelfCheckFailed(
                f"L2 difference {val:.6g} disagrees with Monte Carlo {est:.6g} +- {err:.2g}"
            )
    return val


def l2_difference_mc(
    f: TestFunction, y, spec: QuadratureSpec | None = None, *, samples: int | None = None
) -> tuple[float, float]:
    """Direct Monte Carlo of int |f(x+y) - f(x)|^2 from the mixture (f + f(.+y))/2."""
    spec = spec or QuadratureSpec()
    y = np.asarray(y, dtype=float).reshape(-1)
    l1 = lp_functional(f, 1.0)

    def sampler(rng, k):
        pts = f.sample(rng, k, 1.0)
        flip = rng.random(k) < 0.5
        return np.where(flip[:, None], pts - y, pts)

    def integrand(x):
        a = f(x)
        b = f(x + y)
        dens = 0.5 * (a + b) / l1
        return np.where(dens > 0, (b - a) ** 2 / np.where(dens > 0, dens, 1.0), 0.0)

    return mc_expectation(sampler, integrand, spec, stream=1, samples=samples)
