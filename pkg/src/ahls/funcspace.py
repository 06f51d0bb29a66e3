"""Test-function families, L^p functionals and symmetric decreasing rearrangement.

Every family here has the form ``f(x) = F(||M (x - x0)||_K)`` with a
non-increasing profile ``F`` on [0, inf), a star body ``K`` and an
invertible matrix ``M``.  That shape gives closed forms for L^p integrals
(polar coordinates with respect to K), exact rearrangements and exact
samplers for densities proportional to ``f**p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import betaln, gammaln

from .errors import DivergentIntegral, NonFinite
from .numerics import QuadratureSpec, integrate_powerweight, make_rng, unit_ball_volume
from .starbody import Ball, Simplex, StarBody, volume

__all__ = [
    "TestFunction",
    "HlsExtremal",
    "SimplexExponential",
    "SConcaveSimplex",
    "Indicator",
    "CustomRadialDecreasing",
    "eval_function",
    "lp_functional",
    "schwarz_rearrangement",
    "superlevel_volume",
    "rearrangement_level_error",
    "concavity_check",
]


def _matrix(matrix, n: int, scale: float = 1.0) -> np.ndarray:
    M = np.eye(n) * scale if matrix is None else np.array(matrix, dtype=float, copy=True)
    M = np.atleast_2d(M)
    if M.shape != (n, n):
        raise ValueError(f"matrix must be {n}x{n}")
    if not abs(np.linalg.det(M)) > 0:
        raise ValueError("matrix must be invertible")
    M.setflags(write=False)
    return M


def _vector(x0, n: int) -> np.ndarray:
    v = np.zeros(n) if x0 is None else np.array(x0, dtype=float, copy=True).reshape(n)
    v.setflags(write=False)
    return v


class TestFunction:
    """A non-negative function ``a * F(||M (x - x0)||_K)``."""

    __test__ = False  # not a pytest class

    dim: int
    amplitude: float
    matrix: np.ndarray
    center: np.ndarray
    log_concave: bool = False
    concavity: float | None = None  # largest s with f s-concave (inf for indicators)

    # -- profile interface, overridden by families
    @property
    def body(self) -> StarBody:
        raise NotImplementedError

    def profile(self, r: np.ndarray) -> np.ndarray:
        """Unit-amplitude profile F(r)."""
        raise NotImplementedError

    def profile_moment(self, p: float) -> float:
        """Integral of r^(n-1) F(r)^p over (0, inf)."""
        n = self.dim
        try:
            return integrate_powerweight(lambda r: self.profile(r) ** p, float(n))
        except DivergentIntegral:
            return math.inf

    def radius_sampler(self, rng: np.random.Generator, size: int, p: float) -> np.ndarray:
        """Radii with density proportional to r^(n-1) F(r)^p."""
        raise NotImplementedError

    def level_radius(self, t: np.ndarray) -> np.ndarray:
        """sup{r : F(r) >= t} for 0 < t <= 1 (F is non-increasing)."""
        raise NotImplementedError

    # -- derived quantities
    @property
    def det(self) -> float:
        return abs(float(np.linalg.det(self.matrix)))

    @property
    def body_volume(self) -> float:
        v = self.body.exact_volume
        return float(v) if v is not None else volume(self.body)

    @property
    def is_radial(self) -> bool:
        """Radially symmetric about the origin."""
        if not isinstance(self.body, Ball) or np.any(self.center != 0):
            return False
        M = self.matrix
        return bool(np.allclose(M, M[0, 0] * np.eye(self.dim), rtol=1e-14, atol=0.0))

    @property
    def peak(self) -> float:
        return float(self.amplitude * self.profile(np.array([0.0]))[0])

    def gauge_of(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and x.ndim == 0:
            x = x.reshape(1)
        return self.body.gauge((x - self.center) @ self.matrix.T)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.dim,):
            if self.dim == 1:
                x = x[..., None]
            else:
                raise ValueError(f"points must have trailing dimension {self.dim}")
        g = self.gauge_of(x)
        with np.errstate(invalid="ignore", over="ignore"):
            val = self.amplitude * self.profile(g)
        return np.where(np.isinf(g), 0.0, val)

    def sample(self, rng: np.random.Generator, size: int, p: float = 1.0) -> np.ndarray:
        """Points with density proportional to f**p."""
        w = self.body.sample_uniform(rng, size)
        gw = self.body.gauge(w)
        gw = np.where(gw > 0, gw, 1.0)
        r = self.radius_sampler(rng, size, p)
        z = w / gw[:, None] * r[:, None]
        return self.center + z @ np.linalg.inv(self.matrix).T

    def with_amplitude(self, a: float) -> "TestFunction":
        raise NotImplementedError

    def describe(self) -> dict:
        return {"family": type(self).__name__, "n": self.dim}


# ------------------------------------------------------------------ families


@dataclass(frozen=True, eq=False)
class HlsExtremal(TestFunction):
    """a (1 + |M (x - x0)|^2)^(-(n + alpha)/2).

    For 0 < alpha < n these are the extremals of the HLS inequality.  For
    alpha > n the same exponent -(n + alpha)/2 = -n/p with p = 2n/(n + alpha)
    gives the extremals of the reversed inequality.  ``lam`` sets
    M = sqrt(lam) I when no matrix is given.
    """

    dim: int
    alpha: float
    amplitude: float = 1.0
    lam: float = 1.0
    matrix: np.ndarray | None = None
    center: np.ndarray | None = None

    def __post_init__(self):
        if not self.alpha > 0 or self.alpha == self.dim:
            raise ValueError("alpha must be positive and different from n")
        if not self.lam > 0 or self.amplitude < 0:
            raise ValueError("need lam > 0 and a >= 0")
        object.__setattr__(self, "matrix", _matrix(self.matrix, self.dim, math.sqrt(self.lam)))
        object.__setattr__(self, "center", _vector(self.center, self.dim))

    @property
    def q(self) -> float:
        return 0.5 * (self.dim + self.alpha)

    @property
    def body(self) -> StarBody:
        return Ball(1.0, self.dim)

    @property
    def decay_order(self) -> float:
        """Autocorrelation decays like |y|^(-decay_order)."""
        return 2.0 * self.q

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        return (1.0 + r * r) ** (-self.q)

    def profile_moment(self, p):
        b = self.q * p - 0.5 * self.dim
        if not b > 0:
            return math.inf
        return 0.5 * math.exp(betaln(0.5 * self.dim, b))

    def radius_sampler(self, rng, size, p):
        b = self.q * p - 0.5 * self.dim
        v = np.minimum(rng.beta(0.5 * self.dim, b, size), 1.0 - 2.0**-52)
        return np.sqrt(v / (1.0 - v))

    def level_radius(self, t):
        t = np.asarray(t, dtype=float)
        return np.sqrt(np.maximum(t ** (-1.0 / self.q) - 1.0, 0.0))

    def with_amplitude(self, a):
        return HlsExtremal(self.dim, self.alpha, a, matrix=self.matrix, center=self.center)

    def describe(self):
        return {
            "family": "HlsExtremal", "n": self.dim, "alpha": self.alpha, "a": self.amplitude,
            "matrix": self.matrix.tolist(), "x0": self.center.tolist(),
        }


@dataclass(frozen=True, eq=False)
class SimplexExponential(TestFunction):
    """a exp(-||x - x0||_Delta) with Delta = M^{-1} Delta_n (vertex at 0)."""

    dim: int
    amplitude: float = 1.0
    matrix: np.ndarray | None = None
    center: np.ndarray | None = None
    log_concave = True
    concavity = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        object.__setattr__(self, "matrix", _matrix(self.matrix, self.dim))
        object.__setattr__(self, "center", _vector(self.center, self.dim))

    @property
    def body(self) -> StarBody:
        return Simplex(self.dim)

    def profile(self, r):
        return np.exp(-np.asarray(r, dtype=float))

    def profile_moment(self, p):
        return math.exp(gammaln(self.dim)) / p**self.dim

    def radius_sampler(self, rng, size, p):
        return rng.gamma(self.dim, 1.0 / p, size)

    def level_radius(self, t):
        return np.maximum(-np.log(np.asarray(t, dtype=float)), 0.0)

    def with_amplitude(self, a):
        return SimplexExponential(self.dim, a, self.matrix, self.center)

    def describe(self):
        return {
            "family": "SimplexExponential", "n": self.dim, "a": self.amplitude,
            "matrix": self.matrix.tolist(), "x0": self.center.tolist(),
        }


@dataclass(frozen=True, eq=False)
class SConcaveSimplex(TestFunction):
    """a (1 - ||x - x0||_{Delta_n})_+^(1/s)."""

    dim: int
    s: float
    amplitude: float = 1.0
    center: np.ndarray | None = None
    log_concave = True

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("s must be positive")
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        object.__setattr__(self, "matrix", _matrix(None, self.dim))
        object.__setattr__(self, "center", _vector(self.center, self.dim))

    @property
    def concavity(self) -> float:
        return self.s

    @property
    def body(self) -> StarBody:
        return Simplex(self.dim)

    @property
    def support_radius(self) -> float:
        return 1.0

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        return np.maximum(1.0 - r, 0.0) ** (1.0 / self.s)

    def profile_moment(self, p):
        return math.exp(betaln(self.dim, 1.0 + p / self.s))

    def radius_sampler(self, rng, size, p):
        return rng.beta(self.dim, 1.0 + p / self.s, size)

    def level_radius(self, t):
        t = np.asarray(t, dtype=float)
        return np.maximum(1.0 - t**self.s, 0.0)

    def with_amplitude(self, a):
        return SConcaveSimplex(self.dim, self.s, a, self.center)

    def describe(self):
        return {"family": "SConcaveSimplex", "n": self.dim, "s": self.s, "a": self.amplitude,
                "x0": self.center.tolist()}


@dataclass(frozen=True, eq=False)
class Indicator(TestFunction):
    """a times the indicator of a star body E."""

    E: StarBody
    amplitude: float = 1.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        object.__setattr__(self, "matrix", _matrix(None, self.E.dim))
        object.__setattr__(self, "center", _vector(None, self.E.dim))

    @property
    def dim(self) -> int:
        return self.E.dim

    @property
    def log_concave(self) -> bool:
        return bool(self.E.convex)

    @property
    def concavity(self) -> float | None:
        return math.inf if self.E.convex else None

    @property
    def body(self) -> StarBody:
        return self.E

    def profile(self, r):
        return (np.asarray(r, dtype=float) <= 1.0).astype(float)

    def profile_moment(self, p):
        return 1.0 / self.dim

    def radius_sampler(self, rng, size, p):
        return rng.random(size) ** (1.0 / self.dim)

    def level_radius(self, t):
        return np.where(np.asarray(t, dtype=float) <= 1.0, 1.0, 0.0)

    def sample(self, rng, size, p=1.0):
        return self.E.sample_uniform(rng, size)

    def with_amplitude(self, a):
        return Indicator(self.E, a)

    def describe(self):
        return {"family": "Indicator", "n": self.dim, "body": self.E.describe(), "a": self.amplitude}


@dataclass(frozen=True, eq=False)
class CustomRadialDecreasing(TestFunction):
    """a F(|x| / scale) for a non-increasing vectorised profile F.

    ``support`` is the radius beyond which F vanishes (inf if never);
    ``decay_order`` declares F(r) = O(r^(-decay_order/2)) for polynomial
    profiles so that autocorrelation decay metadata stays available.
    """

    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    amplitude: float = 1.0
    scale: float = 1.0
    support: float = math.inf
    decay: str = "exponential"
    decay_order: float | None = None
    name: str = "custom"
    log_concave: bool = False
    concavity: float | None = None

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "matrix", _matrix(None, self.dim, 1.0 / self.scale))
        object.__setattr__(self, "center", _vector(None, self.dim))

    @property
    def body(self) -> StarBody:
        return Ball(1.0, self.dim)

    @property
    def support_radius(self) -> float:
        return float(self.support)

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.support, np.asarray(self.func(r), dtype=float), 0.0)

    def profile_moment(self, p):
        n = self.dim
        h = lambda r: self.profile(r) ** p  # noqa: E731
        spec = QuadratureSpec(rel_tol=1e-11)
        try:
            if math.isfinite(self.support):
                return integrate_powerweight(
                    h, float(n), spec=spec, split=self.support, breaks=(self.support,)
                )
            return integrate_powerweight(h, float(n), spec=spec)
        except DivergentIntegral:
            return math.inf

    def _cdf_table(self, p: float):
        top = self.support if math.isfinite(self.support) else None
        if top is None:
            r = np.concatenate([[0.0], np.geomspace(1e-6, 1e6, 4000)])
        else:
            r = np.linspace(0.0, top, 4001)
        dens = r ** (self.dim - 1) * self.profile(r) ** p
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(r))])
        return r, cdf / cdf[-1]

    def radius_sampler(self, rng, size, p):
        r, cdf = self._cdf_table(p)
        return np.interp(rng.random(size), cdf, r)

    def level_radius(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        hi = self.support if math.isfinite(self.support) else 1.0
        while math.isinf(self.support) and self.profile(np.array([hi]))[0] > np.min(t):
            hi *= 2.0
            if hi > 1e12:
                break
        lo = np.zeros_like(t)
        up = np.full_like(t, hi)
        for _ in range(80):
            mid = 0.5 * (lo + up)
            inside = self.profile(mid) >= t
            lo = np.where(inside, mid, lo)
            up = np.where(inside, up, mid)
        return lo

    def with_amplitude(self, a):
        return CustomRadialDecreasing(
            self.dim, self.func, a, self.scale, self.support, self.decay, self.decay_order,
            self.name, self.log_concave, self.concavity,
        )

    def describe(self):
        return {"family": "CustomRadialDecreasing", "n": self.dim, "name": self.name,
                "a": self.amplitude, "scale": self.scale}


# ------------------------------------------------------------------ operations


def eval_function(f: TestFunction, x) -> float | np.ndarray:
    v = f(x)
    return float(v) if np.ndim(v) == 0 else v


def lp_functional(f: TestFunction, p: float, spec: QuadratureSpec | None = None) -> float:
    """(int f^p)^(1/p); for p < 1 this is a functional, not a norm."""
    if not p > 0:
        raise ValueError("p must be positive")
    if f.amplitude == 0:
        return 0.0
    moment = f.profile_moment(float(p))
    if not math.isfinite(moment):
        raise NonFinite(f"integral of f^{p} diverges")
    integral = f.dim * f.body_volume / f.det * moment
    return f.amplitude * integral ** (1.0 / p)


def superlevel_volume(f: TestFunction, t) -> np.ndarray:
    """vol{f >= t} for t > 0."""
    t = np.asarray(t, dtype=float)
    if f.amplitude == 0:
        return np.zeros_like(t)
    r = f.level_radius(np.minimum(t / f.amplitude, 2.0))
    vol = r**f.dim * f.body_volume / f.det
    vol = np.where(t > f.amplitude * f.profile(np.array([0.0]))[0], 0.0, vol)
    if np.any(np.isinf(vol)):
        raise NonFinite("superlevel set of infinite measure")
    return vol


def schwarz_rearrangement(f: TestFunction, spec: QuadratureSpec | None = None) -> TestFunction:
    """Symmetric decreasing rearrangement f*.

    Inverting the level-volume map ``t -> vol{f >= t}`` for a gauge profile
    gives ``f*(x) = a F(|x| / c)`` with ``omega_n c^n = vol K / |det M|``.
    Families closed under the operation keep their type.
    """
    n = f.dim
    c = (f.body_volume / (f.det * unit_ball_volume(n))) ** (1.0 / n)
    if isinstance(f, Indicator):
        return Indicator(Ball(c, n), f.amplitude)
    if isinstance(f, HlsExtremal):
        return HlsExtremal(n, f.alpha, f.amplitude, matrix=np.eye(n) / c)
    if isinstance(f, CustomRadialDecreasing) and f.is_radial:
        return f
    support = getattr(f, "support_radius", math.inf)
    return CustomRadialDecreasing(
        n, f.profile, f.amplitude, scale=c, support=support,
        decay="compact" if math.isfinite(support) else "exponential",
        name=f"rearranged {type(f).__name__}", log_concave=f.log_concave, concavity=f.concavity,
    )


def rearrangement_level_error(
    f: TestFunction, g: TestFunction, levels: int = 256
) -> float:
    """Largest relative mismatch of superlevel volumes on a log grid of levels."""
    top = max(f.peak, g.peak)
    ts = np.geomspace(top * 1e-8, top, levels)
    vf = superlevel_volume(f, ts)
    vg = superlevel_volume(g, ts)
    scale = np.maximum(np.maximum(np.abs(vf), np.abs(vg)), 1e-12 * max(vf[0], vg[0]))
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, np.abs(vf - vg) / scale, 0.0)
    return float(np.max(rel))


def concavity_check(
    f: TestFunction,
    s: float,
    spec: QuadratureSpec | None = None,
    tol: float = 1e-9,
    pairs: int = 20000,
) -> bool:
    """Midpoint test of log f (s = 0) or f^s (s > 0) on sampled support pairs."""
    spec = spec or QuadratureSpec()
    if f.dim > 3:
        raise ValueError("dense concavity sampling is limited to n <= 3")
    if not s >= 0:
        raise ValueError("s must be non-negative")
    rng = make_rng(spec.seed, 11)
    pts = f.sample(rng, 2 * pairs, 1.0)
    if not isinstance(f, Indicator):
        # include points far out on the support to expose tail behaviour
        pts = np.concatenate([pts, 4.0 * (pts[:pairs] - f.center) + f.center])
    vals = f(pts)
    keep = vals > 0
    pts, vals = pts[keep], vals[keep]
    m = pts.shape[0] // 2
    x, y = pts[:m], pts[m : 2 * m]
    fx, fy = vals[:m], vals[m : 2 * m]
    fm = f(0.5 * (x + y))
    if math.isinf(s):
        return bool(np.all(np.abs(fm - fx) <= tol * f.peak) and np.all(fm > 0))
    with np.errstate(divide="ignore"):
        if s == 0:
            lhs = np.log(fm)
            rhs = 0.5 * (np.log(fx) + np.log(fy))
            slack = tol * (1.0 + np.abs(rhs))
        else:
            lhs = fm**s
            rhs = 0.5 * (fx**s + fy**s)
            slack = tol * (f.peak**s)
    return bool(np.all(lhs >= rhs - slack))
