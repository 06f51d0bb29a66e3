"""Star-shaped sets described by their radial functions.

Analytic bodies (balls, boxes, simplices, cross-polytopes and their linear
images) evaluate the gauge exactly.  :class:`SampledBody` stores radii on a
:class:`~ahls.numerics.SphereGrid` and interpolates between directions.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DivergentIntegral, NonFinite, ZeroVector
from .numerics import (
    QuadratureSpec,
    SphereGrid,
    adaptive_gl,
    make_rng,
    sphere_grid,
    unit_ball_volume,
)

__all__ = [
    "StarBody",
    "Ball",
    "Box",
    "Cube",
    "Simplex",
    "CrossPolytope",
    "LinearImage",
    "CenteredEllipsoid",
    "RadialFunctionBody",
    "SampledBody",
    "DualMixedVolumeValue",
    "radial_eval",
    "volume",
    "dual_mixed_volume",
    "schwarz_symmetral_body",
    "is_dilate",
    "convexity_check",
    "write_radial_csv",
    "read_radial_csv",
]


def _rows(x: np.ndarray, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != n:
        raise ValueError(f"expected vectors of length {n}, got shape {x.shape}")
    return x


def _normalize(v: np.ndarray) -> np.ndarray:
    v = np.atleast_2d(np.asarray(v, dtype=float))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class StarBody:
    """Base class.  Subclasses implement :meth:`gauge` (or :meth:`radial`)."""

    dim: int
    convex: bool = False

    def gauge(self, x: np.ndarray) -> np.ndarray:
        x = _rows(x, self.dim)
        nrm = np.linalg.norm(x, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = self.radial(np.where(nrm[..., None] > 0, x, 1.0))
            return np.where(nrm > 0, nrm / rho, 0.0)

    def radial(self, x: np.ndarray) -> np.ndarray:
        """rho_K(x) = sup{lam >= 0 : lam x in K}; +inf / 0 allowed."""
        g = self.gauge(x)
        with np.errstate(divide="ignore"):
            return np.where(g == 0.0, np.inf, 1.0 / np.where(g == 0.0, 1.0, g))

    def contains(self, x: np.ndarray) -> np.ndarray:
        return self.gauge(x) <= 1.0

    @property
    def exact_volume(self) -> float | None:
        return None

    def angular_breaks(self) -> np.ndarray:
        """Directions where the radial function has kinks or jumps."""
        return np.zeros((0, self.dim))

    def bounding_radius(self, spec: QuadratureSpec | None = None) -> float:
        grid = sphere_grid(self.dim, 256 if self.dim == 2 else 32)
        r = self.radial(grid.directions)
        return float(np.max(r[np.isfinite(r)])) * 1.05

    def sample_uniform(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Uniform points by rejection from the bounding cube."""
        R = self.bounding_radius()
        out = np.empty((0, self.dim))
        while out.shape[0] < size:
            pts = rng.uniform(-R, R, size=(2 * size, self.dim))
            out = np.concatenate([out, pts[self.contains(pts)]])
        return out[:size]

    def describe(self) -> str:
        return type(self).__name__


# ------------------------------------------------------------------ balls


@dataclass(frozen=True, eq=False)
class Ball(StarBody):
    radius: float = 1.0
    dim: int = 2
    convex = True

    def gauge(self, x):
        return np.linalg.norm(_rows(x, self.dim), axis=-1) / self.radius

    @property
    def exact_volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius**self.dim

    def support(self, u):
        return self.radius * np.linalg.norm(_rows(u, self.dim), axis=-1)

    def chord_param(self, P, d):
        P = np.atleast_2d(np.asarray(P, float))
        d = np.asarray(d, float)
        a = d @ d
        b = 2.0 * P @ d
        c = np.sum(P * P, axis=1) - self.radius**2
        disc = b * b - 4.0 * a * c
        return np.where(disc > 0, np.sqrt(np.maximum(disc, 0.0)) / a, 0.0)

    def diff_radial(self, xi):
        return 2.0 * self.radius / np.linalg.norm(_rows(xi, self.dim), axis=-1)

    def bounding_radius(self, spec=None):
        return float(self.radius)

    def sample_uniform(self, rng, size):
        z = rng.standard_normal((size, self.dim))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        r = rng.random(size) ** (1.0 / self.dim)
        return self.radius * z * r[:, None]

    def describe(self):
        return f"Ball(r={self.radius!r}, n={self.dim})"


# ------------------------------------------------------------------ polytopes


class Polytope(StarBody):
    convex = True

    def halfspaces(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def vertices(self) -> np.ndarray:
        raise NotImplementedError

    def support(self, u):
        u = np.atleast_2d(_rows(u, self.dim))
        return np.max(u @ self.vertices().T, axis=1)

    def chord_param(self, P, d):
        A, b = self.halfspaces()
        return _kernels.polytope_chords(np.atleast_2d(P), np.asarray(d, float), A, b)

    def bounding_radius(self, spec=None):
        return float(np.max(np.linalg.norm(self.vertices(), axis=1)))

    def angular_breaks(self):
        v = self.vertices()
        v = v[np.linalg.norm(v, axis=1) > 0]
        axes = np.vstack([np.eye(self.dim), -np.eye(self.dim)])
        return _normalize(np.vstack([v, axes]))


@dataclass(frozen=True, eq=False)
class Box(Polytope):
    """Axis-parallel box [lo, hi] with lo <= 0 <= hi coordinatewise."""

    lo: tuple = (0.0, 0.0)
    hi: tuple = (1.0, 1.0)

    def __post_init__(self):
        lo = np.asarray(self.lo, float)
        hi = np.asarray(self.hi, float)
        if lo.shape != hi.shape or np.any(lo > 0) or np.any(hi < 0) or np.any(hi <= lo):
            raise ValueError("box needs lo <= 0 <= hi and hi > lo")
        object.__setattr__(self, "lo", tuple(lo.tolist()))
        object.__setattr__(self, "hi", tuple(hi.tolist()))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def lengths(self) -> np.ndarray:
        return np.asarray(self.hi) - np.asarray(self.lo)

    def gauge(self, x):
        x = _rows(x, self.dim)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            pos = np.where(hi > 0, x / np.where(hi > 0, hi, 1.0), np.inf)
            neg = np.where(lo < 0, x / np.where(lo < 0, lo, 1.0), np.inf)
        comp = np.where(x > 0, pos, np.where(x < 0, neg, 0.0))
        return np.max(comp, axis=-1)

    @property
    def exact_volume(self) -> float:
        return float(np.prod(self.lengths))

    def halfspaces(self):
        n = self.dim
        A = np.vstack([np.eye(n), -np.eye(n)])
        b = np.concatenate([np.asarray(self.hi), -np.asarray(self.lo)])
        return A, b

    def vertices(self):
        return np.array(list(itertools.product(*zip(self.lo, self.hi))), dtype=float)

    def diff_radial(self, xi):
        xi = np.abs(_rows(xi, self.dim))
        with np.errstate(divide="ignore"):
            return np.min(self.lengths / xi, axis=-1)

    def sample_uniform(self, rng, size):
        lo = np.asarray(self.lo)
        return lo + self.lengths * rng.random((size, self.dim))

    def describe(self):
        return f"Box(lo={list(self.lo)}, hi={list(self.hi)})"


def Cube(dim: int = 2) -> Box:
    """The unit cube [0, 1]^n (origin at a vertex)."""
    return Box(tuple([0.0] * dim), tuple([1.0] * dim))


@dataclass(frozen=True, eq=False)
class Simplex(Polytope):
    """conv(0, e_1, ..., e_n)."""

    dim: int = 2

    def gauge(self, x):
        x = _rows(x, self.dim)
        return np.where(np.all(x >= 0, axis=-1), np.sum(x, axis=-1), np.inf)

    @property
    def exact_volume(self) -> float:
        return 1.0 / math.factorial(self.dim)

    def halfspaces(self):
        n = self.dim
        A = np.vstack([-np.eye(n), np.ones((1, n))])
        b = np.concatenate([np.zeros(n), [1.0]])
        return A, b

    def vertices(self):
        return np.vstack([np.zeros(self.dim), np.eye(self.dim)])

    def diff_radial(self, xi):
        xi = _rows(xi, self.dim)
        m = np.maximum(np.sum(np.maximum(xi, 0), axis=-1), np.sum(np.maximum(-xi, 0), axis=-1))
        with np.errstate(divide="ignore"):
            return 1.0 / m

    def sample_uniform(self, rng, size):
        e = rng.standard_exponential((size, self.dim + 1))
        return e[:, : self.dim] / np.sum(e, axis=1, keepdims=True)

    def describe(self):
        return f"Simplex(n={self.dim})"


@dataclass(frozen=True, eq=False)
class CrossPolytope(Polytope):
    dim: int = 2

    def gauge(self, x):
        return np.sum(np.abs(_rows(x, self.dim)), axis=-1)

    @property
    def exact_volume(self) -> float:
        return 2.0**self.dim / math.factorial(self.dim)

    def halfspaces(self):
        A = np.array(list(itertools.product((-1.0, 1.0), repeat=self.dim)))
        return A, np.ones(A.shape[0])

    def vertices(self):
        return np.vstack([np.eye(self.dim), -np.eye(self.dim)])

    def diff_radial(self, xi):
        return 2.0 / np.sum(np.abs(_rows(xi, self.dim)), axis=-1)

    def sample_uniform(self, rng, size):
        e = rng.standard_exponential((size, self.dim + 1))
        pts = e[:, : self.dim] / np.sum(e, axis=1, keepdims=True)
        signs = rng.integers(0, 2, size=(size, self.dim)) * 2 - 1
        return pts * signs

    def describe(self):
        return f"CrossPolytope(n={self.dim})"


# ------------------------------------------------------------------ images


@dataclass(frozen=True, eq=False)
class LinearImage(StarBody):
    """phi K for an invertible matrix phi."""

    matrix: np.ndarray
    body: StarBody

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float, copy=True)
        if M.shape != (self.body.dim, self.body.dim):
            raise ValueError("matrix shape does not match body dimension")
        det = np.linalg.det(M)
        if not abs(det) > 0:
            raise ValueError("linear map must be invertible")
        M.setflags(write=False)
        inv = np.linalg.inv(M)
        inv.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "_inv", inv)
        object.__setattr__(self, "_det", float(det))

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def convex(self) -> bool:
        return self.body.convex

    @property
    def inverse(self) -> np.ndarray:
        return self._inv

    @property
    def det(self) -> float:
        return self._det

    def gauge(self, x):
        return self.body.gauge(_rows(x, self.dim) @ self._inv.T)

    @property
    def exact_volume(self):
        v = self.body.exact_volume
        return None if v is None else abs(self._det) * v

    def angular_breaks(self):
        b = self.body.angular_breaks()
        return _normalize(b @ self.matrix.T) if b.size else b

    def support(self, u):
        return self.body.support(np.atleast_2d(u) @ self.matrix)

    def chord_param(self, P, d):
        return self.body.chord_param(np.atleast_2d(P) @ self._inv.T, self._inv @ np.asarray(d, float))

    def diff_radial(self, xi):
        return self.body.diff_radial(_rows(xi, self.dim) @ self._inv.T)

    def vertices(self):
        return self.body.vertices() @ self.matrix.T

    def halfspaces(self):
        A, b = self.body.halfspaces()
        return A @ self._inv, b

    def bounding_radius(self, spec=None):
        if hasattr(self.body, "vertices"):
            return float(np.max(np.linalg.norm(self.vertices(), axis=1)))
        return self.body.bounding_radius() * float(np.linalg.norm(self.matrix, 2))

    def sample_uniform(self, rng, size):
        return self.body.sample_uniform(rng, size) @ self.matrix.T

    def describe(self):
        return f"LinearImage({self.matrix.tolist()}, {self.body.describe()})"


def CenteredEllipsoid(matrix) -> LinearImage:
    """The ellipsoid A B^n."""
    M = np.asarray(matrix, dtype=float)
    return LinearImage(M, Ball(1.0, M.shape[0]))


@dataclass(frozen=True, eq=False)
class RadialFunctionBody(StarBody):
    """Body given by a vectorised radial function of unit directions."""

    func: Callable[[np.ndarray], np.ndarray]
    dim: int = 2
    name: str = "custom"
    breaks: np.ndarray | None = None

    def angular_breaks(self):
        if self.breaks is None:
            return np.zeros((0, self.dim))
        return _normalize(self.breaks)

    def radial(self, x):
        x = _rows(x, self.dim)
        nrm = np.linalg.norm(x, axis=-1)
        return np.asarray(self.func(x / nrm[..., None]), dtype=float) / nrm

    def gauge(self, x):
        x = _rows(x, self.dim)
        nrm = np.linalg.norm(x, axis=-1)
        safe = np.where(nrm[..., None] > 0, x, 1.0)
        rho = np.asarray(self.func(safe / np.linalg.norm(safe, axis=-1, keepdims=True)), float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(nrm > 0, nrm / rho, 0.0)

    def describe(self):
        return f"RadialFunctionBody({self.name}, n={self.dim})"


# ------------------------------------------------------------------ sampled


@dataclass(frozen=True, eq=False)
class SampledBody(StarBody):
    """Radii on a sphere grid; interpolated between directions."""

    grid: SphereGrid
    rho: np.ndarray

    def __post_init__(self):
        r = np.array(self.rho, dtype=float, copy=True)
        if r.shape != (len(self.grid),):
            raise ValueError("one radius per grid direction required")
        if np.any(r < 0) or np.any(np.isnan(r)):
            raise ValueError("radii must be non-negative")
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)
        if self.grid.dim == 2:
            ang = np.mod(np.arctan2(self.grid.directions[:, 1], self.grid.directions[:, 0]), 2 * np.pi)
            order = np.argsort(ang, kind="stable")
            object.__setattr__(self, "_ang", ang[order])
            object.__setattr__(self, "_ang_rho", r[order])

    @property
    def dim(self) -> int:
        return self.grid.dim

    def radial(self, x):
        x = _rows(x, self.dim)
        shape = x.shape[:-1]
        x2 = x.reshape(-1, self.dim)
        nrm = np.linalg.norm(x2, axis=1)
        u = x2 / nrm[:, None]
        if self.dim == 1:
            vals = np.where(u[:, 0] > 0, self._lookup1(1.0), self._lookup1(-1.0))
        elif self.dim == 2:
            vals = self._interp2(u)
        elif self.dim == 3 and self.grid.kind == "gauss-product":
            vals = self._interp3(u)
        else:
            idx = np.argmax(u @ self.grid.directions.T, axis=1)
            vals = self.rho[idx]
        return (vals / nrm).reshape(shape)

    def _lookup1(self, s: float) -> float:
        idx = np.flatnonzero(np.sign(self.grid.directions[:, 0]) == s)
        return float(self.rho[idx[0]]) if idx.size else 0.0

    def _interp2(self, u):
        ang = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2 * np.pi)
        a = np.concatenate([self._ang, [self._ang[0] + 2 * np.pi]])
        r = np.concatenate([self._ang_rho, [self._ang_rho[0]]])
        ang = np.where(ang < a[0], ang + 2 * np.pi, ang)
        with np.errstate(invalid="ignore"):
            return np.interp(ang, a, r)

    def _interp3(self, u):
        d = self.grid.directions
        ct_nodes = np.unique(d[:, 2])
        m = ct_nodes.size
        nphi = len(self.grid) // m
        table = self.rho.reshape(m, nphi)
        phi_nodes = 2 * np.pi * (np.arange(nphi) + 0.5) / nphi
        ct = np.clip(u[:, 2], -1.0, 1.0)
        phi = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2 * np.pi)
        # position in phi (periodic)
        fp = (phi - phi_nodes[0]) / (2 * np.pi / nphi)
        j0 = np.floor(fp).astype(int)
        wphi = fp - j0
        j0 %= nphi
        j1 = (j0 + 1) % nphi
        i1 = np.clip(np.searchsorted(ct_nodes, ct), 1, m - 1) if m > 1 else np.zeros(len(ct), int)
        i0 = np.maximum(i1 - 1, 0)
        span = ct_nodes[i1] - ct_nodes[i0]
        with np.errstate(invalid="ignore", divide="ignore"):
            wct = np.clip(np.where(span > 0, (ct - ct_nodes[i0]) / span, 0.0), 0.0, 1.0)
        r0 = (1 - wphi) * table[i0, j0] + wphi * table[i0, j1]
        r1 = (1 - wphi) * table[i1, j0] + wphi * table[i1, j1]
        return (1 - wct) * r0 + wct * r1

    def bounding_radius(self, spec=None):
        return float(np.max(self.rho)) * 1.05

    def to_csv(self, path) -> None:
        write_radial_csv(path, self.grid.directions, self.rho)

    def describe(self):
        return f"SampledBody({self.grid.kind}, {len(self.grid)} directions)"


# ------------------------------------------------------------------ operations


def radial_eval(K: StarBody, x) -> float | np.ndarray:
    """Radial function at x (homogeneous of degree -1)."""
    x = np.asarray(x, dtype=float)
    if np.any(np.linalg.norm(np.atleast_2d(x), axis=-1) == 0):
        raise ZeroVector("radial function is undefined at the origin")
    r = K.radial(x)
    return float(r) if np.ndim(r) == 0 else r


def _sphere_integral(
    func: Callable[[np.ndarray], np.ndarray],
    n: int,
    spec: QuadratureSpec,
    *,
    breaks: np.ndarray | None = None,
    grid: SphereGrid | None = None,
) -> float:
    """Integral over S^{n-1}: grid sum, exact two points, or adaptive in angle."""
    if grid is not None:
        return grid.integrate(func(grid.directions))
    if n == 1:
        return math.fsum(func(np.array([[1.0], [-1.0]])))
    if n == 2:
        cuts = []
        if breaks is not None and len(breaks):
            cuts = np.mod(np.arctan2(breaks[:, 1], breaks[:, 0]), 2 * np.pi).tolist()

        def h(theta):
            return func(np.column_stack([np.cos(theta), np.sin(theta)]))

        res = adaptive_gl(
            h, 0.0, 2 * np.pi, breaks=cuts, nodes=spec.radial_nodes,
            rel_tol=spec.rel_tol * 0.1, abs_tol=spec.abs_tol, max_panels=spec.max_panels,
            initial=2,
        )
        return res.value
    g = sphere_grid(n, spec.sphere_resolution)
    return g.integrate(func(g.directions))


def _grid_of(K: StarBody) -> SphereGrid | None:
    return K.grid if isinstance(K, SampledBody) else None


def volume(K: StarBody, spec: QuadratureSpec | None = None) -> float:
    """(1/n) * integral of rho_K^n over the sphere."""
    spec = spec or QuadratureSpec()
    n = K.dim

    def integrand(u):
        r = K.radial(u)
        if np.any(np.isinf(r)):
            raise NonFinite("radial function is infinite on a set of positive measure")
        return r**n / n

    try:
        val = _sphere_integral(integrand, n, spec, breaks=K.angular_breaks(), grid=_grid_of(K))
    except DivergentIntegral as exc:
        raise NonFinite(str(exc)) from None
    if not math.isfinite(val):
        raise NonFinite("volume is not finite")
    return val


@dataclass(frozen=True)
class DualMixedVolumeValue:
    value: float
    alpha: float
    finite: bool


def _powprod(rk: np.ndarray, rl: np.ndarray, n: int, alpha: float) -> np.ndarray:
    both_zero = (rk == 0) & (rl == 0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        val = rk ** (n - alpha) * rl**alpha
    return np.where(both_zero, 0.0, val)


def dual_mixed_volume(
    K: StarBody, L: StarBody, alpha: float, spec: QuadratureSpec | None = None
) -> DualMixedVolumeValue:
    """(1/n) * integral of rho_K^(n-alpha) rho_L^alpha.

    Directions where both radial functions vanish contribute zero.
    """
    spec = spec or QuadratureSpec()
    n = K.dim
    if L.dim != n:
        raise ValueError("bodies must share the dimension")
    if alpha == 0 or alpha == n:
        raise ValueError("alpha must differ from 0 and n")

    def integrand(u):
        val = _powprod(K.radial(u), L.radial(u), n, alpha) / n
        if not np.all(np.isfinite(val)):
            raise NonFinite("dual mixed volume integrand is not finite")
        return val

    grid = _grid_of(K) or _grid_of(L)
    breaks = np.vstack([K.angular_breaks(), L.angular_breaks()])
    try:
        val = _sphere_integral(integrand, n, spec, breaks=breaks, grid=grid)
    except DivergentIntegral as exc:
        raise NonFinite(str(exc)) from None
    return DualMixedVolumeValue(float(val), float(alpha), math.isfinite(val))


def schwarz_symmetral_body(K: StarBody, spec: QuadratureSpec | None = None) -> Ball:
    """Centered ball with the volume of K."""
    V = volume(K, spec)
    return Ball((V / unit_ball_volume(K.dim)) ** (1.0 / K.dim), K.dim)


def _check_directions(K: StarBody, L: StarBody, spec: QuadratureSpec) -> np.ndarray:
    grid = _grid_of(K) or _grid_of(L)
    if grid is None:
        grid = sphere_grid(K.dim, spec.sphere_resolution)
    return grid.directions, grid.weights


def is_dilate(
    K: StarBody, L: StarBody, tol: float = 1e-6, spec: QuadratureSpec | None = None
) -> bool:
    """True iff rho_K = c rho_L on the check grid, c a weighted ratio median."""
    spec = spec or QuadratureSpec()
    dirs, w = _check_directions(K, L, spec)
    rk = np.asarray(K.radial(dirs), float)
    rl = np.asarray(L.radial(dirs), float)
    tiny = spec.abs_tol
    live = (rk >= tiny) | (rl >= tiny)
    if not np.any(live):
        return True
    rk, rl, w = rk[live], rl[live], w[live]
    if np.any((rl < tiny) & (rk >= tiny)):
        return False
    ratio = rk / rl
    order = np.argsort(ratio, kind="stable")
    cw = np.cumsum(w[order])
    c = float(ratio[order][np.searchsorted(cw, 0.5 * cw[-1])])
    scale = max(float(np.max(rk)), tiny)
    return bool(np.all(np.abs(rk - c * rl) <= tol * scale))


def convexity_check(
    K: StarBody, spec: QuadratureSpec | None = None, tol: float = 1e-6, pairs: int = 20000
) -> bool:
    """Midpoint test of the gauge on pairs of sampled boundary points.

    A sampled sufficient test: returns False as soon as the midpoint of two
    boundary points lies outside ``(1 + tol) K``.  A sampled body is judged
    by its data alone: every boundary point must lie on the boundary of the
    convex hull of all of them, up to ``tol``.  Testing midpoints against
    the interpolated gauge would instead flag the small dents that
    interpolation itself puts between grid directions.
    """
    spec = spec or QuadratureSpec()
    n = K.dim
    if n > 3:
        raise ValueError("dense convexity check is limited to n <= 3")
    if isinstance(K, SampledBody):
        return _hull_convex(K, tol)
    grid = _grid_of(K)
    if grid is None:
        grid = sphere_grid(n, max(spec.sphere_resolution, 128) if n == 2 else spec.sphere_resolution)
    dirs = grid.directions
    rho = np.asarray(K.radial(dirs), float)
    ok = np.isfinite(rho) & (rho > 0)
    if np.any(np.isinf(rho)):
        return False
    pts = dirs[ok] * rho[ok, None]
    m = pts.shape[0]
    if m < 2:
        return True
    if n <= 2 and m <= 512:
        i, j = np.triu_indices(m, k=1)
    else:
        rng = make_rng(spec.seed, 7)
        i = rng.integers(0, m, pairs)
        j = rng.integers(0, m, pairs)
    mids = 0.5 * (pts[i] + pts[j])
    nz = np.linalg.norm(mids, axis=1) > 1e-12 * np.max(rho[ok])
    g = K.gauge(mids[nz])
    return bool(np.all(g <= 1.0 + tol))


def _hull_convex(K: "SampledBody", tol: float) -> bool:
    from scipy.spatial import ConvexHull

    rho = np.asarray(K.rho, float)
    if np.any(~np.isfinite(rho)) or np.any(rho <= 0):
        return False
    if K.dim == 1:
        return True
    pts = K.grid.directions * rho[:, None]
    hull = ConvexHull(pts)
    A, b = hull.equations[:, :-1], -hull.equations[:, -1]
    if np.any(b <= 0):
        return False
    hull_gauge = np.max((pts @ A.T) / b[None, :], axis=1)
    return bool(np.all(hull_gauge >= 1.0 - tol))


# ------------------------------------------------------------------ CSV


def write_radial_csv(path, directions: np.ndarray, rho: np.ndarray) -> None:
    """Header dir_1,...,dir_n,rho; floats in shortest round-trip form."""
    directions = np.asarray(directions, float)
    rho = np.asarray(rho, float)
    n = directions.shape[1]
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"dir_{i + 1}" for i in range(n)] + ["rho"])
        for d, r in zip(directions, rho):
            w.writerow([repr(float(v)) for v in d] + [repr(float(r))])


def read_radial_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(Path(path), newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    n = len(header) - 1
    if header != [f"dir_{i + 1}" for i in range(n)] + ["rho"]:
        raise ValueError(f"unexpected radial CSV header {header}")
    data = np.array([[float(v) for v in row] for row in body], dtype=float).reshape(-1, n + 1)
    return data[:, :n], data[:, n]
