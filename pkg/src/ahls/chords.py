"""Chord-length decompositions of convex bodies along a direction.

For a unit vector xi, each point z of the shadow E|xi^perp carries the chord
length c(z) = |E cap (z + R xi)|.  Integrals over the shadow of functions of
c give autocorrelations of indicators, radial mean bodies and volumes:

    G chi_E(t xi) = int (c - t)_+ dz,      vol E = int c dz.

In the plane the chord of a polygon is linear between projected vertices, so
those integrals are done exactly piece by piece.  Smooth planar bodies use
Gauss-Legendre nodes after a cosine substitution that removes the square-root
behaviour at the ends of the shadow.  Ellipsoids in R^n, n >= 3, reduce to
ball chords, whose distribution is one-dimensional.  Other bodies in R^3 use
a midpoint grid over a bounding box of the shadow; beyond that, chords
through uniform points of E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBody
from .numerics import QuadratureSpec, gauss_legendre, make_rng, sphere_area
from .starbody import Ball, LinearImage, Polytope, StarBody

__all__ = ["ChordDecomposition", "chord_decomposition", "is_polytope"]


def is_polytope(E: StarBody) -> bool:
    if isinstance(E, Polytope):
        return True
    return isinstance(E, LinearImage) and is_polytope(E.body)


def _lin_mean(phi_anti, phi, c0, c1):
    """Mean of phi(c) over c linear from c0 to c1, given an antiderivative."""
    dc = c1 - c0
    close = np.abs(dc) <= 1e-9 * np.maximum(np.abs(c0), np.abs(c1))
    safe = np.where(close, 1.0, dc)
    return np.where(close, phi(0.5 * (c0 + c1)), (phi_anti(c1) - phi_anti(c0)) / safe)


@dataclass(frozen=True)
class ChordDecomposition:
    """Chord lengths over the shadow of E in direction ``direction``.

    Either exact linear ``pieces`` (rows width, c_start, c_end) or
    quadrature ``chords`` with ``weights``; both may be present, in which
    case the pieces are authoritative.
    """

    direction: np.ndarray
    chords: np.ndarray
    weights: np.ndarray
    pieces: np.ndarray | None = None
    method: str = "quadrature"

    def integrate(self, phi, phi_anti=None) -> float:
        """Integral over the shadow of phi(c(z))."""
        if self.pieces is not None and phi_anti is not None:
            W, c0, c1 = self.pieces.T
            return math.fsum(W * _lin_mean(phi_anti, phi, c0, c1))
        return math.fsum(self.weights * phi(self.chords))

    @property
    def total(self) -> float:
        """Shadow integral of the chord length, i.e. the volume of E."""
        return self.integrate(lambda c: c, lambda c: 0.5 * c * c)

    @property
    def max_chord(self) -> float:
        if self.pieces is not None:
            return float(np.max(self.pieces[:, 1:]))
        return float(np.max(self.chords)) if self.chords.size else 0.0

    def moment(self, beta: float) -> float:
        """Integral of c^beta over the part of the shadow with c > 0."""
        b = float(beta)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.integrate(
                lambda c: np.where(c > 0, np.abs(c) ** b, 0.0),
                lambda c: np.abs(c) ** (b + 1.0) / (b + 1.0),
            )

    def log_moment(self) -> float:
        """Integral of c log c - c, the shadow form of int_E log rho_{E-x}."""

        def phi(c):
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(c > 0, c * np.log(np.where(c > 0, c, 1.0)) - c, 0.0)

        def anti(c):
            with np.errstate(divide="ignore", invalid="ignore"):
                lg = np.log(np.where(c > 0, c, 1.0))
                return np.where(c > 0, 0.5 * c * c * lg - 0.75 * c * c, 0.0)

        return self.integrate(phi, anti)

    def autocorr(self, t) -> np.ndarray:
        """int (c - t)_+ dz for each t >= 0."""
        t = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
        if self.pieces is not None:
            W, c0, c1 = (col[None, :] for col in self.pieces.T)
            vals = W * _lin_mean(
                lambda c: 0.5 * np.maximum(c - t, 0.0) ** 2,
                lambda c: np.maximum(c - t, 0.0), c0, c1)
            return np.sum(vals, axis=1)
        return np.maximum(self.chords[None, :] - t, 0.0) @ self.weights

    def autocorr_diff(self, t) -> np.ndarray:
        """G(t xi) - G(0) = -int min(c, t) dz, free of cancellation."""
        t = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
        if self.pieces is not None:
            W, c0, c1 = (col[None, :] for col in self.pieces.T)

            def anti(c):
                return np.where(c <= t, 0.5 * c * c, 0.5 * t * t + t * (c - t))

            vals = W * _lin_mean(anti, lambda c: np.minimum(c, t), c0, c1)
            return -np.sum(vals, axis=1)
        return -(np.minimum(self.chords[None, :], t) @ self.weights)


def _basis_perp(xi: np.ndarray) -> np.ndarray:
    """Orthonormal basis (rows) of the hyperplane orthogonal to xi."""
    n = xi.size
    if n == 2:
        return np.array([[-xi[1], xi[0]]])
    q, _ = np.linalg.qr(np.column_stack([xi, np.eye(n)]))
    basis = q[:, 1:n].T
    return basis


def _shadow_interval(E: StarBody, b: np.ndarray) -> tuple[float, float]:
    lo = -float(E.support(-b[None, :])[0])
    hi = float(E.support(b[None, :])[0])
    return lo, hi


def _ellipsoid(E: StarBody) -> tuple[np.ndarray, float] | None:
    """(A, r) with E = A (r B^n), or None."""
    A = np.eye(E.dim)
    while isinstance(E, LinearImage):
        A = A @ E.matrix
        E = E.body
    if isinstance(E, Ball):
        return A, float(E.radius)
    return None


def _ellipsoid_chords(A: np.ndarray, r: float, xi: np.ndarray, nodes: int):
    """Chords of A (r B^n) along xi from those of r B^n along A^-1 xi.

    A ball chord at distance rho = r sin(theta) from the centre has length
    2 r cos(theta); the shadow measure is |S^{n-2}| rho^{n-2} d rho.  The map
    A stretches chords by 1/|A^-1 xi| and shadow area by |det A| |A^-1 xi|.
    """
    n = xi.size
    eta = np.linalg.solve(A, xi)
    k = float(np.linalg.norm(eta))
    x, w = gauss_legendre(nodes)
    th = 0.5 * np.pi * x
    rho = r * np.sin(th)
    chords = 2.0 * r * np.cos(th) / k
    weights = (sphere_area(n - 1) * rho ** (n - 2) * r * np.cos(th) * 0.5 * np.pi * w
               * abs(float(np.linalg.det(A))) * k)
    return chords, weights


def chord_decomposition(
    E: StarBody,
    xi,
    spec: QuadratureSpec | None = None,
    *,
    resolution: int = 128,
    nodes: int = 64,
) -> ChordDecomposition:
    """Chords of the convex body E parallel to the unit vector xi."""
    spec = spec or QuadratureSpec()
    xi = np.asarray(xi, dtype=float).reshape(-1)
    n = E.dim
    if xi.size != n:
        raise ValueError("direction has the wrong dimension")
    xi = xi / np.linalg.norm(xi)
    if not getattr(E, "convex", False) or not hasattr(E, "chord_param"):
        raise ValueError("chord decompositions need a convex body with chord_param")

    if n == 1:
        c = float(E.radial(np.array([[1.0]]))[0] + E.radial(np.array([[-1.0]]))[0])
        if not c > spec.abs_tol:
            raise DegenerateBody("interval of zero length")
        return ChordDecomposition(xi, np.array([c]), np.array([1.0]),
                                  np.array([[1.0, c, c]]), "exact")

    if n == 2:
        b = _basis_perp(xi)[0]
        lo, hi = _shadow_interval(E, b)
        if not hi - lo > spec.abs_tol:
            raise DegenerateBody("shadow has zero length")
        if is_polytope(E):
            z = np.unique(np.clip(E.vertices() @ b, lo, hi))
            z = np.unique(np.concatenate([[lo], z, [hi]]))
            z0, z1 = z[:-1], z[1:]
            keep = z1 - z0 > 1e-14 * (hi - lo)
            z0, z1 = z0[keep], z1[keep]
            W = z1 - z0
            # chord is linear on each piece: sample at 1/4 and 3/4, extrapolate
            qa = z0 + 0.25 * W
            qb = z0 + 0.75 * W
            ca = E.chord_param(qa[:, None] * b[None, :], xi)
            cb = E.chord_param(qb[:, None] * b[None, :], xi)
            c0 = np.maximum(ca - 0.5 * (cb - ca), 0.0)
            c1 = np.maximum(cb + 0.5 * (cb - ca), 0.0)
            pieces = np.column_stack([W, c0, c1])
            chords = 0.5 * (c0 + c1)
            return ChordDecomposition(xi, chords, W, pieces, "exact-pieces")
        x, w = gauss_legendre(nodes)
        v = np.pi * x
        zz = lo + (hi - lo) * 0.5 * (1.0 - np.cos(v))
        ww = (hi - lo) * 0.5 * np.pi * np.sin(v) * w
        chords = E.chord_param(zz[:, None] * b[None, :], xi)
        return ChordDecomposition(xi, chords, ww, None, "cosine-gl")

    ell = _ellipsoid(E) if n >= 3 else None
    if ell is not None:
        chords, weights = _ellipsoid_chords(ell[0], ell[1], xi, nodes)
        if not float(np.sum(chords * weights)) > spec.abs_tol:
            raise DegenerateBody("ellipsoid of zero volume")
        return ChordDecomposition(xi, chords, weights, None, "ellipsoid-gl")

    if n == 3:
        B = _basis_perp(xi)
        (l1, h1), (l2, h2) = (_shadow_interval(E, B[0]), _shadow_interval(E, B[1]))
        m = int(resolution)
        s1 = l1 + (h1 - l1) * (np.arange(m) + 0.5) / m
        s2 = l2 + (h2 - l2) * (np.arange(m) + 0.5) / m
        g1, g2 = np.meshgrid(s1, s2, indexing="ij")
        P = g1.reshape(-1, 1) * B[0] + g2.reshape(-1, 1) * B[1]
        chords = E.chord_param(P, xi)
        area = (h1 - l1) * (h2 - l2) / (m * m)
        keep = chords > 0
        return ChordDecomposition(xi, chords[keep], np.full(int(keep.sum()), area), None, "midpoint-grid")

    # n >= 4: chords through uniform points of E, weighted so sum(w c) = vol E
    rng = make_rng(spec.seed, 101)
    pts = E.sample_uniform(rng, spec.mc_samples)
    foot = pts - (pts @ xi)[:, None] * xi[None, :]
    chords = E.chord_param(foot, xi)
    vol = E.exact_volume
    if vol is None:
        from .starbody import volume

        vol = volume(E, spec)
    chords = np.maximum(chords, 1e-300)
    return ChordDecomposition(xi, chords, vol / (chords.size * chords), None, "monte-carlo")
