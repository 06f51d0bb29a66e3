"""Radial alpha-mean bodies of convex bodies.

For a convex body E and a unit vector xi,

    rho_{R_alpha E}(xi)^alpha = 1/((alpha + 1) vol E) int_{E|xi^perp} c(y)^(alpha + 1) dy,

where c(y) is the length of the chord of E through y parallel to xi.  The
logarithmic mean alpha = 0 averages log rho_{E - x}(xi) over x in E; on a
chord of length c that distance runs uniformly over [0, c], giving

    log rho_{R_0 E}(xi) = 1/vol E int_{E|xi^perp} (c log c - c) dy.

The same bodies appear as R_alpha chi_E, and through the autocorrelation of
chi_E they are dilates of H_alpha chi_E (alpha > 0) and of the polar
projection bodies (alpha < 0); ``bridge_check`` compares the two routes.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import betaln, digamma, gammaln, polygamma

from .chords import ChordDecomposition, chord_decomposition
from .errors import DegenerateBody
from .funcspace import Indicator
from .hlsbody import LOG_CROSSOVER, HlsBodyResult, hls_body, polar_projection_body
from .numerics import QuadratureSpec, SphereGrid
from .report import EQUALITY, VIOLATED, InequalityReport
from .starbody import SampledBody, StarBody, volume

__all__ = [
    "ChordDecomposition",
    "chord_decomposition",
    "radial_mean_body",
    "bridge_check",
    "inclusion_constant",
    "normalized_radii",
]


def _volume(E: StarBody, spec: QuadratureSpec) -> float:
    v = E.exact_volume
    if v is None:
        v = volume(E, spec)
    if not v > spec.abs_tol:
        raise DegenerateBody(f"volume {v} is not positive")
    return float(v)


def radial_mean_body(
    E: StarBody,
    alpha: float,
    grid: SphereGrid,
    spec: QuadratureSpec | None = None,
    *,
    resolution: int = 128,
) -> HlsBodyResult:
    """R_alpha E on the directions of ``grid`` from chord integrals."""
    spec = spec or QuadratureSpec()
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    if not getattr(E, "convex", False):
        raise ValueError("radial mean bodies need a convex body")
    vol = _volume(E, spec)
    k = len(grid)
    rho = np.empty(k)
    log_branch = abs(alpha) < LOG_CROSSOVER
    for i, xi in enumerate(grid.directions):
        cd = chord_decomposition(E, xi, spec, resolution=resolution)
        if log_branch:
            rho[i] = math.exp(cd.log_moment() / vol)
        else:
            rho[i] = (cd.moment(alpha + 1.0) / ((alpha + 1.0) * vol)) ** (1.0 / alpha)
    ok = np.isfinite(rho) & (rho > 0)
    notes = (f"chords: {cd.method}",) if k else ()
    return HlsBodyResult(SampledBody(grid, np.where(ok, rho, 0.0)), float(alpha), "R",
                         ok, np.zeros(k), notes)


def inclusion_constant(alpha: float, n: int, s: float = math.inf) -> float:
    """Normaliser c(alpha) of the inclusion chain R_alpha / c(alpha).

    s = inf: (n B(alpha + 1, n))^(1/alpha), the convex-body case.
    s = 0: Gamma(alpha + 1)^(1/alpha).
    s > 0: ((n + 2/s) B(alpha + 1, n + 2/s))^(1/alpha).
    alpha = 0 is the limit exp(psi(1) - psi(N + 1)), with N = inf for s = 0.
    """
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    small = abs(alpha) < 1e-4
    if s == 0:
        if small:
            # log Gamma(1 + a)/a = psi(1) + a psi'(1)/2 + a^2 psi''(1)/6 + O(a^3)
            return math.exp(float(digamma(1.0) + alpha * polygamma(1, 1.0) / 2
                                  + alpha * alpha * polygamma(2, 1.0) / 6))
        return math.exp(float(gammaln(alpha + 1.0)) / alpha)
    N = float(n) if math.isinf(s) else n + 2.0 / s
    if small:
        d1 = digamma(1.0) - digamma(N + 1.0)
        d2 = polygamma(1, 1.0) - polygamma(1, N + 1.0)
        d3 = polygamma(2, 1.0) - polygamma(2, N + 1.0)
        return math.exp(float(d1 + alpha * d2 / 2 + alpha * alpha * d3 / 6))
    return math.exp((math.log(N) + float(betaln(alpha + 1.0, N))) / alpha)


def normalized_radii(
    bodies: Sequence[HlsBodyResult], n: int, s: float = math.inf
) -> np.ndarray:
    """rho_{R_alpha}(xi) / c(alpha), one row per body, sorted by alpha."""
    bodies = sorted(bodies, key=lambda b: b.alpha)
    return np.array([b.radii / inclusion_constant(b.alpha, n, s) for b in bodies])


def bridge_check(
    E: StarBody,
    alpha: float,
    grid: SphereGrid,
    spec: QuadratureSpec | None = None,
    *,
    tol: float = 1e-3,
) -> InequalityReport:
    """Direction-wise comparison of the two routes to the same body.

    alpha > 0: H_alpha chi_E against (vol E/alpha)^(1/alpha) R_alpha E.
    -1 < alpha < 0: Pi_2^{*,-alpha/2} chi_E against
    (2 vol E/(-alpha))^(1/alpha) R_alpha E.
    """
    spec = spec or QuadratureSpec()
    n = E.dim
    vol = _volume(E, spec)
    f = Indicator(E)
    R = radial_mean_body(E, alpha, grid, spec)
    if alpha > 0:
        other = hls_body(f, alpha, grid, spec)
        scale = (vol / alpha) ** (1.0 / alpha)
        label = "H_alpha chi_E"
    elif -1 < alpha < 0:
        other = polar_projection_body(f, -alpha / 2.0, grid, spec)
        scale = (2.0 * vol / -alpha) ** (1.0 / alpha)
        label = "Pi_2^{*,-alpha/2} chi_E"
    else:
        raise ValueError("alpha must lie in (-1, 0) or (0, inf)")
    bridged = scale * R.radii
    rel = np.abs(other.radii - bridged) / np.maximum(np.abs(other.radii), spec.abs_tol)
    worst = float(np.max(rel)) if rel.size else 0.0
    status = EQUALITY if worst <= tol else VIOLATED
    i = int(np.argmax(rel)) if rel.size else 0
    return InequalityReport(
        check="bridge",
        params={"n": n, "alpha": alpha, "body": E.describe(), "directions": len(grid)},
        left=float(other.radii[i]) if rel.size else None,
        middle=float(bridged[i]) if rel.size else None,
        right=None,
        margins=(-worst, None),
        tol=tol,
        status=status,
        notes=(f"{label} vs scaled R_alpha E", f"max relative radial discrepancy {worst:.3e}",
               f"worst direction index {i}"),
        data={"direct": other.radii, "bridged": bridged, "rel": rel},
    )
