"""Deterministic integration engines.

Power-weighted half-line integrals (with the analytic continuation to
exponents in (-1, 0)), quadrature grids on the unit sphere and seeded
Monte Carlo expectations.  Everything here is pure: the same arguments
always give bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln
from scipy.stats import norm, qmc

from .errors import DivergentIntegral, NonConvergent, NonFinite

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "SphereGrid",
    "adaptive_gl",
    "integrate_powerweight",
    "powerweight_quad",
    "sphere_grid",
    "sphere_area",
    "unit_ball_volume",
    "make_rng",
    "mc_expectation",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration budgets shared by every numerical path.

    ``tail_cut`` is the point T where a half-line integrand must have
    decayed; ``radial_nodes`` is the Gauss-Legendre order of one panel.
    """

    radial_nodes: int = 20
    tail_cut: float = 1e12
    sphere_resolution: int = 64
    mc_samples: int = 200_000
    seed: int = 20230917
    rel_tol: float = 1e-6
    abs_tol: float = 1e-12
    max_panels: int = 3000

    def __post_init__(self) -> None:
        for name in ("radial_nodes", "sphere_resolution", "mc_samples", "max_panels"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise ValueError("rel_tol and abs_tol must be positive")
        if not self.tail_cut > 0:
            raise ValueError("tail_cut must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def with_(self, **changes) -> "QuadratureSpec":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "radial_nodes": self.radial_nodes,
            "tail_cut": self.tail_cut,
            "sphere_resolution": self.sphere_resolution,
            "mc_samples": self.mc_samples,
            "seed": self.seed,
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_panels": self.max_panels,
        }


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evaluations: int


@lru_cache(maxsize=64)
def gauss_legendre(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


def _panel_nodes(a: np.ndarray, b: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(m)
    h = (b - a)[:, None]
    return a[:, None] + h * x[None, :], h * w[None, :]


def adaptive_gl(
    h: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    breaks: Sequence[float] = (),
    nodes: int = 20,
    rel_tol: float = 1e-6,
    abs_tol: float = 1e-12,
    max_panels: int = 3000,
    initial: int = 4,
) -> QuadResult:
    """Globally adaptive composite Gauss-Legendre on [a, b].

    ``h`` is evaluated on whole batches of nodes at once.  Each panel is
    compared against its two halves; the worst panels are bisected until
    the summed error estimate is below ``max(abs_tol, rel_tol*|I|)``.
    """
    cuts = sorted({float(a), float(b), *(float(c) for c in breaks if a < c < b)})
    lo, hi = [], []
    for c0, c1 in zip(cuts[:-1], cuts[1:]):
        edges = np.linspace(c0, c1, initial + 1)
        lo.extend(edges[:-1])
        hi.extend(edges[1:])
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    evals = 0

    def halves(a_: np.ndarray, b_: np.ndarray):
        nonlocal evals
        mid = 0.5 * (a_ + b_)
        xs_l, ws_l = _panel_nodes(a_, mid, nodes)
        xs_r, ws_r = _panel_nodes(mid, b_, nodes)
        xs = np.concatenate([xs_l, xs_r], axis=1)
        vals = np.asarray(h(xs.ravel()), dtype=float).reshape(xs.shape)
        evals += vals.size
        if not np.all(np.isfinite(vals)):
            raise DivergentIntegral("integrand is not finite on a quadrature panel")
        left = np.sum(vals[:, :nodes] * ws_l, axis=1)
        right = np.sum(vals[:, nodes:] * ws_r, axis=1)
        absint = np.sum(np.abs(vals[:, :nodes]) * ws_l, axis=1) + np.sum(
            np.abs(vals[:, nodes:]) * ws_r, axis=1
        )
        return left, right, absint

    # whole-panel estimates for the initial panels
    xs, ws = _panel_nodes(lo, hi, nodes)
    vals = np.asarray(h(xs.ravel()), dtype=float).reshape(xs.shape)
    evals += vals.size
    if not np.all(np.isfinite(vals)):
        raise DivergentIntegral("integrand is not finite on a quadrature panel")
    whole = np.sum(vals * ws, axis=1)
    left, right, absint = halves(lo, hi)

    while True:
        est = left + right
        err = np.abs(whole - est)
        total = math.fsum(est)
        floor = 50.0 * _EPS * math.fsum(absint)
        tol = max(abs_tol, rel_tol * abs(total), floor)
        err_total = math.fsum(err)
        if err_total <= tol:
            break
        if lo.size >= max_panels:
            raise NonConvergent(
                f"adaptive quadrature stalled: error {err_total:.3e} > tol {tol:.3e} "
                f"with {lo.size} panels"
            )
        budget = tol / lo.size
        split = err > budget
        worst = int(np.argmax(err))
        split[worst] = True
        # cap the batch so the panel count stays bounded
        idx = np.flatnonzero(split)
        if lo.size + idx.size > max_panels:
            order = idx[np.argsort(-err[idx], kind="stable")]
            idx = np.sort(order[: max(1, max_panels - lo.size)])
        keep = np.ones(lo.size, dtype=bool)
        keep[idx] = False
        mid = 0.5 * (lo[idx] + hi[idx])
        new_lo = np.concatenate([lo[idx], mid])
        new_hi = np.concatenate([mid, hi[idx]])
        new_whole = np.concatenate([left[idx], right[idx]])
        nl, nr, na = halves(new_lo, new_hi)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        whole = np.concatenate([whole[keep], new_whole])
        left = np.concatenate([left[keep], nl])
        right = np.concatenate([right[keep], nr])
        absint = np.concatenate([absint[keep], na])
        order = np.argsort(lo, kind="stable")
        lo, hi, whole, left, right, absint = (
            lo[order], hi[order], whole[order], left[order], right[order], absint[order]
        )

    return QuadResult(total, err_total, evals)


def _as_vector_fn(g: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def wrapped(t: np.ndarray) -> np.ndarray:
        out = g(t)
        out = np.asarray(out, dtype=float)
        if out.shape != t.shape:
            out = np.broadcast_to(out, t.shape).astype(float)
        return out

    return wrapped


def _rounding_cut(dv, g0: float, t0: float, alpha: float) -> tuple[float, float]:
    """Where g - g0 sinks into rounding, replace it by a fitted power law.

    Scans t = t0 2^-k for the first point with |g - g0| < 1e-8 |g0|, fits
    d(t) ~ c t^p from that point and its half, and integrates
    t^(alpha-1) c t^p over (0, t_ref) exactly.  Returns the head
    variable u_ref = (t_ref/t0)^(1+alpha) and the exact piece; (0, 0) when
    no clean power law is found.
    """
    if g0 == 0.0:
        return 0.0, 0.0
    ts = t0 * 2.0 ** -np.arange(1, 160, dtype=float)
    d = dv(ts)
    small = np.flatnonzero(np.abs(d) < 1e-8 * abs(g0))
    if small.size == 0 or small[0] + 1 >= ts.size:
        return 0.0, 0.0
    k = int(small[0])
    t_ref, d1 = float(ts[k]), float(d[k])
    d2 = float(dv(np.array([0.5 * t_ref]))[0])
    if d1 == 0.0 or d2 == 0.0 or np.sign(d1) != np.sign(d2):
        return 0.0, 0.0
    p = math.log(d1 / d2) / math.log(2.0)
    if not (p + alpha > 0 and 0.25 <= p <= 4.0):
        return 0.0, 0.0
    return (t_ref / t0) ** (1.0 + alpha), d1 * t_ref**alpha / (alpha + p)


def powerweight_quad(
    g: Callable[[np.ndarray], np.ndarray],
    alpha: float,
    g0: float | None = None,
    spec: QuadratureSpec | None = None,
    *,
    split: float = 1.0,
    breaks: Sequence[float] = (),
    gdiff: Callable[[np.ndarray], np.ndarray] | None = None,
) -> QuadResult:
    """Power-weighted half-line integral with error estimate.

    For ``alpha > 0`` this is the integral of ``t**(alpha-1) * g(t)`` over
    (0, inf).  For ``-1 < alpha < 0`` it is the analytic continuation
    ``int t**(alpha-1) (g(t) - g0) dt``, assembled from the split at
    ``t0 = split``::

        int_{t0}^inf t^(a-1) g  -  int_0^t0 t^(a-1) (g0 - g)  +  g0 t0^a / a

    ``g`` must accept numpy arrays.  ``breaks`` are kinks of ``g`` in t.
    ``gdiff(t)``, when given, returns ``g(t) - g0`` without cancellation;
    it matters for alpha close to -1 where tiny t carry real weight.
    """
    spec = spec or QuadratureSpec()
    alpha = float(alpha)
    if not alpha > -1.0 or alpha == 0.0:
        raise ValueError("alpha must lie in (-1, 0) or (0, inf)")
    if alpha < 0 and g0 is None:
        raise ValueError("g0 = g(0) is required when alpha < 0")
    t0 = float(split)
    if not t0 > 0:
        raise ValueError("split point must be positive")
    gv = _as_vector_fn(g)
    kw = dict(
        nodes=spec.radial_nodes,
        rel_tol=spec.rel_tol,
        abs_tol=spec.abs_tol,
        max_panels=spec.max_panels,
    )

    # growth check at the cap: t^alpha g(t) must decay
    T = float(spec.tail_cut)
    probe = gv(np.array([t0, T]))
    scale_t0 = abs(t0**alpha * probe[0]) if alpha > 0 else abs(probe[0]) + abs(g0)
    tail_size = abs(T**alpha * probe[1])
    if alpha > 0 and tail_size > max(scale_t0, spec.abs_tol):
        raise DivergentIntegral(
            f"t^alpha g(t) does not decay: {tail_size:.3e} at t={T:.3e}"
        )

    # head on (0, t0) with the singular power absorbed by a substitution
    if alpha > 0:
        head_coef = t0**alpha / alpha
        inv = 1.0 / alpha

        def head(u):
            return gv(t0 * u**inv)

        head_breaks = [(c / t0) ** alpha for c in breaks if 0 < c < t0]
    else:
        head_coef = t0**alpha / (1.0 + alpha)
        inv = 1.0 / (1.0 + alpha)

        if gdiff is not None:
            dv = _as_vector_fn(gdiff)
        else:
            def dv(t):
                return gv(t) - g0

            u_lo, inner = _rounding_cut(dv, g0, t0, alpha)

        def head(u):
            return dv(t0 * u**inv) * u ** (-inv)

        head_breaks = [(c / t0) ** (1.0 + alpha) for c in breaks if 0 < c < t0]

    # tail on (t0, inf) via t = t0 + u/(1-u)
    def tail(u):
        one_m = 1.0 - u
        t = t0 + u / one_m
        gt = gv(t)
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.where(gt == 0.0, 0.0, t ** (alpha - 1.0) * gt / one_m**2)
        return val

    tail_breaks = [(c - t0) / (1.0 + c - t0) for c in breaks if c > t0]

    if alpha > 0 or gdiff is not None:
        u_lo, inner = 0.0, 0.0
    head_breaks = [b for b in head_breaks if b > u_lo]
    try:
        hr = adaptive_gl(head, u_lo, 1.0, breaks=head_breaks, **kw)
        tr = adaptive_gl(tail, 0.0, 1.0, breaks=tail_breaks, **kw)
    except NonConvergent:
        if alpha > 0 and tail_size > spec.abs_tol:
            raise DivergentIntegral("tail integral failed to converge") from None
        raise
    value = head_coef * hr.value + tr.value + inner
    err = abs(head_coef) * hr.error + tr.error
    if alpha < 0:
        value += g0 * t0**alpha / alpha
    if not math.isfinite(value):
        raise DivergentIntegral("power-weighted integral is not finite")
    if alpha > 0 and tail_size > 10 * max(spec.abs_tol, spec.rel_tol * abs(value)):
        raise DivergentIntegral(
            f"integrand has not decayed at tail_cut: t^alpha g(t) = {tail_size:.3e}"
        )
    return QuadResult(value, err, hr.evaluations + tr.evaluations + 2)


def integrate_powerweight(
    g: Callable[[np.ndarray], np.ndarray],
    alpha: float,
    g0: float | None = None,
    spec: QuadratureSpec | None = None,
    *,
    split: float = 1.0,
    breaks: Sequence[float] = (),
    gdiff: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """Value of :func:`powerweight_quad` without diagnostics."""
    return powerweight_quad(
        g, alpha, g0, spec, split=split, breaks=breaks, gdiff=gdiff
    ).value


# ---------------------------------------------------------------- sphere


def sphere_area(n: int) -> float:
    """(n-1)-dimensional Hausdorff measure of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def unit_ball_volume(n: int) -> float:
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    dim: int
    directions: np.ndarray
    weights: np.ndarray
    kind: str = field(default="custom")
    resolution: int = 0

    def __post_init__(self) -> None:
        d = np.asarray(self.directions, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if d.ndim != 2 or d.shape[1] != self.dim or w.shape != (d.shape[0],):
            raise ValueError("directions must be (m, n) and weights (m,)")
        d.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.directions.shape[0]

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum in fixed grid order."""
        return math.fsum(np.asarray(values, dtype=float) * self.weights)


@lru_cache(maxsize=32)
def sphere_grid(n: int, resolution: int = 64) -> SphereGrid:
    """Deterministic quadrature grid on the unit sphere of R^n.

    n=1: the two points +-1.  n=2: equal-angle points starting at e1.
    n=3: Gauss-Legendre in cos(theta) times uniform azimuth.
    n>=4: unscrambled Halton points pushed to the sphere, equal weights.
    """
    n = int(n)
    resolution = int(resolution)
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if n == 1:
        return SphereGrid(1, np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]), "exact", 2)
    if n == 2:
        theta = 2.0 * math.pi * np.arange(resolution) / resolution
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        w = np.full(resolution, 2.0 * math.pi / resolution)
        return SphereGrid(2, dirs, w, "equal-angle", resolution)
    if n == 3:
        m = max(resolution // 2, 1)
        x, wx = np.polynomial.legendre.leggauss(m)
        nphi = 2 * m
        phi = 2.0 * math.pi * (np.arange(nphi) + 0.5) / nphi
        ct = np.repeat(x, nphi)
        st = np.sqrt(1.0 - ct**2)
        ph = np.tile(phi, m)
        dirs = np.column_stack([st * np.cos(ph), st * np.sin(ph), ct])
        w = np.repeat(wx, nphi) * (2.0 * math.pi / nphi)
        return SphereGrid(3, dirs, w, "gauss-product", resolution)
    count = resolution * 16
    pts = qmc.Halton(d=n, scramble=False).random(count + 1)[1:]
    z = norm.ppf(pts)
    dirs = z / np.linalg.norm(z, axis=1, keepdims=True)
    w = np.full(count, sphere_area(n) / count)
    return SphereGrid(n, dirs, w, "halton", resolution)


# ---------------------------------------------------------------- Monte Carlo


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, stream); no global state."""
    key = np.array([int(seed) % 2**64, int(stream) % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def mc_expectation(
    sampler: Callable[[np.random.Generator, int], np.ndarray],
    integrand: Callable[[np.ndarray], np.ndarray],
    spec: QuadratureSpec,
    *,
    stream: int = 0,
    samples: int | None = None,
) -> tuple[float, float]:
    """Sample mean and standard error of ``integrand(sampler(rng, N))``."""
    count = int(samples or spec.mc_samples)
    if count < 2:
        raise ValueError("Monte Carlo needs at least two samples")
    rng = make_rng(spec.seed, stream)
    pts = sampler(rng, count)
    vals = np.asarray(integrand(pts), dtype=float)
    if vals.shape != (count,):
        vals = np.broadcast_to(vals, (count,)).astype(float)
    if not np.all(np.isfinite(vals)):
        raise NonFinite("Monte Carlo integrand produced a non-finite sample")
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(count))
    return mean, stderr
