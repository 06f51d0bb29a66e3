"""The star bodies H_alpha f, Pi_2^{*,alpha} f and R_alpha f.

All three come from one per-direction quantity, the power moment of the
autocorrelation profile g(t) = G f(t xi):

    J(alpha) = int_0^inf t^(alpha-1) g(t) dt                  (alpha > 0)
    J(alpha) = int_0^inf t^(alpha-1) (g(t) - g(0)) dt         (-1 < alpha < 0)

so that rho_H^alpha = J(alpha), rho_Pi^(-2a) = -2 J(-2a) and
rho_R^alpha = alpha J(alpha) / ||f||_2^2.  For functions of the form
F(|M(x - x0)|) the profile along xi is a rescaling of a single radial
profile, and J is computed once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .autocorr import AutocorrProfile, autocorr_profile, radial_autocorr
from .errors import (
    AssumptionViolated,
    DivergentIntegral,
    NonConvergent,
    PreconditionFailed,
)
from .funcspace import (
    CustomRadialDecreasing,
    HlsExtremal,
    SimplexExponential,
    TestFunction,
    lp_functional,
)
from .numerics import (
    QuadratureSpec,
    SphereGrid,
    adaptive_gl,
    integrate_powerweight,
    make_rng,
    mc_expectation,
    powerweight_quad,
    sphere_area,
    unit_ball_volume,
)
from .starbody import (
    RadialFunctionBody,
    SampledBody,
    StarBody,
    dual_mixed_volume,
    volume,
    write_radial_csv,
)

__all__ = [
    "HlsBodyResult",
    "ZetaProfile",
    "hls_body",
    "body_function",
    "body_volume",
    "polar_projection_body",
    "radial_mean_function_body",
    "power_moment",
    "log_moment",
    "anisotropic_hls_functional",
    "hls_functional_mc",
    "simplex_exponential_radius",
    "zeta_profile",
    "zeta_from_autocorr",
]

EULER_GAMMA = float(np.euler_gamma)
# below this |alpha| the power form (.)^(1/alpha) loses all digits to
# cancellation; the logarithmic body is used instead (error O(alpha))
LOG_CROSSOVER = 1e-6


@dataclass(frozen=True)
class HlsBodyResult:
    """A sampled body plus per-direction diagnostics."""

    body: SampledBody
    alpha: float
    kind: str
    converged: np.ndarray
    errors: np.ndarray
    notes: tuple = ()

    @property
    def grid(self) -> SphereGrid:
        return self.body.grid

    @property
    def radii(self) -> np.ndarray:
        return self.body.rho

    @property
    def ok(self) -> bool:
        return bool(np.all(self.converged))

    @property
    def flagged(self) -> np.ndarray:
        return np.flatnonzero(~self.converged)

    @property
    def max_rel_error(self) -> float:
        r = np.where(self.radii > 0, self.radii, 1.0)
        return float(np.max(self.errors / r)) if self.errors.size else 0.0

    def volume(self, spec: QuadratureSpec | None = None) -> float:
        if not self.ok:
            raise DivergentIntegral(f"{len(self.flagged)} directions did not converge")
        return volume(self.body, spec)

    def to_csv(self, path) -> None:
        write_radial_csv(path, self.grid.directions, self.radii)


# ------------------------------------------------------------------ moments


def _radial_family(f: TestFunction) -> bool:
    return isinstance(f, (HlsExtremal, CustomRadialDecreasing))


def _base_profile(f: TestFunction) -> AutocorrProfile:
    """Autocorrelation profile of the unit radial profile h = F(|x|)."""
    n = f.dim
    g0 = n * unit_ball_volume(n) * f.profile_moment(2.0)
    e1 = np.zeros(n)
    e1[0] = 1.0

    def func(t):
        t = np.asarray(t, dtype=float)
        return radial_autocorr(f, t.ravel()).reshape(t.shape)

    if isinstance(f, HlsExtremal):
        return AutocorrProfile(e1, func, g0, "polynomial", order=f.decay_order,
                               method="polar-quadrature")
    sup = 2.0 * f.support_radius
    if math.isfinite(sup):
        return AutocorrProfile(e1, func, g0, "compact", support=sup, breaks=(sup,),
                               method="polar-quadrature", scale=sup)
    return AutocorrProfile(e1, func, g0, f.decay, order=f.decay_order, method="polar-quadrature")


def power_moment(prof: AutocorrProfile, alpha: float, spec: QuadratureSpec):
    """(J(alpha), error estimate) for one profile."""
    if prof.decay == "polynomial" and prof.order is not None and alpha >= prof.order:
        raise DivergentIntegral(
            f"t^(alpha-1) g(t) is not integrable: alpha={alpha} >= decay order {prof.order}"
        )
    split = prof.scale if math.isfinite(prof.scale) and prof.scale > 0 else 1.0
    if prof.decay == "compact" and math.isfinite(prof.support):
        split = min(split, prof.support)
    res = powerweight_quad(
        prof, alpha, prof.g0 if alpha < 0 else None, spec, split=split,
        breaks=prof.breaks, gdiff=prof.diff,
    )
    return res.value, res.error


def log_moment(prof: AutocorrProfile, spec: QuadratureSpec):
    """int_0^inf (1/t)(g(t)/g(0) - e^(-t)) dt with its error estimate."""
    g0 = prof.g0
    t0 = 1.0
    guard = spec.abs_tol

    def head(t):
        num = prof.difference(t) / g0 - np.expm1(-t)
        num = np.where(np.abs(num) < guard, 0.0, num)
        return num / t

    def tail(u):
        one_m = 1.0 - u
        t = t0 + u / one_m
        return (prof(t) / g0 - np.exp(-t)) / t / one_m**2

    cuts = [b for b in prof.breaks if 0 < b]
    kw = dict(nodes=spec.radial_nodes, rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
              max_panels=spec.max_panels)
    h = adaptive_gl(head, 0.0, t0, breaks=[c for c in cuts if c < t0], **kw)
    tl = adaptive_gl(tail, 0.0, 1.0, breaks=[(c - t0) / (1.0 + c - t0) for c in cuts if c > t0],
                     **kw)
    return h.value + tl.value, h.error + tl.error


def _direction_moments(
    f: TestFunction, alpha: float, grid: SphereGrid, spec: QuadratureSpec
):
    """Per direction (J or log-moment, error, converged)."""
    dirs = grid.directions
    k = len(grid)
    vals = np.full(k, np.nan)
    errs = np.full(k, np.inf)
    ok = np.zeros(k, dtype=bool)
    notes: list[str] = []

    def one(prof):
        if alpha == 0:
            return log_moment(prof, spec)
        return power_moment(prof, alpha, spec)

    if _radial_family(f):
        # g(t xi) = c G_h(t |M xi|): one moment, rescaled per direction
        base = _base_profile(f)
        c = f.amplitude**2 / f.det
        s = np.linalg.norm(dirs @ f.matrix.T, axis=1)
        try:
            v, e = one(base)
        except (DivergentIntegral, NonConvergent) as exc:
            notes.append(f"all directions: {exc}")
            return vals, errs, ok, notes
        if alpha == 0:
            vals[:] = v - np.log(s)
            errs[:] = e
        else:
            vals[:] = c * s ** (-alpha) * v
            errs[:] = c * s ** (-alpha) * e
        ok[:] = True
        return vals, errs, ok, notes

    for i in range(k):
        try:
            prof = autocorr_profile(f, dirs[i], spec)
            vals[i], errs[i] = one(prof)
            ok[i] = True
        except (DivergentIntegral, NonConvergent) as exc:
            notes.append(f"direction {i}: {exc}")
    return vals, errs, ok, notes


def _result(grid, rho, err, ok, alpha, kind, notes) -> HlsBodyResult:
    rho = np.where(ok, rho, 0.0)
    err = np.where(ok, err, np.inf)
    return HlsBodyResult(SampledBody(grid, rho), float(alpha), kind, ok, err, tuple(notes))


def hls_body(
    f: TestFunction, alpha: float, grid: SphereGrid, spec: QuadratureSpec | None = None
) -> HlsBodyResult:
    """H_alpha f: rho(xi)^alpha = int_0^inf t^(alpha-1) G f(t xi) dt."""
    spec = spec or QuadratureSpec()
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    J, E, ok, notes = _direction_moments(f, alpha, grid, spec)
    with np.errstate(invalid="ignore"):
        rho = J ** (1.0 / alpha)
        err = rho * E / (alpha * np.abs(J))
    return _result(grid, rho, err, ok, alpha, "H", notes)


def polar_projection_body(
    f: TestFunction, alpha: float, grid: SphereGrid, spec: QuadratureSpec | None = None
) -> HlsBodyResult:
    """Pi_2^{*,alpha} f: rho^(-2 alpha) = int t^(-2alpha-1) int |f(x+t xi) - f(x)|^2 dx dt.

    With D = 2(g(0) - g) this is -2 J(-2 alpha) in continuation form for
    alpha < 1/2.  For 1/2 <= alpha < 1 the integral is taken directly as a
    positive power moment of D(t)/t^2.
    """
    spec = spec or QuadratureSpec()
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    beta = -2.0 * alpha
    if alpha < 0.5:
        J, E, ok, notes = _direction_moments(f, beta, grid, spec)
        I = -2.0 * J
    else:
        I, E, ok, notes = _direct_polar(f, alpha, grid, spec)
    with np.errstate(invalid="ignore", divide="ignore"):
        ok = ok & (I > 0)
        rho = I ** (1.0 / beta)
        err = rho * E / (2.0 * alpha * np.abs(I))
    return _result(grid, rho, err, ok, alpha, "Pi", notes)


def _difference_quotient(prof: AutocorrProfile, alpha: float):
    """t -> D(t)/t^2 with a power-law head where g - g(0) is lost in rounding.

    D(t) ~ c t^p is fitted at the smallest t with D resolved to 1e-7 g(0);
    p <= 2 alpha means the defining integral diverges at t = 0.
    """
    t0 = prof.scale if math.isfinite(prof.scale) and prof.scale > 0 else 1.0
    ts = t0 * 2.0 ** -np.arange(0, 60, dtype=float)
    d = -2.0 * prof.difference(ts)
    good = np.flatnonzero(d >= 1e-7 * prof.g0)
    j = int(good[-1]) if good.size else 0
    if j < 1:
        raise DivergentIntegral("difference function is not resolved near t = 0")
    p = math.log2(d[j - 1] / d[j])
    if p <= 2.0 * alpha + 1e-3:
        raise DivergentIntegral(f"D(t) ~ t^{p:.3f} near 0: the integral diverges for alpha = {alpha}")
    t_ref, c_ref = ts[j], d[j] / ts[j] ** 2

    def D2(t):
        t = np.asarray(t, dtype=float)
        head = t < t_ref
        safe = np.where(head, t_ref, t)
        val = -2.0 * prof.difference(safe) / (safe * safe)
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            model = c_ref * (np.where(head, t, t_ref) / t_ref) ** (p - 2.0)
        return np.where(head, model, val)

    return D2


def _direct_polar(f, alpha, grid, spec):
    k = len(grid)
    vals = np.full(k, np.nan)
    errs = np.full(k, np.inf)
    ok = np.zeros(k, dtype=bool)
    notes = []
    for i in range(k):
        try:
            prof = autocorr_profile(f, grid.directions[i], spec)
            D2 = _difference_quotient(prof, alpha)
            res = powerweight_quad(D2, 2.0 - 2.0 * alpha, None, spec,
                                   split=prof.scale if math.isfinite(prof.scale) else 1.0,
                                   breaks=prof.breaks)
            vals[i], errs[i], ok[i] = res.value, res.error, True
        except (DivergentIntegral, NonConvergent) as exc:
            notes.append(f"direction {i}: {exc}")
    return vals, errs, ok, notes


def radial_mean_function_body(
    f: TestFunction, alpha: float, grid: SphereGrid, spec: QuadratureSpec | None = None
) -> HlsBodyResult:
    """R_alpha f for alpha in (-1, inf), including the logarithmic case alpha = 0."""
    spec = spec or QuadratureSpec()
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    g0 = lp_functional(f, 2.0) ** 2
    if not g0 > 0:
        raise PreconditionFailed("f must be non-zero")
    log_branch = abs(alpha) < LOG_CROSSOVER
    J, E, ok, notes = _direction_moments(f, 0.0 if log_branch else alpha, grid, spec)
    if log_branch and alpha != 0:
        notes = list(notes) + [f"|alpha| < {LOG_CROSSOVER:g}: logarithmic body used"]
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        if log_branch:
            rho = np.exp(-EULER_GAMMA + J)
            err = rho * E
        else:
            base = alpha * J / g0
            ok = ok & (base > 0)
            rho = base ** (1.0 / alpha)
            err = rho * E / abs(alpha * J)
    return _result(grid, rho, err, ok, alpha, "R", notes)


def _kink_directions(f: TestFunction) -> np.ndarray | None:
    """Directions where radii of H/Pi/R bodies of f may have kinks (n = 2)."""
    if f.dim != 2:
        return None
    if isinstance(f, SimplexExponential):
        # |M xi|_1 is non-smooth where a coordinate of M xi vanishes
        rows = f.matrix
        d = np.column_stack([-rows[:, 1], rows[:, 0]])
        return np.vstack([d, -d])
    body = getattr(f, "E", None)
    if body is not None and hasattr(body, "vertices"):
        v = body.vertices()
        diff = (v[:, None, :] - v[None, :, :]).reshape(-1, 2)
        diff = diff[np.linalg.norm(diff, axis=1) > 1e-12]
        return diff
    return None


def body_function(
    f: TestFunction, alpha: float, kind: str = "H", spec: QuadratureSpec | None = None
) -> RadialFunctionBody:
    """H, Pi or R body of f with radii computed on demand in any direction."""
    spec = spec or QuadratureSpec()
    builder = {"H": hls_body, "Pi": polar_projection_body, "R": radial_mean_function_body}[kind]

    def radii(u):
        u = np.atleast_2d(u)
        grid = SphereGrid(f.dim, u, np.ones(u.shape[0]), "adhoc", u.shape[0])
        res = builder(f, alpha, grid, spec)
        if not res.ok:
            raise DivergentIntegral(f"{kind} body has divergent directions")
        return res.radii

    return RadialFunctionBody(radii, f.dim, f"{kind}_{alpha:g}", _kink_directions(f))


def body_volume(
    f: TestFunction,
    alpha: float,
    kind: str = "H",
    spec: QuadratureSpec | None = None,
    *,
    grid: SphereGrid | None = None,
) -> float:
    """Volume of the H, Pi or R body of f.

    In the plane the angle integral is adaptive with radii computed on
    demand; otherwise the sphere grid of ``spec`` (or ``grid``) is used.
    """
    spec = spec or QuadratureSpec()
    n = f.dim
    if n == 2 and grid is None:
        body = body_function(f, alpha, kind, spec)
        return volume(body, spec.with_(rel_tol=max(spec.rel_tol, 1e-5)))
    if grid is None:
        from .numerics import sphere_grid

        grid = sphere_grid(n, spec.sphere_resolution)
    builder = {"H": hls_body, "Pi": polar_projection_body, "R": radial_mean_function_body}[kind]
    return builder(f, alpha, grid, spec).volume(spec)


def simplex_exponential_radius(f: SimplexExponential, alpha: float, xi, kind: str = "H") -> float:
    """Closed-form radius for a exp(-||M(x - x0)||_Delta_n).

    Along xi the profile is C e^(-k t) with C = a^2/(|det M| 2^n) and
    k = |M xi|_1, so J(alpha) = C Gamma(alpha) k^(-alpha).
    """
    xi = np.asarray(xi, dtype=float)
    n = f.dim
    C = f.amplitude**2 / (f.det * 2.0**n)
    k = float(np.sum(np.abs(f.matrix @ xi)))
    if kind == "R" and alpha == 0:
        return math.exp(-EULER_GAMMA) / k
    from scipy.special import gamma

    J = C * float(gamma(alpha)) * k ** (-alpha)
    if kind == "H":
        return J ** (1.0 / alpha)
    if kind == "R":
        return (alpha * J / C) ** (1.0 / alpha)
    if kind == "Pi":
        beta = -2.0 * alpha
        J = C * float(gamma(beta)) * k ** (-beta)
        return (-2.0 * J) ** (1.0 / beta)
    raise ValueError(kind)


# ------------------------------------------------------------------ anisotropic functional


def anisotropic_hls_functional(
    f: TestFunction,
    K: StarBody,
    alpha: float,
    grid: SphereGrid,
    spec: QuadratureSpec | None = None,
    *,
    H: HlsBodyResult | None = None,
) -> float:
    """n V~_alpha(K, H_alpha f) = double integral of f(x) f(y) / ||x - y||_K^(n - alpha)."""
    spec = spec or QuadratureSpec()
    n = f.dim
    if not alpha > 0 or alpha == n:
        raise ValueError("alpha must be positive and different from n")
    if H is None:
        H = hls_body(f, alpha, grid, spec)
    if not H.ok:
        raise DivergentIntegral("H_alpha f has divergent directions")
    if isinstance(K, SampledBody) and K.grid is not H.grid:
        K = SampledBody(H.grid, K.radial(H.grid.directions))
    return n * dual_mixed_volume(K, H.body, alpha, spec).value


def hls_functional_mc(
    f: TestFunction,
    alpha: float,
    spec: QuadratureSpec | None = None,
    *,
    K: StarBody | None = None,
    samples: int | None = None,
    stream: int = 3,
) -> tuple[float, float]:
    """Direct Monte Carlo of the double integral, with standard error.

    For alpha < n the difference z = y - x is drawn with a density
    proportional to |z|^(alpha - n) near the origin and a heavy tail, which
    keeps the weights bounded.  For alpha > n, x and y are drawn
    independently from f / ||f||_1.
    """
    spec = spec or QuadratureSpec()
    n = f.dim
    l1 = lp_functional(f, 1.0)
    gauge = (lambda z: np.linalg.norm(z, axis=1)) if K is None else K.gauge
    count = int(samples or spec.mc_samples)

    if alpha > n:
        def sampler(rng, k):
            return np.concatenate([f.sample(rng, k), f.sample(rng, k)], axis=1)

        def integrand(xy):
            d = xy[:, n:] - xy[:, :n]
            return gauge(d) ** (alpha - n)

        m, e = mc_expectation(sampler, integrand, spec, stream=stream, samples=count)
        return l1 * l1 * m, l1 * l1 * e

    R0 = float(np.median(np.linalg.norm(f.sample(make_rng(spec.seed, stream + 1), 4096)
                                        - f.sample(make_rng(spec.seed, stream + 2), 4096), axis=1)))
    area = sphere_area(n)

    def sampler(rng, k):
        x = f.sample(rng, k)
        u = rng.standard_normal((k, n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v = rng.random(k)
        w = v / (1.0 - v)
        r = R0 * w ** (1.0 / alpha)
        return np.concatenate([x, u * r[:, None], w[:, None]], axis=1)

    def integrand(s):
        x, z, w = s[:, :n], s[:, n:2 * n], s[:, 2 * n]
        r = np.linalg.norm(z, axis=1)
        ratio = (gauge(z) / r) ** (alpha - n)
        return f(x + z) * ratio * area * R0**alpha * (1.0 + w) ** 2 / alpha

    m, e = mc_expectation(sampler, integrand, spec, stream=stream, samples=count)
    return l1 * m, l1 * e


# ------------------------------------------------------------------ zeta


@dataclass(frozen=True)
class ZetaProfile:
    alphas: np.ndarray
    values: np.ndarray
    omega: str = ""
    phi: str = ""

    def is_decreasing(self, slack: float = 1e-6) -> bool:
        d = np.diff(self.values)
        return bool(np.all(d <= slack * np.maximum(np.abs(self.values[:-1]), 1.0)))


def _validate_zeta_inputs(omega, phi, scale: float) -> None:
    t = np.geomspace(1e-3, 1e3, 64) * scale
    ph = np.asarray(phi(t), dtype=float)
    ph0 = float(np.asarray(phi(np.array([0.0])), dtype=float)[0])
    if ph0 != 0.0:
        raise AssumptionViolated("phi(0) must be 0")
    fin = np.isfinite(ph)
    if np.any(ph < 0) or np.any(np.diff(ph[fin]) < -1e-12 * np.abs(ph[fin][1:])):
        raise AssumptionViolated("phi must be non-negative and non-decreasing")
    q = ph[fin] / t[fin]
    if np.any(np.diff(q) < -1e-9 * np.abs(q[1:])):
        raise AssumptionViolated("phi(t)/t must be non-decreasing")
    om = np.asarray(omega(np.concatenate([[0.0], t])), dtype=float)
    if np.any(om < 0) or np.any(np.diff(om) > 1e-12 * np.abs(om[:-1])):
        raise AssumptionViolated("omega must be non-negative and non-increasing")


def _comp(omega, phi):
    def h(t):
        p = np.asarray(phi(t), dtype=float)
        out = np.zeros_like(p)
        fin = np.isfinite(p)
        out[fin] = np.asarray(omega(p[fin]), dtype=float)
        return out

    return h


def _zeta_at(omega, phi, alpha, spec, scale, breaks):
    om = _comp(omega, phi)
    w0 = float(np.asarray(omega(np.array([0.0])), dtype=float)[0])
    if alpha == 0:
        def head(t):
            return (om(t) - omega(t)) / (t * w0)

        def tail(u):
            one_m = 1.0 - u
            t = scale + u / one_m
            return (om(t) - omega(t)) / (t * w0) / one_m**2

        kw = dict(nodes=spec.radial_nodes, rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                  max_panels=spec.max_panels)
        a = adaptive_gl(head, 0.0, scale, breaks=[b for b in breaks if b < scale], **kw).value
        b = adaptive_gl(tail, 0.0, 1.0, breaks=[(c - scale) / (1 + c - scale)
                                               for c in breaks if c > scale], **kw).value
        return math.exp(a + b)
    g0 = w0 if alpha < 0 else None
    num = integrate_powerweight(om, alpha, g0, spec, split=scale, breaks=breaks)
    den = integrate_powerweight(omega, alpha, g0, spec, split=scale, breaks=breaks)
    return (num / den) ** (1.0 / alpha)


def zeta_profile(
    omega: Callable[[np.ndarray], np.ndarray],
    phi: Callable[[np.ndarray], np.ndarray],
    alphas: Sequence[float],
    spec: QuadratureSpec | None = None,
    *,
    scale: float = 1.0,
    breaks: Sequence[float] = (),
    names: tuple[str, str] = ("", ""),
) -> ZetaProfile:
    """zeta(alpha) for each alpha in (-1, inf) by the three-branch formula."""
    spec = spec or QuadratureSpec()
    _validate_zeta_inputs(omega, phi, scale)
    alphas = np.asarray(sorted(float(a) for a in alphas))
    if np.any(alphas <= -1):
        raise ValueError("alphas must exceed -1")
    vals = np.array([_zeta_at(omega, phi, a, spec, scale, tuple(breaks)) for a in alphas])
    if not np.all(np.isfinite(vals) & (vals > 0)):
        raise AssumptionViolated("zeta is not positive and finite on the grid")
    return ZetaProfile(alphas, vals, names[0], names[1])


def _ratio(prof: AutocorrProfile, t) -> tuple[np.ndarray, np.ndarray]:
    """g/g0 and g/g0 - 1, the latter free of cancellation where available."""
    t = np.asarray(t, dtype=float)
    return np.asarray(prof(t), dtype=float) / prof.g0, np.asarray(prof.difference(t), dtype=float) / prof.g0


def zeta_from_autocorr(
    prof: AutocorrProfile, alphas: Sequence[float], s: float = 0.0,
    spec: QuadratureSpec | None = None,
) -> ZetaProfile:
    """zeta for omega, phi built from an autocorrelation profile.

    s = 0: omega = g0 e^(-t), phi = -log(g/g0).  s > 0 uses r = s/(ns+2),
    omega = g0 (1 - r t)_+^(1/r) and phi = (1 - (g/g0)^r)/r.
    """
    spec = spec or QuadratureSpec()
    g0 = prof.g0
    n = prof.direction.size
    if s == 0:
        def omega(t):
            return g0 * np.exp(-np.asarray(t, dtype=float))

        def phi(t):
            q, x = _ratio(prof, t)
            with np.errstate(divide="ignore"):
                far = -np.log(np.where(q > 0, q, 1.0))
                return np.where(q > 0.5, -np.log1p(np.maximum(x, -0.5)),
                                np.where(q > 0, far, np.inf))

        names = ("g0 exp(-t)", "-log(g/g0)")
    else:
        r = s / (n * s + 2.0)

        def omega(t):
            return g0 * np.maximum(1.0 - r * np.asarray(t, dtype=float), 0.0) ** (1.0 / r)

        def phi(t):
            q, x = _ratio(prof, t)
            near = -np.expm1(r * np.log1p(np.clip(x, -0.5, 0.0))) / r
            return np.where(q > 0.5, near, (1.0 - np.clip(q, 0.0, 1.0) ** r) / r)

        names = (f"g0 (1 - {r:.4g} t)_+^(1/{r:.4g})", "(1 - (g/g0)^r)/r")
    return zeta_profile(omega, phi, alphas, spec, scale=prof.scale, breaks=prof.breaks,
                        names=names)
