"""Batch front end: ``ahls verify``, ``ahls body`` and ``ahls constants``.

A run is described by a JSON config::

    {"seed": 20230917,
     "quadrature": {"rel_tol": 1e-6},
     "report": "report.json",
     "checks": [{"name": "ahls_low", "alpha": 0.5,
                 "function": {"family": "Indicator",
                              "body": {"type": "Box", "lo": [0], "hi": [1]}}}]}

Exit codes: 0 when no check is VIOLATED, 1 otherwise, 2 for config errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import verify as V
from .errors import AhlsError, ConfigError
from .funcspace import HlsExtremal, Indicator, SConcaveSimplex, SimplexExponential, TestFunction
from .hlsbody import hls_body, polar_projection_body, radial_mean_function_body
from .numerics import QuadratureSpec, SphereGrid, sphere_grid
from .radialmean import bridge_check, radial_mean_body
from .report import VIOLATED, InequalityReport
from .starbody import (
    Ball,
    Box,
    CenteredEllipsoid,
    CrossPolytope,
    Cube,
    LinearImage,
    Simplex,
    StarBody,
    write_radial_csv,
)

__all__ = [
    "CheckSpec",
    "RunConfig",
    "build_body",
    "build_function",
    "run_check",
    "run_suite",
    "export_body",
    "preset",
    "PRESETS",
    "main",
]

log = logging.getLogger("ahls")


# ------------------------------------------------------------------ config


@dataclass(frozen=True)
class CheckSpec:
    name: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, **self.params}


@dataclass(frozen=True)
class RunConfig:
    checks: tuple[CheckSpec, ...]
    quadrature: dict = field(default_factory=dict)
    seed: int | None = None
    report: str | None = None

    @property
    def spec(self) -> QuadratureSpec:
        q = dict(self.quadrature)
        if self.seed is not None:
            q["seed"] = int(self.seed)
        return QuadratureSpec().with_(**q)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"checks": [c.to_dict() for c in self.checks]}
        if self.quadrature:
            out["quadrature"] = dict(self.quadrature)
        if self.seed is not None:
            out["seed"] = self.seed
        if self.report is not None:
            out["report"] = self.report
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Any) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config: expected a JSON object")
        unknown = set(data) - {"checks", "quadrature", "seed", "report"}
        if unknown:
            raise ConfigError(f"config: unknown keys {sorted(unknown)}")
        checks = data.get("checks")
        if not isinstance(checks, list) or not checks:
            raise ConfigError("checks: expected a non-empty list")
        specs = []
        for i, c in enumerate(checks):
            if not isinstance(c, dict) or "name" not in c:
                raise ConfigError(f"checks[{i}]: expected an object with a 'name'")
            name = c["name"]
            if name not in CHECKS:
                raise ConfigError(f"checks[{i}].name: unknown check {name!r}")
            spec = CheckSpec(name, {k: v for k, v in c.items() if k != "name"})
            _validate(spec, f"checks[{i}]")
            specs.append(spec)
        quad = data.get("quadrature", {})
        if not isinstance(quad, dict):
            raise ConfigError("quadrature: expected an object")
        names = {f.name for f in dataclasses.fields(QuadratureSpec)}
        bad = set(quad) - names
        if bad:
            raise ConfigError(f"quadrature: unknown fields {sorted(bad)}")
        try:
            QuadratureSpec().with_(**quad)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"quadrature: {exc}") from None
        seed = data.get("seed")
        if seed is not None and (not isinstance(seed, int) or seed < 0 or seed >= 2**64):
            raise ConfigError("seed: expected an unsigned 64-bit integer")
        report = data.get("report")
        if report is not None and not isinstance(report, str):
            raise ConfigError("report: expected a path string")
        return cls(tuple(specs), dict(quad), seed, report)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_json(Path(path).read_text())


# ------------------------------------------------------------------ builders


def _floats(x, where: str, n: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected numbers") from None
    if n is not None and arr.size != n:
        raise ConfigError(f"{where}: expected {n} entries")
    return arr


def build_body(d: Any, where: str = "body") -> StarBody:
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError(f"{where}: expected an object with a 'type'")
    t = d["type"]
    try:
        if t == "Box":
            return Box(list(_floats(d["lo"], f"{where}.lo")), list(_floats(d["hi"], f"{where}.hi")))
        if t == "Cube":
            return Cube(int(d.get("n", 2)))
        if t == "Ball":
            return Ball(float(d.get("radius", 1.0)), int(d.get("n", 2)))
        if t == "Disk":
            # ball of the given area, centred at the origin
            return Ball(math.sqrt(float(d.get("area", 1.0)) / math.pi), 2)
        if t == "Simplex":
            return Simplex(int(d.get("n", 2)))
        if t == "CrossPolytope":
            return CrossPolytope(int(d.get("n", 2)))
        if t == "Ellipsoid":
            return CenteredEllipsoid(_floats(d["matrix"], f"{where}.matrix"))
        if t == "LinearImage":
            return LinearImage(_floats(d["matrix"], f"{where}.matrix"),
                               build_body(d["body"], f"{where}.body"))
    except KeyError as exc:
        raise ConfigError(f"{where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}.type: unknown body type {t!r}")


def build_function(d: Any, where: str = "function") -> TestFunction:
    if not isinstance(d, dict) or "family" not in d:
        raise ConfigError(f"{where}: expected an object with a 'family'")
    fam = d["family"]
    a = float(d.get("amplitude", 1.0))
    try:
        if fam == "HlsExtremal":
            return HlsExtremal(int(d["n"]), float(d["alpha"]), a, float(d.get("lam", 1.0)),
                               d.get("matrix"), d.get("center"))
        if fam == "SimplexExponential":
            return SimplexExponential(int(d["n"]), a, d.get("matrix"), d.get("center"))
        if fam == "SConcaveSimplex":
            return SConcaveSimplex(int(d["n"]), float(d["s"]), a, d.get("center"))
        if fam == "Indicator":
            return Indicator(build_body(d["body"], f"{where}.body"), a)
    except KeyError as exc:
        raise ConfigError(f"{where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}.family: unknown family {fam!r}")


def _s_value(s) -> float:
    if s is None or s == "inf" or s == "Infinity":
        return math.inf
    return float(s)


def _grid(p: dict, n: int, spec: QuadratureSpec) -> SphereGrid:
    if "directions" in p:
        d = np.atleast_2d(_floats(p["directions"], "directions"))
        d = d / np.linalg.norm(d, axis=1, keepdims=True)
        return SphereGrid(n, d, np.ones(len(d)), "custom", len(d))
    res = int(p.get("resolution", spec.sphere_resolution))
    return sphere_grid(n, 2 if n == 1 else res)


# each entry: (required keys, runner(params, spec) -> report)
def _f(p):
    return build_function(p["function"])


CHECKS: dict[str, tuple[tuple[str, ...], Callable[[dict, QuadratureSpec], InequalityReport]]] = {
    "gamma_constant": (("n", "alpha"), lambda p, s: V.check_gamma_constant(
        int(p["n"]), float(p["alpha"]), p.get("expected"), float(p.get("tol", 1e-12)))),
    "ahls_low": (("function", "alpha"), lambda p, s: V.verify_ahls_low(_f(p), float(p["alpha"]), s)),
    "ahls_high": (("function", "alpha"), lambda p, s: V.verify_ahls_high(_f(p), float(p["alpha"]), s)),
    "reverse_logconcave": (("function", "alpha"), lambda p, s: V.verify_reverse_logconcave(
        _f(p), float(p["alpha"]), s, variant=p.get("variant", "H"),
        path=p.get("path", "quadrature"))),
    "inclusion": (("function", "alphas", "s"), lambda p, s: V.verify_inclusion(
        _f(p), [float(a) for a in p["alphas"]], _s_value(p["s"]), s,
        grid=_grid(p, _f(p).dim, s) if ("directions" in p or "resolution" in p) else None,
        slack=float(p.get("slack", 1e-6)))),
    "sconcave_corollaries": (("function", "alpha"), lambda p, s: V.verify_sconcave_corollaries(
        _f(p), float(p["alpha"]), s, variant=p.get("variant", "H"))),
    "rearrangement": (("function", "alpha"), lambda p, s: V.verify_rearrangement_monotonicity(
        _f(p), float(p["alpha"]), s)),
    "affine_invariance": (("function", "alpha", "matrix"), lambda p, s: V.verify_affine_invariance(
        _f(p), float(p["alpha"]), p["matrix"], s)),
    "volume_identity": (("function",), lambda p, s: V.verify_volume_identity(
        _f(p), p.get("kind", "H"), s)),
    "autocorr_mc": (("function", "points"), lambda p, s: V.verify_autocorr_mc(
        _f(p), p["points"], s, samples=int(p.get("samples", 1_000_000)),
        tol=float(p.get("tol", 2e-2)))),
    "sconcave_hyperplane": (("function", "ts"), lambda p, s: V.verify_sconcave_hyperplane(
        _f(p), [float(t) for t in p["ts"]], s, samples=int(p.get("samples", 1_000_000)),
        tol=float(p.get("tol", 2e-2)))),
    "convexity": (("function", "alpha"), lambda p, s: V.verify_convexity(
        _f(p), float(p["alpha"]), s, resolution=int(p.get("resolution", 128)))),
    "continuation": ((), lambda p, s: V.verify_continuation(spec=s)),
    "bridge": (("body", "alpha"), lambda p, s: bridge_check(
        build_body(p["body"]), float(p["alpha"]), _grid(p, build_body(p["body"]).dim, s), s,
        tol=float(p.get("tol", 1e-3)))),
}


def _validate(c: CheckSpec, where: str) -> None:
    required, _ = CHECKS[c.name]
    for key in required:
        if key not in c.params:
            raise ConfigError(f"{where}: check {c.name!r} needs field {key!r}")
    if "function" in c.params:
        build_function(c.params["function"], f"{where}.function")
    if "body" in c.params:
        build_body(c.params["body"], f"{where}.body")


def run_check(c: CheckSpec, spec: QuadratureSpec) -> InequalityReport:
    _, runner = CHECKS[c.name]
    return runner(c.params, spec)


# ------------------------------------------------------------------ presets


def _ind(body: dict) -> dict:
    return {"family": "Indicator", "body": body}


_UNIT = {"type": "Box", "lo": [0.0], "hi": [1.0]}
_SQUARE = {"type": "Cube", "n": 2}
_DISK = {"type": "Disk", "area": 1.0}
_SE = [{"family": "SimplexExponential", "n": n} for n in (1, 2, 3)]
_SE_POINTS = {
    1: [[0.3], [-0.7], [1.2], [-1.5], [0.05]],
    2: [[0.3, 0.2], [-0.4, 0.5], [0.8, -0.3], [-0.2, -0.6], [1.0, 0.4]],
    3: [[0.2, 0.1, 0.3], [-0.3, 0.4, 0.2], [0.5, -0.2, -0.1], [-0.2, -0.2, 0.4], [0.6, 0.3, 0.1]],
}


def _paper_desk_scale() -> dict:
    checks: list[dict] = []
    for n in range(1, 6):
        checks.append({"name": "gamma_constant", "n": n, "alpha": float(n), "tol": 1e-12})
    checks.append({"name": "gamma_constant", "n": 1, "alpha": 0.5,
                   "expected": math.gamma(0.25) / math.gamma(0.75), "tol": 1e-10})
    checks.append({"name": "ahls_low", "alpha": 0.5, "function": _ind(_UNIT)})
    for n, a in ((1, 0.5), (2, 1.0)):
        ext = {"family": "HlsExtremal", "n": n, "alpha": a}
        checks.append({"name": "ahls_low", "alpha": a, "function": ext})
    checks.append({"name": "affine_invariance", "alpha": 1.0,
                   "function": {"family": "HlsExtremal", "n": 2, "alpha": 1.0},
                   "matrix": [[1.0, 0.7], [0.0, 1.0]]})
    checks.append({"name": "ahls_high", "alpha": 2.0, "function": _ind(_UNIT)})
    checks.append({"name": "ahls_high", "alpha": 2.0,
                   "function": {"family": "HlsExtremal", "n": 1, "alpha": 2.0}})
    for n in (1, 2, 3):
        checks.append({"name": "autocorr_mc", "function": _SE[n - 1], "points": _SE_POINTS[n],
                       "samples": 1_000_000})
    for a in (0.25, 0.5, 0.75):
        for path in ("closed-form", "quadrature"):
            checks.append({"name": "reverse_logconcave", "alpha": a, "function": _SE[0],
                           "path": path})
    checks.append({"name": "reverse_logconcave", "alpha": 3.0, "function": _SE[0]})
    checks.append({"name": "reverse_logconcave", "alpha": 0.25, "function": _SE[0],
                   "variant": "Pi"})
    checks.append({"name": "reverse_logconcave", "alpha": 1.0, "function": _ind(_SQUARE)})
    for f in (_ind(_SQUARE), _SE[0], _SE[1]):
        for kind in ("H", "R"):
            checks.append({"name": "volume_identity", "function": f, "kind": kind})
    for a in (0.5, 1.0, 2.0):
        checks.append({"name": "bridge", "body": _SQUARE, "alpha": a, "resolution": 64})
    checks.append({"name": "bridge", "body": _UNIT, "alpha": -0.5, "tol": 1e-6})
    grid_alphas = [-0.5, 0.0, 0.5, 1.0, 2.0]
    checks.append({"name": "inclusion", "function": _SE[1], "alphas": grid_alphas, "s": 0.0})
    for body in (_SQUARE, _DISK, {"type": "Simplex", "n": 2}):
        checks.append({"name": "inclusion", "function": _ind(body), "alphas": grid_alphas,
                       "s": "inf"})
    checks.append({"name": "inclusion", "function": {"family": "SConcaveSimplex", "n": 2, "s": 1.0},
                   "alphas": grid_alphas, "s": 1.0, "directions": [[1, -1], [-1, 1]]})
    for f in (_SE[1], _ind(_SQUARE)):
        for a in (0.5, 1.0, 2.0):
            checks.append({"name": "convexity", "function": f, "alpha": a})
    for a in (1.0, 3.0):
        checks.append({"name": "rearrangement", "function": _ind(_SQUARE), "alpha": a})
    checks.append({"name": "continuation"})
    checks.append({"name": "sconcave_hyperplane",
                   "function": {"family": "SConcaveSimplex", "n": 2, "s": 1.0},
                   "ts": [0.2, 0.5, 0.8], "samples": 1_000_000})
    sc1 = {"family": "SConcaveSimplex", "n": 1, "s": 1.0}
    checks.append({"name": "sconcave_corollaries", "function": sc1, "alpha": 0.5})
    checks.append({"name": "sconcave_corollaries", "function": sc1, "alpha": 2.0})
    checks.append({"name": "sconcave_corollaries", "function": sc1, "alpha": 0.25, "variant": "Pi"})
    checks.append({"name": "sconcave_corollaries", "function": _ind(_UNIT), "alpha": 0.5})
    return {"checks": checks}


PRESETS: dict[str, Callable[[], dict]] = {"paper-desk-scale": _paper_desk_scale}


def preset(name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return RunConfig.from_dict(PRESETS[name]())


# ------------------------------------------------------------------ running


def run_suite(
    config: RunConfig, *, out: str | Path | None = None, stream=None
) -> tuple[int, list[InequalityReport]]:
    """Run every check; write the JSON report and print a summary table."""
    stream = sys.stdout if stream is None else stream
    spec = config.spec
    reports = []
    for c in config.checks:
        log.info("running %s", c.name)
        try:
            rep = run_check(c, spec)
        except AhlsError as exc:
            rep = InequalityReport(c.name, dict(c.params), None, None, None, (None, None), 0.0,
                                   f"SKIPPED({type(exc).__name__}: {exc})", (str(exc),))
        reports.append(rep)
    path = out if out is not None else config.report
    if path is not None:
        Path(path).write_text(reports_to_json(reports))
    stream.write(summary_table(reports))
    code = 1 if any(r.status == VIOLATED for r in reports) else 0
    return code, reports


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"


def _fmt(x) -> str:
    if x is None:
        return "-"
    return f"{x:.6g}"


def summary_table(reports) -> str:
    rows = [("#", "check", "status", "left", "middle", "right", "margin 1", "margin 2")]
    for i, r in enumerate(reports):
        m = list(r.margins) + [None, None]
        rows.append((str(i), r.check, r.status, _fmt(r.left), _fmt(r.middle), _fmt(r.right),
                     _fmt(m[0]), _fmt(m[1])))
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    n_bad = sum(r.status == VIOLATED for r in reports)
    lines.append(f"{len(reports)} checks, {n_bad} violated")
    return "\n".join(lines) + "\n"


def export_body(
    spec_dict: dict,
    alpha: float | None,
    resolution: int,
    out,
    *,
    kind: str = "H",
    spec: QuadratureSpec | None = None,
) -> np.ndarray:
    """Write the radial profile CSV of a body or of a body built from one.

    ``spec_dict`` is either a body ({"type": ...}) or a function
    ({"family": ...}).  A body alone is exported as is; with ``kind="R"``
    and ``alpha`` its radial mean body is exported instead.  Functions give
    H, Pi or R bodies.
    """
    spec = spec or QuadratureSpec()
    if "type" in spec_dict:
        E = build_body(spec_dict)
        grid = sphere_grid(E.dim, 2 if E.dim == 1 else resolution)
        if alpha is None:
            rho = np.asarray(E.radial(grid.directions), float)
        elif kind == "R":
            rho = radial_mean_body(E, alpha, grid, spec).radii
        else:
            f = Indicator(E)
            rho = _function_body(f, alpha, grid, kind, spec)
    else:
        f = build_function(spec_dict)
        if alpha is None:
            raise ConfigError("alpha is required for function bodies")
        grid = sphere_grid(f.dim, 2 if f.dim == 1 else resolution)
        rho = _function_body(f, alpha, grid, kind, spec)
    write_radial_csv(out, grid.directions, rho)
    return rho


def _function_body(f, alpha, grid, kind, spec) -> np.ndarray:
    builder = {"H": hls_body, "Pi": polar_projection_body, "R": radial_mean_function_body}
    if kind not in builder:
        raise ConfigError(f"kind: expected one of {sorted(builder)}")
    res = builder[kind](f, alpha, grid, spec)
    return res.radii


def constants_table(ns, alphas) -> list[dict]:
    rows = []
    for n in ns:
        for a in alphas:
            a = float(n) if a == "n" else float(a)
            rows.append({"n": int(n), "alpha": a, "gamma": float(V.gamma_constant(int(n), a))})
    return rows


# ------------------------------------------------------------------ argparse


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ahls", description="Affine HLS inequality checks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a suite of checks")
    src = pv.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON run configuration")
    src.add_argument("--preset", choices=sorted(PRESETS))
    pv.add_argument("--seed", type=int, help="override the Monte Carlo seed")
    pv.add_argument("--out", help="JSON report path")

    pb = sub.add_parser("body", help="export a radial profile as CSV")
    pb.add_argument("--config", required=True,
                    help="JSON body or function spec (inline or a file path)")
    pb.add_argument("--kind", default="H", choices=["H", "Pi", "R"])
    pb.add_argument("--alpha", type=float)
    pb.add_argument("--resolution", type=int, default=64)
    pb.add_argument("--seed", type=int)
    pb.add_argument("--out", required=True)

    pc = sub.add_parser("constants", help="table of sharp HLS constants")
    pc.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 4, 5])
    pc.add_argument("--alpha", nargs="+", default=["0.5", "1", "n"])
    pc.add_argument("--seed", type=int, help="accepted for a uniform interface")
    pc.add_argument("--out")
    return p


def _load_json_arg(text: str) -> Any:
    path = Path(text)
    raw = path.read_text() if not text.lstrip().startswith("{") and path.exists() else text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            if args.config:
                try:
                    cfg = RunConfig.load(args.config)
                except OSError as exc:
                    raise ConfigError(f"{args.config}: {exc.strerror}") from None
            else:
                cfg = preset(args.preset)
            if args.seed is not None:
                cfg = dataclasses.replace(cfg, seed=args.seed)
            code, _ = run_suite(cfg, out=args.out)
            return code
        if args.command == "body":
            spec = QuadratureSpec() if args.seed is None else QuadratureSpec(seed=args.seed)
            d = _load_json_arg(args.config)
            if not isinstance(d, dict):
                raise ConfigError("body spec: expected a JSON object")
            rho = export_body(d, args.alpha, args.resolution, args.out, kind=args.kind, spec=spec)
            print(f"wrote {len(rho)} directions to {args.out}")
            return 0
        if args.command == "constants":
            alphas = [a if a == "n" else float(a) for a in args.alpha]
            rows = constants_table(args.n, alphas)
            for r in rows:
                print(f"n={r['n']:<3d} alpha={r['alpha']:<8.6g} gamma={r['gamma']!r}")
            if args.out:
                Path(args.out).write_text(json.dumps(rows, indent=2) + "\n")
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
