from __future__ import annotations

import io
import json
import math

import numpy as np
import pytest

from ahls import ConfigError, QuadratureSpec, convexity_check
from ahls import cli
from ahls import verify as V
from ahls.radialmean import radial_mean_body
from ahls.starbody import SampledBody, Simplex, read_radial_csv
from ahls.numerics import sphere_grid


def _cfg(checks, **kw) -> dict:
    return {"checks": checks, **kw}


GAMMA_N = {"name": "gamma_constant", "n": 3, "alpha": 3.0}


# ------------------------------------------------------------------ config parsing


def test_round_trip():
    cfg = cli.RunConfig.from_dict(_cfg([GAMMA_N], quadrature={"rel_tol": 1e-7}, seed=5,
                                       report="out.json"))
    again = cli.RunConfig.from_json(cfg.to_json())
    assert again == cfg
    assert again.spec.rel_tol == 1e-7
    assert again.spec.seed == 5


def test_preset_round_trips():
    cfg = cli.preset("paper-desk-scale")
    assert cli.RunConfig.from_json(cfg.to_json()) == cfg
    assert len(cfg.checks) >= 14


def test_malformed_json_reports_position():
    with pytest.raises(ConfigError, match=r"line 2, column \d+"):
        cli.RunConfig.from_json('{"checks": [\n  {"name": }]}')


@pytest.mark.parametrize("data,msg", [
    ([], "expected a JSON object"),
    ({"checks": []}, "non-empty"),
    ({"checks": [GAMMA_N], "extra": 1}, "unknown keys"),
    ({"checks": [{"name": "nope"}]}, r"checks\[0\].name"),
    ({"checks": [{"name": "ahls_low", "alpha": 0.5}]}, "needs field 'function'"),
    ({"checks": [{"name": "ahls_low", "alpha": 0.5, "function": {"family": "Gauss"}}]},
     "unknown family"),
    ({"checks": [{"name": "bridge", "alpha": 0.5, "body": {"type": "Blob"}}]}, "unknown body"),
    ({"checks": [{"name": "ahls_low", "alpha": 0.5,
                  "function": {"family": "HlsExtremal", "n": 1}}]}, "missing field 'alpha'"),
    ({"checks": [GAMMA_N], "quadrature": {"bogus": 1}}, "unknown fields"),
    ({"checks": [GAMMA_N], "seed": -3}, "unsigned 64-bit"),
    ({"checks": [GAMMA_N], "report": 3}, "path string"),
])
def test_config_errors(data, msg):
    with pytest.raises(ConfigError, match=msg):
        cli.RunConfig.from_dict(data)


def test_unknown_preset():
    with pytest.raises(ConfigError, match="unknown preset"):
        cli.preset("nope")


# ------------------------------------------------------------------ main / exit codes


def test_main_malformed_json_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert cli.main(["verify", "--config", str(p)]) == 2
    assert "line 1, column 2" in capsys.readouterr().err


def test_main_missing_file_exit_2(tmp_path, capsys):
    assert cli.main(["verify", "--config", str(tmp_path / "none.json")]) == 2
    assert "config error" in capsys.readouterr().err


def test_main_verify_pass_and_report(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    out = tmp_path / "r.json"
    cfg.write_text(json.dumps(_cfg([GAMMA_N, {"name": "continuation"}])))
    assert cli.main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
    reports = json.loads(out.read_text())
    assert [r["check"] for r in reports] == ["gamma_constant", "continuation"]
    assert reports[0]["left"] == 1.0
    table = capsys.readouterr().out
    assert "2 checks, 0 violated" in table


def test_main_verify_violation_exit_1(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(_cfg([{**GAMMA_N, "expected": 1.5}])))
    assert cli.main(["verify", "--config", str(cfg), "--out", str(tmp_path / "r.json")]) == 1


def test_gamma_constant_alpha_n_row_is_one():
    code, reps = cli.run_suite(cli.RunConfig.from_dict(_cfg([GAMMA_N])), stream=io.StringIO())
    assert code == 0
    assert reps[0].left == 1.0


def test_skipped_check_does_not_fail(tmp_path):
    cfg = cli.RunConfig.from_dict(_cfg([{
        "name": "reverse_logconcave", "alpha": 0.5,
        "function": {"family": "HlsExtremal", "n": 1, "alpha": 0.5}}]))
    code, reps = cli.run_suite(cfg, stream=io.StringIO())
    assert code == 0
    assert reps[0].status.startswith("SKIPPED(PreconditionFailed")


def test_cli_numbers_equal_library_calls():
    cfg = cli.RunConfig.from_dict(_cfg([{"name": "gamma_constant", "n": 1, "alpha": 0.5}]))
    _, reps = cli.run_suite(cfg, stream=io.StringIO())
    assert reps[0].left == float(V.gamma_constant(1, 0.5))


# ------------------------------------------------------------------ body export


def test_export_h1_square(tmp_path):
    out = tmp_path / "h.csv"
    code = cli.main(["body", "--config", '{"type": "Cube", "n": 2}', "--kind", "H",
                     "--alpha", "1", "--resolution", "64", "--out", str(out)])
    assert code == 0
    dirs, rho = read_radial_csv(out)
    assert dirs.shape == (64, 2) and rho.shape == (64,)
    i = int(np.argmin(np.linalg.norm(dirs - [1.0, 0.0], axis=1)))
    assert rho[i] == pytest.approx(0.5, rel=1e-6)


def test_export_ball_is_one(tmp_path):
    out = tmp_path / "b.csv"
    rho = cli.export_body({"type": "Ball", "n": 3}, None, 8, out)
    # grid directions are unit vectors to rounding
    assert np.allclose(rho, 1.0, rtol=0.0, atol=4e-16)
    _, back = read_radial_csv(out)
    assert np.array_equal(back, rho)


def test_export_r1_triangle_convex(tmp_path):
    out = tmp_path / "r.csv"
    rho = cli.export_body({"type": "Simplex", "n": 2}, 1.0, 64, out, kind="R")
    grid = sphere_grid(2, 64)
    assert convexity_check(SampledBody(grid, rho))
    direct = radial_mean_body(Simplex(2), 1.0, grid, QuadratureSpec()).radii
    assert np.array_equal(rho, direct)


def test_export_csv_round_trips_bits(tmp_path):
    out = tmp_path / "e.csv"
    rho = cli.export_body({"family": "SimplexExponential", "n": 2}, 0.5, 16, out)
    dirs, back = read_radial_csv(out)
    assert np.array_equal(back, rho)
    assert out.read_text().splitlines()[0] == "dir_1,dir_2,rho"


def test_export_function_needs_alpha(tmp_path):
    with pytest.raises(ConfigError, match="alpha"):
        cli.export_body({"family": "SimplexExponential", "n": 2}, None, 16, tmp_path / "x.csv")


def test_body_bad_json_exit_2(tmp_path, capsys):
    assert cli.main(["body", "--config", "{oops", "--out", str(tmp_path / "x.csv")]) == 2


# ------------------------------------------------------------------ constants


def test_constants_table():
    rows = cli.constants_table([1, 2], [0.5, "n"])
    assert rows[1] == {"n": 1, "alpha": 1.0, "gamma": 1.0}
    assert rows[3]["gamma"] == 1.0
    assert rows[0]["gamma"] == float(V.gamma_constant(1, 0.5))


def test_constants_subcommand(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert cli.main(["constants", "--n", "2", "--alpha", "1", "n", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert rows[0]["gamma"] == pytest.approx(2 * math.sqrt(math.pi), rel=1e-12)
    assert rows[1]["gamma"] == 1.0
    assert "gamma=1.0" in capsys.readouterr().out
