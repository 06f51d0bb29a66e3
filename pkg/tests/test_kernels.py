from __future__ import annotations

import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from ahls import _kernels
from ahls.autocorr import _polar_nodes
from ahls.starbody import Cube, Simplex

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba unavailable")


@needs_numba
@pytest.mark.parametrize("n,alpha", [(1, 0.5), (2, 1.0), (3, 1.5)])
def test_polar_autocorr_backends_agree(n, alpha):
    ts = np.concatenate([[0.0, 1e-9, 1e-3], np.linspace(0.05, 6.0, 60)])
    th, thw, vs, vw = _polar_nodes(n)
    q = 0.5 * (n + alpha)
    a = _kernels.qp_polar_autocorr_numba(ts, q, 1.0, th, thw, vs, vw, float(n - 1))
    b = _kernels.qp_polar_autocorr_numpy(ts, q, 1.0, th, thw, vs, vw, float(n - 1))
    assert np.allclose(a, b, rtol=1e-12, atol=0.0)


@needs_numba
@pytest.mark.parametrize("body", [Cube(2), Cube(3), Simplex(4)], ids=lambda b: b.describe())
def test_polytope_chords_backends_agree(body):
    rng = np.random.default_rng(3)
    A, b = body.halfspaces()
    P = rng.random((500, body.dim)) * 0.5
    d = rng.standard_normal(body.dim)
    d /= np.linalg.norm(d)
    x = _kernels.polytope_chords_numba(P, d, A, b)
    y = _kernels.polytope_chords_numpy(P, d, A, b)
    assert np.allclose(x, y, rtol=1e-12, atol=1e-14)


def test_chords_through_unit_square(kernel_backend):
    A, b = Cube(2).halfspaces()
    P = np.array([[0.25, 0.5], [0.75, 0.1], [0.5, 0.5]])
    d = np.array([1.0, 1.0]) / np.sqrt(2.0)
    out = _kernels.polytope_chords(P, np.array([1.0, 0.0]), A, b)
    assert np.allclose(out, [1.0, 1.0, 1.0])
    diag = _kernels.polytope_chords(P[2:], d, A, b)
    assert np.allclose(diag, [np.sqrt(2.0)])


def test_set_backend_validates():
    with pytest.raises(ValueError):
        _kernels.set_backend("cuda")


def test_backend_switch_roundtrip(kernel_backend):
    assert _kernels.backend() == kernel_backend


def _run(code: str, **env) -> str:
    src = str(Path(__file__).resolve().parents[1] / "src")
    e = {**os.environ, "PYTHONPATH": src, **env}
    return subprocess.run([sys.executable, "-c", code], env=e, capture_output=True, text=True,
                          check=True).stdout.strip()


def test_env_flag_forces_numpy():
    out = _run("from ahls import _kernels; print(_kernels.backend(), _kernels.HAVE_NUMBA)",
               AHLS_DISABLE_NUMBA="1")
    assert out == "numpy False"


def test_env_flag_zero_keeps_default():
    out = _run("from ahls import _kernels; print(_kernels.backend())", AHLS_DISABLE_NUMBA="0")
    assert out == ("numba" if _kernels.HAVE_NUMBA else "numpy")


def test_numpy_backend_results_match_in_subprocess():
    code = ("from ahls import HlsExtremal, autocorrelation; "
            "print(repr(autocorrelation(HlsExtremal(2, 1.0), [0.3, 0.4])))")
    a = float(_run(code, AHLS_DISABLE_NUMBA="1"))
    b = float(_run(code, AHLS_DISABLE_NUMBA="0"))
    assert a == pytest.approx(b, rel=1e-12)


def test_benchmark_runs():
    root = Path(__file__).resolve().parents[1]
    e = {**os.environ, "PYTHONPATH": str(root / "src")}
    r = subprocess.run([sys.executable, str(root / "benchmarks" / "bench_kernels.py"),
                        "--repeat", "1"], env=e, capture_output=True, text=True, check=True)
    assert "qp_polar_autocorr" in r.stdout
    assert "polytope_chords" in r.stdout
