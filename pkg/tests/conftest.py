from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ahls import _kernels
from ahls.numerics import QuadratureSpec

settings.register_profile(
    "ahls",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("ahls")


@pytest.fixture
def spec() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture(params=["numba", "numpy"])
def kernel_backend(request):
    if request.param == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    old = _kernels.backend()
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(old)


def rel_err(a, b) -> float:
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))
