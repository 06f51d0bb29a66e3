"""Affine Hardy-Littlewood-Sobolev inequalities, numerically.

Star bodies built from autocorrelations of functions (H_alpha f, the
fractional polar projection bodies and radial mean bodies), the sharp
constants and the inequalities relating them, with reproducible checks.
"""

from __future__ import annotations

from .autocorr import autocorr_profile, autocorrelation, autocorrelation_mc, l2_difference
from .chords import ChordDecomposition, chord_decomposition
from .errors import (
    AhlsError,
    AssumptionViolated,
    ConfigError,
    DegenerateBody,
    DivergentIntegral,
    NonConvergent,
    NonFinite,
    PreconditionFailed,
    SelfCheckFailed,
    ZeroVector,
)
from .funcspace import (
    CustomRadialDecreasing,
    HlsExtremal,
    Indicator,
    SConcaveSimplex,
    SimplexExponential,
    TestFunction,
    concavity_check,
    lp_functional,
    schwarz_rearrangement,
)
from .hlsbody import (
    HlsBodyResult,
    anisotropic_hls_functional,
    body_volume,
    hls_body,
    polar_projection_body,
    radial_mean_function_body,
    zeta_from_autocorr,
    zeta_profile,
)
from .numerics import QuadratureSpec, SphereGrid, integrate_powerweight, sphere_grid
from .radialmean import bridge_check, inclusion_constant, radial_mean_body
from .report import InequalityReport
from .starbody import (
    Ball,
    Box,
    CenteredEllipsoid,
    CrossPolytope,
    Cube,
    LinearImage,
    RadialFunctionBody,
    SampledBody,
    Simplex,
    StarBody,
    convexity_check,
    dual_mixed_volume,
    volume,
)
from .verify import SharpConstant, gamma_constant

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
