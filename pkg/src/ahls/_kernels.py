"""Hot inner loops, compiled with numba when available.

Every kernel has a pure-numpy twin.  Setting ``AHLS_DISABLE_NUMBA=1`` in
the environment (before import) forces the numpy path; ``set_backend``
switches at runtime, which the benchmark uses.
"""

from __future__ import annotations

import math
import os

import numpy as np

_FORCE_NUMPY = os.environ.get("AHLS_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _FORCE_NUMPY:
        raise ImportError("numba disabled by AHLS_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_backend = "numba" if HAVE_NUMBA else "numpy"


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError("backend must be 'numba' or 'numpy'")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    _backend = name


# ------------------------------------------------------------------
# autocorrelation of a centrally symmetric function by polar quadrature
#
# G(y) = 2 * int_{S^{n-1}} int_0^{R(w)} r^{n-1} f(r w) f(r w + y) dr dw
# over the half-space holding the peak of f(x); R(w) is the distance to the
# bisecting hyperplane (infinite for w.y >= 0).  Rays use r = L u/(1-u) with
# L = 1/|M w| the width of f along w.
#
# For |M y| < SMALL_SHIFT the cut R(w) jumps from tiny to infinite within an
# angle of order |M y|, which the fixed angle nodes cannot resolve.  There
# the rays start at the midpoint -y/2 instead:
# G(y) = 2 * int_{w.y >= 0} int_0^inf r^{n-1} f(r w - y/2) f(r w + y/2) dr dw,
# which is smooth in w.

SMALL_SHIFT = 0.5


@njit(cache=True, fastmath=True)
def _qp_polar_loop(ts, yhat, yperp, M, q, amp, th, thw, vs, vw, rpow):
    n = yhat.shape[0]
    out = np.zeros(ts.shape[0])
    ipow = int(rpow)
    integral_pow = ipow == rpow
    mw = np.zeros(n)
    my = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += M[i, j] * yhat[j]
        my[i] = acc
    myn = 0.0
    for i in range(n):
        myn += my[i] * my[i]
    myn = math.sqrt(myn)
    for k in range(ts.shape[0]):
        t = ts[k]
        mid = t * myn < SMALL_SHIFT
        h = 0.5 * t if mid else 0.0
        total = 0.0
        for a in range(th.shape[0]):
            c = math.cos(th[a])
            s = math.sin(th[a])
            nrm2 = 0.0
            for i in range(n):
                acc = 0.0
                for j in range(n):
                    acc += M[i, j] * (c * yhat[j] + s * yperp[j])
                mw[i] = acc
                nrm2 += acc * acc
            L = 1.0 / math.sqrt(nrm2)
            if c >= -1e-15:
                U = 1.0
            else:
                if t == 0.0 or mid:
                    continue
                R = 0.5 * t / (-c)
                U = R / (L + R)
            ray = 0.0
            for b in range(vs.shape[0]):
                u = vs[b] * U
                om = 1.0 - u
                r = L * u / om
                jac = L * U / (om * om)
                d1 = 0.0
                d2 = 0.0
                for i in range(n):
                    z1 = r * mw[i] - h * my[i]
                    z2 = r * mw[i] + (t - h) * my[i]
                    d1 += z1 * z1
                    d2 += z2 * z2
                # f1 f2 = ((1 + d1)(1 + d2))^(-q): one pow per node
                ff = ((1.0 + d1) * (1.0 + d2)) ** (-q)
                if integral_pow:
                    rp = 1.0
                    for _ in range(ipow):
                        rp *= r
                else:
                    rp = r**rpow
                ray += vw[b] * jac * rp * ff
            total += thw[a] * ray
        out[k] = 2.0 * amp * amp * total
    return out


def _polar_numpy(ts, yhat, yperp, M, profile, th, thw, vs, vw, rpow):
    """Vectorised polar quadrature for a profile f(x) = profile(|M x|)."""
    ts = np.asarray(ts, dtype=float)
    n = yhat.shape[0]
    omega = np.cos(th)[:, None] * yhat[None, :] + np.sin(th)[:, None] * yperp[None, :]
    mw = omega @ M.T
    nrm2 = np.sum(mw * mw, axis=1)
    L = 1.0 / np.sqrt(nrm2)
    c = np.cos(th)
    front = c >= -1e-15
    my = M @ yhat
    myn = float(np.linalg.norm(my))
    out = np.empty(ts.shape[0])
    for k, t in enumerate(ts):
        mid = t * myn < SMALL_SHIFT
        h = 0.5 * t if mid else 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            R = np.where(front, np.inf, 0.5 * t / np.where(front, 1.0, -c))
            U = np.where(front, 1.0, R / (L + R))
        if t == 0.0 or mid:
            U = np.where(front, 1.0, 0.0)
        u = vs[None, :] * U[:, None]
        om = 1.0 - u
        r = L[:, None] * u / om
        jac = L[:, None] * U[:, None] / (om * om)
        rw = r[:, :, None] * mw[:, None, :]
        z1 = rw - h * my[None, None, :]
        z2 = rw + (t - h) * my[None, None, :]
        d1 = np.sum(z1 * z1, axis=2)
        d2 = np.sum(z2 * z2, axis=2)
        vals = profile(np.sqrt(d1)) * profile(np.sqrt(d2))
        if rpow > 0:
            vals = vals * r**rpow
        ray = np.sum(vals * jac * vw[None, :], axis=1)
        out[k] = 2.0 * float(np.sum(thw * ray))
    return out


_E1 = np.array([1.0, 0.0])
_E2 = np.array([0.0, 1.0])
_I2 = np.eye(2)


def qp_polar_autocorr_numba(ts, q, amp, th, thw, vs, vw, rpow):
    return _qp_polar_loop(
        np.ascontiguousarray(ts, dtype=np.float64), _E1, _E2, _I2,
        float(q), float(amp), th, thw, vs, vw, float(rpow),
    )


def qp_polar_autocorr_numpy(ts, q, amp, th, thw, vs, vw, rpow):
    def profile(r):
        return amp * (1.0 + r * r) ** (-q)

    return _polar_numpy(ts, _E1, _E2, _I2, profile, th, thw, vs, vw, rpow)


def qp_polar_autocorr(ts, q, amp, th, thw, vs, vw, rpow):
    """Autocorrelation of a(1+|x|^2)^(-q) at distance t for each t in ``ts``.

    The angular nodes ``th`` measure the angle to the shift direction and
    ``thw`` must already carry the sphere weight of that angle; ``rpow`` is
    n - 1.  Only the 2-plane spanned by the shift and one normal matters
    because the profile is radial.
    """
    if _backend == "numba":
        return qp_polar_autocorr_numba(ts, q, amp, th, thw, vs, vw, rpow)
    return qp_polar_autocorr_numpy(ts, q, amp, th, thw, vs, vw, rpow)


def profile_polar_autocorr(ts, profile, th, thw, vs, vw, rpow):
    """Same quadrature for an arbitrary vectorised radial profile (numpy)."""
    return _polar_numpy(ts, _E1, _E2, _I2, profile, th, thw, vs, vw, rpow)


# ------------------------------------------------------------------
# chord lengths of a polytope {x : A x <= b} along lines p + s d


@njit(cache=True)
def _chords_loop(P, d, A, b):
    k = P.shape[0]
    h = A.shape[0]
    n = P.shape[1]
    out = np.zeros(k)
    ad = np.zeros(h)
    for j in range(h):
        acc = 0.0
        for i in range(n):
            acc += A[j, i] * d[i]
        ad[j] = acc
    for m in range(k):
        lo = -np.inf
        hi = np.inf
        empty = False
        for j in range(h):
            ap = 0.0
            for i in range(n):
                ap += A[j, i] * P[m, i]
            rhs = b[j] - ap
            if abs(ad[j]) < 1e-300:
                if rhs < 0.0:
                    empty = True
                    break
            elif ad[j] > 0.0:
                v = rhs / ad[j]
                if v < hi:
                    hi = v
            else:
                v = rhs / ad[j]
                if v > lo:
                    lo = v
        if not empty and hi > lo:
            out[m] = hi - lo
    return out


def polytope_chords_numpy(P, d, A, b):
    P = np.atleast_2d(np.asarray(P, float))
    ad = A @ d
    rhs = b[None, :] - P @ A.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = rhs / ad[None, :]
    pos = ad > 1e-300
    neg = ad < -1e-300
    flat = ~(pos | neg)
    hi = np.min(np.where(pos[None, :], ratio, np.inf), axis=1)
    lo = np.max(np.where(neg[None, :], ratio, -np.inf), axis=1)
    blocked = np.any(flat[None, :] & (rhs < 0.0), axis=1)
    length = np.where(blocked | (hi <= lo), 0.0, hi - lo)
    return length


def polytope_chords_numba(P, d, A, b):
    return _chords_loop(
        np.ascontiguousarray(np.atleast_2d(P), dtype=np.float64),
        np.ascontiguousarray(d, dtype=np.float64),
        np.ascontiguousarray(A, dtype=np.float64),
        np.ascontiguousarray(b, dtype=np.float64),
    )


def polytope_chords(P, d, A, b):
    """Length of {s : A (p + s d) <= b} for each row p of ``P``."""
    if _backend == "numba":
        return polytope_chords_numba(P, d, A, b)
    return polytope_chords_numpy(P, d, A, b)
