"""Exact forward scattering for piecewise-constant potentials.

Everything is built from per-cell propagators of the constant-coefficient
equation psi'' = (V_j - k^2) psi.  Each propagator is written in even
functions of kappa_j = sqrt(k^2 - V_j) (cos, sin/kappa, kappa*sin), so the
assembled quantities are entire in k: no square-root branch ever appears.

The two central entire functions are

    xhat(k) = e^{ik(b-a)} [ik(M11+M22) + k^2 M12 - M21] / 2        (= ik/t)
    yhat(k) = e^{-ik(a+b)} [ik(M11-M22) + k^2 M12 + M21] / 2       (= ik r/t)

with M the transfer matrix over the hull.  The reflection entering yhat is
the right-incident one; this is the choice whose Fourier support is
[2a, 2b] (verified by an indicator-width test on an asymmetric well).
Algebraically  xhat(k) xhat(-k) - k^2 - yhat(k) yhat(-k) = k^2 (det M - 1),
so the unitary identity holds exactly up to rounding; the residual routine
escalates working precision where rounding would dominate.

Sign convention resolved numerically (large real k):  xhat(k) - ik tends to
-integral(V)/2.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import PoleAtK
from .potential import Potential

_LD_EPS = float(np.finfo(np.longdouble).eps)
_D_EPS = float(np.finfo(np.float64).eps)


# ---------------------------------------------------------------------------
# scaled transfer-matrix products


def _scaled_transfer(V: Potential, k, dtype=np.complex128):
    """Product of per-cell propagators, scaled cell by cell.

    Returns (M11, M12, M21, M22, logscale): the true matrix is the returned
    one times exp(logscale).  Entries stay O(1) for any Im k.
    """
    k = np.asarray(k, dtype=dtype)
    real = np.longdouble if dtype == np.complex256 else np.float64
    one = np.ones_like(k)
    M11, M12, M21, M22 = one.copy(), 0 * one, 0 * one, one.copy()
    logscale = np.zeros(k.shape, dtype=real)
    bp = np.asarray(V.breakpoints, dtype=real)
    vs = np.asarray(V.values, dtype=real)
    for j in range(len(vs)):
        w = bp[j + 1] - bp[j]
        kap2 = k * k - vs[j]
        kap = np.sqrt(kap2)
        z = kap * w
        t = np.abs(z.imag)
        p = np.exp(1j * z - t)
        q = np.exp(-1j * z - t)
        c = (p + q) / 2                     # cos(z) e^{-t}
        s = (p - q) / 2j                    # sin(z) e^{-t}
        small = np.abs(z) < 1e-6
        et = np.exp(-t)
        series = w * (1 - z * z / 6 * (1 - z * z / 20)) * et
        m12 = np.where(small, series, s / np.where(small, one, kap))
        m21 = np.where(small, -kap2 * series, -kap * s)
        c = np.where(small, (1 - z * z / 2 * (1 - z * z / 12)) * et, c)
        M11, M12, M21, M22 = (
            c * M11 + m12 * M21,
            c * M12 + m12 * M22,
            m21 * M11 + c * M21,
            m21 * M12 + c * M22,
        )
        logscale = logscale + t
    return M11, M12, M21, M22, logscale


@dataclass(frozen=True)
class TransferMatrix:
    """Unscaled 2x2 propagator of (psi, psi') data across the hull."""

    entries: np.ndarray
    k: complex
    potential: Potential

    def det(self):
        e = self.entries
        return e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]


def transfer_matrix(V: Potential, k) -> TransferMatrix:
    """Transfer matrix at a single complex k (entire in k)."""
    M11, M12, M21, M22, ls = _scaled_transfer(V, complex(k))
    f = np.exp(ls)
    ent = np.array([[M11 * f, M12 * f], [M21 * f, M22 * f]], dtype=complex)
    return TransferMatrix(ent, complex(k), V)


# ---------------------------------------------------------------------------
# the entire functions


def _xhat_scaled(V, k, dtype=np.complex128):
    k = np.asarray(k, dtype=dtype)
    M11, M12, M21, M22, ls = _scaled_transfer(V, k, dtype)
    L = V.breakpoints[-1] - V.breakpoints[0]
    mant = np.exp(1j * k.real * L) * (1j * k * (M11 + M22) + k * k * M12 - M21) / 2
    return mant, ls - k.imag * L


def _yhat_scaled(V, k, dtype=np.complex128):
    k = np.asarray(k, dtype=dtype)
    M11, M12, M21, M22, ls = _scaled_transfer(V, k, dtype)
    ab = V.breakpoints[0] + V.breakpoints[-1]
    mant = np.exp(-1j * k.real * ab) * (1j * k * (M11 - M22) + k * k * M12 + M21) / 2
    return mant, ls + k.imag * ab


def _collapse(mant, logmag, scalar):
    with np.errstate(over="ignore"):
        out = mant * np.exp(logmag)
    return complex(out) if scalar else out


def xhat(V: Potential, k):
    """The entire function ik/t; zeros in the lower half-plane are the
    resonances, zeros on the upper imaginary axis the bound states."""
    scalar = np.ndim(k) == 0
    m, l = _xhat_scaled(V, k)
    return _collapse(m, l, scalar)


def yhat(V: Potential, k):
    """The entire companion of xhat with Fourier support [2a, 2b]."""
    scalar = np.ndim(k) == 0
    m, l = _yhat_scaled(V, k)
    return _collapse(m, l, scalar)


def log_abs_xhat(V: Potential, k):
    """log|xhat(k)| evaluated without overflow (for indicator fits)."""
    m, l = _xhat_scaled(V, k)
    with np.errstate(divide="ignore"):
        out = np.log(np.abs(m)) + l
    return float(out) if np.ndim(k) == 0 else out


def log_abs_yhat(V: Potential, k):
    m, l = _yhat_scaled(V, k)
    with np.errstate(divide="ignore"):
        out = np.log(np.abs(m)) + l
    return float(out) if np.ndim(k) == 0 else out


# ---------------------------------------------------------------------------
# arbitrary-precision fallback


def _xy_mp(V, k, dps):
    """xhat, yhat at one point with mpmath at the given precision."""
    with mp.workdps(dps):
        kk = mp.mpc(k)
        M = mp.matrix([[1, 0], [0, 1]])
        for j in range(len(V.values)):
            w = mp.mpf(V.breakpoints[j + 1]) - mp.mpf(V.breakpoints[j])
            kap = mp.sqrt(kk * kk - V.values[j])
            z = kap * w
            c = mp.cos(z)
            if abs(kap) < 1e-20:
                s_over = w
                ksin = -(kk * kk - V.values[j]) * w
            else:
                s_over = mp.sin(z) / kap
                ksin = -kap * mp.sin(z)
            A = mp.matrix([[c, s_over], [ksin, c]])
            M = A * M
        a, b = V.breakpoints[0], V.breakpoints[-1]
        xh = mp.exp(1j * kk * (b - a)) * (
            1j * kk * (M[0, 0] + M[1, 1]) + kk * kk * M[0, 1] - M[1, 0]
        ) / 2
        yh = mp.exp(-1j * kk * (a + b)) * (
            1j * kk * (M[0, 0] - M[1, 1]) + kk * kk * M[0, 1] + M[1, 0]
        ) / 2
        return xh, yh


def _cancellation_exponent(V, k):
    """Natural log of the magnitude of the largest intermediate term in the
    unitary identity at k (the cancellation scale)."""
    k = np.asarray(k, dtype=complex)
    sig = np.zeros(k.shape)
    bp = V.breakpoints
    for j, v in enumerate(V.values):
        w = bp[j + 1] - bp[j]
        sig = sig + np.abs(np.sqrt(k * k - v).imag) * w
    return 2 * sig + 2 * np.log(2 + np.abs(k))


def unitary_residual(V: Potential, k):
    """|xhat(k)xhat(-k) - k^2 - yhat(k)yhat(-k)| / (1 + |k|^2).

    Evaluates the four function values in float64, 80-bit, or mpmath
    depending on the cancellation scale at each k, so the result reflects
    the identity rather than rounding noise.
    """
    scalar = np.ndim(k) == 0
    shape = np.shape(k)
    k = np.atleast_1d(np.asarray(k, dtype=complex)).ravel()
    out = np.empty(k.shape, dtype=float)
    expo = _cancellation_exponent(V, k)
    target = np.log(1e-11 * (1 + np.abs(k) ** 2))
    use_d = expo + np.log(_D_EPS) < target
    use_ld = ~use_d & (expo + np.log(_LD_EPS) < target)
    use_mp = ~use_d & ~use_ld
    for sel, dtype in ((use_d, np.complex128), (use_ld, np.complex256)):
        if not np.any(sel):
            continue
        ks = k[sel].astype(dtype)
        x1, lx1 = _xhat_scaled(V, ks, dtype)
        x2, lx2 = _xhat_scaled(V, -ks, dtype)
        y1, ly1 = _yhat_scaled(V, ks, dtype)
        y2, ly2 = _yhat_scaled(V, -ks, dtype)
        resid = np.abs(
            x1 * x2 * np.exp(lx1 + lx2) - ks * ks - y1 * y2 * np.exp(ly1 + ly2)
        )
        out[sel] = (resid / (1 + np.abs(ks) ** 2)).astype(float)
    for i in np.nonzero(use_mp)[0]:
        dps = int(np.ceil((expo[i] - target[i]) / np.log(10))) + 16
        with mp.workdps(max(dps, 30)):
            x1, y1 = _xy_mp(V, k[i], dps)
            x2, y2 = _xy_mp(V, -k[i], dps)
            r = abs(x1 * x2 - mp.mpc(k[i]) ** 2 - y1 * y2)
            out[i] = float(r / (1 + abs(k[i]) ** 2))
    return float(out[0]) if scalar else out.reshape(shape)


# ---------------------------------------------------------------------------
# S-matrix entries


@dataclass(frozen=True)
class JostCoefficients:
    t: complex
    r_right: complex
    r_left: complex
    k_zero_limit: bool = False


def _richardson_limit(g, h0=1e-2, n=4):
    """Neville extrapolation of g(h) to h = 0 over h0 / 2^j."""
    hs = [h0 / 2 ** j for j in range(n)]
    vals = [g(h) for h in hs]
    for m in range(1, n):
        for i in range(n - m):
            vals[i] = vals[i + 1] + (vals[i + 1] - vals[i]) * hs[i + m] / (
                hs[i] - hs[i + m]
            )
    return vals[0]


def jost_coefficients(V: Potential, k) -> JostCoefficients:
    """Transmission and the two reflections at one complex k."""
    k = complex(k)
    if k == 0:
        t = _richardson_limit(lambda h: jost_coefficients(V, h).t)
        rr = _richardson_limit(lambda h: jost_coefficients(V, h).r_right)
        rl = _richardson_limit(lambda h: jost_coefficients(V, h).r_left)
        return JostCoefficients(t, rr, rl, k_zero_limit=True)
    xm, xl = _xhat_scaled(V, k)
    ym, yl = _yhat_scaled(V, k)
    ym2, yl2 = _yhat_scaled(V, -k)
    t = complex(1j * k / xm * np.exp(-xl))
    r_right = complex(ym / xm * np.exp(yl - xl))
    r_left = complex(ym2 / xm * np.exp(yl2 - xl))
    return JostCoefficients(t, r_right, r_left)


def det_s(V: Potential, k):
    """Scattering determinant -xhat(-k)/xhat(k) (the inverse-problem data)."""
    scalar = np.ndim(k) == 0
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    m1, l1 = _xhat_scaled(V, k)
    m2, l2 = _xhat_scaled(V, -k)
    absx = np.abs(m1)
    ref = np.maximum(np.abs(m2) * np.exp(np.minimum(l2 - l1, 700)),
                     (1 + np.abs(k)) * np.exp(np.clip(-l1, -700, 700)))
    pole = absx < 1e-13 * ref
    out = np.empty(k.shape, dtype=complex)
    ok = ~pole
    out[ok] = -m2[ok] / m1[ok] * np.exp(l2[ok] - l1[ok])
    for i in np.nonzero(pole)[0]:
        if k[i] == 0:
            out[i] = _richardson_limit(lambda h: complex(det_s(V, h)))
        else:
            raise PoleAtK("xhat vanishes at k = %s" % k[i])
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class ScatteringSample:
    """Values of all scattering functions at one complex wavenumber."""

    k: complex
    xhat: complex
    yhat: complex
    t: complex
    r_right: complex
    r_left: complex
    det_s: complex
    residual_u: float


def sample(V: Potential, k) -> ScatteringSample:
    k = complex(k)
    jc = jost_coefficients(V, k)
    try:
        ds = det_s(V, k)
    except PoleAtK:
        ds = complex(np.inf)
    return ScatteringSample(
        k=k,
        xhat=xhat(V, k),
        yhat=yhat(V, k),
        t=jc.t,
        r_right=jc.r_right,
        r_left=jc.r_left,
        det_s=ds,
        residual_u=unitary_residual(V, k),
    )


def write_samples_csv(path, samples):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["k_re", "k_im", "xhat_re", "xhat_im", "yhat_re", "yhat_im",
             "dets_re", "dets_im", "residual_U"]
        )
        for s in samples:
            w.writerow(
                [s.k.real, s.k.imag, s.xhat.real, s.xhat.imag,
                 s.yhat.real, s.yhat.imag, s.det_s.real, s.det_s.imag,
                 s.residual_u]
            )
