"""Hot numeric kernels.

Each kernel exists twice: a numba ``@njit`` loop version and a vectorised
numpy version. The numba path is used when numba imports cleanly and the
environment variable ``HBSMIRNOV_DISABLE_NUMBA`` is unset (or ``0``).
Both paths are importable explicitly (``numba_kernels`` / ``numpy_kernels``)
so tests and the benchmark can compare them.
"""
import os
from types import SimpleNamespace

import numpy as np

EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# numpy reference path
# ---------------------------------------------------------------------------

def _horner_np(coeffs, pts):
    out = np.zeros(pts.shape, dtype=np.complex128)
    for c in coeffs[::-1]:
        out = out * pts + c
    return out


def _horner_d_np(coeffs, pts):
    """Value, derivative and the backward-error scale sum |c_k||z|^k."""
    val = np.zeros(pts.shape, dtype=np.complex128)
    der = np.zeros(pts.shape, dtype=np.complex128)
    scale = np.zeros(pts.shape, dtype=np.float64)
    apts = np.abs(pts)
    for c in coeffs[::-1]:
        der = der * pts + val
        val = val * pts + c
        scale = scale * apts + abs(c)
    return val, der, scale


def _aberth_np(coeffs, z, maxiter, tol):
    z = z.copy()
    n = z.size
    done = np.zeros(n, dtype=np.bool_)
    it = 0
    for it in range(1, maxiter + 1):
        val, der, scale = _horner_d_np(coeffs, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        recip = 1.0 / diff
        np.fill_diagonal(recip, 0.0)
        s = recip.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(der != 0, val / der, 0.0)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        small = np.abs(val) <= 4.0 * EPS * scale
        w = np.where(done | small, 0.0, w)
        z = z - w
        done |= small | (np.abs(w) < tol * np.maximum(1.0, np.abs(z)))
        if done.all():
            return z, it, True
    return z, it, False


def _taylor_eval_np(taylor, pts):
    return _horner_np(taylor, pts)


numpy_kernels = SimpleNamespace(
    horner=_horner_np,
    horner_d=_horner_d_np,
    aberth=_aberth_np,
    name="numpy",
)


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

def _build_numba():
    from numba import njit

    # complex products are spelled out in real arithmetic: numba's complex
    # multiply carries inf/nan special-casing that blocks vectorisation
    @njit(cache=True)
    def horner(coeffs, pts):
        n = pts.shape[0]
        m = coeffs.shape[0]
        zr, zi = pts.real.copy(), pts.imag.copy()
        ar, ai = np.zeros(n), np.zeros(n)
        # coefficient-outer order lets the point loop vectorise
        for k in range(m - 1, -1, -1):
            cr, ci = coeffs[k].real, coeffs[k].imag
            for i in range(n):
                tr = ar[i] * zr[i] - ai[i] * zi[i] + cr
                ai[i] = ar[i] * zi[i] + ai[i] * zr[i] + ci
                ar[i] = tr
        out = np.empty(n, dtype=np.complex128)
        for i in range(n):
            out[i] = complex(ar[i], ai[i])
        return out

    @njit(cache=True)
    def horner_d(coeffs, pts):
        n = pts.shape[0]
        m = coeffs.shape[0]
        zr, zi = pts.real.copy(), pts.imag.copy()
        az = np.abs(pts)
        vr, vi = np.zeros(n), np.zeros(n)
        dr, di = np.zeros(n), np.zeros(n)
        scale = np.zeros(n)
        for k in range(m - 1, -1, -1):
            cr, ci, ca = coeffs[k].real, coeffs[k].imag, abs(coeffs[k])
            for i in range(n):
                tr = dr[i] * zr[i] - di[i] * zi[i] + vr[i]
                di[i] = dr[i] * zi[i] + di[i] * zr[i] + vi[i]
                dr[i] = tr
                tr = vr[i] * zr[i] - vi[i] * zi[i] + cr
                vi[i] = vr[i] * zi[i] + vi[i] * zr[i] + ci
                vr[i] = tr
                scale[i] = scale[i] * az[i] + ca
        val = np.empty(n, dtype=np.complex128)
        der = np.empty(n, dtype=np.complex128)
        for i in range(n):
            val[i] = complex(vr[i], vi[i])
            der[i] = complex(dr[i], di[i])
        return val, der, scale

    @njit(cache=True)
    def aberth(coeffs, z0, maxiter, tol):
        z = z0.copy()
        n = z.shape[0]
        m = coeffs.shape[0]
        done = np.zeros(n, dtype=np.bool_)
        w = np.zeros(n, dtype=np.complex128)
        it = 0
        for it in range(1, maxiter + 1):
            alldone = True
            for i in range(n):
                if done[i]:
                    w[i] = 0j
                    continue
                zi = z[i]
                azi = abs(zi)
                v = 0j
                d = 0j
                s = 0.0
                for k in range(m - 1, -1, -1):
                    d = d * zi + v
                    v = v * zi + coeffs[k]
                    s = s * azi + abs(coeffs[k])
                if abs(v) <= 4.0 * EPS * s:
                    done[i] = True
                    w[i] = 0j
                    continue
                acc = 0j
                for j in range(n):
                    if j != i:
                        acc += 1.0 / (zi - z[j])
                if d == 0j:
                    w[i] = 0j
                    continue
                ratio = v / d
                step = ratio / (1.0 - ratio * acc)
                if not (np.isfinite(step.real) and np.isfinite(step.imag)):
                    step = 0j
                w[i] = step
            # Jacobi-style update, matching the numpy path
            for i in range(n):
                z[i] -= w[i]
                if abs(w[i]) < tol * max(1.0, abs(z[i])):
                    done[i] = True
                if not done[i]:
                    alldone = False
            if alldone:
                return z, it, True
        return z, it, False

    return SimpleNamespace(horner=horner, horner_d=horner_d, aberth=aberth, name="numba")


try:
    numba_kernels = _build_numba()
except Exception:  # pragma: no cover - numba missing or broken
    numba_kernels = None

_disabled = os.environ.get("HBSMIRNOV_DISABLE_NUMBA", "0") not in ("", "0")
kernels = numpy_kernels if (_disabled or numba_kernels is None) else numba_kernels
USING_NUMBA = kernels is numba_kernels


def horner(coeffs, pts):
    """Evaluate an ascending-coefficient polynomial at an array of points."""
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(np.ravel(pts), dtype=np.complex128)
    if c.size == 0:
        return np.zeros(np.shape(pts), dtype=np.complex128)
    return kernels.horner(c, z).reshape(np.shape(pts))


def horner_d(coeffs, pts):
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(np.ravel(pts), dtype=np.complex128)
    val, der, scale = kernels.horner_d(c, z)
    shape = np.shape(pts)
    return val.reshape(shape), der.reshape(shape), scale.reshape(shape)


def aberth(coeffs, z0, maxiter=500, tol=1e-13):
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z0, dtype=np.complex128)
    return kernels.aberth(c, z, int(maxiter), float(tol))
