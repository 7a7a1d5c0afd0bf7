import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hbsmirnov import _kernels
from hbsmirnov._kernels import numba_kernels, numpy_kernels
from hbsmirnov.poly import Poly, roots

needs_numba = pytest.mark.skipif(numba_kernels is None, reason="numba unavailable")


def _case(seed, deg, npts=64):
    r = np.random.default_rng(seed)
    c = r.normal(size=deg + 1) + 1j * r.normal(size=deg + 1)
    z = 1.2 * r.uniform(size=npts) * np.exp(2j * np.pi * r.uniform(size=npts))
    return c.astype(np.complex128), z.astype(np.complex128)


@needs_numba
@given(st.integers(0, 2**32 - 1), st.integers(0, 30))
def test_horner_parity(seed, deg):
    c, z = _case(seed, deg)
    a, b = numba_kernels.horner(c, z), numpy_kernels.horner(c, z)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


@needs_numba
@given(st.integers(0, 2**32 - 1), st.integers(0, 30))
def test_horner_d_parity(seed, deg):
    c, z = _case(seed, deg)
    for x, y in zip(numba_kernels.horner_d(c, z), numpy_kernels.horner_d(c, z)):
        assert np.allclose(x, y, rtol=1e-13, atol=1e-13)


@needs_numba
@given(st.integers(0, 2**32 - 1), st.integers(1, 15))
def test_aberth_parity(seed, deg):
    r = np.random.default_rng(seed)
    want = 2 * r.uniform(size=deg) * np.exp(2j * np.pi * r.uniform(size=deg))
    c = Poly.from_roots(want).coeffs
    z0 = 1.1 * np.exp(2j * np.pi * (np.arange(deg) + 0.25) / deg)
    za, _, ok_a = numba_kernels.aberth(c, z0.copy(), 500, 1e-13)
    zb, _, ok_b = numpy_kernels.aberth(c, z0.copy(), 500, 1e-13)
    assert ok_a == ok_b
    # same iteration, so the same roots up to ordering
    assert np.allclose(np.sort_complex(za), np.sort_complex(zb), atol=1e-8)


def test_dispatch_matches_flag():
    flag = os.environ.get("HBSMIRNOV_DISABLE_NUMBA", "0") not in ("", "0")
    assert _kernels.USING_NUMBA == (numba_kernels is not None and not flag)


def test_numpy_path_via_env():
    code = (
        "from hbsmirnov import _kernels; from hbsmirnov.poly import Poly, roots;"
        "print(_kernels.USING_NUMBA, roots(Poly([1, -2, 1])).entries[0][1])"
    )
    env = dict(os.environ, HBSMIRNOV_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "2"]


def test_roots_same_on_both_paths(monkeypatch):
    p = Poly.from_roots([1, 1, -0.5j, 2])
    monkeypatch.setattr(_kernels, "kernels", numpy_kernels)
    a = roots(p)
    if numba_kernels is not None:
        monkeypatch.setattr(_kernels, "kernels", numba_kernels)
    b = roots(p)
    assert [m for _, m in a.entries] == [m for _, m in b.entries]
    assert np.allclose(a.locations, b.locations, atol=1e-9)
