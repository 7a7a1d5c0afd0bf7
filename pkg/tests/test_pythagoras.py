import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hbsmirnov.battery import random_ball_b
from hbsmirnov.boundary import BoundaryGrid
from hbsmirnov.errors import InnerInput
from hbsmirnov.poly import Poly, roots
from hbsmirnov.pythagoras import (
    autocorrelation,
    corona_check,
    extract_unimodular,
    fejer_riesz,
    is_inner_rational,
    mate,
    trig_eval,
)
from hbsmirnov.rational import RationalFn

ONE = Poly([1])
NODES = BoundaryGrid(4096).nodes


def rat(num, den=(1,)):
    return RationalFn(Poly(num), Poly(den))


def _mate_residual(pair):
    return np.max(np.abs(np.abs(pair.a(NODES)) ** 2 + np.abs(pair.b(NODES)) ** 2 - 1))


@pytest.mark.parametrize("b, inner", [
    (rat([0, 1]), True),
    (rat([0.5, 0.5]), False),
    (rat([-0.5, 1], [1, -0.5]), True),
])
def test_is_inner(b, inner):
    assert is_inner_rational(b) is inner


def test_fejer_riesz_constant():
    assert fejer_riesz([1]).allclose(ONE)


def test_fejer_riesz_single_boundary_zero():
    r = fejer_riesz([-1, 2, -1])
    assert r.allclose(Poly([1, -1]), atol=1e-7) or r.allclose(Poly([-1, 1]), atol=1e-7)


def test_fejer_riesz_double_boundary_zero():
    r = fejer_riesz(np.array([1, -4, 6, -4, 1]) / 4)
    assert abs(abs(r(0)) - 1 / np.sqrt(4)) < 1e-7 or np.allclose(np.abs(r.coeffs), np.abs([0.5, -1, 0.5]), atol=1e-6)
    assert [m for loc, m in roots(r).entries if abs(abs(loc) - 1) < 1e-6] == [2]


@given(st.integers(0, 2**32 - 1))
def test_fejer_riesz_involution(seed):
    r_ = np.random.default_rng(seed)
    d = int(r_.integers(0, 11))
    s = Poly(r_.normal(size=d + 1) + 1j * r_.normal(size=d + 1))
    t = autocorrelation(s, d)
    r = fejer_riesz(t)
    assert np.max(np.abs(np.abs(r(NODES)) ** 2 - trig_eval(t, NODES))) <= 1e-8 * max(1, np.max(np.abs(t)))


def test_mate_of_zero():
    pair = mate(rat([0]))
    assert pair.a.num.allclose(ONE) and pair.a1.allclose(ONE) and pair.N == 0


def test_mate_half_one_plus_z():
    pair = mate(rat([0.5, 0.5]))
    assert (pair.a.num / pair.a.den.coeffs[0]).allclose(Poly([0.5, -0.5]), atol=1e-9)
    assert pair.a1.allclose(Poly([-1, 1])) and pair.N == 1


def test_mate_ignores_inner_factor():
    pair = mate(rat([0, 0.5, 0.5]))
    assert pair.a1.allclose(Poly([-1, 1]))
    assert abs(pair.a(0.3) - 0.35) < 1e-9


def test_mate_rejects_inner():
    with pytest.raises(InnerInput):
        mate(rat([-0.5, 1], [1, -0.5]))


@pytest.mark.parametrize("a, a1, N", [
    (Poly([0.5, -0.5]), Poly([-1, 1]), 1),
    (Poly([1, -0.5]), ONE, 0),
    (Poly.from_roots([1, 1, 2], 1 / 8), Poly([1, -2, 1]), 2),
])
def test_extract_unimodular(a, a1, N):
    u = extract_unimodular(a)
    assert u.a1.allclose(a1, atol=1e-7) and u.N == N


def test_corona_bounds():
    assert abs(corona_check(mate(rat([0]))) - 1) < 1e-12
    for b in (rat([0.5, 0.5]), rat([0, 0.5, 0.5])):
        value = corona_check(mate(b))
        assert 0 < value <= 1 + 1e-12


@given(st.integers(0, 2**32 - 1))
def test_mate_identity_and_normalization(seed):
    b = random_ball_b(np.random.default_rng(seed))
    pair = mate(b)
    assert _mate_residual(pair) <= 1e-8
    a0 = pair.a(0)
    assert a0.imag == 0 and a0.real > 0
    if pair.a.num.degree >= 1:
        assert not np.any(np.abs(roots(pair.a.num).locations) < 1 - 1e-6)
