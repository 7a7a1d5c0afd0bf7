import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hbsmirnov.battery import BATTERY_A1
from hbsmirnov.boundary import AnalyticFn, BoundaryGrid
from hbsmirnov.errors import NotInSpace
from hbsmirnov.poly import Poly
from hbsmirnov.pythagoras import mate, pair_from_a1
from hbsmirnov.rational import RationalFn
from hbsmirnov.space import (
    decompose,
    gram_matrix,
    hb_norm,
    is_cyclic,
    is_multiplier,
    kernel_eval,
    membership_test,
)

A1 = Poly([-1, 1])
A1SQ = Poly([1, -2, 1])
PAIR = pair_from_a1(A1)
Z = Poly.z()


def _g_close(d, want, atol=1e-9):
    g = np.zeros(max(len(d.g.taylor), len(want)), dtype=complex)
    g[: len(want)] = want
    return np.max(np.abs(d.g.taylor - g[: len(d.g.taylor)])) <= atol


# --- decomposition ------------------------------------------------------------------

def test_decompose_constant():
    d = decompose(Poly([1]), A1)
    assert _g_close(d, []) and d.polyPart.allclose(Poly([1]))


def test_decompose_z():
    d = decompose(Z, A1)
    assert _g_close(d, [1]) and d.polyPart.allclose(Poly([1]))


def test_decompose_z_squared_double_root():
    d = decompose(Poly([0, 0, 1]), A1SQ)
    assert _g_close(d, [1]) and d.polyPart.allclose(Poly([-1, 2]))


@pytest.mark.parametrize("f, want", [(Poly([1]), 1.0), (Z, np.sqrt(2)), (A1, 1.0)])
def test_hb_norm_examples(f, want):
    assert abs(hb_norm(decompose(f, A1)) - want) < 1e-12


def test_polynomials_are_members():
    assert membership_test(Poly([1, 2, 3, 4]), PAIR)[0]


def test_near_pole_rejected():
    f = RationalFn(Poly([1]), Poly([1, -(1 - 1e-3)]))
    assert not membership_test(f, PAIR)[0]
    with pytest.raises(NotInSpace):
        decompose(f, PAIR)


def test_near_pole_accepted_adaptively_when_grid_resolves():
    # a moderately close pole only needs a finer grid, not a different verdict
    f = RationalFn(Poly([1]), Poly([1, -0.98]))
    d = decompose(f, PAIR, grid=BoundaryGrid(64), adaptive=True)
    assert d.residual <= 1e-6


def test_a1_times_h2_member(rng):
    g = rng.normal(size=20) * 0.7 ** np.arange(20)
    g /= np.linalg.norm(g)
    ok, defect = membership_test(AnalyticFn(g, 0.0) * A1, PAIR)
    assert ok and defect <= 1e-8


def _random_parts(seed, a1):
    r = np.random.default_rng(seed)
    k = int(r.integers(1, 30))
    g = (r.normal(size=k) + 1j * r.normal(size=k)) * 0.8 ** np.arange(k)
    g /= max(1.0, np.linalg.norm(g))
    q = Poly(r.normal(size=a1.degree) + 1j * r.normal(size=a1.degree))
    return AnalyticFn(g, 0.0), q


@given(st.integers(0, 2**32 - 1), st.sampled_from(range(len(BATTERY_A1))))
def test_round_trip_idempotent_and_norm(seed, which):
    a1 = BATTERY_A1[which]
    g, q = _random_parts(seed, a1)
    f = g * a1 + q
    d = decompose(f, a1)
    assert _g_close(d, g.taylor, 1e-7) and d.polyPart.allclose(q, 1e-7)
    again = decompose(d.reassemble(a1), a1)
    assert _g_close(again, d.g.taylor, 1e-9) and again.polyPart.allclose(d.polyPart, 1e-9)
    want = np.sqrt(g.norm() ** 2 + np.sum(np.abs(q.coeffs) ** 2))
    assert abs(hb_norm(d) - want) <= 1e-7


# --- multipliers ---------------------------------------------------------------------------

def test_polynomial_multiplier():
    assert is_multiplier(Poly([1, -3, 0, 2]), PAIR).verdict


def test_bounded_multiplier():
    k = np.arange(3000)
    phi = AnalyticFn(np.convolve([-1, 1], 1 / (k + 1)), 0.0)
    assert is_multiplier(phi, PAIR).verdict


def test_unbounded_not_multiplier():
    k = np.arange(20000)
    assert not is_multiplier(AnalyticFn(1 / np.sqrt(k + 1), 0.0), PAIR).verdict


# --- cyclicity -----------------------------------------------------------------------------------

def test_one_is_cyclic():
    assert is_cyclic(Poly([1]), PAIR).verdict


def test_a1_not_cyclic():
    c = is_cyclic(A1, PAIR)
    assert not c.verdict and c.routesAgree


def test_z_not_cyclic():
    c = is_cyclic(Z, PAIR)
    assert not c.verdict and c.gcdWitness.degree == 0 and not c.outer.verdict


@given(st.integers(0, 2**32 - 1), st.sampled_from(range(len(BATTERY_A1))))
def test_cyclicity_routes_agree(seed, which):
    r = np.random.default_rng(seed)
    a1 = BATTERY_A1[which]
    rts = list(r.uniform(0.3, 3, int(r.integers(1, 6))) * np.exp(2j * np.pi * r.uniform(size=1)))
    if r.uniform() < 0.5:
        rts[0] = 1.0  # shared boundary zero with every battery a1
    psi = Poly.from_roots(rts)
    c = is_cyclic(psi, pair_from_a1(a1))
    assert c.routesAgree
    # independent oracle: no zeros in the open disk and none shared with a1
    inside = any(abs(x) < 1 - 1e-9 for x in rts)
    shared = any(abs(x - 1) < 1e-12 for x in rts)
    assert c.verdict == (not inside and not shared)


# --- kernel ---------------------------------------------------------------------------------------

def test_szego_kernel_at_origin():
    assert kernel_eval(RationalFn(Poly([]), Poly([1])), 0, 0) == 1


def test_kernel_constant_when_b_vanishes_at_origin():
    b = RationalFn(Poly([0, 0.5]), Poly([1]))
    assert all(abs(kernel_eval(b, 0, z) - 1) < 1e-15 for z in (0.3, -0.5j, 0.9))


def test_kernel_value():
    b = RationalFn(Poly([0.5, 0.5]), Poly([1]))
    assert abs(kernel_eval(b, 0, 0.5) - 5 / 8) < 1e-15


@given(st.integers(0, 2**32 - 1))
def test_gram_psd(seed):
    r = np.random.default_rng(seed)
    from hbsmirnov.battery import random_ball_b

    b = random_ball_b(r)
    pts = r.uniform(0, 0.95, 5) * np.exp(2j * np.pi * r.uniform(size=5))
    G = gram_matrix(b, pts)
    assert np.min(np.linalg.eigvalsh((G + G.conj().T) / 2)) >= -1e-9
    assert abs(G[1, 0] - kernel_eval(b, pts[0], pts[1])) < 1e-12


def test_mate_feeds_space():
    pair = mate(RationalFn(Poly([0.5, 0.5]), Poly([1])))
    assert decompose(Z, pair).polyPart.allclose(Poly([1]))
