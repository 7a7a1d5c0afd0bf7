import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbsmirnov.battery import BATTERY_A1, random_h
from hbsmirnov.boundary import AnalyticFn, BoundaryFn, BoundaryGrid
from hbsmirnov.errors import CertificationFailure, NotH2, RootNotUnimodular
from hbsmirnov.poly import Poly
from hbsmirnov.pythagoras import pair_from_a1
from hbsmirnov.rational import RationalFn
from hbsmirnov.smirnov import (
    SmirnovFactorization,
    SmirnovPair,
    combine,
    correction_poly,
    factor_h2,
    factor_hb,
    moment_correction,
    partial_fraction_table,
    rescale,
    verify,
    weight,
)

ONE = Poly([1])
Z = Poly.z()
A1 = Poly([-1, 1])
G = BoundaryGrid(4096)


def h_const(c, grid=G):
    return BoundaryFn.from_samples(grid, np.full(grid.n, c, dtype=complex))


# --- weight ------------------------------------------------------------------------------

def test_weight_zero():
    assert np.all(weight(h_const(0), ONE).samples == 0)


def test_weight_constant():
    assert np.allclose(weight(h_const(1), ONE).samples, 1)


def test_weight_modulus():
    w = weight(h_const(1), A1)
    assert np.allclose(w.samples, 2 * np.abs(np.sin(G.angles / 2)), atol=1e-14)


# --- partial fractions -------------------------------------------------------------------

def _probe_identity(table, seed=3):
    r = np.random.default_rng(seed)
    z = 0.95 * r.uniform(size=50) * np.exp(2j * np.pi * r.uniform(size=50))
    x = np.exp(2j * np.pi * r.uniform(size=50))
    return np.max(np.abs(table.lhs(z, x) - table.rhs(z, x)))


def test_partial_fractions_simple_root():
    t = partial_fraction_table(A1)
    assert list(t.terms) == [(0, 1)] and t.terms[(0, 1)].allclose(ONE)
    assert _probe_identity(t) <= 1e-10


def test_partial_fractions_constant_p():
    t = partial_fraction_table(Poly([2]))
    assert t.terms == {} and _probe_identity(t) <= 1e-12


def test_partial_fractions_two_roots():
    t = partial_fraction_table(Poly([-1, 0, 1]))
    assert sorted(t.terms) == [(0, 1), (1, 1)] and _probe_identity(t) <= 1e-10


@pytest.mark.parametrize("p", [Poly([1, -2, 1]), Poly.from_roots([1, 1, 1j, -1]), Poly.from_roots([1j, 1j, -1, -1])])
def test_partial_fractions_repeated_roots(p):
    assert _probe_identity(partial_fraction_table(p)) <= 1e-9


def test_partial_fractions_rejects_interior_roots():
    with pytest.raises(RootNotUnimodular):
        partial_fraction_table(Poly([-0.5, 1]))


# --- correction polynomial ---------------------------------------------------------------------

def test_correction_zero():
    assert correction_poly(h_const(0), A1).is_zero()


def test_correction_constant():
    assert correction_poly(h_const(1), ONE).allclose(ONE, atol=1e-12)


def test_correction_routes_agree():
    h = RationalFn(Poly([1]), Poly([1]))
    spectral = correction_poly(h, A1)
    moments, _ = moment_correction(h, partial_fraction_table(A1))
    assert spectral.degree < 1
    assert np.max(np.abs((spectral - moments).coeffs), initial=0) <= 1e-6


@pytest.mark.parametrize("q, c", [(Poly(), 1.0), (ONE, 0.5), (Poly([0, 4]), 1 / 8)])
def test_rescale(q, c):
    assert abs(rescale(q) - c) < 1e-12


def test_rescaled_correction_bounded():
    assert abs(4 * rescale(Poly([0, 4])) - 0.5) < 1e-12


# --- factorization -----------------------------------------------------------------------------------

def test_factor_zero():
    f = factor_h2(h_const(0), A1)
    assert f.u.is_zero() and f.v.is_zero() and f.certs["residual"] == 0 and f.passed


def test_factor_constants_closed_form():
    f = factor_h2(h_const(1), ONE)
    assert abs(f.scale - 0.5) < 1e-12
    assert np.allclose(f.u.taylor[:2], [1 / 3, 0], atol=1e-12)
    assert np.allclose(f.v.taylor[:2], [-2 / 3, 0], atol=1e-12)
    assert f.passed


def test_factor_simple_root():
    f = factor_h2(h_const(1), A1)
    assert f.passed
    assert f.certs["residual"] <= 1e-6 and f.certs["minQ"] >= 0.5 - 1e-9
    assert np.isfinite(f.certs["supPU"]) and np.isfinite(f.certs["supPV"])


def test_factor_rejects_antianalytic():
    h = BoundaryFn.from_samples(G, np.conj(G.nodes))
    with pytest.raises(NotH2):
        factor_h2(h, A1)


def test_factor_json_round_trip():
    f = factor_h2(RationalFn(Poly([1, 0.5]), Poly([1, -0.4])), Poly([-1, 0, 1]))
    back = SmirnovFactorization.from_json(f.to_json())
    assert np.array_equal(back.u.taylor, f.u.taylor) and np.array_equal(back.v.taylor, f.v.taylor)
    assert back.scale == f.scale and back.q == f.q and back.n == f.n


@settings(max_examples=12)
@given(st.integers(0, 2**32 - 1), st.sampled_from(range(len(BATTERY_A1))))
def test_reconstruction_property(seed, which):
    h = random_h(np.random.default_rng(seed))
    f = factor_h2(h, BATTERY_A1[which])
    c = f.certs
    assert c["residual"] <= 1e-6 * (1 + np.max(np.abs(h(G.nodes))))
    assert c["minQ"] >= 0.5 - 1e-9 and c["minReF0"] >= -1e-9
    assert c["denomOuter"].verdict and c["denomOuterJensen"].verdict
    assert max(c["tailU"], c["tailV"], c["tailFp"]) <= 1e-6
    assert c["supPHDen"] <= 1 + 1e-6
    assert f.passed


# --- verification ----------------------------------------------------------------------------------------

def test_verify_honest():
    f = factor_h2(ONE, A1)
    assert verify(f, ONE).passed


def test_verify_tampered():
    f = factor_h2(ONE, A1)
    rep = verify(dataclasses.replace(f, u=f.u + 1e-3), ONE)
    failed = {c["name"] for c in rep.checks if not c["pass"]}
    assert not rep.passed and "residual" in failed


def test_verify_zero():
    rep = verify(factor_h2(h_const(0), A1), h_const(0))
    assert rep.passed and all(c["margin"] >= 0 for c in rep.checks)


# --- main assembly ----------------------------------------------------------------------------------------

PAIR = pair_from_a1(A1)


def _residual(res, f, grid=G):
    fv = RationalFn(f.num, f.den)(grid.nodes) if isinstance(f, RationalFn) else f(grid.nodes)
    psi = res.denominator.fn().on_grid(grid)
    return np.max(np.abs(fv * psi - res.full_numerator().fn().on_grid(grid))), np.max(np.abs(fv))


def test_hb_polynomial_short_circuit():
    f = Poly([1, 2, 3])
    res = factor_hb(f, PAIR)
    assert res.factorization is None and res.passed
    assert Poly(res.denominator.fn().taylor) == ONE
    assert Poly(res.full_numerator().fn().taylor).allclose(f)


def test_hb_a1_itself():
    res = factor_hb(RationalFn(A1, ONE), PAIR, shortcut=False)
    h1 = factor_h2(ONE, A1)
    # f = a1 has g = 1, so phi and psi come from the h = 1 factorization
    assert np.allclose(res.numerator.g.taylor[:5], h1.u.taylor[:5], atol=1e-9)
    err, fmax = _residual(res, RationalFn(A1, ONE))
    assert err <= 1e-6 * (1 + fmax) and res.passed


def test_hb_rational():
    # a1 / (1 - z/2) + z
    f = RationalFn(A1 + Poly([0, 1]) * Poly([1, -0.5]), Poly([1, -0.5]))
    res = factor_hb(f, PAIR)
    assert res.passed and res.certs["cyclicity"].verdict
    assert res.numerator.r.is_zero() and res.denominator.r == ONE
    err, fmax = _residual(res, f)
    assert err <= 1e-6 * (1 + fmax)


# --- algebra ---------------------------------------------------------------------------------------------

def _pair_of(f):
    return factor_hb(f, PAIR).as_pair(f)


def _residual_pair(x, values):
    fv = values(G)
    return np.max(np.abs(fv * x.psi.fn().on_grid(G) - x.phi.fn().on_grid(G)))


def test_sum_with_zero():
    x1 = _pair_of(RationalFn(Poly([1, 2]), Poly([1, -0.5])))
    zero = _pair_of(RationalFn(Poly([]), ONE))
    out = combine(x1, zero, "sum", PAIR)
    assert _residual_pair(out, x1.values) <= 1e-9


def test_product_with_one():
    x1 = _pair_of(RationalFn(Poly([1, 2]), Poly([1, -0.5])))
    one = _pair_of(RationalFn(ONE, ONE))
    out = combine(x1, one, "product", PAIR)
    assert _residual_pair(out, x1.values) <= 1e-9


def test_random_sum_and_product(rng):
    f1 = RationalFn(Poly([1, -0.3, 0.2]), Poly([1, -0.5]))
    f2 = RationalFn(Poly([0.5, 1j]), Poly([1, 0.4j]))
    x1, x2 = _pair_of(f1), _pair_of(f2)
    for mode in ("sum", "product"):
        out = combine(x1, x2, mode, PAIR)
        assert out.certs["pass"] and out.certs["residual"] <= out.certs["residualBound"]


def test_combine_catches_broken_input():
    x1 = _pair_of(RationalFn(Poly([1, 2]), Poly([1, -0.5])))
    broken = SmirnovPair(x1.phi, x1.psi, lambda grid: 2 * x1.values(grid))
    with pytest.raises(CertificationFailure):
        combine(x1, broken, "product", PAIR)


def test_analytic_fn_input():
    g = AnalyticFn(0.5 ** np.arange(40), 0.0)
    assert factor_h2(g, Poly([-1, 0, 1])).passed
