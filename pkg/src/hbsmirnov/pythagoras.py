"""Pythagorean mates of rational b, the boundary-zero polynomial a1, and the
corona check for the pair (a, b)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary import SNAP_TOL, BoundaryGrid
from .errors import InnerInput, InvalidInput, NonConvergence, NotInBall, NotNonnegative
from .poly import Poly, RootSet, roots
from .rational import RationalFn

BALL_TOL = 1e-9
INNER_TOL = 1e-8
NONNEG_TOL = 1e-12
VERIFY_N = 4096
CORONA_RADII = (0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0)


@dataclass(frozen=True, eq=False)
class PythagoreanPair:
    b: RationalFn
    a: RationalFn
    a1: Poly
    N: int
    boundaryZeros: RootSet
    certificates: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "a": self.a.to_json(),
            "a1": self.a1.to_json(),
            "N": self.N,
            "boundaryZeros": self.boundaryZeros.to_json(),
            "certificates": dict(self.certificates),
        }


@dataclass(frozen=True)
class Unimodular:
    a1: Poly
    N: int
    zeros: RootSet

    def __iter__(self):
        return iter((self.a1, self.N))


def _as_rational(b):
    if isinstance(b, Poly):
        return RationalFn.from_poly(b)
    if not isinstance(b, RationalFn):
        raise InvalidInput("b must be a rational function")
    return b


def _sup_on_grid(b, grid):
    return float(np.max(np.abs(b(grid.nodes))))


def is_inner_rational(b, grid=None):
    """True iff ||b| - 1| <= 1e-8 at every grid node."""
    b = _as_rational(b)
    grid = grid or BoundaryGrid(VERIFY_N)
    mod = np.abs(b(grid.nodes))
    if mod.max() > 1 + BALL_TOL:
        raise NotInBall(f"sup |b| = {mod.max():.12g} on the grid")
    return bool(np.all(np.abs(mod - 1) <= INNER_TOL))


def autocorrelation(p, d):
    """Coefficients c_{-d}..c_d of |p(e^{it})|^2."""
    out = np.zeros(2 * d + 1, dtype=np.complex128)
    if p.is_zero():
        return out
    a = p.coeffs
    full = np.convolve(a, np.conj(a[::-1]))
    m = a.size - 1
    out[d - m : d + m + 1] = full
    return out


def trig_eval(coeffs, pts):
    """Evaluate sum_k c_k z^k for c_{-d}..c_d at points on the circle."""
    d = (len(coeffs) - 1) // 2
    return Poly(coeffs)(pts) * pts ** (-d)


def fejer_riesz(coeffs, snap_tol=SNAP_TOL):
    """Polynomial r with |r|^2 = t on the circle and no zeros in the open disk.

    ``coeffs`` lists c_{-d}, ..., c_d of a nonnegative trigonometric polynomial.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size % 2 == 0:
        raise InvalidInput("need an odd number of coefficients c_{-d}..c_d")
    d = c.size // 2
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale == 0:
        raise NotNonnegative("zero trigonometric polynomial has no spectral factor")
    if np.max(np.abs(c - np.conj(c[::-1]))) > 1e-12 * scale:
        raise InvalidInput("coefficients are not conjugate-symmetric")
    c = (c + np.conj(c[::-1])) / 2
    grid = BoundaryGrid(max(64, 1 << (8 * (d + 1)).bit_length()))
    t_grid = trig_eval(c, grid.nodes).real
    if t_grid.min() < -NONNEG_TOL * max(1.0, scale):
        raise NotNonnegative(f"trigonometric polynomial dips to {t_grid.min():.3e}")
    # effective degree
    mags = np.abs(c[d:])
    eff = int(np.flatnonzero(mags > 1e-14 * scale)[-1])
    c = c[d - eff : d + eff + 1]
    if eff == 0:
        return Poly([np.sqrt(max(c[0].real, 0.0))])
    rs = roots(Poly(c))
    chosen = []
    for loc, m in rs.entries:
        mod = abs(loc)
        if abs(mod - 1) <= snap_tol:
            if m % 2:
                raise NonConvergence("boundary zero of odd order; t is not resolved as nonnegative")
            chosen.extend([loc / mod] * (m // 2))
        elif mod > 1:
            chosen.extend([loc] * m)
    if len(chosen) != eff:
        raise NonConvergence(f"root split failed: {len(chosen)} roots selected for degree {eff}")
    r0 = Poly.from_roots(chosen)
    g = np.abs(r0(grid.nodes)) ** 2
    t_eff = trig_eval(c, grid.nodes).real
    lead2 = float(np.dot(t_eff, g) / np.dot(g, g))
    r = r0 * np.sqrt(lead2)
    r0_at0 = r.coeffs[0]
    if r0_at0 != 0:
        r = r * (abs(r0_at0) / r0_at0)
    else:  # pragma: no cover - roots are never inside the disk
        r = r * (abs(r.lead) / r.lead)
    return r


def extract_unimodular(a, snap_tol=SNAP_TOL):
    """a1 = prod (z - xi_j)^{m_j} over the zeros of a on the unit circle."""
    num = a.num if isinstance(a, RationalFn) else a
    if num.degree < 1:
        return Unimodular(Poly([1]), 0, RootSet(()))
    rs = roots(num)
    entries = tuple(
        (loc / abs(loc), m) for loc, m in rs.entries if abs(abs(loc) - 1) <= snap_tol
    )
    zeros = RootSet(entries, rs.residual)
    a1 = Poly.from_rootset(zeros)
    return Unimodular(a1, zeros.total, zeros)


def corona_check(pair, probe_count=64):
    """min of |a| + |b| over probe circles of several radii and the boundary."""
    grid = BoundaryGrid(max(4, 1 << (probe_count - 1).bit_length()))
    pts = np.concatenate([r * grid.nodes for r in CORONA_RADII])
    return float(np.min(np.abs(pair.a(pts)) + np.abs(pair.b(pts))))


def mate(b, snap_tol=SNAP_TOL, grid=None):
    """Pythagorean mate of a rational, non-inner b in the closed unit ball."""
    b = _as_rational(b).reduced()
    if b.den.degree >= 1:
        den_roots = roots(b.den).locations
        if np.any(np.abs(den_roots) <= 1 + 1e-12):
            raise InvalidInput("denominator of b vanishes in the closed disk")
    grid = grid or BoundaryGrid(VERIFY_N)
    if is_inner_rational(b, grid):
        raise InnerInput("b is inner (a finite Blaschke product); H(b) is a model space")
    d = max(b.num.degree, b.den.degree, 0)
    t = autocorrelation(b.den, d) - autocorrelation(b.num, d)
    r = fejer_riesz(t, snap_tol)
    d0 = b.den.coeffs[0]
    den = b.den * (abs(d0) / d0)  # real positive den(0) so a(0) is exactly real
    a0 = r.coeffs[0] / d0
    if a0 == 0:
        raise NonConvergence("mate vanishes at the origin")
    c = (r * (abs(a0) / a0) * (abs(d0) / d0)).coeffs.copy()
    c[0] = abs(c[0])
    a = RationalFn(Poly(c), den)
    uni = extract_unimodular(a, snap_tol)
    nodes = grid.nodes
    residual = float(np.max(np.abs(np.abs(a(nodes)) ** 2 + np.abs(b(nodes)) ** 2 - 1)))
    if a.num.degree >= 1:
        outer_margin = float(np.min(np.abs(roots(a.num).locations)) - (1 - snap_tol))
    else:
        outer_margin = float("inf")
    pair = PythagoreanPair(b, a, uni.a1, uni.N, uni.zeros)
    certs = {
        "mateResidual": residual,
        "coronaMin": corona_check(pair),
        "outerMargin": outer_margin,
        "a0": float(a(0).real),
    }
    return PythagoreanPair(b, a, uni.a1, uni.N, uni.zeros, certs)


def pair_from_a1(a1):
    """Build b whose mate has exactly the boundary zeros of the monic ``a1``.

    With a = a1 / 2^N (so |a| <= 1 on the circle), b is the spectral factor of
    1 - |a|^2; ``mate(b)`` then recovers a and a1.
    """
    a1 = a1.monic()
    N = max(a1.degree, 0)
    t = -autocorrelation(a1 / 2**N, N)
    t[N] += 1
    return mate(RationalFn.from_poly(fejer_riesz(t)))
