"""The space M(conj(a1)) = a1 H^2 + P_{N-1} (equal to H(b) as a set).

Decomposition f = a1 g + q, the equivalent norm, membership, multiplier
and cyclicity predicates, and the de Branges-Rovnyak kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import (
    MAX_N,
    AnalyticFn,
    BoundaryFn,
    BoundaryGrid,
    OuterCert,
    analytic_project,
    as_function,
    as_polynomial,
    evaluate,
    jets,
    outerness_test,
    sample,
)
from .errors import NotInSpace, NotMultiplier
from .poly import Poly, gcd_approx, hermite_interpolant
from .rational import RationalFn

MEMBERSHIP_TOL = 1e-6
HINF_CAP = 1e6
HINF_GROWTH = 0.01
BOUNDARY_VALUE_TOL = 1e-6
EXACT_DIVISION_MAX_DEGREE = 1 << 16


@dataclass(frozen=True, eq=False)
class HbDecomposition:
    g: AnalyticFn
    polyPart: Poly
    residual: float
    meta: dict = field(default_factory=dict)

    def reassemble(self, a1):
        return self.g * a1 + self.polyPart

    def to_json(self):
        return {
            "g": self.g.to_json(),
            "gTail": self.g.tailMass,
            "polyPart": self.polyPart.to_json(),
            "residual": self.residual,
        }


@dataclass(frozen=True, eq=False)
class MultiplierCert:
    inSpace: bool
    decomposition: HbDecomposition | None
    supA1G: float
    supPhi: float
    growth: float
    verdict: bool

    def to_json(self):
        return {
            "inSpace": self.inSpace,
            "supA1G": self.supA1G,
            "supPhi": self.supPhi,
            "growth": self.growth,
            "verdict": self.verdict,
        }


@dataclass(frozen=True, eq=False)
class CyclicityCert:
    outer: OuterCert
    gcdWitness: Poly
    boundaryValues: list
    verdict: bool
    boundaryVerdict: bool

    @property
    def routesAgree(self):
        return self.verdict == self.boundaryVerdict

    def to_json(self):
        return {
            "outer": self.outer.to_json(),
            "gcdWitness": self.gcdWitness.to_json(),
            "boundaryValues": [[complex(v).real, complex(v).imag] for v in self.boundaryValues],
            "verdict": self.verdict,
            "boundaryVerdict": self.boundaryVerdict,
        }


def _a1_of(pair_or_a1):
    if isinstance(pair_or_a1, Poly):
        from .pythagoras import extract_unimodular

        uni = extract_unimodular(pair_or_a1)
        return uni.a1, uni.zeros
    return pair_or_a1.a1, pair_or_a1.boundaryZeros


def decompose(f, pair, tol=MEMBERSHIP_TOL, grid=None, adaptive=False):
    """Split f = a1 g + polyPart with deg polyPart < N.

    With ``adaptive`` a rejection is retried on doubled grids up to the maximum
    size, since a coarse grid alone can push the tail over ``tol``.
    """
    f = as_function(f)
    grid = grid or (f.grid if isinstance(f, BoundaryFn) else BoundaryGrid())
    while True:
        try:
            return _decompose(f, pair, tol, grid)
        except NotInSpace:
            if not adaptive or isinstance(f, BoundaryFn) or grid.n >= MAX_N:
                raise
            grid = grid.doubled()


def _decompose(f, pair, tol, grid):
    a1, zeros = _a1_of(pair)
    N = zeros.total
    if N == 0:
        poly_part = Poly()
    else:
        poly_part = hermite_interpolant(zeros, [jets(f, loc, m) for loc, m in zeros.entries])
        if poly_part.degree >= N:  # pragma: no cover - guarded by the solver size
            raise NotInSpace("interpolant degree exceeds N - 1")
    exact = as_polynomial(f, EXACT_DIVISION_MAX_DEGREE)
    if exact is not None:
        quo, rem = divmod(exact - poly_part, a1)
        g = AnalyticFn.from_poly(quo)
        division_defect = float(np.max(np.abs(rem.coeffs))) if not rem.is_zero() else 0.0
    else:
        fs = sample(f, grid)
        diff = fs.samples - poly_part(grid.nodes)
        g = analytic_project(BoundaryFn.from_samples(grid, diff / a1(grid.nodes)))
        division_defect = 0.0
    fs = sample(f, grid)
    recon = a1(grid.nodes) * g.on_grid(grid) + poly_part(grid.nodes)
    residual = float(np.max(np.abs(fs.samples - recon))) + division_defect
    scale = max(fs.l2(), 1e-300)
    if g.tailMass > tol * scale or residual > tol * max(1.0, fs.sup()):
        raise NotInSpace(
            f"decomposition defect too large (tail {g.tailMass:.3e}, residual {residual:.3e})",
            tail=g.tailMass,
            residual=residual,
        )
    return HbDecomposition(g, poly_part, residual, {"tailRel": g.tailMass / scale})


def hb_norm(d):
    """sqrt(||g||^2 + ||q||^2): the equivalent norm on the direct sum."""
    q = d.polyPart.coeffs
    return math.sqrt(d.g.norm() ** 2 + float(np.sum(np.abs(q) ** 2)))


def membership_test(f, pair, tol=MEMBERSHIP_TOL, grid=None):
    try:
        d = decompose(f, pair, tol, grid)
    except NotInSpace as exc:
        return False, max(exc.info.get("residual", math.inf), exc.info.get("tail", 0.0))
    return True, max(d.residual, d.g.tailMass)


def _sup_pair(fn, grid):
    s1 = float(np.max(np.abs(fn(grid))))
    s2 = float(np.max(np.abs(fn(grid.doubled()))))
    return s1, s2


def _growth(s1, s2):
    return abs(s2 - s1) / max(s1, 1e-300)


def is_multiplier(phi, pair, tol=MEMBERSHIP_TOL, grid=None, decomposition=None):
    """phi is a multiplier iff phi = a1 g + r lies in the space and a1 g is bounded."""
    phi = as_function(phi)
    a1, _ = _a1_of(pair)
    grid = grid or BoundaryGrid()
    d = decomposition
    if d is None:
        try:
            d = decompose(phi, pair, tol, grid)
        except NotInSpace:
            d = None
    if d is None:
        return MultiplierCert(False, None, math.inf, math.inf, math.inf, False)
    sa1, sa2 = _sup_pair(lambda gr: a1(gr.nodes) * d.g.on_grid(gr), grid)
    if isinstance(phi, AnalyticFn):
        sp1, sp2 = _sup_pair(phi.on_grid, grid)
    elif isinstance(phi, RationalFn):
        sp1, sp2 = _sup_pair(lambda gr: evaluate(phi, gr.nodes), grid)
    else:
        sp1, sp2 = _sup_pair(lambda gr: sample(phi, gr).samples, grid)
    growth = max(_growth(sa1, sa2), _growth(sp1, sp2))
    sup_a1g, sup_phi = max(sa1, sa2), max(sp1, sp2)
    verdict = sup_a1g < HINF_CAP and sup_phi < HINF_CAP and growth < HINF_GROWTH
    return MultiplierCert(True, d, sup_a1g, sup_phi, growth, bool(verdict))


def is_cyclic(psi, pair, tol=MEMBERSHIP_TOL, grid=None, decomposition=None, outer=None):
    """Cyclic iff psi is outer and gcd(a1, r) = 1 (r the polynomial part)."""
    psi = as_function(psi)
    a1, zeros = _a1_of(pair)
    mc = is_multiplier(psi, pair, tol, grid, decomposition)
    if not mc.verdict:
        raise NotMultiplier("psi is not a multiplier of the space")
    scale = max(1.0, mc.supPhi)
    r = mc.decomposition.polyPart
    if not r.is_zero() and np.max(np.abs(r.coeffs)) <= BOUNDARY_VALUE_TOL * scale:
        r = Poly()  # zero up to rounding
    r = r.trimmed(1e-12)
    outer = outer or outerness_test(psi, grid=grid)
    if zeros.total == 0:
        witness = Poly([1])
    elif r.is_zero():
        witness = a1.monic()
    else:
        witness = gcd_approx(a1, r)
    locs = zeros.locations
    if isinstance(psi, RationalFn) or as_polynomial(psi) is not None:
        bvals = [complex(v) for v in evaluate(psi, locs)] if locs.size else []
    else:
        bvals = [complex(r(x)) for x in locs]
    verdict = outer.verdict and witness.degree == 0
    bverdict = outer.verdict and all(abs(v) > BOUNDARY_VALUE_TOL * scale for v in bvals)
    return CyclicityCert(outer, witness, bvals, bool(verdict), bool(bverdict))


def kernel_eval(b, lam, z):
    """(1 - b(z) conj(b(lam))) / (1 - conj(lam) z)."""
    b = as_function(b)
    bz, bl = complex(evaluate(b, np.array([z]))[0]), complex(evaluate(b, np.array([lam]))[0])
    return (1 - bz * np.conj(bl)) / (1 - np.conj(lam) * z)


def gram_matrix(b, points):
    """[k(lam_i, lam_j)] evaluated as k_{lam_j}(lam_i)."""
    pts = np.asarray(points, dtype=np.complex128)
    bv = evaluate(as_function(b), pts)
    return (1 - bv[:, None] * np.conj(bv[None, :])) / (1 - pts[:, None] * np.conj(pts[None, :]))

