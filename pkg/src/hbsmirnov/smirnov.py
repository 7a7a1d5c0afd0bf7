"""The explicit factorization h = u / (p v + 1) and its assembly into
Smirnov-class representations f = phi / psi for the space a1 H^2 + P_{N-1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import (
    ANALYTIC_TOL,
    DEFAULT_N,
    MAX_N,
    SNAP_TOL,
    AnalyticFn,
    BoundaryFn,
    BoundaryGrid,
    OuterCert,
    analytic_project,
    as_function,
    as_polynomial,
    cauchy_density,
    evaluate,
    herglotz,
    jensen_defect,
    sample,
)
from .errors import (
    CertificationFailure,
    NotH2,
    RootNotUnimodular,
    RouteMismatch,
)
from .poly import Poly, RootSet, roots, sup_norm_on_circle
from .rational import RationalFn, series_divide
from .space import HbDecomposition, decompose, is_cyclic, is_multiplier

FACTOR_TOL = 1e-6
ROUTE_TOL = 1e-6
Q_TAIL_TOL = 1e-7
PROBE_RADII = (0.0, 0.3, 0.6, 0.9, 0.99)


# ---------------------------------------------------------------------------
# partial fractions and the correction polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PartialFractions:
    """x p(z) / ((x - z) p(x)) = const + z/(x - z) + sum p_kl(z) / (xi_k - x)^l."""

    p: Poly
    zeros: RootSet
    terms: dict  # (k, l) -> Poly, k indexes zeros.entries, l = 1..m_k
    const: float

    def rhs(self, z, x):
        out = self.const + z / (x - z)
        for (k, l), pkl in self.terms.items():
            xi = self.zeros.entries[k][0]
            out = out + pkl(z) / (xi - x) ** l
        return out

    def lhs(self, z, x):
        return x * self.p(z) / ((x - z) * self.p(x))


def unimodular_zeros(p, snap_tol=SNAP_TOL):
    """Roots of p snapped to the circle; RootNotUnimodular if any is off it."""
    if p.degree < 1:
        return RootSet(())
    rs = roots(p)
    entries = []
    for loc, m in rs.entries:
        if abs(abs(loc) - 1) > snap_tol:
            raise RootNotUnimodular(f"root {loc!r} is not on the unit circle")
        entries.append((loc / abs(loc), m))
    return RootSet(tuple(entries), rs.residual)


def snapped(p, zeros):
    """p rebuilt from its snapped roots (same leading coefficient)."""
    if p.degree < 1:
        return p
    return Poly.from_rootset(zeros, p.lead)


def partial_fraction_table(p, snap_tol=SNAP_TOL, probes=16, seed=0):
    """Residue-calculus table of the polynomials p_kl, verified at random probes."""
    zeros = unimodular_zeros(p, snap_tol)
    p = snapped(p, zeros)
    terms = {}
    for k, (xi, m) in enumerate(zeros.entries):
        others = [loc for j, (loc, mj) in enumerate(zeros.entries) if j != k for _ in range(mj)]
        pk = Poly.from_roots(others, p.lead)
        # Taylor coefficients of x / P_k(x) about xi
        num = np.array([xi, 1.0], dtype=np.complex128)
        den = pk.taylor_shift(xi).coeffs
        cser = series_divide(num, den, m)
        for l in range(1, m + 1):
            acc = Poly()
            for i in range(0, m - l + 1):
                # p(z) / (z - xi)^(i+1)
                quot = Poly.from_roots(others + [xi] * (m - i - 1), p.lead)
                acc = acc - quot * cser[m - l - i]
            terms[(k, l)] = acc * ((-1) ** l)
    table = PartialFractions(p, zeros, terms, 1.0 if p.degree < 1 else 0.0)
    rng = np.random.default_rng(seed)
    z = 0.9 * np.sqrt(rng.uniform(size=probes)) * np.exp(2j * np.pi * rng.uniform(size=probes))
    x = np.exp(2j * np.pi * rng.uniform(size=probes))
    err = np.abs(table.lhs(z, x) - table.rhs(z, x)) / (1 + np.abs(table.lhs(z, x)))
    if np.max(err) > 1e-8:  # pragma: no cover - residue formula is exact
        raise RouteMismatch("partial fraction identity failed at probe points")
    return table


def _arc_quadrature(zeros, panels):
    """Composite Gauss-Legendre nodes/weights on [0, 2pi), split at the zeros."""
    cuts = sorted({float(np.angle(loc) % (2 * np.pi)) for loc, _ in zeros.entries}) or [0.0]
    cuts = cuts + [cuts[0] + 2 * np.pi]
    xg, wg = np.polynomial.legendre.leggauss(24)
    ts, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        edges = np.linspace(a, b, panels + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            ts.append((hi - lo) / 2 * xg + (hi + lo) / 2)
            ws.append((hi - lo) / 2 * wg)
    t = np.concatenate(ts)
    return np.exp(1j * t), np.concatenate(ws) / (2 * np.pi)


def moment_correction(h, table, rtol=1e-13, max_panels=1 << 12):
    """Correction polynomial from boundary moments (adaptive Gauss-Legendre)."""
    p, zeros = table.p, table.zeros

    def run(panels):
        x, wt = _arc_quadrature(zeros, panels)
        absh = np.abs(evaluate(h, x))
        absp = np.abs(p(x))
        mean_w = float(np.sum(wt * absp * absh))
        q = Poly([-mean_w + 2 * table.const * mean_w])
        moments = {}
        for (k, l), pkl in table.terms.items():
            xi = zeros.entries[k][0]
            mom = complex(np.sum(wt * absp * absh / (xi - x) ** l))
            moments[(k, l)] = mom
            q = q + pkl * (2 * mom)
        return q, moments

    panels = 4
    q, mom = run(panels)
    while panels < max_panels:
        panels *= 2
        q2, mom2 = run(panels)
        if _coeff_diff(q, q2) <= rtol * max(1.0, _coeff_max(q2)):
            return q2, mom2
        q, mom = q2, mom2
    return q, mom


def _coeff_max(p):
    return float(np.max(np.abs(p.coeffs))) if not p.is_zero() else 0.0


def _coeff_diff(p, q):
    return _coeff_max(p - q)


@dataclass(frozen=True, eq=False)
class CorrectionResult:
    q: Poly
    qMoments: Poly
    routeGap: float
    tail: float
    F: AnalyticFn
    F0: AnalyticFn
    density: AnalyticFn
    weight: BoundaryFn


def weight(h, p):
    """w = |p h| on the grid of h."""
    return BoundaryFn.from_samples(h.grid, np.abs(p(h.grid.nodes) * h.samples), real=True)


def _correction(h_fn, hs, table, route_tol=ROUTE_TOL):
    p = table.p
    w = weight(hs, p)
    F0 = herglotz(w)
    G = cauchy_density(hs, p)
    F = G * p
    dq = max(p.degree, 1)
    diff = (F - F0).taylor
    half = hs.grid.n // 2
    q_spec = Poly(diff[:dq])
    scale = max(1.0, float(np.max(np.abs(F.taylor))))
    tail = float(np.max(np.abs(diff[dq:half]))) / scale if half > dq else 0.0
    q_mom, _ = moment_correction(h_fn, table)
    gap = _coeff_diff(q_spec, q_mom)
    res = CorrectionResult(q_spec, q_mom, gap, tail, F, F0, G, w)
    if gap > route_tol * max(1.0, _coeff_max(q_mom)) or tail > Q_TAIL_TOL:
        raise RouteMismatch(
            f"correction polynomial routes disagree (gap {gap:.3e}, tail {tail:.3e})",
            gap=gap,
            tail=tail,
            n=hs.grid.n,
        )
    return res


def correction_poly(h, p, grid=None, route_tol=ROUTE_TOL):
    """q with F = F0 + q, cross-checked between the spectral and moment routes."""
    h_fn = as_function(h)
    grid = grid or BoundaryGrid()
    hs = sample(h_fn, grid)
    table = partial_fraction_table(p)
    return _correction(h_fn, hs, table, route_tol).q


def rescale(q):
    """c = min(1, 1 / (2 sup|q|)), so |1 - c q| >= 1/2 on the closed disk."""
    s = sup_norm_on_circle(q, max(64, 4 * (q.degree + 1))) if not q.is_zero() else 0.0
    if s == 0:
        return 1.0
    return min(1.0, 1.0 / (2 * s))


# ---------------------------------------------------------------------------
# the factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SmirnovFactorization:
    u: AnalyticFn
    v: AnalyticFn
    p: Poly
    scale: float
    q: Poly
    certs: dict
    n: int = DEFAULT_N

    @property
    def passed(self):
        return bool(self.certs.get("pass", False))

    def psi(self):
        """Denominator p v + 1 as a Taylor series."""
        return self.v * self.p + 1.0

    def to_json(self):
        return {
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "p": self.p.to_json(),
            "scale": self.scale,
            "q": self.q.to_json(),
            "n": self.n,
            "certificates": _json_certs(self.certs),
        }

    @classmethod
    def from_json(cls, obj):
        from .boundary import parse_function_spec, parse_poly

        return cls(
            u=parse_function_spec(obj["u"]),
            v=parse_function_spec(obj["v"]),
            p=parse_poly(obj["p"]),
            scale=float(obj["scale"]),
            q=parse_poly(obj["q"]),
            certs=dict(obj.get("certificates", {})),
            n=int(obj.get("n", DEFAULT_N)),
        )


def _json_certs(certs):
    out = {}
    for k, v in certs.items():
        out[k] = v.to_json() if hasattr(v, "to_json") else v
    return out


def _is_zero_fn(h):
    if isinstance(h, RationalFn):
        return h.num.is_zero()
    if isinstance(h, AnalyticFn):
        return h.is_zero()
    if isinstance(h, BoundaryFn):
        return not np.any(h.samples)
    return False


def _probe_points(count=32):
    t = 2 * np.pi * (np.arange(count) + 0.25) / count
    return np.concatenate([r * np.exp(1j * t) for r in PROBE_RADII])


def _zero_factorization(p, n, tol=FACTOR_TOL):
    certs = {
        "residual": 0.0,
        "residualBound": tol,
        "supPU": 0.0,
        "supPUBound": 1.0,
        "supPHDen": 0.0,
        "supPV": 0.0,
        "supPVDoubled": 0.0,
        "minQ": 1.0,
        "minReF0": 0.0,
        "minReDen": 1.0,
        "denomOuter": OuterCert("structural", True, 0.0, 0.0),
        "denomOuterJensen": OuterCert("jensen", True, 0.0, 0.0),
        "tailU": 0.0,
        "tailV": 0.0,
        "tailFp": 0.0,
        "routeGap": 0.0,
        "routeBound": ROUTE_TOL,
        "qTail": 0.0,
        "n": n,
    }
    certs["checks"] = certificate_checks(certs)
    certs["pass"] = True
    return SmirnovFactorization(AnalyticFn.zero(), AnalyticFn.zero(), p, 1.0, Poly(), certs, n)


# (name, sense, bound); sense "max" means value <= bound, "min" means value >= bound
_CHECK_TABLE = (
    ("residual", "max", "residualBound"),
    ("supPHDen", "max", 1 + 1e-6),
    ("supPU", "max", "supPUBound"),
    ("supPVGrowth", "max", 0.01),
    ("minQ", "min", 0.5 - 1e-9),
    ("minReF0", "min", -1e-9),
    ("minReDen", "min", 1 - 1e-9),
    ("tailU", "max", ANALYTIC_TOL),
    ("tailV", "max", ANALYTIC_TOL),
    ("tailFp", "max", ANALYTIC_TOL),
    ("routeGap", "max", "routeBound"),
)


def _check(name, value, bound, sense):
    value, bound = float(value), float(bound)
    margin = bound - value if sense == "max" else value - bound
    return {"name": name, "value": value, "bound": bound, "sense": sense,
            "margin": margin, "pass": bool(margin >= 0)}


def certificate_checks(certs):
    """One entry per side condition, each with its value, bound and margin."""
    vals = dict(certs)
    s1, s2 = vals["supPV"], vals["supPVDoubled"]
    vals["supPVGrowth"] = abs(s2 - s1) / s1 if s1 > 1e-12 else abs(s2 - s1)
    out = []
    for name, sense, bound in _CHECK_TABLE:
        b = vals[bound] if isinstance(bound, str) else bound
        out.append(_check(name, vals[name], b, sense))
    for name in ("denomOuter", "denomOuterJensen"):
        cert = vals[name]
        out.append({"name": name, "value": cert.defect, "bound": None, "sense": cert.route,
                    "margin": cert.margin, "pass": bool(cert.verdict)})
    return out


def _certify(h_fn, hs, p, u, v, c, q, corr, tol):
    """Every side condition of the factorization, measured on the grid of ``hs``."""
    grid = hs.grid
    nodes = grid.nodes
    u_g, v_g, p_g = u.on_grid(grid), v.on_grid(grid), p(nodes)
    h_g = hs.samples
    hmax = float(np.max(np.abs(h_g)))
    psi_g = p_g * v_g + 1
    residual = float(np.max(np.abs(h_g * psi_g - u_g)))
    sup_pu = c * float(np.max(np.abs(p_g * u_g)))
    sup_pv = float(np.max(np.abs(p_g * v_g)))
    g2 = grid.doubled()
    sup_pv2 = float(np.max(np.abs(p(g2.nodes) * v.on_grid(g2))))
    Q = 1 - q * c
    probes = _probe_points()
    minQ = float(min(np.min(np.abs(Q(nodes))), np.min(np.abs(Q(probes)))))
    q_zero_free = Q.degree < 1 or bool(np.all(np.abs(roots(Q).locations) > 1))
    F0 = corr.F - q
    min_re_f0 = float(np.min(F0(probes).real))
    den = c * F0.on_grid(grid) + 1
    min_re_den = float(np.min(den.real))
    # the construction bounds |p h_c / (c F0 + 1)| by 1; p u_c carries the extra factor Q
    sup_ph_den = c * float(np.max(np.abs(p_g * h_g / den)))
    sup_q = float(np.max(np.abs(Q(nodes))))
    # Rouche: psi stays within |Q/den| of the exact denominator, so it is zero-free
    exact_psi = Q(nodes) / den
    rouche = float(np.min(np.abs(exact_psi)) - np.max(np.abs(psi_g - exact_psi)))
    structural_ok = (
        q_zero_free and minQ >= 0.5 - 1e-9 and min_re_den >= 1 - 1e-9 and rouche > 0
    )
    structural = OuterCert("structural", bool(structural_ok), rouche, 0.0)
    psi = v * p + 1.0
    jgrid = grid if len(psi) <= grid.n // 2 else BoundaryGrid(1 << (2 * len(psi) - 1).bit_length())
    jdef = jensen_defect(psi.on_grid(jgrid), psi.taylor[0])
    jensen = OuterCert("jensen", jdef <= ANALYTIC_TOL, ANALYTIC_TOL - jdef, jdef)
    ref = max(hs.l2(), 1e-300)
    tail_u = u.tailMass / max(u.norm(), ref)
    tail_v = v.tailMass / max(v.norm(), ref)
    fp = BoundaryFn.from_samples(grid, corr.F.on_grid(grid) / p_g)
    tail_fp = analytic_project(fp).tailMass / max(corr.density.norm(), ref)
    certs = {
        "residual": residual,
        "residualBound": tol * (1 + hmax),
        "supPU": sup_pu,
        "supPUBound": sup_q * (1 + 1e-9) + 1e-12,
        "supPHDen": sup_ph_den,
        "supPV": sup_pv,
        "supPVDoubled": sup_pv2,
        "minQ": minQ,
        "minReF0": min_re_f0,
        "minReDen": min_re_den,
        "denomOuter": structural,
        "denomOuterJensen": jensen,
        "tailU": tail_u,
        "tailV": tail_v,
        "tailFp": tail_fp,
        "routeGap": corr.routeGap,
        "routeBound": ROUTE_TOL * max(1.0, _coeff_max(corr.qMoments)),
        "qTail": corr.tail,
        "n": grid.n,
    }
    certs["checks"] = certificate_checks(certs)
    certs["pass"] = all(chk["pass"] for chk in certs["checks"])
    return certs


def factor_h2(h, p, grid=None, tol=FACTOR_TOL, adaptive=True, max_n=MAX_N):
    """h = u / (p v + 1) with p u, p v bounded and p v + 1 outer."""
    h_fn = as_function(h)
    grid = grid or BoundaryGrid()
    table = partial_fraction_table(p)
    p = table.p
    if _is_zero_fn(h_fn):
        return _zero_factorization(p, grid.n)
    while True:
        try:
            certs, u, v, c, q = _factor_attempt(h_fn, p, table, grid, tol)
        except (RouteMismatch, NotH2):
            # both are resolution-limited on a coarse grid
            if not adaptive or grid.n >= max_n:
                raise
            grid = grid.doubled()
            continue
        if certs["pass"] or not adaptive or grid.n >= max_n:
            return SmirnovFactorization(u, v, p, c, q, certs, grid.n)
        grid = grid.doubled()


def _factor_attempt(h_fn, p, table, grid, tol):
    hs = sample(h_fn, grid)
    hnorm = max(hs.l2(), 1e-300)
    hproj = analytic_project(hs)
    if hproj.tailMass > ANALYTIC_TOL * hnorm:
        raise NotH2(f"h has anti-analytic mass {hproj.tailMass:.3e}", tail=hproj.tailMass)
    corr = _correction(h_fn, hs, table)
    q = corr.q
    c = rescale(q)
    # F0 extended by the high-order terms of F keeps F = F0 + q exact as series
    den = c * (corr.F - q).on_grid(grid) + 1
    v_full = analytic_project(BoundaryFn.from_samples(grid, -c * corr.density.on_grid(grid) / den))
    # a polynomial v makes h = u / (p v + 1) exact once u := h (p v + 1)
    keep = grid.n // 4
    v = AnalyticFn(v_full.taylor[:keep], 0.0)
    psi = v * p + 1.0
    u = analytic_project(BoundaryFn.from_samples(grid, hs.samples * psi.on_grid(grid)))
    certs = _certify(h_fn, hs, p, u, v, c, q, corr, tol)
    certs["hTail"] = hproj.tailMass / hnorm
    certs["vTruncation"] = float(np.linalg.norm(v_full.taylor[keep:])) / max(v_full.norm(), hnorm)
    return certs, u, v, c, q


# ---------------------------------------------------------------------------
# multipliers of the space and the quotient assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Multiplier:
    """phi = a1 g + r with deg r < deg a1, kept in structured form."""

    g: AnalyticFn
    r: Poly
    a1: Poly

    def fn(self):
        return self.g * self.a1 + self.r

    def decomposition(self):
        return HbDecomposition(self.g, self.r, 0.0)

    def __add__(self, other):
        return Multiplier(self.g + other.g, self.r + other.r, self.a1)

    def __mul__(self, other):
        # (a1 g1 + r1)(a1 g2 + r2) = a1 (g1 phi2 + r1 g2 + s) + rem, r1 r2 = a1 s + rem
        s, rem = divmod(self.r * other.r, self.a1)
        g = self.g * other.fn() + other.g * self.r + s
        return Multiplier(g, rem, self.a1)

    def to_json(self):
        return {"g": self.g.to_json(), "r": self.r.to_json()}


def _grid_for(*fns, base=DEFAULT_N):
    size = max(len(f) for f in fns)
    return BoundaryGrid(max(base, 1 << (2 * size - 1).bit_length()))


@dataclass(frozen=True, eq=False)
class SmirnovPair:
    """f = phi / psi with phi, psi multipliers; ``values`` maps a grid to samples of f."""

    phi: Multiplier
    psi: Multiplier
    values: object = None
    certs: dict = field(default_factory=dict)

    def residual(self, grid):
        fv = self.values(grid)
        err = np.max(np.abs(fv * self.psi.fn().on_grid(grid) - self.phi.fn().on_grid(grid)))
        return float(err), float(np.max(np.abs(fv)))


@dataclass(frozen=True, eq=False)
class HbSmirnovResult:
    numerator: Multiplier
    denominator: Multiplier
    polyPart: Poly
    factorization: SmirnovFactorization | None
    pair: object
    certs: dict

    @property
    def passed(self):
        return bool(self.certs.get("pass", False))

    def full_numerator(self):
        """phi + polyPart psi, the numerator of f itself."""
        return self.numerator + Multiplier(AnalyticFn.zero(), self.polyPart, self.numerator.a1) * self.denominator

    def as_pair(self, f):
        f = as_function(f)
        return SmirnovPair(self.full_numerator(), self.denominator, lambda gr: sample(f, gr).samples)

    def to_json(self):
        return {
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "polyPart": self.polyPart.to_json(),
            "factorization": self.factorization.to_json() if self.factorization else None,
            "certificates": _json_certs(self.certs),
        }


def _pair_zeros(pair):
    return pair.a1, pair.boundaryZeros


def factor_hb(f, pair, grid=None, tol=FACTOR_TOL, adaptive=True, shortcut=True):
    """f = (phi + polyPart psi) / psi with phi = a1 u, psi = a1 v + 1.

    A polynomial f is already a multiplier, so by default it comes back as f / 1;
    ``shortcut=False`` factors its a1-part like any other member.
    """
    f_fn = as_function(f)
    grid = grid or BoundaryGrid()
    a1, _ = _pair_zeros(pair)
    d = decompose(f_fn, pair, grid=grid, adaptive=adaptive)
    if (shortcut and as_polynomial(f_fn) is not None) or d.g.is_zero():
        fact = None
        u, v = d.g, AnalyticFn.zero()
    else:
        fact = factor_h2(d.g, a1, grid, tol, adaptive)
        u, v = fact.u, fact.v
    numerator = Multiplier(u, Poly(), a1)
    denominator = Multiplier(v, Poly([1]), a1)
    result = HbSmirnovResult(numerator, denominator, d.polyPart, fact, pair, {})
    certs = _certify_hb(result, f_fn, grid, tol)
    return HbSmirnovResult(numerator, denominator, d.polyPart, fact, pair, certs)


def _certify_hb(result, f_fn, grid, tol):
    pair = result.pair
    num, den = result.full_numerator(), result.denominator
    cg = _grid_for(num.fn(), den.fn(), base=grid.n)
    fv = sample(f_fn, cg).samples
    psi = den.fn()
    err = float(np.max(np.abs(fv * psi.on_grid(cg) - num.fn().on_grid(cg))))
    bound = tol * (1 + float(np.max(np.abs(fv))))
    if result.factorization is not None:
        outer = result.factorization.certs["denomOuter"]
    else:
        outer = OuterCert("structural", True, 1.0, 0.0)
    cyc = is_cyclic(psi, pair, grid=cg, decomposition=den.decomposition(), outer=outer)
    num_cert = is_multiplier(num.fn(), pair, grid=cg, decomposition=num.decomposition())
    checks = [
        _check("residual", err, bound, "max"),
        {"name": "r1Zero", "value": _coeff_max(result.numerator.r), "bound": 0.0, "sense": "exact",
         "margin": 0.0, "pass": result.numerator.r.is_zero()},
        {"name": "r2One", "value": _coeff_max(result.denominator.r - 1), "bound": 0.0,
         "sense": "exact", "margin": 0.0, "pass": result.denominator.r == Poly([1])},
        {"name": "numeratorMultiplier", "value": num_cert.growth, "bound": None, "sense": "multiplier",
         "margin": 0.0, "pass": num_cert.verdict},
        {"name": "denominatorCyclic", "value": None, "bound": None, "sense": "cyclic",
         "margin": cyc.outer.margin, "pass": cyc.verdict and cyc.routesAgree},
    ]
    if result.factorization is not None:
        checks.append({"name": "factorization", "value": None, "bound": None, "sense": "all",
                       "margin": 0.0, "pass": result.factorization.passed})
    return {
        "residual": err,
        "residualBound": bound,
        "cyclicity": cyc,
        "numeratorMultiplier": num_cert,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }


# ---------------------------------------------------------------------------
# algebra of factored functions
# ---------------------------------------------------------------------------

def combine(x1, x2, mode, pair, grid=None, tol=FACTOR_TOL):
    """Sum or product of two factored functions, re-certified."""
    if mode == "sum":
        phi = x1.phi * x2.psi + x2.phi * x1.psi
        values = _lift(np.add, x1.values, x2.values)
    elif mode == "product":
        phi = x1.phi * x2.phi
        values = _lift(np.multiply, x1.values, x2.values)
    else:
        raise ValueError(f"mode must be 'sum' or 'product', not {mode!r}")
    psi = x1.psi * x2.psi
    phi_fn, psi_fn = phi.fn(), psi.fn()
    cg = _grid_for(phi_fn, psi_fn, base=(grid or BoundaryGrid()).n)
    num_cert = is_multiplier(phi_fn, pair, tol, cg, phi.decomposition())
    den_cert = is_multiplier(psi_fn, pair, tol, cg, psi.decomposition())
    jensen = _jensen_cert(psi_fn, cg)
    ok = num_cert.verdict and den_cert.verdict and jensen.verdict
    cyc = None
    if den_cert.verdict:
        cyc = is_cyclic(psi_fn, pair, tol, cg, psi.decomposition(), outer=jensen)
        ok = ok and cyc.verdict
    certs = {"numeratorMultiplier": num_cert, "denominatorMultiplier": den_cert, "cyclicity": cyc}
    out = SmirnovPair(phi, psi, values, certs)
    if values is not None:
        err, fmax = out.residual(cg)
        certs["residual"], certs["residualBound"] = err, tol * (1 + fmax)
        ok = ok and err <= tol * (1 + fmax)
    certs["pass"] = bool(ok)
    if not ok:
        raise CertificationFailure(f"recombined {mode} failed re-verification", mode=mode)
    return out


def _lift(op, f1, f2):
    if f1 is None or f2 is None:
        return None
    return lambda grid: op(f1(grid), f2(grid))


def _jensen_cert(fn, grid):
    samples = fn.on_grid(grid)
    jdef = jensen_defect(samples, fn.taylor[0])
    return OuterCert("jensen", jdef <= ANALYTIC_TOL, ANALYTIC_TOL - jdef, jdef)


# ---------------------------------------------------------------------------
# independent re-verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerifyReport:
    kind: str
    n: int
    checks: list
    passed: bool

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "checks": self.checks, "pass": self.passed}


def verify(obj, original, tol=FACTOR_TOL, grid=None):
    """Recompute every certificate at twice the working resolution."""
    if isinstance(obj, HbSmirnovResult):
        return _verify_hb(obj, original, tol, grid)
    h_fn = as_function(original)
    n = grid.n if grid else 2 * obj.n
    g2 = BoundaryGrid(n)
    if _is_zero_fn(h_fn) and obj.u.is_zero() and obj.v.is_zero():
        z = _zero_factorization(obj.p, n, tol)
        return VerifyReport("factor", n, z.certs["checks"], True)
    table = partial_fraction_table(obj.p)
    hs = sample(h_fn, g2)
    try:
        corr = _correction(h_fn, hs, table)
    except RouteMismatch as exc:
        chk = _check("routeGap", exc.info.get("gap", math.inf), ROUTE_TOL, "max")
        return VerifyReport("factor", n, [chk], False)
    certs = _certify(h_fn, hs, table.p, obj.u, obj.v, obj.scale, obj.q, corr, tol)
    checks = list(certs["checks"])
    drift = _coeff_diff(obj.q, corr.q)
    checks.append(_check("qDrift", drift, ROUTE_TOL * max(1.0, _coeff_max(obj.q)), "max"))
    return VerifyReport("factor", n, checks, all(c["pass"] for c in checks))


def _verify_hb(res, f, tol, grid):
    f_fn = as_function(f)
    n = grid.n if grid else 2 * (res.factorization.n if res.factorization else DEFAULT_N)
    certs = _certify_hb(res, f_fn, BoundaryGrid(n), tol)
    checks = list(certs["checks"])
    if res.factorization is not None:
        g = decompose(f_fn, res.pair, grid=BoundaryGrid(n)).g
        checks.extend(verify(res.factorization, g, tol, BoundaryGrid(n)).checks)
    return VerifyReport("factor-hb", n, checks, all(c["pass"] for c in checks))
