"""Functions on the unit circle and their analytic (H^2) parts.

A ``BoundaryGrid`` of size n samples the circle at the half-bin offset
nodes exp(2*pi*i*(j + 1/2)/n), so z = 1 and z = -1 are never nodes.
``BoundaryFn`` holds samples and their discrete Fourier coefficients;
``AnalyticFn`` holds a truncated Taylor series plus the l2 mass of
whatever was discarded to get it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (
    GridMismatch,
    InvalidInput,
    NegativeWeight,
    PoleNearBoundary,
    RootOnNode,
    TooCloseToBoundary,
    ZeroFunction,
)
from .poly import Poly, roots
from .rational import RationalFn

DEFAULT_N = 4096
MAX_N = 2**16
ANALYTIC_TOL = 1e-6
JENSEN_TOL = 1e-6
SNAP_TOL = 1e-6
POLE_TOL = 1e-8
NODE_TOL = 1e-12
NEG_WEIGHT_TOL = 1e-12
ROOT_ROUTE_MAX_DEGREE = 200


@dataclass(frozen=True)
class BoundaryGrid:
    n: int = DEFAULT_N

    def __post_init__(self):
        n = self.n
        if n < 4 or n & (n - 1):
            raise InvalidInput(f"grid size must be a power of two, got {n}")

    @cached_property
    def angles(self):
        return 2 * np.pi * (np.arange(self.n) + 0.5) / self.n

    @cached_property
    def nodes(self):
        return np.exp(1j * self.angles)

    @cached_property
    def freqs(self):
        """Representative frequency of each FFT bin, in (-n/2, n/2]."""
        k = np.fft.fftfreq(self.n, 1.0 / self.n).astype(int)
        k[self.n // 2] = self.n // 2
        return k

    @cached_property
    def _phase(self):
        return np.exp(-1j * np.pi * self.freqs / self.n)

    def fourier(self, samples):
        """c_k = mean_j f_j z_j^{-k}, in FFT bin order."""
        return np.fft.fft(samples) / self.n * self._phase

    def synth_taylor(self, taylor):
        """Values of sum_k t_k z^k at the nodes, for any number of terms."""
        n = self.n
        t = np.asarray(taylor, dtype=np.complex128)
        folded = np.zeros(n, dtype=np.complex128)
        for q in range(0, t.size, n):
            chunk = t[q : q + n]
            folded[: chunk.size] += chunk if (q // n) % 2 == 0 else -chunk
        r = np.arange(n)
        return n * np.fft.ifft(folded * np.exp(1j * np.pi * r / n))

    def doubled(self):
        return BoundaryGrid(2 * self.n)

    def nearest_node_distance(self, pts):
        """Distance from each point to its nearest node."""
        pts = np.atleast_1d(pts)
        ang = np.angle(pts) % (2 * np.pi)
        j = np.floor(ang * self.n / (2 * np.pi) - 0.5)
        cand = np.stack([j, j + 1]) % self.n
        nodes = np.exp(2j * np.pi * (cand + 0.5) / self.n)
        return np.min(np.abs(nodes - pts[None, :]), axis=0)


@dataclass(frozen=True, eq=False)
class BoundaryFn:
    grid: BoundaryGrid
    samples: np.ndarray
    fourier: np.ndarray
    real: bool = False
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_samples(cls, grid, samples, real=False, meta=None):
        s = np.asarray(samples)
        if s.shape != (grid.n,):
            raise InvalidInput(f"expected {grid.n} samples, got shape {s.shape}")
        s = np.array(s.real if real else s, dtype=np.float64 if real else np.complex128)
        s.setflags(write=False)
        c = grid.fourier(s)
        c.setflags(write=False)
        return cls(grid, s, c, bool(real), dict(meta or {}))

    def coef(self, k):
        return self.fourier[k % self.grid.n]

    @property
    def analytic_taylor(self):
        return np.asarray(self.fourier[: self.grid.n // 2])

    def evaluate(self, pts):
        """Trigonometric interpolant at points of the unit circle."""
        pts = np.asarray(pts, dtype=np.complex128)
        n = self.grid.n
        pos = self.fourier[: n // 2 + 1]
        neg = np.concatenate([[0], self.fourier[n // 2 + 1 :][::-1]])
        return _kernels.horner(pos, pts) + _kernels.horner(neg, np.conj(pts))

    def jets(self, x, m):
        # spectral differentiation of the analytic part; accuracy depends on decay
        return AnalyticFn(self.analytic_taylor).jets(x, m)

    def l2(self):
        return float(np.sqrt(np.mean(np.abs(self.samples) ** 2)))

    def sup(self):
        return float(np.max(np.abs(self.samples)))

    def to_json(self):
        return {
            "type": "samples",
            "n": self.grid.n,
            "values": [[float(v.real), float(v.imag)] for v in np.asarray(self.samples, complex)],
        }


@dataclass(frozen=True, eq=False)
class AnalyticFn:
    """Truncated Taylor series t_0 + t_1 z + ... with the discarded l2 mass."""

    taylor: np.ndarray
    tailMass: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.array(self.taylor, dtype=np.complex128).ravel()
        t.setflags(write=False)
        object.__setattr__(self, "taylor", t)
        object.__setattr__(self, "tailMass", float(self.tailMass))

    @classmethod
    def zero(cls):
        return cls(np.zeros(1))

    @classmethod
    def from_poly(cls, p):
        return cls(p.coeffs if not p.is_zero() else np.zeros(1))

    def __len__(self):
        return self.taylor.size

    def __call__(self, z):
        if np.isscalar(z):
            return complex(_kernels.horner(self.taylor, np.array([z]))[0])
        return _kernels.horner(self.taylor, np.asarray(z))

    def on_grid(self, grid):
        return grid.synth_taylor(self.taylor)

    def jets(self, x, m):
        out = []
        c = self.taylor
        k = np.arange(c.size, dtype=float)
        for d in range(m):
            if c.size <= d:
                out.append(0j)
                continue
            fall = np.ones(c.size - d)
            kk = k[d:]
            for t in range(d):
                fall = fall * (kk - t)
            out.append(complex(_kernels.horner(c[d:] * fall, np.array([x]))[0]))
        return out

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.taylor) ** 2)))

    def l1(self):
        return float(np.sum(np.abs(self.taylor)))

    def is_zero(self):
        return not np.any(self.taylor)

    # exact series arithmetic; tails are propagated as crude bounds
    def _coerce(self, other):
        if isinstance(other, AnalyticFn):
            return other
        if isinstance(other, Poly):
            return AnalyticFn.from_poly(other)
        if np.isscalar(other):
            return AnalyticFn([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self), len(other))
        t = np.zeros(n, dtype=np.complex128)
        t[: len(self)] += self.taylor
        t[: len(other)] += other.taylor
        return AnalyticFn(t, self.tailMass + other.tailMass)

    __radd__ = __add__

    def __neg__(self):
        return AnalyticFn(-self.taylor, self.tailMass)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = _convolve(self.taylor, other.taylor)
        tail = self.tailMass * other.l1() + other.tailMass * self.l1()
        return AnalyticFn(t, tail)

    __rmul__ = __mul__

    def to_json(self):
        out = {"type": "taylor", "coeffs": [[float(c.real), float(c.imag)] for c in self.taylor]}
        if self.tailMass:
            out["tailMass"] = self.tailMass
        return out


def _convolve(a, b):
    if min(a.size, b.size) < 64:
        return np.convolve(a, b)
    m = a.size + b.size - 1
    size = 1 << (m - 1).bit_length()
    return np.fft.ifft(np.fft.fft(a, size) * np.fft.fft(b, size))[:m]


# ---------------------------------------------------------------------------
# function-spec JSON
# ---------------------------------------------------------------------------

def _complex_list(obj, what):
    try:
        return [complex(float(re), float(im)) for re, im in obj]
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{what}: expected a list of [re, im] pairs") from exc


def parse_poly(obj):
    if isinstance(obj, dict):
        if "coeffs" not in obj:
            raise InvalidInput("polynomial object needs a 'coeffs' field")
        obj = obj["coeffs"]
    return Poly(_complex_list(obj, "coeffs"))


def parse_function_spec(obj):
    """Decode a function-spec JSON object into RationalFn / AnalyticFn / BoundaryFn."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise InvalidInput("function-spec must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "rational":
        num, den = parse_poly(obj.get("num", [])), parse_poly(obj.get("den", []))
        if den.is_zero():
            raise InvalidInput("rational spec has a zero denominator")
        return RationalFn(num, den)
    if kind == "taylor":
        tail = obj.get("tailMass", 0.0)
        if not isinstance(tail, (int, float)) or tail < 0:
            raise InvalidInput("tailMass must be a nonnegative number")
        return AnalyticFn(_complex_list(obj.get("coeffs", []), "coeffs") or [0], tail)
    if kind == "samples":
        n = obj.get("n")
        vals = _complex_list(obj.get("values", []), "values")
        if not isinstance(n, int) or len(vals) != n:
            raise InvalidInput("samples spec needs integer n and exactly n values")
        return BoundaryFn.from_samples(BoundaryGrid(n), np.array(vals))
    raise InvalidInput(f"unknown function-spec type {kind!r}")


def as_function(f):
    if isinstance(f, dict):
        return parse_function_spec(f)
    if isinstance(f, Poly):
        return AnalyticFn.from_poly(f)
    return f


def evaluate(f, pts):
    """Evaluate any supported function object at points (on or inside the circle)."""
    f = as_function(f)
    if isinstance(f, RationalFn):
        pts = np.asarray(pts, dtype=np.complex128)
        return f.num(pts) / f.den(pts)
    return f.evaluate(pts) if isinstance(f, BoundaryFn) else f(np.asarray(pts, dtype=np.complex128))


def jets(f, x, m):
    return as_function(f).jets(x, m)


def as_polynomial(f, max_degree=None):
    """Return a Poly when ``f`` is exactly a polynomial, else None."""
    f = as_function(f)
    if isinstance(f, RationalFn) and f.is_polynomial:
        p = f.as_poly()
    elif isinstance(f, AnalyticFn) and f.tailMass == 0:
        p = Poly(f.taylor)
    else:
        return None
    if max_degree is not None and p.degree > max_degree:
        return None
    return p


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def sample(spec, grid):
    """Boundary samples of a function-spec on ``grid``."""
    f = as_function(spec)
    if isinstance(f, RationalFn):
        den = f.den(grid.nodes)
        den_min = float(np.min(np.abs(den)))
        if den_min < POLE_TOL:
            raise PoleNearBoundary(f"denominator modulus {den_min:.3e} on the grid")
        return BoundaryFn.from_samples(grid, f.num(grid.nodes) / den, meta={"denMin": den_min})
    if isinstance(f, AnalyticFn):
        return BoundaryFn.from_samples(grid, f.on_grid(grid))
    if isinstance(f, BoundaryFn):
        if f.grid == grid:
            return f
        return BoundaryFn.from_samples(grid, f.evaluate(grid.nodes), real=f.real)
    raise InvalidInput(f"cannot sample object of type {type(f).__name__}")


def analytic_project(f):
    """Riesz projection: keep frequencies 0..n/2-1, report the rest as tailMass."""
    n = f.grid.n
    c = f.fourier
    tail = np.sqrt(np.sum(np.abs(c[n // 2 :]) ** 2))
    return AnalyticFn(c[: n // 2], tail)


def toeplitz_coanalytic(a, f):
    """P+(conj(a) f), the co-analytic Toeplitz operator with symbol a."""
    if a.grid != f.grid:
        raise GridMismatch(f"grid sizes {a.grid.n} and {f.grid.n} differ")
    return analytic_project(BoundaryFn.from_samples(f.grid, np.conj(a.samples) * f.samples))


def herglotz(w):
    """Herglotz transform of a nonnegative weight: t_0 = c_0, t_k = 2 c_k."""
    s = np.asarray(w.samples)
    if np.iscomplexobj(s):
        if np.max(np.abs(s.imag)) > NEG_WEIGHT_TOL * max(1.0, np.max(np.abs(s))):
            raise NegativeWeight("weight is not real-valued")
        s = s.real
    if s.min() < -NEG_WEIGHT_TOL:
        raise NegativeWeight(f"weight has minimum {s.min():.3e}")
    n = w.grid.n
    c = w.fourier if w.real else w.grid.fourier(s)
    t = 2 * c[: n // 2]
    t[0] = c[0].real
    return AnalyticFn(t, 2 * abs(c[n // 2]))


def _check_roots_off_nodes(p, grid):
    if p.degree < 1:
        return
    d = grid.nearest_node_distance(roots(p).locations)
    if np.min(d) < NODE_TOL:
        raise RootOnNode("a root of p sits on a grid node; change the grid size")


def cauchy_density(h, p):
    """G = 2 P+((|p|/p)|h|), so that F = p G."""
    grid = h.grid
    _check_roots_off_nodes(p, grid)
    pv = p(grid.nodes)
    sigma = np.abs(pv) / pv
    u = BoundaryFn.from_samples(grid, sigma * np.abs(h.samples))
    proj = analytic_project(u)
    return AnalyticFn(2 * proj.taylor, 2 * proj.tailMass)


def cauchy_times_p(h, p):
    """F(z) = 2 p(z) * Cauchy transform of (|p|/p)|h| (truncated Taylor series).

    ``tailMass`` of the result certifies that F/p, recomputed on the grid by
    pointwise division, is analytic.
    """
    g = cauchy_density(h, p)
    F = g * p
    grid = h.grid
    quotient = F.on_grid(grid) / p(grid.nodes)
    q = analytic_project(BoundaryFn.from_samples(grid, quotient))
    return AnalyticFn(F.taylor, q.tailMass, meta={"density": g})


def eval_in_disk(f, z, with_bound=False):
    z = complex(z)
    if abs(z) > 1 - 1e-6:
        raise TooCloseToBoundary(f"|z| = {abs(z)!r} exceeds 1 - 1e-6")
    val = f(z)
    if not with_bound:
        return val
    bound = f.tailMass * abs(z) ** len(f) / (1 - abs(z))
    return val, bound


def hardy_norm(f):
    """l2 norm of the Taylor coefficients (the H^2 norm); tail excluded."""
    return f.norm()


def hardy_norm_with_tail(f):
    return math.hypot(f.norm(), f.tailMass)


@dataclass(frozen=True)
class OuterCert:
    route: str
    verdict: bool
    margin: float
    defect: float
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "route": self.route,
            "verdict": self.verdict,
            "margin": self.margin,
            "defect": self.defect,
        }


def _root_route(p, snap_tol):
    if p.is_zero():
        raise ZeroFunction("outerness of the zero function is undefined")
    if p.degree < 1:
        return OuterCert("roots", True, math.inf, 0.0)
    rs = roots(p)
    mod = np.abs(rs.locations)
    inside = rs.locations[mod < 1 - snap_tol]
    margin = float(np.min(mod) - (1 - snap_tol))
    return OuterCert("roots", inside.size == 0, margin, float(len(inside)), {"minModulus": float(np.min(mod))})


def jensen_defect(samples, value_at_zero):
    """mean log|f| on the grid minus log|f(0)|; zero for outer f."""
    with np.errstate(divide="ignore"):
        mean_log = float(np.mean(np.log(np.abs(samples))))
    if value_at_zero == 0:
        return math.inf
    return mean_log - math.log(abs(value_at_zero))


def _jensen_route(f, grid, tol):
    if isinstance(f, BoundaryFn):
        samples, f0 = f.samples, f.fourier[0]
    else:
        if grid is None:
            n = max(64, 1 << (2 * len(f) - 1).bit_length())
            grid = BoundaryGrid(min(n, 4 * MAX_N))
        samples, f0 = f.on_grid(grid), f.taylor[0]
    if not np.any(samples):
        raise ZeroFunction("outerness of the zero function is undefined")
    defect = jensen_defect(samples, f0)
    return OuterCert("jensen", defect <= tol, tol - defect, defect)


def outerness_test(f, snap_tol=SNAP_TOL, tol=JENSEN_TOL, grid=None, route=None):
    """Outer certificate by root location (polynomial/rational) or Jensen's formula."""
    f = as_function(f)
    if route != "jensen":
        if isinstance(f, RationalFn):
            return _root_route(f.reduced().num, snap_tol)
        p = as_polynomial(f, ROOT_ROUTE_MAX_DEGREE)
        if p is not None:
            return _root_route(p, snap_tol)
    if route == "roots":
        raise InvalidInput("root route needs a polynomial or rational function")
    if isinstance(f, RationalFn):
        return _jensen_route(sample(f, grid or BoundaryGrid()), None, tol)
    return _jensen_route(f, grid, tol)
