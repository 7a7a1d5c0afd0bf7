"""Complex polynomials: arithmetic, roots with multiplicities, approximate gcd,
Bezout cofactors, Hermite interpolation and sup-norms on the unit circle.

Coefficients are stored in ascending degree. The zero polynomial has an
empty coefficient array and degree -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import NonConvergence, NotCoprime, SingularSystem

CLUSTER_TOL = 1e-6
GCD_TOL = 1e-6
ABERTH_MAXITER = 500
ABERTH_TOL = 1e-13


class Poly:
    """Immutable complex polynomial with ascending coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        c = np.array(coeffs, dtype=np.complex128).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self._c = c

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, value):
        return cls([value])

    @classmethod
    def z(cls):
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        c = np.array([lead], dtype=np.complex128)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    @classmethod
    def from_rootset(cls, rs, lead=1.0):
        roots = [loc for loc, m in rs.entries for _ in range(m)]
        return cls.from_roots(roots, lead)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, dict):
            obj = obj["coeffs"]
        return cls([complex(re, im) for re, im in obj])

    def to_json(self):
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self._c]}

    # basic properties -------------------------------------------------------
    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        return self._c.size - 1

    def is_zero(self):
        return self._c.size == 0

    @property
    def lead(self):
        return self._c[-1] if self._c.size else 0j

    def trimmed(self, rtol=1e-14):
        """Drop trailing coefficients below ``rtol`` times the largest one."""
        if self.is_zero():
            return self
        a = np.abs(self._c)
        keep = np.flatnonzero(a > rtol * a.max())
        return Poly(self._c[: keep[-1] + 1])

    def monic(self):
        if self.is_zero():
            return self
        return Poly(self._c / self._c[-1])

    def __call__(self, z):
        if np.isscalar(z):
            if self.is_zero():
                return 0j
            acc = 0j
            for c in self._c[::-1]:
                acc = acc * z + c
            return acc
        return _kernels.horner(self._c, np.asarray(z))

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if np.isscalar(other):
            return Poly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(self._c.size, other._c.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: self._c.size] += self._c
        out[: other._c.size] += other._c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self._c)

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
        if self.is_zero() or other.is_zero():
            return Poly()
        return Poly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, scalar):
        return Poly(self._c / scalar)

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        num = self._c.copy()
        den = other._c
        if num.size < den.size:
            return Poly(), self
        quo = np.zeros(num.size - den.size + 1, dtype=np.complex128)
        for k in range(quo.size - 1, -1, -1):
            quo[k] = num[k + den.size - 1] / den[-1]
            num[k : k + den.size] -= quo[k] * den
        return Poly(quo), Poly(num[: den.size - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def allclose(self, other, atol=1e-10):
        other = self._coerce(other)
        n = max(self._c.size, other._c.size)
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: self._c.size] = self._c
        b[: other._c.size] = other._c
        return bool(np.all(np.abs(a - b) <= atol))

    def deriv(self, k=1):
        c = self._c
        for _ in range(k):
            if c.size <= 1:
                return Poly()
            c = c[1:] * np.arange(1, c.size)
        return Poly(c)

    def taylor_shift(self, center):
        """Coefficients of ``w -> p(center + w)``."""
        c = self._c.copy()
        n = c.size
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                c[k] += center * c[k + 1]
        return Poly(c)

    def conj_reverse(self, degree=None):
        """``z^d * conj(p(1/conj(z)))``, with d the degree unless given."""
        d = self.degree if degree is None else degree
        out = np.zeros(d + 1, dtype=np.complex128)
        out[d - self.degree : d + 1] = np.conj(self._c[::-1])
        return Poly(out)

    def __repr__(self):
        terms = ", ".join(f"{c:.6g}" for c in self._c)
        return f"Poly([{terms}])"


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    entries: tuple  # ((location, multiplicity), ...)
    residual: float = 0.0
    iterations: int = field(default=0, compare=False)

    @property
    def locations(self):
        return np.array([loc for loc, _ in self.entries], dtype=np.complex128)

    @property
    def multiplicities(self):
        return np.array([m for _, m in self.entries], dtype=int)

    @property
    def total(self):
        return int(sum(m for _, m in self.entries))

    def expanded(self):
        return np.array([loc for loc, m in self.entries for _ in range(m)], dtype=np.complex128)

    def __len__(self):
        return len(self.entries)

    def restrict(self, predicate):
        return RootSet(tuple(e for e in self.entries if predicate(e[0])), self.residual)

    def to_json(self):
        return [{"location": [loc.real, loc.imag], "multiplicity": int(m)} for loc, m in self.entries]


def _initial_points(c):
    n = c.size - 1
    radius = 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def _cluster(c, z, tol):
    """Group raw roots into clusters via Newton inclusion discs and ``tol``."""
    n = z.size
    val, der, scale = _kernels.horner_d(c, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        rad = n * (np.abs(val) + 4 * _kernels.EPS * scale) / np.abs(der)
    rad = np.where(np.isfinite(rad), rad, np.inf)
    rad = np.minimum(rad, 1e-2 * (1 + np.abs(z)))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            d = abs(z[i] - z[j])
            if d <= rad[i] + rad[j] or d <= tol * (1 + abs(z[i])):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [z[idx].mean() for idx in groups.values()], [len(idx) for idx in groups.values()]


def _polish(p, z, m):
    """Newton on the (m-1)-th derivative, where a root of order m is simple."""
    if m == 1:
        return z
    d = p.deriv(m - 1)
    dd = d.deriv()
    best, best_res = z, abs(d(z))
    for _ in range(50):
        den = dd(z)
        if den == 0:
            break
        step = d(z) / den
        z = z - step
        res = abs(d(z))
        if res < best_res:
            best, best_res = z, res
        if abs(step) <= 4 * _kernels.EPS * (1 + abs(z)):
            break
    return best


def roots(p, tol=CLUSTER_TOL):
    """Roots of ``p`` with multiplicities (Aberth-Ehrlich plus clustering)."""
    if p.degree < 1:
        raise ValueError("roots() needs a polynomial of degree >= 1")
    c = p.coeffs
    # exact zeros at the origin are split off first
    k0 = int(np.flatnonzero(c)[0])
    entries = []
    if k0:
        entries.append((0j, k0))
    c = c[k0:]
    iters = 0
    if c.size > 1:
        z, iters, ok = _kernels.aberth(c, _initial_points(c), ABERTH_MAXITER, ABERTH_TOL)
        if not ok:
            val, _, scale = _kernels.horner_d(c, z)
            bad = np.abs(val) > 1e3 * _kernels.EPS * scale
            if np.any(bad):
                raise NonConvergence(
                    "Aberth iteration hit its cap",
                    best=z.tolist(),
                    residual=float(np.max(np.abs(val))),
                )
        locs, mults = _cluster(c, z, tol)
        pc = Poly(c)
        locs = [_polish(pc, loc, m) for loc, m in zip(locs, mults)]
        order = np.lexsort((np.imag(locs), np.real(locs)))
        entries.extend((complex(locs[i]), int(mults[i])) for i in order)
    locs = np.array([e[0] for e in entries])
    residual = float(np.max(np.abs(p(locs)))) if locs.size else 0.0
    return RootSet(tuple(entries), residual, iters)


def _match_roots(ra, rb, tol):
    pairs = []
    for i, (la, _) in enumerate(ra.entries):
        for j, (lb, _) in enumerate(rb.entries):
            d = abs(la - lb)
            if d <= tol * (1 + abs(la)):
                pairs.append((d, i, j))
    pairs.sort()
    used_a, used_b, common = set(), set(), []
    for _, i, j in pairs:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        (la, ma), (lb, mb) = ra.entries[i], rb.entries[j]
        common.append(((la + lb) / 2, min(ma, mb)))
    return common


def gcd_approx(p, q, tol=GCD_TOL):
    """Monic approximate gcd; exactly ``Poly([1])`` when no roots are shared."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.degree < 1 or q.degree < 1:
        return Poly([1])
    common = _match_roots(roots(p), roots(q), tol)
    if not common:
        return Poly([1])
    common.sort(key=lambda e: (e[0].real, e[0].imag))
    return Poly.from_roots([loc for loc, m in common for _ in range(m)])


@dataclass(frozen=True)
class Bezout:
    q: Poly
    s: Poly
    residual: float

    def __iter__(self):
        return iter((self.q, self.s))


def bezout(a1, r, tol=GCD_TOL):
    """Cofactors with ``q*r - a1*s = 1``, deg q < deg a1 and deg s < deg r."""
    if r.is_zero() or a1.is_zero() or gcd_approx(a1, r, tol).degree > 0:
        raise NotCoprime("a1 and r share a root")
    m, n = max(a1.degree, 0), max(r.degree, 0)
    if m + n == 0:
        qq, ss = Poly([1 / r.coeffs[0]]), Poly()
    else:
        # Sylvester system on coefficients of degree 0..m+n-1
        size = m + n
        A = np.zeros((size, size), dtype=np.complex128)
        rc, ac = r.coeffs, a1.coeffs
        for j in range(m):
            A[j : j + rc.size, j] = rc[: size - j]
        for j in range(n):
            A[j : j + ac.size, m + j] = -ac[: size - j]
        rhs = np.zeros(size, dtype=np.complex128)
        rhs[0] = 1
        sol = np.linalg.solve(A, rhs)
        qq, ss = Poly(sol[:m]), Poly(sol[m:])
    res = qq * r - a1 * ss - 1
    residual = float(np.max(np.abs(res.coeffs))) if not res.is_zero() else 0.0
    return Bezout(qq, ss, residual)


def hermite_interpolant(nodes, jets, merge_tol=CLUSTER_TOL):
    """Polynomial of degree < N matching derivative jets at the nodes.

    ``nodes`` is a RootSet (or sequence of ``(location, multiplicity)``);
    ``jets[i]`` holds ``f(x_i), f'(x_i), ..., f^(m_i - 1)(x_i)``.
    """
    entries = nodes.entries if isinstance(nodes, RootSet) else tuple(nodes)
    if len(jets) != len(entries):
        raise ValueError("one jet list per node is required")
    N = sum(m for _, m in entries)
    if N == 0:
        return Poly()
    locs = [loc for loc, _ in entries]
    for i in range(len(locs)):
        for j in range(i + 1, len(locs)):
            if abs(locs[i] - locs[j]) <= merge_tol:
                raise SingularSystem("interpolation nodes coincide")
    A = np.zeros((N, N), dtype=np.complex128)
    rhs = np.zeros(N, dtype=np.complex128)
    row = 0
    k = np.arange(N)
    for (loc, m), jet in zip(entries, jets):
        if len(jet) != m:
            raise ValueError("jet length must equal the node multiplicity")
        for d in range(m):
            fall = np.ones(N)
            for t in range(d):
                fall = fall * (k - t)
            powers = np.where(k >= d, loc ** np.maximum(k - d, 0), 0)
            A[row] = fall * powers
            rhs[row] = jet[d]
            row += 1
    if np.linalg.cond(A) > 1e13:
        raise SingularSystem("confluent Vandermonde system is numerically singular")
    return Poly(np.linalg.solve(A, rhs))


def sup_norm_on_circle(p, grid_size=None):
    """Max of ``|p|`` on the unit circle: grid scan plus a local refinement."""
    if p.degree <= 0:
        return float(abs(p.coeffs[0])) if p.degree == 0 else 0.0
    grid_size = grid_size or max(64, 4 * (p.degree + 1))
    if grid_size < 4 * (p.degree + 1):
        raise ValueError("grid too coarse for this degree")
    t = 2 * np.pi * np.arange(grid_size) / grid_size
    vals = np.abs(p(np.exp(1j * t)))
    j = int(np.argmax(vals))
    h = 2 * np.pi / grid_size
    res = minimize_scalar(
        lambda s: -abs(p(complex(math.cos(s), math.sin(s)))),
        bounds=(t[j] - h, t[j] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(max(vals[j], -res.fun))
