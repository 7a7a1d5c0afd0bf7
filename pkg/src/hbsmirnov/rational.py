"""Rational functions num/den over the complex numbers."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import GCD_TOL, Poly, gcd_approx


def _jet_coeffs(p, x, m):
    """First ``m`` Taylor coefficients of p about x (p(x + w) in powers of w)."""
    out = np.zeros(m, dtype=np.complex128)
    d = p
    for k in range(m):
        if d.is_zero():
            break
        out[k] = d(x) / math.factorial(k)
        d = d.deriv()
    return out


def series_divide(a, b, m):
    """First m coefficients of the power series a/b (b[0] != 0)."""
    c = np.zeros(m, dtype=np.complex128)
    for k in range(m):
        acc = a[k] if k < len(a) else 0
        for i in range(1, min(k, len(b) - 1) + 1):
            acc -= b[i] * c[k - i]
        c[k] = acc / b[0]
    return c


@dataclass(frozen=True, eq=False)
class RationalFn:
    num: Poly
    den: Poly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def from_poly(cls, p):
        return cls(p, Poly([1]))

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def jets(self, x, m):
        """``[f(x), f'(x), ..., f^(m-1)(x)]``."""
        if m == 0:
            return []
        c = series_divide(_jet_coeffs(self.num, x, m), _jet_coeffs(self.den, x, m), m)
        return [c[k] * math.factorial(k) for k in range(m)]

    def reduced(self, tol=GCD_TOL):
        """Cancel common roots of numerator and denominator."""
        if self.num.is_zero() or self.num.degree < 1 or self.den.degree < 1:
            return self
        g = gcd_approx(self.num, self.den, tol)
        if g.degree < 1:
            return self
        return RationalFn(self.num // g, self.den // g)

    @property
    def is_polynomial(self):
        return self.den.degree == 0

    def as_poly(self):
        return self.num / self.den.coeffs[0]

    def to_json(self):
        return {"type": "rational", "num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self):
        return f"RationalFn({self.num!r} / {self.den!r})"
