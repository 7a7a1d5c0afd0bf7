"""Numerical toolkit for de Branges-Rovnyak spaces H(b) with rational b.

Pythagorean mates, the decomposition a1 H^2 + P_{N-1}, multiplier and
cyclicity tests, and certified Smirnov-class factorizations f = phi / psi.
"""
from ._kernels import USING_NUMBA
from .boundary import (
    AnalyticFn,
    BoundaryFn,
    BoundaryGrid,
    OuterCert,
    analytic_project,
    cauchy_times_p,
    eval_in_disk,
    hardy_norm,
    herglotz,
    outerness_test,
    sample,
    toeplitz_coanalytic,
)
from .config import RunConfig
from .errors import HbError
from .poly import Poly, RootSet, bezout, gcd_approx, hermite_interpolant, roots, sup_norm_on_circle
from .pythagoras import PythagoreanPair, extract_unimodular, fejer_riesz, is_inner_rational, mate
from .rational import RationalFn
from .smirnov import (
    HbSmirnovResult,
    SmirnovFactorization,
    combine,
    correction_poly,
    factor_h2,
    factor_hb,
    partial_fraction_table,
    rescale,
    verify,
    weight,
)
from .space import (
    decompose,
    gram_matrix,
    hb_norm,
    is_cyclic,
    is_multiplier,
    kernel_eval,
    membership_test,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticFn",
    "BoundaryFn",
    "BoundaryGrid",
    "HbError",
    "HbSmirnovResult",
    "OuterCert",
    "Poly",
    "PythagoreanPair",
    "RationalFn",
    "RootSet",
    "RunConfig",
    "SmirnovFactorization",
    "USING_NUMBA",
    "analytic_project",
    "bezout",
    "cauchy_times_p",
    "combine",
    "correction_poly",
    "decompose",
    "eval_in_disk",
    "extract_unimodular",
    "factor_h2",
    "factor_hb",
    "fejer_riesz",
    "gcd_approx",
    "gram_matrix",
    "hardy_norm",
    "hb_norm",
    "herglotz",
    "hermite_interpolant",
    "is_cyclic",
    "is_inner_rational",
    "is_multiplier",
    "kernel_eval",
    "mate",
    "membership_test",
    "outerness_test",
    "partial_fraction_table",
    "rescale",
    "roots",
    "sample",
    "sup_norm_on_circle",
    "toeplitz_coanalytic",
    "verify",
    "weight",
]
