"""stabkit: exact verification of stability inequality cascades on products.

Complexified Hilbert polynomials of sheaf-like data on a product X x S are
computed by Riemann-Roch pushforward in exact rational arithmetic, and the
linear and quadratic positivity cascades satisfied by semistable objects are
checked as exact verdicts with audit trails.  A brute-force Harder-
Narasimhan engine over finite charged posets validates the filtration facts,
and an Abel-summation validator checks the chain bounding the leading
quadratic quantity from below by a sum of squares.
"""

from .cascade import CascadeVerdict, linear_cascade, quadratic_cascade
from .exact import (
    ComplexPolynomial,
    ComplexRational,
    Rational,
    RayDirection,
    Side,
    in_slice,
    side_of_ray,
)
from .grr import CoeffVector, SheafData, ToddData, coefficients, hilbert_poly, todd_from_chern, z_s
from .hn import (
    AbelChainReport,
    Charge,
    ChargedPoset,
    FactorEntry,
    HNFiltration,
    Ordering,
    Slope,
    abel_chain_check,
    compare_slopes,
    hn_filtration,
    sigma_t_slope,
    slope_equivalence,
)
from .ring import (
    BigradedRing,
    RingElement,
    build_preset,
    curve_product,
    curve_times_abelian,
    proj_product,
    validate_ring,
)

__version__ = "0.1.0"

__all__ = [
    "AbelChainReport",
    "BigradedRing",
    "CascadeVerdict",
    "Charge",
    "ChargedPoset",
    "CoeffVector",
    "ComplexPolynomial",
    "ComplexRational",
    "FactorEntry",
    "HNFiltration",
    "Ordering",
    "Rational",
    "RayDirection",
    "RingElement",
    "SheafData",
    "Side",
    "Slope",
    "ToddData",
    "abel_chain_check",
    "build_preset",
    "coefficients",
    "compare_slopes",
    "curve_product",
    "curve_times_abelian",
    "hilbert_poly",
    "hn_filtration",
    "in_slice",
    "linear_cascade",
    "proj_product",
    "quadratic_cascade",
    "side_of_ray",
    "sigma_t_slope",
    "slope_equivalence",
    "todd_from_chern",
    "validate_ring",
    "z_s",
]
