"""Exact complex-rational arithmetic and eventual-phase decisions.

Numbers are `fractions.Fraction` throughout (always in lowest terms with a
positive denominator), complex values are pairs of fractions, and polynomials
in the twist variable n are tuples of complex-rational coefficients with
trailing zeros trimmed.  No floating point enters any computation.

Phases are never represented as real numbers.  A phase is carried by a
`RayDirection` (a nonzero complex rational d, standing for the ray of
positive multiples of d), and all phase comparisons reduce to signs of the
exact cross and dot products

    cross(d, c) = Re(d) Im(c) - Im(d) Re(c)       (c left/right of the ray)
    dot(d, c)   = Re(d) Re(c) + Im(d) Im(c)       (c along the ray or opposite)

`side_of_ray` decides where the values p(n) of a polynomial sit relative to
the ray through d for all sufficiently large n, by scanning coefficients from
the leading one down.  A polynomial eventually lying on the ray through -d is
classified LEFT: the window of interest is always (phase-1, phase], and the
anti-ray sits at distance exactly 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
RationalLike = Union[int, Fraction]


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse a rational from an int or a "p/q" / "p" string."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {text!r}") from exc
    raise ValueError(f"not a rational: {text!r}")


def format_rational(value: Fraction) -> str:
    """Serialize a rational as "p/q" (or "p" when the denominator is 1)."""
    return str(value)


def _frac(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True)
class ComplexRational:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other: Union["ComplexRational", RationalLike]) -> "ComplexRational":
        if isinstance(other, ComplexRational):
            return ComplexRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        q = _frac(other)
        return ComplexRational(self.re * q, self.im * q)

    def __rmul__(self, other: RationalLike) -> "ComplexRational":
        return self.__mul__(other)

    def scale(self, factor: RationalLike) -> "ComplexRational":
        q = _frac(factor)
        return ComplexRational(self.re * q, self.im * q)

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


CZERO = ComplexRational(0, 0)
CONE = ComplexRational(1, 0)
CI = ComplexRational(0, 1)


def cross(d: ComplexRational, c: ComplexRational) -> Fraction:
    """Signed area Re(d)Im(c) - Im(d)Re(c); positive iff c is left of ray d."""
    return d.re * c.im - d.im * c.re


def dot(d: ComplexRational, c: ComplexRational) -> Fraction:
    return d.re * c.re + d.im * c.im


@dataclass(frozen=True)
class RayDirection:
    """A nonzero complex rational, identified up to positive rational scale."""

    d: ComplexRational

    def __post_init__(self) -> None:
        if self.d.is_zero():
            raise ValueError("a ray direction must be nonzero")

    def same_ray(self, other: "RayDirection") -> bool:
        """True iff the two directions differ by a positive rational factor."""
        return cross(self.d, other.d) == 0 and dot(self.d, other.d) > 0


class Side(enum.Enum):
    """Eventual position of polynomial values relative to a ray."""

    LEFT = "left"
    ON = "on"
    RIGHT = "right"
    ZERO = "zero"


@dataclass(frozen=True)
class ComplexPolynomial:
    """Polynomial in n with ComplexRational coefficients, index = power of n.

    Trailing zero coefficients are trimmed on construction; the zero
    polynomial has an empty coefficient tuple and degree -1.
    """

    coefficients: tuple[ComplexRational, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(self.coefficients)
        while coeffs and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[ComplexRational]) -> "ComplexPolynomial":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> ComplexRational:
        if self.is_zero():
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    def coefficient(self, k: int) -> ComplexRational:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return CZERO

    def __add__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        size = max(len(self.coefficients), len(other.coefficients))
        return ComplexPolynomial(
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(size))
        )

    def scale(self, factor: Union[RationalLike, ComplexRational]) -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(c * factor for c in self.coefficients))

    def evaluate(self, n: RationalLike) -> ComplexRational:
        """Exact value at a rational point, by Horner's rule."""
        q = _frac(n)
        acc = CZERO
        for c in reversed(self.coefficients):
            acc = acc.scale(q) + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficient(k)
            if c.is_zero():
                continue
            term = f"({c})" if k == 0 else f"({c})n^{k}" if k > 1 else f"({c})n"
            parts.append(term)
        return " + ".join(parts)


def side_of_ray(p: ComplexPolynomial, d: RayDirection) -> Side:
    """Where the values p(n) lie relative to the ray through d, for n >> 0.

    Scanning from the leading coefficient down, the first coefficient not
    parallel to d decides LEFT (positive cross) or RIGHT (negative cross).
    If every coefficient is parallel to d, the leading one decides ON
    (positive multiple of d) or LEFT (negative multiple: the anti-ray).
    The zero polynomial gets its own verdict ZERO.
    """
    if p.is_zero():
        return Side.ZERO
    for k in range(p.degree, -1, -1):
        s = cross(d.d, p.coefficient(k))
        if s > 0:
            return Side.LEFT
        if s < 0:
            return Side.RIGHT
    return Side.ON if dot(d.d, p.leading) > 0 else Side.LEFT


def in_slice(p: ComplexPolynomial, d: RayDirection) -> bool:
    """Whether Arg p(n) tends to the phase of d from (weakly) below.

    True iff the leading coefficient is a positive rational multiple of d and
    side_of_ray(p, d) is ON or RIGHT.  The zero polynomial is rejected: it
    belongs to every slice vacuously and callers must branch on it first.
    """
    if p.is_zero():
        raise ValueError("in_slice is undefined for the zero polynomial")
    lead = p.leading
    if not (cross(d.d, lead) == 0 and dot(d.d, lead) > 0):
        return False
    return side_of_ray(p, d) in (Side.ON, Side.RIGHT)
