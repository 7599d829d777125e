"""Brute-force Harder-Narasimhan machinery over finite charged posets.

The model category is the lattice of down-closed subsets of a finite poset
with an additive charge: charges are modular (Z(F u G) + Z(F n G) =
Z(F) + Z(G)), which reproduces the lattice facts the HN argument needs while
staying small enough to enumerate.  hn_filtration greedily extracts the
maximal destabilizer (maximal slope, then maximal cardinality; the set of
maximal-slope down-sets is closed under union, so that subobject is unique)
and recurses on the complement with the induced order.

Slopes are mu = -Re/Im, with mu = +infinity when Im = 0; comparisons are
exact via cross-multiplication, never through division or floats.

The module also houses the sigma_t slope family on coefficient vectors, the
Abel-summation chain validator for lists of HN-factor data, and the exact
binomial ring identities behind the equivalence t = m1/(m2 n) between the
sigma_t slope and classical slope stability for the polarization
m1 H1 + m2 H2.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .exact import ComplexRational, RationalLike, format_rational, parse_rational
from .grr import CoeffVector
from .ring import BigradedRing, RingElement

DEFAULT_MAX_POSET = 16
MAX_POSET_ENV = "STABKIT_MAX_POSET"


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@dataclass(frozen=True)
class Slope:
    """An exact extended rational: a fraction or +infinity (when Im = 0)."""

    value: Optional[Fraction]  # None encodes +infinity

    @classmethod
    def finite(cls, value: RationalLike) -> "Slope":
        return cls(Fraction(value))

    @classmethod
    def infinite(cls) -> "Slope":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def compare(self, other: "Slope") -> Ordering:
        if self.is_infinite and other.is_infinite:
            return Ordering.EQUAL
        if self.is_infinite:
            return Ordering.GREATER
        if other.is_infinite:
            return Ordering.LESS
        if self.value > other.value:
            return Ordering.GREATER
        if self.value < other.value:
            return Ordering.LESS
        return Ordering.EQUAL

    def __gt__(self, other: "Slope") -> bool:
        return self.compare(other) is Ordering.GREATER

    def __lt__(self, other: "Slope") -> bool:
        return self.compare(other) is Ordering.LESS

    def __str__(self) -> str:
        return "inf" if self.is_infinite else format_rational(self.value)

    def to_json(self) -> str:
        return str(self)


@dataclass(frozen=True)
class Charge:
    """A central-charge value, constrained to the closed upper half plane.

    Weak positivity is enforced on construction: Im(z) >= 0, and if
    Im(z) = 0 then Re(z) <= 0.  The strict variant (z = 0 forbidden) is a
    per-context flag, exposed as satisfies_strict.
    """

    z: ComplexRational

    def __post_init__(self) -> None:
        if self.z.im < 0:
            raise ValueError(f"charge {self.z} has negative imaginary part")
        if self.z.im == 0 and self.z.re > 0:
            raise ValueError(f"charge {self.z} is real and positive")

    @classmethod
    def of(cls, re: RationalLike, im: RationalLike) -> "Charge":
        return cls(ComplexRational(Fraction(re), Fraction(im)))

    @property
    def satisfies_strict(self) -> bool:
        return not self.z.is_zero()

    def __add__(self, other: "Charge") -> "Charge":
        return Charge(self.z + other.z)

    def slope(self) -> Slope:
        if self.z.im > 0:
            return Slope.finite(-self.z.re / self.z.im)
        return Slope.infinite()

    def __str__(self) -> str:
        return str(self.z)


def compare_slopes(z1: Charge, z2: Charge) -> Ordering:
    """Exact comparison of mu(z1) and mu(z2), with mu = +inf when Im = 0."""
    im1, im2 = z1.z.im, z2.z.im
    if im1 == 0 and im2 == 0:
        return Ordering.EQUAL
    if im1 == 0:
        return Ordering.GREATER
    if im2 == 0:
        return Ordering.LESS
    s = z2.z.re * im1 - z1.z.re * im2  # sign of mu(z1) - mu(z2)
    if s > 0:
        return Ordering.GREATER
    if s < 0:
        return Ordering.LESS
    return Ordering.EQUAL


# -- charged posets -------------------------------------------------------------


def _max_poset_size(override: Optional[int]) -> int:
    if override is not None:
        return override
    raw = os.environ.get(MAX_POSET_ENV, str(DEFAULT_MAX_POSET))
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{MAX_POSET_ENV} must be an integer, got {raw!r}") from exc


class ChargedPoset:
    """A finite poset (given by cover relations) with a charge per element.

    Subobjects are the down-closed subsets; their charge is the sum of the
    element charges, so additivity and modularity hold by construction.
    """

    def __init__(
        self,
        elements: Sequence[str],
        covers: Iterable[tuple[str, str]],
        charges: Mapping[str, Charge],
    ) -> None:
        self.elements: tuple[str, ...] = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("element ids must be distinct")
        index = {e: i for i, e in enumerate(self.elements)}
        for e in self.elements:
            if e not in charges:
                raise ValueError(f"element {e!r} has no charge")
        self.charges: dict[str, Charge] = {e: charges[e] for e in self.elements}

        self.covers: tuple[tuple[str, str], ...] = tuple((x, y) for x, y in covers)
        size = len(self.elements)
        below = [0] * size  # below[i]: mask of elements strictly below i
        edges: list[list[int]] = [[] for _ in range(size)]
        for x, y in self.covers:
            if x not in index or y not in index:
                missing = x if x not in index else y
                raise ValueError(f"cover relation mentions unknown element {missing!r}")
            edges[index[x]].append(index[y])

        # transitive closure by repeated relaxation; cycles make it non-stable
        changed = True
        rounds = 0
        while changed:
            changed = False
            rounds += 1
            if rounds > size + 1:
                raise ValueError("cover relations contain a cycle")
            for x, y in self.covers:
                i, j = index[x], index[y]
                new = below[j] | below[i] | (1 << i)
                if new != below[j]:
                    if new & (1 << j):
                        raise ValueError("cover relations contain a cycle")
                    below[j] = new
                    changed = True
        self._below = below
        self._index = index
        self._charge_memo: dict[int, ComplexRational] = {0: ComplexRational()}

    def __len__(self) -> int:
        return len(self.elements)

    def members_of_mask(self, mask: int) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def charge_of_mask(self, mask: int) -> ComplexRational:
        memo = self._charge_memo
        found = memo.get(mask)
        if found is not None:
            return found
        low = mask & -mask
        if low not in memo:
            i = low.bit_length() - 1
            memo[low] = self.charges[self.elements[i]].z
        value = self.charge_of_mask(mask ^ low) + memo[low]
        memo[mask] = value
        return value

    def total_charge(self) -> Charge:
        return Charge(self.charge_of_mask((1 << len(self.elements)) - 1))

    def is_down_closed(self, mask: int, within: Optional[int] = None) -> bool:
        """Down-closure of mask, inside the induced subposet `within` if given."""
        scope = within if within is not None else (1 << len(self.elements)) - 1
        if mask & ~scope:
            return False
        rest = mask
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if (self._below[i] & scope) & ~mask:
                return False
            rest ^= low
        return True

    def down_set_masks(self, within: Optional[int] = None, max_elements: Optional[int] = None) -> list[int]:
        """All down-closed subsets (as bitmasks), ascending, inside `within`."""
        size = len(self.elements)
        cap = _max_poset_size(max_elements)
        if size > cap:
            raise ValueError(
                f"poset has {size} elements, above the enumeration cap {cap} "
                f"(raise {MAX_POSET_ENV} to override)"
            )
        scope = within if within is not None else (1 << size) - 1
        out = []
        sub = 0
        while True:
            if self.is_down_closed(sub, scope):
                out.append(sub)
            if sub == scope:
                break
            sub = (sub - scope) & scope  # next submask of scope in ascending order
        return out


def poset_from_json(data: Mapping) -> ChargedPoset:
    """Load {"elements": [{"id","re","im"}], "covers": [[x, y], ...]}."""
    if "elements" not in data:
        raise ValueError("poset JSON is missing field 'elements'")
    elements = []
    charges = {}
    for entry in data["elements"]:
        ident = entry["id"]
        try:
            charges[ident] = Charge.of(parse_rational(entry["re"]), parse_rational(entry["im"]))
        except ValueError as exc:
            raise ValueError(f"element {ident!r}: {exc}") from exc
        elements.append(ident)
    covers = [(x, y) for x, y in data.get("covers", [])]
    return ChargedPoset(elements, covers, charges)


def poset_to_json(poset: ChargedPoset) -> dict:
    return {
        "elements": [
            {
                "id": e,
                "re": format_rational(poset.charges[e].z.re),
                "im": format_rational(poset.charges[e].z.im),
            }
            for e in poset.elements
        ],
        "covers": [[x, y] for x, y in poset.covers],
    }


# -- HN filtration ---------------------------------------------------------------


@dataclass(frozen=True)
class HNFactor:
    charge: Charge
    slope: Slope
    members: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "charge": {"re": format_rational(self.charge.z.re), "im": format_rational(self.charge.z.im)},
            "slope": self.slope.to_json(),
            "members": list(self.members),
        }


@dataclass(frozen=True)
class HNFiltration:
    """HN factors in order of strictly decreasing slope, with partial sums."""

    factors: tuple[HNFactor, ...]
    partial_sums: tuple[Charge, ...]

    @property
    def is_semistable(self) -> bool:
        return len(self.factors) == 1

    def total(self) -> Charge:
        return self.partial_sums[-1]

    def validate(self) -> list[str]:
        """Check the HN invariants; returns the list of violations (empty = ok)."""
        problems = []
        for i in range(len(self.factors) - 1):
            if compare_slopes(self.factors[i].charge, self.factors[i + 1].charge) is not Ordering.GREATER:
                problems.append(f"slopes not strictly decreasing at factor {i}")
        acc = ComplexRational()
        for i, factor in enumerate(self.factors):
            acc = acc + factor.charge.z
            if self.partial_sums[i].z != acc:
                problems.append(f"partial sum {i} does not match the factor sum")
        return problems

    def to_json(self) -> dict:
        return {
            "factors": [f.to_json() for f in self.factors],
            "partial_sums": [
                {"re": format_rational(c.z.re), "im": format_rational(c.z.im)}
                for c in self.partial_sums
            ],
            "semistable": self.is_semistable,
        }


def maximal_destabilizer_mask(
    poset: ChargedPoset, within: Optional[int] = None, max_elements: Optional[int] = None
) -> int:
    """The largest down-closed subset of maximal slope inside `within`.

    Maximal-slope down-sets are closed under union (charges are modular), so
    the maximal one is unique; the mask tie-break below never fires and only
    keeps the scan deterministic.
    """
    best_mask = 0
    best_charge: Optional[Charge] = None
    for mask in poset.down_set_masks(within, max_elements):
        if mask == 0:
            continue
        candidate = Charge(poset.charge_of_mask(mask))
        if best_charge is None:
            best_mask, best_charge = mask, candidate
            continue
        order = compare_slopes(candidate, best_charge)
        if order is Ordering.GREATER:
            best_mask, best_charge = mask, candidate
        elif order is Ordering.EQUAL:
            n_new, n_old = bin(mask).count("1"), bin(best_mask).count("1")
            if n_new > n_old or (n_new == n_old and mask < best_mask):
                best_mask, best_charge = mask, candidate
    return best_mask


def hn_filtration(poset: ChargedPoset, max_elements: Optional[int] = None) -> HNFiltration:
    """Greedy Harder-Narasimhan filtration: peel off maximal destabilizers.

    The result does not depend on the element enumeration order; an object
    is semistable iff the filtration has exactly one factor.
    """
    size = len(poset)
    if size == 0:
        raise ValueError("the empty poset has no HN filtration")
    remaining = (1 << size) - 1
    factors = []
    partial_sums = []
    acc = ComplexRational()
    while remaining:
        step = maximal_destabilizer_mask(poset, remaining, max_elements)
        charge = Charge(poset.charge_of_mask(step))
        factors.append(HNFactor(charge=charge, slope=charge.slope(), members=poset.members_of_mask(step)))
        acc = acc + charge.z
        partial_sums.append(Charge(acc))
        remaining ^= step
    return HNFiltration(factors=tuple(factors), partial_sums=tuple(partial_sums))


# -- sigma_t slopes and the Abel chain -------------------------------------------


def sigma_t_slope(c: CoeffVector, t: RationalLike) -> Slope:
    """Slope of the sigma_t charge a_r - t b_(r-1) + i b_r on a coefficient vector."""
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if c.r < 1:
        raise ValueError("sigma_t needs coefficients down to index r-1")
    br = c.b[c.r]
    if br < 0:
        raise ValueError(f"b_r must be nonnegative, got {br}")
    if br == 0:
        return Slope.infinite()
    return Slope.finite((-c.a[c.r] + t * c.b[c.r - 1]) / br)


@dataclass(frozen=True)
class FactorEntry:
    """Leading data (b_r, a_r, b_(r-1), a_(r-1)) of one HN factor."""

    b_top: Fraction
    a_top: Fraction
    b_next: Fraction
    a_next: Fraction

    def __post_init__(self) -> None:
        for field in ("b_top", "a_top", "b_next", "a_next"):
            object.__setattr__(self, field, Fraction(getattr(self, field)))

    @classmethod
    def from_tuple(cls, data: Sequence[Union[str, int, Fraction]]) -> "FactorEntry":
        if len(data) != 4:
            raise ValueError("a factor entry is a 4-tuple (b_r, a_r, b_(r-1), a_(r-1))")
        values = [parse_rational(x) if isinstance(x, str) else Fraction(x) for x in data]
        return cls(*values)

    def to_tuple(self) -> tuple[str, str, str, str]:
        return tuple(format_rational(x) for x in (self.b_top, self.a_top, self.b_next, self.a_next))

    @property
    def discriminant(self) -> Fraction:
        return self.b_top * self.a_next - self.b_next * self.a_top


@dataclass(frozen=True)
class AbelChainReport:
    """Hypotheses and conclusion of the Abel-summation bound, evaluated exactly.

    When a hypothesis fails the conclusion is not evaluated (lhs and rhs are
    None).  `equality` records whether the final bound lhs >= 0 is attained
    with equality; that can only happen when all a_r/b_r ratios coincide.
    """

    t: Fraction
    hypothesis_failures: tuple[str, ...]
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    conclusion_holds: Optional[bool]
    equality: Optional[bool]
    ratios_all_equal: bool

    @property
    def hypotheses_hold(self) -> bool:
        return not self.hypothesis_failures

    @property
    def ok(self) -> bool:
        if not self.hypotheses_hold:
            return False
        return bool(self.conclusion_holds) and (not self.equality or self.ratios_all_equal)

    def to_json(self) -> dict:
        return {
            "t": format_rational(self.t),
            "hypotheses_hold": self.hypotheses_hold,
            "hypothesis_failures": list(self.hypothesis_failures),
            "lhs": None if self.lhs is None else format_rational(self.lhs),
            "rhs": None if self.rhs is None else format_rational(self.rhs),
            "conclusion_holds": self.conclusion_holds,
            "equality": self.equality,
            "ratios_all_equal": self.ratios_all_equal,
            "ok": self.ok,
        }


def abel_chain_check(factors: Sequence[FactorEntry], t: RationalLike) -> AbelChainReport:
    """Validate the Abel-summation argument on a list of HN-factor data.

    Hypotheses: (1) the ratios -a_r/b_r strictly decrease along the list;
    (2) every factor satisfies the leading quadratic inequality
    b_r a_(r-1) - b_(r-1) a_r >= 0; (3) for every j, the sigma_t slope of
    the first j factors is at most the total's, which is at most the
    sigma_t slope of the last l - j + 1.  When all hold, the conclusion

        b_r(E) a_(r-1)(E) - a_r(E) b_(r-1)(E)
            >= (1/t) sum_(i<j) (a_r(Q_i) b_r(Q_j) - a_r(Q_j) b_r(Q_i))^2
                                / (b_r(Q_i) b_r(Q_j))  >= 0

    is evaluated exactly (the square-root-free form of the bound).
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    if not factors:
        raise ValueError("at least one factor is required")
    for k, q in enumerate(factors):
        if q.b_top <= 0:
            raise ValueError(f"factor {k + 1} has b_r = {q.b_top}; all b_r must be positive")

    failures: list[str] = []
    for k in range(len(factors) - 1):
        x, y = factors[k], factors[k + 1]
        # -a/b strictly decreasing <=> -a_k b_(k+1) > -a_(k+1) b_k (b > 0)
        if not (-x.a_top * y.b_top > -y.a_top * x.b_top):
            failures.append(f"(1) ratio -a_r/b_r does not strictly decrease at factor {k + 1}")
    for k, q in enumerate(factors):
        if q.discriminant < 0:
            failures.append(f"(2) factor {k + 1} has b_r a_(r-1) - b_(r-1) a_r = {q.discriminant} < 0")

    def sigma_slope(chunk: Sequence[FactorEntry]) -> Fraction:
        b = sum(q.b_top for q in chunk)
        return (sum(-q.a_top for q in chunk) + t * sum(q.b_next for q in chunk)) / b

    total_slope = sigma_slope(factors)
    for j in range(1, len(factors) + 1):
        if sigma_slope(factors[:j]) > total_slope:
            failures.append(f"(3) sigma_t slope of the first {j} factors exceeds the total")
        if total_slope > sigma_slope(factors[j - 1:]):
            failures.append(f"(3) sigma_t slope of the last {len(factors) - j + 1} factors is below the total")

    ratios = {(-q.a_top / q.b_top) for q in factors}
    ratios_all_equal = len(ratios) == 1

    if failures:
        return AbelChainReport(
            t=t,
            hypothesis_failures=tuple(failures),
            lhs=None,
            rhs=None,
            conclusion_holds=None,
            equality=None,
            ratios_all_equal=ratios_all_equal,
        )

    b_total = sum(q.b_top for q in factors)
    a_total = sum(q.a_top for q in factors)
    b_next_total = sum(q.b_next for q in factors)
    a_next_total = sum(q.a_next for q in factors)
    lhs = b_total * a_next_total - a_total * b_next_total

    rhs = Fraction(0)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            qi, qj = factors[i], factors[j]
            num = qi.a_top * qj.b_top - qj.a_top * qi.b_top
            rhs += num * num / (qi.b_top * qj.b_top)
    rhs /= t

    return AbelChainReport(
        t=t,
        hypothesis_failures=(),
        lhs=lhs,
        rhs=rhs,
        conclusion_holds=lhs >= rhs >= 0,
        equality=lhs == 0,
        ratios_all_equal=ratios_all_equal,
    )


def factor_entries_from_json(data: Sequence[Sequence]) -> list[FactorEntry]:
    return [FactorEntry.from_tuple(item) for item in data]


# -- slope equivalence -------------------------------------------------------------


@dataclass(frozen=True)
class SlopeEquivalenceReport:
    """Exact verification of the two binomial ring identities behind t = m1/(m2 n)."""

    t: Fraction
    identity_mixed_ok: bool
    identity_top_ok: bool

    @property
    def ok(self) -> bool:
        return self.identity_mixed_ok and self.identity_top_ok

    def to_json(self) -> dict:
        return {
            "t": format_rational(self.t),
            "identity_mixed_ok": self.identity_mixed_ok,
            "identity_top_ok": self.identity_top_ok,
            "ok": self.ok,
        }


def slope_equivalence(
    n: int, r: int, m1: int, m2: int, ring: BigradedRing
) -> tuple[Fraction, SlopeEquivalenceReport]:
    """t = m1/(m2 n), plus exact expansion of the two polarization identities.

        H1^(n-1) H2^r + t r H1^n H2^(r-1)
            = (m1 H1 + m2 H2)^(n+r-1) / (C(n+r-1, r) m1^(n-1) m2^r)
        H1^n H2^r = (m1 H1 + m2 H2)^(n+r) / (C(n+r, r) m1^n m2^r)

    Both are equalities of ring elements, verified by exact multiplication.
    """
    for name, value in (("n", n), ("r", r), ("m1", m1), ("m2", m2)):
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
    if n != ring.n or r != ring.r:
        raise ValueError(f"ring has dimensions ({ring.n}, {ring.r}), expected ({n}, {r})")

    t = Fraction(m1, m2 * n)
    h1, h2 = ring.h1, ring.h2
    mixed = h1 ** (n - 1) * h2 ** r + (h1 ** n * h2 ** (r - 1)).scale(t * r)
    combined = h1.scale(m1) + h2.scale(m2)

    rhs_mixed = (combined ** (n + r - 1)).scale(
        Fraction(1, math.comb(n + r - 1, r) * m1 ** (n - 1) * m2 ** r)
    )
    rhs_top = (combined ** (n + r)).scale(Fraction(1, math.comb(n + r, r) * m1 ** n * m2 ** r))
    report = SlopeEquivalenceReport(
        t=t,
        identity_mixed_ok=mixed == rhs_mixed,
        identity_top_ok=h1 ** n * h2 ** r == rhs_top,
    )
    return t, report
