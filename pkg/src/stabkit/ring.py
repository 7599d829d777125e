"""Finite bigraded numerical intersection rings of a product X x S.

A ring is given concretely: a basis of named classes with bidegrees (a, b),
a table of structure constants for products of basis pairs, and an
integration functional supported on the top bidegree (n, r).  Everything is
exact rational.  The ring stores numerical intersection data only; classes
that pair to zero against everything may simply be omitted.

Bidegrees are rationals, not just integers: on a product of curves the
Kuenneth block of ch_1 coming from H^1(X) (x) H^1(S) is modeled as a single
class delta of bidegree (1/2, 1/2), so that delta^2 lands on the point class
(1, 1) and products of delta with the fiber classes fall off the grading.

H_1 and H_2 (the pullbacks of the two chosen polarizations) are stored as a
designated basis class together with a positive scale, e.g. H_1 = 2 f1 on a
curve whose polarization has degree 2.  vol_s, the volume of the polarization
on the second factor alone, is an explicit datum: it is not recoverable from
the product ring's functional.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .exact import RationalLike, format_rational, parse_rational

BidegreeLike = Union[int, Fraction, str]


def _bidegree(value: BidegreeLike) -> Fraction:
    q = parse_rational(value) if isinstance(value, str) else Fraction(value)
    if q < 0:
        raise ValueError(f"bidegree components must be nonnegative, got {q}")
    return q


@dataclass(frozen=True)
class BasisClass:
    name: str
    a: Fraction
    b: Fraction


class BigradedRing:
    """Bigraded commutative algebra with basis, structure constants, integral."""

    def __init__(
        self,
        n: int,
        r: int,
        basis: Sequence[tuple[str, BidegreeLike, BidegreeLike]],
        mult: Mapping[tuple[str, str], Mapping[str, RationalLike]],
        integral: Mapping[str, RationalLike],
        h1: Union[str, tuple[str, RationalLike]],
        h2: Union[str, tuple[str, RationalLike]],
        vol_s: RationalLike,
    ) -> None:
        if n < 1 or r < 1:
            raise ValueError("both factors must have positive dimension")
        self.n = n
        self.r = r
        self.basis: tuple[BasisClass, ...] = tuple(
            BasisClass(name, _bidegree(a), _bidegree(b)) for name, a, b in basis
        )
        self._index: dict[str, int] = {}
        for i, cls in enumerate(self.basis):
            if cls.name in self._index:
                raise ValueError(f"duplicate basis class name {cls.name!r}")
            if cls.a > n or cls.b > r:
                raise ValueError(f"basis class {cls.name!r} exceeds bidegree ({n}, {r})")
            self._index[cls.name] = i

        self._mult: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (x, y), result in mult.items():
            key = (self._require(x), self._require(y))
            row = {self._require(z): Fraction(parse_rational(c) if isinstance(c, str) else c)
                   for z, c in result.items()}
            self._mult[key] = {k: v for k, v in row.items() if v != 0}
        # A product given in one order only is mirrored; explicit entries win,
        # so a deliberately asymmetric table stays asymmetric for validation.
        for (i, j), row in list(self._mult.items()):
            self._mult.setdefault((j, i), row)

        self._integral: dict[int, Fraction] = {}
        top = (Fraction(n), Fraction(r))
        for name, value in integral.items():
            i = self._require(name)
            cls = self.basis[i]
            if (cls.a, cls.b) != top:
                raise ValueError(f"integral assigned to {name!r}, which is not of bidegree ({n}, {r})")
            self._integral[i] = Fraction(parse_rational(value) if isinstance(value, str) else value)

        self._h1_index, self._h1_scale = self._designate(h1, (Fraction(1), Fraction(0)), "h1")
        self._h2_index, self._h2_scale = self._designate(h2, (Fraction(0), Fraction(1)), "h2")
        self.vol_s = Fraction(parse_rational(vol_s) if isinstance(vol_s, str) else vol_s)
        if self.vol_s <= 0:
            raise ValueError("vol_s must be positive")

        units = [i for i, cls in enumerate(self.basis) if cls.a == 0 and cls.b == 0]
        if len(units) != 1:
            raise ValueError("the ring needs exactly one basis class of bidegree (0, 0)")
        self._unit_index = units[0]

    def _require(self, name: str) -> int:
        if name not in self._index:
            raise ValueError(f"unknown basis class {name!r}")
        return self._index[name]

    def _designate(
        self,
        spec: Union[str, tuple[str, RationalLike]],
        bidegree: tuple[Fraction, Fraction],
        label: str,
    ) -> tuple[int, Fraction]:
        if isinstance(spec, str):
            name, scale = spec, Fraction(1)
        else:
            name, raw = spec
            scale = Fraction(parse_rational(raw) if isinstance(raw, str) else raw)
        i = self._require(name)
        cls = self.basis[i]
        if (cls.a, cls.b) != bidegree:
            raise ValueError(f"{label} must designate a class of bidegree {bidegree}, got {name!r}")
        if scale <= 0:
            raise ValueError(f"{label} scale must be positive")
        return i, scale

    # -- elements ---------------------------------------------------------

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return RingElement(self, {self._unit_index: Fraction(1)})

    def basis_element(self, name: str) -> "RingElement":
        return RingElement(self, {self._require(name): Fraction(1)})

    def element(self, coeffs: Mapping[str, RationalLike]) -> "RingElement":
        data = {}
        for name, value in coeffs.items():
            q = Fraction(parse_rational(value) if isinstance(value, str) else value)
            if q != 0:
                data[self._require(name)] = q
        return RingElement(self, data)

    @property
    def h1(self) -> "RingElement":
        return RingElement(self, {self._h1_index: self._h1_scale})

    @property
    def h2(self) -> "RingElement":
        return RingElement(self, {self._h2_index: self._h2_scale})

    def bidegree_of(self, index: int) -> tuple[Fraction, Fraction]:
        cls = self.basis[index]
        return cls.a, cls.b

    def _product_row(self, i: int, j: int) -> dict[int, Fraction]:
        return self._mult.get((i, j), {})

    def integrate(self, x: "RingElement") -> Fraction:
        """Apply the integration functional to the (n, r) component of x."""
        if x.ring is not self:
            raise ValueError("element does not belong to this ring")
        total = Fraction(0)
        for i, c in x.coeffs.items():
            v = self._integral.get(i)
            if v is not None:
                total += c * v
        return total

    def __repr__(self) -> str:
        return f"BigradedRing(n={self.n}, r={self.r}, basis={len(self.basis)})"


class RingElement:
    """A rational linear combination of basis classes of one ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: BigradedRing, coeffs: Mapping[int, Fraction]) -> None:
        self.ring = ring
        self.coeffs: dict[int, Fraction] = {i: c for i, c in coeffs.items() if c != 0}

    def _check_ring(self, other: "RingElement") -> None:
        if self.ring is not other.ring:
            raise ValueError("elements belong to different rings")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check_ring(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, Fraction(0)) + c
        return RingElement(self.ring, out)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check_ring(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, Fraction(0)) - c
        return RingElement(self.ring, out)

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, {i: -c for i, c in self.coeffs.items()})

    def scale(self, factor: RationalLike) -> "RingElement":
        q = Fraction(factor)
        return RingElement(self.ring, {i: c * q for i, c in self.coeffs.items()})

    def __rmul__(self, factor: RationalLike) -> "RingElement":
        return self.scale(factor)

    def __mul__(self, other: Union["RingElement", RationalLike]) -> "RingElement":
        if not isinstance(other, RingElement):
            return self.scale(other)
        self._check_ring(other)
        out: dict[int, Fraction] = {}
        for i, ci in self.coeffs.items():
            for j, cj in other.coeffs.items():
                row = self.ring._product_row(i, j)
                if not row:
                    continue
                cij = ci * cj
                for k, s in row.items():
                    out[k] = out.get(k, Fraction(0)) + cij * s
        return RingElement(self.ring, out)

    def __pow__(self, exponent: int) -> "RingElement":
        if exponent < 0:
            raise ValueError("negative powers are not defined")
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RingElement)
            and self.ring is other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.ring), tuple(sorted(self.coeffs.items()))))

    def coefficient(self, name: str) -> Fraction:
        return self.coeffs.get(self.ring._require(name), Fraction(0))

    def component_of_bidegree(self, a: BidegreeLike, b: BidegreeLike) -> "RingElement":
        qa, qb = _bidegree(a), _bidegree(b)
        return RingElement(
            self.ring,
            {i: c for i, c in self.coeffs.items() if self.ring.bidegree_of(i) == (qa, qb)},
        )

    def component_of_total_degree(self, j: BidegreeLike) -> "RingElement":
        q = _bidegree(j)
        return RingElement(
            self.ring,
            {i: c for i, c in self.coeffs.items() if sum(self.ring.bidegree_of(i)) == q},
        )

    def total_degrees(self) -> set[Fraction]:
        return {Fraction(sum(self.ring.bidegree_of(i))) for i in self.coeffs}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in sorted(self.coeffs):
            name = self.ring.basis[i].name
            c = self.coeffs[i]
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)

    __repr__ = __str__


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class RingReport:
    """Outcome of validate_ring: ok, or the list of violated laws."""

    ok: bool
    failures: tuple[str, ...]


def validate_ring(ring: BigradedRing) -> RingReport:
    """Check commutativity, associativity, grading and the unit law.

    All checks run over the finite basis (pairs for commutativity and
    grading, triples for associativity), so a pass is a proof for the
    bilinear extension.  Failures name the offending classes.
    """
    failures: list[str] = []
    names = [cls.name for cls in ring.basis]
    size = len(ring.basis)

    for i, j in itertools.combinations_with_replacement(range(size), 2):
        lhs = ring.basis_element(names[i]) * ring.basis_element(names[j])
        rhs = ring.basis_element(names[j]) * ring.basis_element(names[i])
        if lhs != rhs:
            failures.append(f"commutativity: {names[i]} * {names[j]} != {names[j]} * {names[i]}")

    for i in range(size):
        for j in range(size):
            a = ring.basis[i].a + ring.basis[j].a
            b = ring.basis[i].b + ring.basis[j].b
            product = ring.basis_element(names[i]) * ring.basis_element(names[j])
            if a > ring.n or b > ring.r:
                if not product.is_zero():
                    failures.append(
                        f"grading: {names[i]} * {names[j]} exceeds bidegree ({ring.n}, {ring.r}) "
                        "but is nonzero"
                    )
                continue
            for k in product.coeffs:
                if ring.bidegree_of(k) != (a, b):
                    failures.append(
                        f"grading: {names[i]} * {names[j]} has a component off bidegree ({a}, {b})"
                    )
                    break

    unit = ring.one()
    for i in range(size):
        x = ring.basis_element(names[i])
        if unit * x != x or x * unit != x:
            failures.append(f"unit: 1 * {names[i]} != {names[i]}")

    for i, j, k in itertools.combinations_with_replacement(range(size), 3):
        for x, y, z in {(i, j, k), (j, k, i), (k, i, j)}:
            ex, ey, ez = (ring.basis_element(names[t]) for t in (x, y, z))
            if (ex * ey) * ez != ex * (ey * ez):
                failures.append(
                    f"associativity: ({names[x]} * {names[y]}) * {names[z]} "
                    f"!= {names[x]} * ({names[y]} * {names[z]})"
                )

    if ring.vol_s <= 0:
        failures.append(f"vol_s: must be positive, got {ring.vol_s}")

    return RingReport(ok=not failures, failures=tuple(failures))


# -- presets ------------------------------------------------------------------


def _monomial_name(a: int, b: int) -> str:
    if a == 0 and b == 0:
        return "1"
    parts = []
    if a == 1:
        parts.append("h1")
    elif a > 1:
        parts.append(f"h1^{a}")
    if b == 1:
        parts.append("h2")
    elif b > 1:
        parts.append(f"h2^{b}")
    return "".join(parts)


def _proj_product_ring(n: int, r: int) -> BigradedRing:
    basis = [(_monomial_name(a, b), a, b) for a in range(n + 1) for b in range(r + 1)]
    mult = {}
    for a1, b1 in itertools.product(range(n + 1), range(r + 1)):
        for a2, b2 in itertools.product(range(n + 1), range(r + 1)):
            a, b = a1 + a2, b1 + b2
            if a <= n and b <= r:
                mult[(_monomial_name(a1, b1), _monomial_name(a2, b2))] = {
                    _monomial_name(a, b): 1
                }
    return BigradedRing(
        n=n,
        r=r,
        basis=basis,
        mult=mult,
        integral={_monomial_name(n, r): 1},
        h1="h1",
        h2="h2",
        vol_s=1,
    )


def _projective_space_todd(ring: BigradedRing, dim: int, hyperplane_name: str, order: int):
    """Todd classes of (the pullback of) the tangent bundle of P^dim."""
    from .grr import todd_from_chern

    h = ring.basis_element(hyperplane_name)
    from math import comb

    chern = [(h ** i).scale(comb(dim + 1, i)) for i in range(1, order + 1)]
    return todd_from_chern(chern, order)


def proj_product(n: int, r: int):
    """P^n x P^r with hyperplane classes h1, h2 and their Todd data.

    Returns (ring, todd).  Integration sends h1^n h2^r to 1; vol_s = 1.
    """
    if n < 1 or r < 1:
        raise ValueError("both factors must have positive dimension")
    ring = _proj_product_ring(n, r)
    from .grr import ToddData

    td_p = _projective_space_todd(ring, r, "h2", r)
    td_q = _projective_space_todd(ring, n, "h1", n)
    return ring, ToddData(td_p=td_p, td_q=td_q)


def curve_product(
    g_x: int,
    delta_sq: RationalLike,
    deg_h1: RationalLike,
    deg_h2: RationalLike,
):
    """A genus-g_x curve times an elliptic curve, with a Kuenneth delta class.

    Basis {1, f1, f2, pt, delta}: f1, f2 the fiber classes, f1 f2 = pt,
    delta^2 = delta_sq * pt (delta_sq <= 0, the Hodge-index constraint),
    delta f1 = delta f2 = 0.  H_1 = deg_h1 f1, H_2 = deg_h2 f2, and
    vol_s = deg_h2.  The Todd data is [1, 0] along p (the second factor is
    elliptic) and [1, (1 - g_x) f1] along q.
    """
    dsq = Fraction(parse_rational(delta_sq) if isinstance(delta_sq, str) else delta_sq)
    if dsq > 0:
        raise ValueError("delta^2 must be <= 0 (Hodge index)")
    d1 = Fraction(parse_rational(deg_h1) if isinstance(deg_h1, str) else deg_h1)
    d2 = Fraction(parse_rational(deg_h2) if isinstance(deg_h2, str) else deg_h2)
    if d1 <= 0 or d2 <= 0:
        raise ValueError("polarization degrees must be positive")
    if g_x < 0:
        raise ValueError("genus must be nonnegative")

    half = Fraction(1, 2)
    ring = BigradedRing(
        n=1,
        r=1,
        basis=[("1", 0, 0), ("f1", 1, 0), ("f2", 0, 1), ("delta", half, half), ("pt", 1, 1)],
        mult={
            ("1", "1"): {"1": 1},
            ("1", "f1"): {"f1": 1},
            ("1", "f2"): {"f2": 1},
            ("1", "delta"): {"delta": 1},
            ("1", "pt"): {"pt": 1},
            ("f1", "f2"): {"pt": 1},
            ("delta", "delta"): {"pt": dsq},
        },
        integral={"pt": 1},
        h1=("f1", d1),
        h2=("f2", d2),
        vol_s=d2,
    )
    from .grr import ToddData

    td_p = [ring.one(), ring.zero()]
    td_q = [ring.one(), ring.basis_element("f1").scale(1 - g_x)]
    return ring, ToddData(td_p=td_p, td_q=td_q)


def curve_times_abelian(
    g_x: int,
    r: int,
    deg_h1: RationalLike,
    vol_s: RationalLike,
):
    """A genus-g_x curve times an r-dimensional abelian variety.

    Basis {f1^a h2^b}: f1 the point class of the curve, h2 the polarization
    of the abelian factor (so H_2 = h2 with coefficient 1), with
    integral(f1 h2^r) = vol_s and H_1 = deg_h1 f1.  The abelian factor has
    trivial tangent bundle, so the Todd data along p is [1, 0, ..., 0].
    """
    if r < 1:
        raise ValueError("the abelian factor must have positive dimension")
    if g_x < 0:
        raise ValueError("genus must be nonnegative")
    d1 = Fraction(parse_rational(deg_h1) if isinstance(deg_h1, str) else deg_h1)
    vol = Fraction(parse_rational(vol_s) if isinstance(vol_s, str) else vol_s)
    if d1 <= 0 or vol <= 0:
        raise ValueError("deg_h1 and vol_s must be positive")

    def name(a: int, b: int) -> str:
        if a == 0 and b == 0:
            return "1"
        parts = []
        if a == 1:
            parts.append("f1")
        if b == 1:
            parts.append("h2")
        elif b > 1:
            parts.append(f"h2^{b}")
        return "".join(parts)

    basis = [(name(a, b), a, b) for a in range(2) for b in range(r + 1)]
    mult = {}
    for a1, b1 in itertools.product(range(2), range(r + 1)):
        for a2, b2 in itertools.product(range(2), range(r + 1)):
            a, b = a1 + a2, b1 + b2
            if a <= 1 and b <= r:
                mult[(name(a1, b1), name(a2, b2))] = {name(a, b): 1}
    ring = BigradedRing(
        n=1,
        r=r,
        basis=basis,
        mult=mult,
        integral={name(1, r): vol},
        h1=("f1", d1),
        h2="h2",
        vol_s=vol,
    )
    from .grr import ToddData

    td_p = [ring.one()] + [ring.zero()] * r
    td_q = [ring.one(), ring.basis_element("f1").scale(1 - g_x)]
    return ring, ToddData(td_p=td_p, td_q=td_q)


_PRESETS = {
    "proj_product": proj_product,
    "curve_product": curve_product,
    "curve_times_abelian": curve_times_abelian,
}


def build_preset(kind: str, **params):
    """Build a named preset; returns (ring, todd), both validated."""
    if kind not in _PRESETS:
        raise ValueError(f"unknown preset {kind!r}; choose from {sorted(_PRESETS)}")
    ring, todd = _PRESETS[kind](**params)
    report = validate_ring(ring)
    if not report.ok:
        raise ValueError(f"preset {kind!r} failed validation: {report.failures[0]}")
    return ring, todd


# -- JSON ---------------------------------------------------------------------


def element_to_json(x: RingElement) -> list[dict]:
    return [
        {"basis": x.ring.basis[i].name, "coeff": format_rational(c)}
        for i, c in sorted(x.coeffs.items())
    ]


def element_from_json(ring: BigradedRing, data: Iterable[Mapping]) -> RingElement:
    coeffs: dict[str, Fraction] = {}
    for term in data:
        name = term["basis"]
        coeffs[name] = coeffs.get(name, Fraction(0)) + parse_rational(term["coeff"])
    return ring.element(coeffs)


def ring_to_json(ring: BigradedRing) -> dict:
    def bidegree_str(q: Fraction):
        return int(q) if q.denominator == 1 else format_rational(q)

    h1_cls = ring.basis[ring._h1_index].name
    h2_cls = ring.basis[ring._h2_index].name
    return {
        "n": ring.n,
        "r": ring.r,
        "basis": [
            {"name": cls.name, "a": bidegree_str(cls.a), "b": bidegree_str(cls.b)}
            for cls in ring.basis
        ],
        "mult": [
            {
                "x": ring.basis[i].name,
                "y": ring.basis[j].name,
                "result": [
                    {"basis": ring.basis[k].name, "coeff": format_rational(c)}
                    for k, c in sorted(row.items())
                ],
            }
            for (i, j), row in sorted(ring._mult.items())
            if i <= j
        ],
        "integral": [
            {"basis": ring.basis[i].name, "value": format_rational(v)}
            for i, v in sorted(ring._integral.items())
        ],
        "h1": h1_cls if ring._h1_scale == 1 else {"basis": h1_cls, "coeff": format_rational(ring._h1_scale)},
        "h2": h2_cls if ring._h2_scale == 1 else {"basis": h2_cls, "coeff": format_rational(ring._h2_scale)},
        "vol_s": format_rational(ring.vol_s),
    }


def ring_from_json(data: Mapping) -> BigradedRing:
    """Build a ring from the custom-ring JSON schema (validation not implied)."""
    try:
        basis = [(cls["name"], cls["a"], cls["b"]) for cls in data["basis"]]
        mult = {}
        for entry in data["mult"]:
            mult[(entry["x"], entry["y"])] = {
                term["basis"]: term["coeff"] for term in entry["result"]
            }
        integral = {entry["basis"]: entry["value"] for entry in data["integral"]}

        def designation(field):
            value = data[field]
            if isinstance(value, str):
                return value
            return (value["basis"], value["coeff"])

        return BigradedRing(
            n=int(data["n"]),
            r=int(data["r"]),
            basis=basis,
            mult=mult,
            integral=integral,
            h1=designation("h1"),
            h2=designation("h2"),
            vol_s=data["vol_s"],
        )
    except KeyError as exc:
        raise ValueError(f"ring JSON is missing field {exc.args[0]!r}") from exc
