"""Independent oracles and generators shared by the test modules.

Everything here recomputes expected values by a different route than the
library: the Todd series comes from Bernoulli numbers, Hilbert polynomials
of line bundles on P1 x P1 from the explicit pushforward, and HN chains from
a dynamic program over the full down-set lattice that globally maximizes the
lexicographic sequence of (slope, size) steps instead of choosing greedily.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence

from stabkit.exact import ComplexPolynomial, ComplexRational
from stabkit.grr import SheafData
from stabkit.hn import Charge, ChargedPoset
from stabkit.ring import BigradedRing

# -- closed-form pushforward oracle on P1 x P1 ---------------------------------


def line_bundle_polynomial(a: int, b: int) -> ComplexPolynomial:
    """L(n) of O(a, b) on P1 x P1: the pushforward is O(a)^(n+b+1), so
    Z = (n + b + 1) (-a + i)."""
    z = ComplexRational(Fraction(-a), Fraction(1))
    return ComplexPolynomial((z.scale(b + 1), z))


# -- Todd series from Bernoulli numbers -----------------------------------------


def bernoulli_numbers(order: int) -> list[Fraction]:
    """B_0..B_order with the B_1 = -1/2 convention, by the defining recurrence."""
    bern = [Fraction(1)]
    for m in range(1, order + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * bern[j]
        bern.append(-acc / (m + 1))
    return bern


def todd_series(order: int) -> list[Fraction]:
    """Coefficients of x / (1 - e^-x) = sum_k (-1)^k B_k x^k / k!."""
    bern = bernoulli_numbers(order)
    out = []
    fact = 1
    for k in range(order + 1):
        if k > 0:
            fact *= k
        out.append(Fraction((-1) ** k * bern[k], fact))
    return out


def series_power(series: Sequence[Fraction], exponent: int, order: int) -> list[Fraction]:
    out = [Fraction(1)] + [Fraction(0)] * order
    for _ in range(exponent):
        nxt = [Fraction(0)] * (order + 1)
        for i, x in enumerate(out):
            if x == 0:
                continue
            for j, y in enumerate(series):
                if i + j > order:
                    break
                nxt[i + j] += x * y
        out = nxt
    return out


# -- random ring elements and sheaves --------------------------------------------


def random_rational(rng: random.Random, span: int = 6, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_element(ring: BigradedRing, rng: random.Random) -> "RingElement":
    return ring.element({cls.name: random_rational(rng) for cls in ring.basis})


def random_sheaf(ring: BigradedRing, rng: random.Random, name: Optional[str] = None) -> SheafData:
    top = ring.n + ring.r
    ch = []
    for j in range(top + 1):
        coeffs = {
            cls.name: random_rational(rng)
            for cls in ring.basis
            if cls.a + cls.b == j
        }
        ch.append(ring.element(coeffs))
    return SheafData(ring=ring, ch=tuple(ch), name=name)


# -- raw poset data: enumeration, closure, and the DP chain oracle ---------------
#
# A labeled poset on k elements is a tuple `below` of k bitmasks: below[i] is
# the set of elements strictly below i (transitively closed).


def strict_below_masks(size: int, covers: Sequence[tuple[int, int]]) -> list[int]:
    below = [0] * size
    changed = True
    while changed:
        changed = False
        for i, j in covers:
            new = below[j] | below[i] | (1 << i)
            if new != below[j]:
                below[j] = new
                changed = True
    return below


def down_set_masks_raw(size: int, below: Sequence[int]) -> list[int]:
    out = []
    for mask in range(1 << size):
        rest = mask
        ok = True
        while rest:
            low = rest & -rest
            if below[low.bit_length() - 1] & ~mask:
                ok = False
                break
            rest ^= low
        if ok:
            out.append(mask)
    return out


def _canonical_form(below: Sequence[int]) -> tuple[int, ...]:
    """Minimal relabeling of the relation, brute force within degree profiles."""
    size = len(below)
    above = [0] * size
    for j in range(size):
        rest = below[j]
        while rest:
            low = rest & -rest
            above[low.bit_length() - 1] |= 1 << j
            rest ^= low
    profile = [(bin(below[i]).count("1"), bin(above[i]).count("1")) for i in range(size)]
    groups: dict[tuple[int, int], list[int]] = {}
    for i in range(size):
        groups.setdefault(profile[i], []).append(i)
    keys = sorted(groups)
    best: Optional[tuple[int, ...]] = None
    for parts in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        perm = [i for part in parts for i in part]  # new position -> old index
        position = [0] * size
        for new, old in enumerate(perm):
            position[old] = new
        relabeled = []
        for new in range(size):
            mask = 0
            rest = below[perm[new]]
            while rest:
                low = rest & -rest
                mask |= 1 << position[low.bit_length() - 1]
                rest ^= low
            relabeled.append(mask)
        cand = tuple(relabeled)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best


def poset_classes_up_to(max_size: int) -> dict[int, list[tuple[int, ...]]]:
    """All isomorphism classes of posets on 1..max_size elements.

    Built by attaching a new maximal element with an arbitrary down-closed
    predecessor set to each smaller class, then deduplicating by canonical
    form.  Class counts 1, 2, 5, 16, 63, 318 for sizes 1..6.
    """
    classes: dict[int, list[tuple[int, ...]]] = {0: [()]}
    for size in range(1, max_size + 1):
        seen = set()
        out = []
        for smaller in classes[size - 1]:
            for pred in down_set_masks_raw(size - 1, smaller):
                cand = _canonical_form(tuple(smaller) + (pred,))
                if cand not in seen:
                    seen.add(cand)
                    out.append(cand)
        classes[size] = out
    return classes


def poset_from_raw(
    below: Sequence[int], charges: Sequence[Charge], ids: Optional[Sequence[str]] = None
) -> ChargedPoset:
    size = len(below)
    names = list(ids) if ids is not None else [f"e{i}" for i in range(size)]
    covers = [
        (names[i], names[j])
        for j in range(size)
        for i in range(size)
        if below[j] >> i & 1
    ]
    return ChargedPoset(names, covers, dict(zip(names, charges)))


def random_raw_poset(rng: random.Random, size: int, edge_prob: float = 0.35):
    covers = [
        (i, j)
        for i in range(size)
        for j in range(i + 1, size)
        if rng.random() < edge_prob
    ]
    return strict_below_masks(size, covers)


# The DP oracle works on integer charge pairs (re, im) for speed; the charge
# alphabets used in the tests are integral.


def _slope_cmp(z1: tuple[int, int], z2: tuple[int, int]) -> int:
    re1, im1 = z1
    re2, im2 = z2
    if im1 == 0 and im2 == 0:
        return 0
    if im1 == 0:
        return 1
    if im2 == 0:
        return -1
    s = re2 * im1 - re1 * im2
    return (s > 0) - (s < 0)


def _seq_cmp(s1, s2) -> int:
    """Lexicographic on (slope desc, size desc); a shorter prefix-equal wins."""
    for (re1, im1, n1), (re2, im2, n2) in zip(s1, s2):
        c = _slope_cmp((re1, im1), (re2, im2))
        if c:
            return c
        if n1 != n2:
            return 1 if n1 > n2 else -1
    if len(s1) == len(s2):
        return 0
    return 1 if len(s1) < len(s2) else -1


def oracle_hn_chain(size: int, below: Sequence[int], charges: Sequence[tuple[int, int]]):
    """Globally optimal chain of down-sets by exhaustive search with memoization.

    Maximizes the sequence of (quotient slope, quotient size) steps
    lexicographically over all chains of down-sets from the empty set to the
    whole poset.  Returns (chain masks from the first step to the top,
    uniqueness flag).  Greedy HN must reproduce exactly this chain, uniquely.
    """
    top = (1 << size) - 1
    masks = down_set_masks_raw(size, below)
    charge_of = [None] * (top + 1)
    charge_of[0] = (0, 0)
    for mask in range(1, top + 1):
        low = mask & -mask
        re, im = charge_of[mask ^ low]
        ere, eim = charges[low.bit_length() - 1]
        charge_of[mask] = (re + ere, im + eim)

    order = sorted(masks, key=lambda m: -bin(m).count("1"))
    best: dict[int, tuple] = {top: ()}
    step: dict[int, int] = {}
    unique: dict[int, bool] = {top: True}
    for f in order:
        if f == top:
            continue
        best_seq = None
        best_g = None
        ties = 0
        for g in masks:
            if g == f or (g & f) != f:
                continue
            diff = g ^ f
            re, im = charge_of[diff]
            seq = ((re, im, bin(diff).count("1")),) + best[g]
            if best_seq is None:
                best_seq, best_g, ties = seq, g, 1
                continue
            c = _seq_cmp(seq, best_seq)
            if c > 0:
                best_seq, best_g, ties = seq, g, 1
            elif c == 0:
                ties += 1
        best[f] = best_seq
        step[f] = best_g
        unique[f] = ties == 1 and unique[best_g]

    chain = []
    current = 0
    while current != top:
        current = step[current]
        chain.append(current)
    return chain, unique[0]


def greedy_chain_masks(poset: ChargedPoset, filtration) -> list[int]:
    """Cumulative member masks of a filtration, in the poset's element order."""
    index = {e: i for i, e in enumerate(poset.elements)}
    chain = []
    acc = 0
    for factor in filtration.factors:
        for member in factor.members:
            acc |= 1 << index[member]
        chain.append(acc)
    return chain


def check_upper_hull(
    size: int,
    below: Sequence[int],
    charges: Sequence[tuple[int, int]],
    chain: Sequence[int],
) -> bool:
    """Partial sums must trace the upper convex hull of all down-set charges.

    Points are (Im Z, -Re Z).  The partial-sum path starts at the origin; the
    hull condition is that every down-set point lies weakly below every
    segment line, inside the x-range, and no point at the far right exceeds
    the total.
    """
    top = (1 << size) - 1
    charge_of = {0: (0, 0)}

    def charge(mask: int) -> tuple[int, int]:
        found = charge_of.get(mask)
        if found is not None:
            return found
        low = mask & -mask
        re, im = charge(mask ^ low)
        ere, eim = charges[low.bit_length() - 1]
        value = (re + ere, im + eim)
        charge_of[mask] = value
        return value

    points = []
    for mask in down_set_masks_raw(size, below):
        re, im = charge(mask)
        points.append((im, -re))

    vertices = [(0, 0)]
    for mask in chain:
        re, im = charge(mask)
        vertices.append((im, -re))
    x_total, y_total = vertices[-1]

    for px, py in points:
        if px < 0 or px > x_total:
            return False
        if px == x_total and py > y_total:
            return False
        for (x1, y1), (x2, y2) in zip(vertices, vertices[1:]):
            if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) > 0:
                return False
    return True


def max_slope_down_sets(poset: ChargedPoset) -> list[int]:
    from stabkit.hn import Ordering, compare_slopes

    masks = [m for m in poset.down_set_masks() if m]
    best = None
    for mask in masks:
        z = Charge(poset.charge_of_mask(mask))
        if best is None or compare_slopes(z, best) is Ordering.GREATER:
            best = z
    return [
        m
        for m in masks
        if compare_slopes(Charge(poset.charge_of_mask(m)), best) is Ordering.EQUAL
    ]


# -- factor vectors for the Abel chain -------------------------------------------


def random_factor_vector(rng: random.Random, length: Optional[int] = None):
    """Random factors with b_r > 0, strictly decreasing -a_r/b_r, and D >= 0.

    Hypotheses (1) and (2) hold by construction; (3) depends on t and must be
    filtered by the caller.
    """
    from stabkit.hn import FactorEntry

    l = length if length is not None else rng.randint(1, 4)
    ratios = sorted(
        {Fraction(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(l)},
        reverse=True,
    )
    while len(ratios) < l:
        extra = ratios[-1] - Fraction(rng.randint(1, 4), rng.randint(1, 3))
        ratios.append(extra)
    factors = []
    for k in range(l):
        b_top = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        a_top = -ratios[k] * b_top
        b_next = random_rational(rng, span=5, max_den=3)
        slack = Fraction(rng.randint(0, 5), rng.randint(1, 3))
        a_next = b_next * a_top / b_top + slack
        factors.append(FactorEntry(b_top, a_top, b_next, a_next))
    return factors
