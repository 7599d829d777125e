"""Verdict engines for the linear and quadratic coefficient cascades.

Both cascades consume a CoeffVector (a_0..a_r, b_0..b_r) and walk a chain of
exact sign conditions, descending only while everything above is exactly
zero.  Equality is exact rational equality: no tolerances exist anywhere.

Linear cascade, in walk order b_r, a_r, b_(r-1), a_(r-1), ..., b_0, a_0:
every b must be >= 0 and every a <= 0, and the walk stops at the first
strictly nonzero quantity (HOLDS if it satisfies its sign condition,
VIOLATED otherwise).  When every quantity vanishes the verdict is
HOLDS_WITH_EQUALITY, except that under genuine stability the final a_0 is
required to be strictly negative.

Quadratic cascade: D_i = b_r a_i - b_i a_r for i = r-1 down to 0, each
required >= 0, descending through exact zeros; VACUOUS when a_r = b_r = 0.

Every verdict carries a trail of (quantity, value, requirement) records
sufficient to recompute the verdict independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import format_rational
from .grr import CoeffVector

HOLDS = "holds"
HOLDS_WITH_EQUALITY = "holds_with_equality"
VIOLATED = "violated"
VACUOUS = "vacuous"


@dataclass(frozen=True)
class TrailEntry:
    quantity: str
    value: Fraction
    requirement: str

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "value": format_rational(self.value),
            "requirement": self.requirement,
        }


@dataclass(frozen=True)
class CascadeVerdict:
    """Outcome of a cascade walk plus the audit trail that produced it.

    depth is set for HOLDS_WITH_EQUALITY (how many exact zeros were walked),
    index and offending_value for VIOLATED (the subscript of the offending
    quantity, or the index i of the offending D_i).
    """

    status: str
    trail: tuple[TrailEntry, ...]
    depth: Optional[int] = None
    index: Optional[int] = None
    offending_value: Optional[Fraction] = None

    @property
    def is_violation(self) -> bool:
        return self.status == VIOLATED

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "trail": [e.to_json() for e in self.trail]}
        if self.depth is not None:
            out["depth"] = self.depth
        if self.index is not None:
            out["index"] = self.index
        if self.offending_value is not None:
            out["offending_value"] = format_rational(self.offending_value)
        return out


def linear_cascade(c: CoeffVector, genuine_stability: bool = False) -> CascadeVerdict:
    """Walk the alternating positivity chain b_r >= 0, a_r <= 0, b_(r-1) >= 0, ...

    With genuine_stability the all-zero tail forces a_0 < 0 (a genuine
    stability function never vanishes on a nonzero object); without it a_0
    is only required to be <= 0 and the fully vanishing vector holds with
    equality.
    """
    walk: list[tuple[str, int, Fraction, bool]] = []
    for k in range(c.r, -1, -1):
        walk.append(("b", k, c.b[k], False))
        walk.append(("a", k, c.a[k], True))

    trail: list[TrailEntry] = []
    for kind, k, value, is_a in walk:
        final_a0 = is_a and k == 0
        if final_a0 and genuine_stability:
            requirement = "< 0"
        else:
            requirement = "<= 0" if is_a else ">= 0"
        trail.append(TrailEntry(f"{kind}_{k}", value, requirement))
        if value == 0:
            if final_a0 and genuine_stability:
                return CascadeVerdict(
                    status=VIOLATED,
                    trail=tuple(trail),
                    index=k,
                    offending_value=value,
                )
            continue
        ok = value < 0 if is_a else value > 0
        if ok:
            return CascadeVerdict(status=HOLDS, trail=tuple(trail))
        return CascadeVerdict(
            status=VIOLATED, trail=tuple(trail), index=k, offending_value=value
        )
    return CascadeVerdict(status=HOLDS_WITH_EQUALITY, trail=tuple(trail), depth=len(walk))


def quadratic_cascade(c: CoeffVector) -> CascadeVerdict:
    """Walk D_i = b_r a_i - b_i a_r >= 0 for i = r-1 down to 0.

    VACUOUS when the leading charge a_r + i b_r vanishes; HOLDS at the first
    strictly positive D; HOLDS_WITH_EQUALITY when every D vanishes;
    VIOLATED(i, D_i) at the first negative one.
    """
    ar, br = c.a[c.r], c.b[c.r]
    if ar == 0 and br == 0:
        trail = (TrailEntry(f"a_{c.r} + i b_{c.r}", Fraction(0), "nonzero"),)
        return CascadeVerdict(status=VACUOUS, trail=trail)

    trail_list: list[TrailEntry] = []
    zeros = 0
    for i in range(c.r - 1, -1, -1):
        d = br * c.a[i] - c.b[i] * ar
        trail_list.append(TrailEntry(f"D_{i}", d, ">= 0"))
        if d > 0:
            return CascadeVerdict(status=HOLDS, trail=tuple(trail_list))
        if d < 0:
            return CascadeVerdict(
                status=VIOLATED, trail=tuple(trail_list), index=i, offending_value=d
            )
        zeros += 1
    return CascadeVerdict(status=HOLDS_WITH_EQUALITY, trail=tuple(trail_list), depth=zeros)
