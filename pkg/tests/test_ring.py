"""Bigraded rings: presets, multiplication, integration, validation, JSON."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from stabkit.ring import (
    BigradedRing,
    build_preset,
    curve_product,
    curve_times_abelian,
    element_from_json,
    element_to_json,
    proj_product,
    ring_from_json,
    ring_to_json,
    validate_ring,
)
from tests.oracles import random_element


def test_proj_product_1_1_basics():
    ring, _ = build_preset("proj_product", n=1, r=1)
    assert len(ring.basis) == 4
    h1, h2 = ring.basis_element("h1"), ring.basis_element("h2")
    assert h1 * h2 == ring.basis_element("h1h2")
    assert (h1 * h1).is_zero()
    assert ring.integrate(ring.basis_element("h1h2")) == 1
    assert ring.integrate(h1) == 0
    assert validate_ring(ring).ok


def test_proj_product_2_1_integration():
    ring, _ = build_preset("proj_product", n=2, r=1)
    x = ring.basis_element("h1^2h2").scale(5)
    assert ring.integrate(x) == 5


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3)])
def test_proj_product_top_pairing(n, r):
    ring, _ = build_preset("proj_product", n=n, r=r)
    h1, h2 = ring.h1, ring.h2
    for a in range(n + 1):
        for b in range(r + 1):
            value = ring.integrate(h1 ** a * h2 ** b)
            assert value == (1 if (a, b) == (n, r) else 0)


@pytest.mark.parametrize("n,r", [(1, 1), (2, 2), (3, 1)])
def test_presets_validate(n, r):
    ring, _ = build_preset("proj_product", n=n, r=r)
    assert validate_ring(ring).ok


def test_curve_product_preset():
    ring, _ = build_preset("curve_product", g_x=0, delta_sq=-2, deg_h1=1, deg_h2=1)
    assert len(ring.basis) == 5
    delta = ring.basis_element("delta")
    assert delta * delta == ring.basis_element("pt").scale(-2)
    assert (delta * ring.basis_element("f1")).is_zero()
    assert (delta * ring.basis_element("f2")).is_zero()
    assert validate_ring(ring).ok


def test_curve_product_scales_polarizations():
    ring, _ = build_preset("curve_product", g_x=2, delta_sq=0, deg_h1=2, deg_h2=3)
    assert ring.h1 == ring.basis_element("f1").scale(2)
    assert ring.h2 == ring.basis_element("f2").scale(3)
    assert ring.vol_s == 3
    assert ring.integrate(ring.h1 * ring.h2) == 6


def test_curve_times_abelian_preset():
    ring, todd = build_preset("curve_times_abelian", g_x=1, r=2, deg_h1=1, vol_s=2)
    assert validate_ring(ring).ok
    assert ring.integrate(ring.basis_element("f1") * ring.basis_element("h2") ** 2) == 2
    # abelian factor: no Todd correction along p
    assert todd.td_p[0] == ring.one()
    assert all(td.is_zero() for td in todd.td_p[1:])


def test_preset_rejections():
    with pytest.raises(ValueError):
        build_preset("proj_product", n=0, r=1)
    with pytest.raises(ValueError):
        build_preset("curve_product", g_x=0, delta_sq=1, deg_h1=1, deg_h2=1)
    with pytest.raises(ValueError):
        build_preset("curve_product", g_x=0, delta_sq=0, deg_h1=0, deg_h2=1)
    with pytest.raises(ValueError):
        build_preset("nonsense")


def test_multiplication_is_bilinear():
    ring, _ = build_preset("proj_product", n=2, r=2)
    rng = random.Random(5)
    for _ in range(40):
        x, xp, y = (random_element(ring, rng) for _ in range(3))
        lam = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        assert (x + xp) * y == x * y + xp * y
        assert x.scale(lam) * y == (x * y).scale(lam)


def test_mismatched_rings_rejected():
    ring_a, _ = build_preset("proj_product", n=1, r=1)
    ring_b, _ = build_preset("proj_product", n=1, r=1)
    with pytest.raises(ValueError):
        ring_a.basis_element("h1") * ring_b.basis_element("h2")


def _asymmetric_ring() -> BigradedRing:
    return BigradedRing(
        n=1,
        r=1,
        basis=[("1", 0, 0), ("x", 1, 0), ("y", 0, 1), ("top", 1, 1)],
        mult={
            ("1", "1"): {"1": 1},
            ("1", "x"): {"x": 1},
            ("1", "y"): {"y": 1},
            ("1", "top"): {"top": 1},
            ("x", "y"): {"top": 1},
            ("y", "x"): {"top": 2},  # deliberately not commutative
        },
        integral={"top": 1},
        h1="x",
        h2="y",
        vol_s=1,
    )


def test_validate_ring_reports_asymmetric_pair():
    report = validate_ring(_asymmetric_ring())
    assert not report.ok
    assert any("commutativity" in f and "x" in f and "y" in f for f in report.failures)


def test_validate_ring_reports_grading_violation():
    ring = BigradedRing(
        n=1,
        r=1,
        basis=[("1", 0, 0), ("x", 1, 0), ("y", 0, 1), ("top", 1, 1)],
        mult={
            ("1", "1"): {"1": 1},
            ("1", "x"): {"x": 1},
            ("1", "y"): {"y": 1},
            ("1", "top"): {"top": 1},
            ("x", "y"): {"top": 1},
            ("x", "x"): {"x": 1},  # lands off-degree
        },
        integral={"top": 1},
        h1="x",
        h2="y",
        vol_s=1,
    )
    report = validate_ring(ring)
    assert not report.ok
    assert any("grading" in f for f in report.failures)


def test_component_extraction():
    ring, _ = build_preset("curve_product", g_x=0, delta_sq=-1, deg_h1=1, deg_h2=1)
    x = ring.element({"f1": 2, "f2": 3, "delta": "1/2"})
    assert x.component_of_bidegree(1, 0) == ring.basis_element("f1").scale(2)
    assert x.component_of_bidegree("1/2", "1/2") == ring.basis_element("delta").scale(Fraction(1, 2))
    assert x.component_of_total_degree(1) == x
    assert x.component_of_total_degree(2).is_zero()


def test_ring_json_round_trip():
    for ring, _ in (
        build_preset("proj_product", n=2, r=1),
        build_preset("curve_product", g_x=1, delta_sq="-3/2", deg_h1=2, deg_h2=1),
    ):
        data = ring_to_json(ring)
        loaded = ring_from_json(data)
        assert validate_ring(loaded).ok
        assert [c.name for c in loaded.basis] == [c.name for c in ring.basis]
        # structure constants and integrals survive
        for x in ring.basis:
            for y in ring.basis:
                lhs = ring.basis_element(x.name) * ring.basis_element(y.name)
                rhs = loaded.basis_element(x.name) * loaded.basis_element(y.name)
                assert element_to_json(lhs) == element_to_json(rhs)
        assert loaded.vol_s == ring.vol_s
        assert loaded.h1.coeffs == ring.h1.coeffs


def test_element_json_round_trip():
    ring, _ = build_preset("proj_product", n=1, r=1)
    x = ring.element({"1": "2/3", "h1h2": -4})
    assert element_from_json(ring, element_to_json(x)) == x


def test_ring_json_missing_field():
    with pytest.raises(ValueError, match="missing field"):
        ring_from_json({"n": 1, "r": 1})


def test_unknown_basis_name_rejected():
    ring, _ = build_preset("proj_product", n=1, r=1)
    with pytest.raises(ValueError, match="unknown basis class"):
        ring.element({"nope": 1})
