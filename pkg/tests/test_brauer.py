"""Brauer classes: order, reciprocity, restriction, group structure."""

import random

import pytest

from periodindex.arith import QQ, QW, places_above, rational_place, REAL_PLACE
from periodindex.brauer import BrauerClass, class_order, reciprocity_check, restrict_class
from periodindex.symbols import LocalInvariant, SymbolError

V1, V2 = places_above(7)
V3 = places_above(13)[0]


def cls(*pairs, checked=False):
    return BrauerClass(QW, {v: LocalInvariant(k, n) for v, k, n in pairs}, checked)


def test_order_examples():
    assert class_order(BrauerClass.zero(QW)) == 1
    assert class_order(cls((V1, 1, 3), (V2, 2, 3))) == 3
    assert class_order(cls((V1, 1, 2), (V2, 1, 3), (V3, 1, 6))) == 6


def test_reciprocity_examples():
    assert reciprocity_check(cls((V1, 1, 3), (V2, 2, 3)))
    assert not reciprocity_check(cls((V1, 1, 3)))
    assert reciprocity_check(BrauerClass.zero(QW))


def test_hasse_style_single_support():
    # a nonzero class with a single nonzero invariant violates reciprocity
    for k, n in ((1, 3), (1, 2), (2, 3), (5, 6)):
        assert not reciprocity_check(cls((V1, k, n)))


def test_restrict_examples():
    c = cls((V1, 1, 3))
    assert restrict_class(c, {V1: 3}).is_zero()
    assert restrict_class(c, {V1: 2}) == cls((V1, 2, 3))
    assert restrict_class(BrauerClass.zero(QW), {}).is_zero()
    with pytest.raises(SymbolError):
        restrict_class(c, {V2: 3})


def test_restrict_additive():
    rng = random.Random(41)
    places = [V1, V2, V3]
    for _ in range(100):
        c1 = cls(*[(v, rng.randrange(3), 3) for v in places])
        c2 = cls(*[(v, rng.randrange(3), 3) for v in places])
        degrees = {v: rng.randint(1, 4) for v in places}
        lhs = restrict_class(c1 + c2, degrees)
        rhs = restrict_class(c1, degrees) + restrict_class(c2, degrees)
        assert lhs == rhs


def test_torsion_group_structure():
    rng = random.Random(43)
    for _ in range(100):
        c = cls(*[(v, rng.randrange(6), 6) for v in (V1, V2, V3)])
        assert (c + (-c)).is_zero()
        assert class_order(c + c) in (1, class_order(c)) or class_order(c) % class_order(c + c) == 0
        assert c.scale(class_order(c)).is_zero()


def test_mixed_field_rejected():
    c = cls((V1, 1, 3))
    d = BrauerClass(QQ, {rational_place(5): LocalInvariant(1, 2), REAL_PLACE: LocalInvariant(1, 2)})
    with pytest.raises(SymbolError):
        c + d


def test_serialization_roundtrip():
    c = cls((V1, 1, 3), (V2, 2, 3), checked=True)
    data = c.to_json()
    assert BrauerClass.from_json(data) == c
    d = BrauerClass(
        QQ,
        {rational_place(2): LocalInvariant(1, 2), REAL_PLACE: LocalInvariant(1, 2)},
        global_checked=True,
    )
    assert BrauerClass.from_json(d.to_json()) == d


def test_support_ordering_deterministic():
    c = cls((V3, 1, 3), (V1, 1, 3), (V2, 1, 3))
    sup = [str(v) for v in c.support()]
    assert sup == sorted(sup, key=lambda s: ([v for v in (V1, V2, V3) if str(v) == s][0].sort_key()))
    assert [v.q for v in c.support()] == [7, 7, 13]
