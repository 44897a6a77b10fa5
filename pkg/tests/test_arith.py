"""Eisenstein arithmetic kernel: factorization, valuations, local power tests."""

import random
from fractions import Fraction

import pytest

from periodindex.arith import (
    OMEGA,
    RAMIFIED,
    WILD_PLACE,
    ArithmeticError_,
    Eis,
    as_eis,
    eis_factor,
    eis_place,
    format_eis,
    is_nth_power_local,
    iter_primes,
    parse_eis,
    places_above,
    power_residue_order,
    primary_associate,
    rational_place,
    split_prime_above,
    valuation,
    REAL_PLACE,
)


def rand_eis(rng, size=40):
    while True:
        x = Eis(rng.randint(-size, size), rng.randint(-size, size))
        if x:
            return x


def test_omega_relation():
    assert OMEGA * OMEGA + OMEGA + 1 == 0
    assert OMEGA ** 3 == 1
    assert RAMIFIED.norm() == 3


def test_parse_format_roundtrip():
    rng = random.Random(3)
    for _ in range(200):
        x = rand_eis(rng)
        assert parse_eis(format_eis(x)) == x
    assert parse_eis("w") == OMEGA
    assert parse_eis("-w") == -OMEGA
    assert parse_eis("3") == as_eis(3)
    assert parse_eis("1/2-3/4w") == Eis(Fraction(1, 2), Fraction(-3, 4))


def test_factor_seven():
    # 7 splits into two non-associate norm-7 primes with unit 1
    fac, unit = eis_factor(7)
    assert unit == 1
    assert [e for _, e in fac] == [1, 1]
    p1, p2 = fac[0][0], fac[1][0]
    assert p1.norm() == 7 and p2.norm() == 7
    assert p1 * p2 == 7
    assert all(u * p1 != p2 for u in (1, -1, OMEGA, -OMEGA, OMEGA ** 2, -OMEGA ** 2))


def test_factor_two_inert():
    fac, unit = eis_factor(2)
    assert unit == 1 and len(fac) == 1
    assert fac[0] == (as_eis(2), 1)
    assert fac[0][0].norm() == 4
    # no norm-2 element exists
    assert all(Eis(a, b).norm() != 2 for a in range(-2, 3) for b in range(-2, 3))


def test_factor_unit():
    fac, unit = eis_factor(1)
    assert fac == [] and unit == 1
    with pytest.raises(ArithmeticError_):
        eis_factor(0)


def test_factor_roundtrip_random():
    rng = random.Random(11)
    done = 0
    while done < 1000:
        x = rand_eis(rng, 3000)
        if x.norm() >= 10 ** 8:
            continue
        done += 1
        fac, unit = eis_factor(x)
        prod = unit
        for p, e in fac:
            prod = prod * p ** e
        assert prod == x
        for p, _ in fac:
            if p.norm() != 3:
                a, b = p.coords()
                assert a % 3 == 2 and b % 3 == 0  # primary normalization


def test_splitting_law():
    # p = 1 mod 3 splits, p = 2 mod 3 inert, 3 ramifies: checked via eis_factor
    for p in iter_primes(10 ** 4):
        fac, unit = eis_factor(p)
        if p == 3:
            assert fac == [(RAMIFIED, 2)]
        elif p % 3 == 1:
            assert len(fac) == 2 and all(e == 1 for _, e in fac)
            assert fac[0][0].norm() == p
        else:
            assert fac == [(as_eis(p), 1)]


def test_valuation_examples():
    v7 = eis_place(parse_eis("3+1w"))
    assert valuation(7, v7) == 1
    assert valuation(1, v7) == 0
    x = parse_eis("3+1w") ** 3 * 2
    assert valuation(x, v7) == 3
    with pytest.raises(ArithmeticError_):
        valuation(0, v7)


def test_valuation_additive():
    rng = random.Random(5)
    v = eis_place(parse_eis("3+1w"))
    w = places_above(5)[0]
    for _ in range(100):
        x, y = rand_eis(rng, 200), rand_eis(rng, 200)
        for place in (v, w, WILD_PLACE):
            assert valuation(x * y, place) == valuation(x, place) + valuation(y, place)


def test_power_residue_order_examples():
    v = eis_place(parse_eis("3+1w"))  # q = 7
    assert power_residue_order(2, v, 3) == 3       # 2 is not a cube mod 7
    assert power_residue_order(6, v, 3) == 1       # 6 = 3^3 mod 7
    assert power_residue_order(1, v, 3) == 1
    with pytest.raises(ArithmeticError_):
        power_residue_order(7, v, 3)  # not a unit
    with pytest.raises(ArithmeticError_):
        power_residue_order(2, places_above(5)[0], 5)  # 5 does not divide q-1


def test_power_residue_cube_invariance():
    rng = random.Random(7)
    v = places_above(13)[0]
    for _ in range(100):
        u = rand_eis(rng, 50)
        w = rand_eis(rng, 20)
        if valuation(u, v) != 0 or valuation(w, v) != 0:
            continue
        assert power_residue_order(u * w ** 3, v, 3) == power_residue_order(u, v, 3)


def test_power_residue_inert_place():
    v5 = places_above(5)[0]  # inert, q = 25, mu_3 lives in F_25 \ F_5
    assert v5.q == 25 and (v5.q - 1) % 3 == 0
    # every rational unit is a cube in F_25 (x^8 = (x^4)^2 = 1), omega is not
    assert all(power_residue_order(x, v5, 3) == 1 for x in (1, 2, 3, 4))
    assert power_residue_order(OMEGA, v5, 3) == 3
    assert power_residue_order(1 + 2 * OMEGA, v5, 3) in (1, 3)


def test_is_nth_power_tame():
    v = eis_place(parse_eis("2-1w"))  # q = 7, 8 = 1 mod 7 is a cube
    assert is_nth_power_local(8, v, 3)
    pi = v.gen
    assert not is_nth_power_local(pi, v, 3)  # valuation 1
    assert not is_nth_power_local(pi, v, 2)


def _wild_cube_reference(u):
    """Spec-precision oracle: exhaustive search x^3 = u in O/p^7, m = v(27)+1."""
    u = as_eis(u)
    k = valuation(u, WILD_PLACE)
    if k % 3:
        return False
    u = u / RAMIFIED ** k
    num_den = u.r.denominator * u.s.denominator
    num = u * num_den
    for i in range(81):
        for j in range(81):
            x = Eis(i, j)
            diff = x ** 3 * num_den - num
            if not diff:
                return True
            if valuation(diff, WILD_PLACE) >= 7:
                return True
    return False


def test_wild_cube_matches_reference():
    rng = random.Random(13)
    samples = [as_eis(2), as_eis(10), OMEGA, -as_eis(8), as_eis(1) + RAMIFIED ** 7]
    for _ in range(8):
        samples.append(rand_eis(rng, 15))
    for u in samples:
        assert is_nth_power_local(u, WILD_PLACE, 3) == _wild_cube_reference(u)


def test_wild_examples():
    assert is_nth_power_local(1 + RAMIFIED ** 7, WILD_PLACE, 3)
    assert is_nth_power_local(-8, WILD_PLACE, 3)
    assert not is_nth_power_local(OMEGA, WILD_PLACE, 3)
    assert not is_nth_power_local(RAMIFIED, WILD_PLACE, 3)


def test_rational_wild_and_real():
    two = rational_place(2)
    assert is_nth_power_local(17, two, 2)       # 17 = 1 mod 8
    assert not is_nth_power_local(3, two, 2)
    assert is_nth_power_local(-5, REAL_PLACE, 3)
    assert not is_nth_power_local(-5, REAL_PLACE, 2)
    assert is_nth_power_local(5, REAL_PLACE, 2)


def test_primary_uniqueness():
    rng = random.Random(17)
    for _ in range(50):
        x = rand_eis(rng, 30)
        if x.norm() % 3 == 0:
            continue
        y = primary_associate(x)
        a, b = y.coords()
        assert a % 3 == 2 and b % 3 == 0
        units = (as_eis(1), -as_eis(1), OMEGA, -OMEGA, OMEGA ** 2, -(OMEGA ** 2))
        assert sum(1 for u in units if primary_associate(u * x) == y) == 6


def test_place_identity_and_order():
    v1 = eis_place(parse_eis("3+1w"))
    v2 = eis_place(parse_eis("2+3w"))  # associate generator, same place
    assert v1 == v2
    ps = places_above(7)
    assert len(ps) == 2 and ps[0] < ps[1]
    assert places_above(3)[0] == WILD_PLACE
    assert split_prime_above(7)[0].norm() == 7
