"""Local and global norm-residue symbols."""

import random
from fractions import Fraction

import pytest

from periodindex.arith import (
    OMEGA,
    WILD_PLACE,
    as_eis,
    eis_place,
    is_nth_power_local,
    iter_primes,
    parse_eis,
    places_above,
    split_prime_above,
    valuation,
)
from periodindex.brauer import reciprocity_check
from periodindex.symbols import (
    LocalInvariant,
    SymbolError,
    hilbert2_local,
    symbol_global,
    tame_symbol,
)

V7 = eis_place(parse_eis("3+1w"))


def test_local_invariant_arithmetic():
    a = LocalInvariant(1, 3)
    b = LocalInvariant(2, 3)
    assert (a + b).is_zero()
    assert (a + a) == b
    assert (-a) == b
    assert a.scale(3).is_zero()
    assert LocalInvariant(2, 6) == LocalInvariant(1, 3)
    assert LocalInvariant(2, 6).order() == 3
    assert LocalInvariant(0, 5).order() == 1


def test_tame_examples():
    assert tame_symbol(1, parse_eis("3+1w"), V7, 3).is_zero()
    inv = tame_symbol(2, parse_eis("3+1w"), V7, 3)
    assert not inv.is_zero() and inv.den == 3
    # two units give zero
    assert tame_symbol(2, 5, V7, 3).is_zero()


def test_tame_wild_rejected():
    with pytest.raises(SymbolError):
        tame_symbol(2, 5, WILD_PLACE, 3)
    # n must divide q - 1
    with pytest.raises(SymbolError):
        tame_symbol(2, 5, places_above(2)[0], 9)


def _rand_tame_value(rng, v):
    # unit times a power of the uniformizer at v
    u = as_eis(rng.randint(1, 40)) + OMEGA * rng.randint(0, 40)
    while not u or valuation(u, v) != 0:
        u = as_eis(rng.randint(1, 40)) + OMEGA * rng.randint(0, 40)
    return u * v.gen ** rng.randint(0, 2)


def test_tame_bilinear_antisymmetric():
    rng = random.Random(23)
    places = [places_above(p)[0] for p in (7, 13, 31, 43)] + [places_above(2)[0]]
    for _ in range(500):
        v = rng.choice(places)
        a, ap, b = (_rand_tame_value(rng, v) for _ in range(3))
        left = tame_symbol(a * ap, b, v, 3)
        assert left == tame_symbol(a, b, v, 3) + tame_symbol(ap, b, v, 3)
        right = tame_symbol(b, a * ap, v, 3)
        assert right == -left
        assert tame_symbol(a, -a, v, 3).is_zero()


def test_tame_vanishing_matches_cube_enumeration():
    # the module's oracle: <a,b> = 0 iff the residue unit is a cube in F_q
    rng = random.Random(29)
    split = [p for p in iter_primes(2000) if p % 3 == 1]
    for _ in range(60):
        p = rng.choice(split)
        v = places_above(p)[rng.randrange(2)]
        cubes = {pow(x, 3, p) for x in range(1, p)}
        a, b = _rand_tame_value(rng, v), _rand_tame_value(rng, v)
        alpha, beta = valuation(a, v), valuation(b, v)
        t = (-1) ** (alpha * beta) * a ** beta * b ** (-alpha)
        from periodindex.arith import residue_field

        t_res = residue_field(v).reduce(t)
        assert tame_symbol(a, b, v, 3).is_zero() == (t_res in cubes)


def test_hilbert_examples():
    assert hilbert2_local(2, 5, 5) == LocalInvariant(1, 2)
    assert hilbert2_local(-1, -1, "real") == LocalInvariant(1, 2)
    assert hilbert2_local(1, 77, 7).is_zero()
    assert hilbert2_local(2, 2, 2).is_zero()  # <2,2> = <2,-1> = 0 at 2
    assert hilbert2_local(-1, -1, 2) == LocalInvariant(1, 2)


def test_hilbert_bilinear():
    rng = random.Random(31)
    for _ in range(300):
        p = rng.choice([2, 3, 5, 7, 11, 13, "real"])
        a, ap, b = (rng.choice([x for x in range(-50, 51) if x]) for _ in range(3))
        lhs = hilbert2_local(a * ap, b, p)
        assert lhs == hilbert2_local(a, b, p) + hilbert2_local(ap, b, p)


def test_hilbert_matches_generic_tame_machinery():
    # at odd p the closed formula and the generic level-2 tame symbol must agree
    from periodindex.arith import rational_place

    rng = random.Random(33)
    for _ in range(200):
        p = rng.choice([3, 5, 7, 11, 13, 17, 19, 23])
        a, b = (rng.choice([x for x in range(-60, 61) if x]) for _ in range(2))
        v = rational_place(p)
        assert tame_symbol(a, b, v, 2) == hilbert2_local(a, b, p)


def test_symbol_global_trivial_and_22():
    assert symbol_global(1, -15, 2).is_zero()
    assert symbol_global(2, 2, 2).is_zero()
    assert symbol_global(1, parse_eis("2+3w"), 3).is_zero()


def test_symbol_global_reciprocity_random():
    rng = random.Random(37)
    for _ in range(60):
        a = rng.choice([x for x in range(-300, 301) if x])
        b = rng.choice([x for x in range(-300, 301) if x])
        cls = symbol_global(a, b, 2)
        assert reciprocity_check(cls)
        assert cls.global_checked


def test_symbol_global_cubic_certified_pair():
    # the frozen search fixture: support in {v, v'}, opposite invariants
    pi, pip = parse_eis("-1-18w"), parse_eis("53+18w")
    cls = symbol_global(pi, pip, 3)
    assert {str(v) for v in cls.support()} <= {"-1-18w", "53+18w"}
    invs = [i for _, i in cls.inv]
    assert len(invs) == 2 and (invs[0] + invs[1]).is_zero()
    assert cls.wild_provenance == "certified-zero"


def test_symbol_global_wild_modes():
    pi = split_prime_above(7)[0]
    with pytest.raises(SymbolError):
        symbol_global(OMEGA, pi, 3)
    cls = symbol_global(OMEGA, pi, 3, wild="complete")
    assert cls.wild_provenance == "reciprocity-completed"
    assert reciprocity_check(cls)


def test_symbol_level9_tameness():
    p19 = split_prime_above(19)[0]
    p37 = split_prime_above(37)[0]
    cls = symbol_global(p19, p37, 9)
    assert not cls.global_checked
    with pytest.raises(SymbolError):
        symbol_global(p19, split_prime_above(7)[0], 9)  # q = 7 is not 1 mod 9


def test_cubic_reciprocity_primary_pairs():
    # Eisenstein reciprocity: chi_pi(pi') = chi_pi'(pi) for primary primes,
    # with both characters read against the one global root of unity.  This
    # is the theorem behind the reciprocity of <pi, pi'>, tested directly.
    from periodindex.arith import residue_field

    rng = random.Random(39)
    split = [p for p in iter_primes(1500) if p % 3 == 1]
    for _ in range(80):
        p1, p2 = rng.sample(split, 2)
        pi = split_prime_above(p1)[rng.randrange(2)]
        pip = split_prime_above(p2)[rng.randrange(2)]
        v1, v2 = eis_place(pi), eis_place(pip)
        rf1, rf2 = residue_field(v1), residue_field(v2)
        chi12 = rf1.dlog_mu(rf1.pow(rf1.reduce(pip), (p1 - 1) // 3), 3)
        chi21 = rf2.dlog_mu(rf2.pow(rf2.reduce(pi), (p2 - 1) // 3), 3)
        assert chi12 == chi21
