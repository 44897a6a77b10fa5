"""Local norm-residue symbols.

The tame level-n symbol at places with n | q - 1, the classical quadratic
Hilbert symbol over Q (odd p, p = 2, and the real place), and the assembly of
global Brauer classes with a reciprocity check.

Convention D-SYM: at every place the discrete log is taken against the
reduction of one global root of unity (w for level 3 over Q(w), -1 for level
2); level-9 logs use the lexicographically least cube root of the level-3
image.  Any globally coherent convention passes reciprocity; this one is
frozen so certificates are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .arith import (
    QQ,
    QW,
    REAL_PLACE,
    WILD_PLACE,
    ArithmeticError_,
    Place,
    as_eis,
    eis_factor_fractional,
    is_nth_power_local,
    rational_factor_fractional,
    rational_place,
    residue_field,
    valuation,
)


class SymbolError(Exception):
    """Preconditions or convention checks of the symbol layer failed."""


class LocalInvariant:
    """An element k/n of (1/n)Z / Z.

    Stored as (num, den) with 0 <= num < den; reduction happens on demand in
    comparisons, addition and order computations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if den <= 0:
            raise SymbolError("invariant denominator must be positive")
        object.__setattr__(self, "num", num % den)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("LocalInvariant is immutable")

    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def order(self) -> int:
        return self.fraction().denominator

    def is_zero(self) -> bool:
        return self.num == 0

    def __add__(self, other):
        d = self.den * other.den // gcd(self.den, other.den)
        return LocalInvariant(
            self.num * (d // self.den) + other.num * (d // other.den), d
        )

    def __neg__(self):
        return LocalInvariant(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, m):
        return LocalInvariant(self.num * m, self.den)

    def __eq__(self, other):
        if not isinstance(other, LocalInvariant):
            return NotImplemented
        return self.fraction() == other.fraction()

    def __hash__(self):
        return hash(self.fraction())

    def __repr__(self):
        return f"LocalInvariant({self.num}/{self.den})"


def tame_symbol(a, b, v: Place, n: int, zeta=None) -> LocalInvariant:
    """The level-n norm-residue symbol <a, b>_v at a tame finite place.

    With alpha = v(a), beta = v(b), the unit t = (-1)^(alpha beta) a^beta
    b^(-alpha) is reduced to the residue field and t^((q-1)/n) is written as
    a power of the distinguished zeta image; the exponent over n is the
    invariant.  Bilinear and antisymmetric.
    """
    if v.kind != "finite":
        raise SymbolError("tame symbol needs a finite place")
    if n % v.p == 0:
        raise SymbolError(
            f"wild place {v} for level {n}: route through power certificates instead"
        )
    if (v.q - 1) % n != 0:
        raise SymbolError(f"level {n} does not divide q - 1 = {v.q - 1} at {v}")
    alpha = valuation(a, v)
    beta = valuation(b, v)
    if v.field is QW:
        ua = as_eis(a) / v.gen ** alpha
        ub = as_eis(b) / v.gen ** beta
    else:
        ua = Fraction(a) / Fraction(v.gen) ** alpha
        ub = Fraction(b) / Fraction(v.gen) ** beta
    rf = residue_field(v)
    t = rf.mul(rf.pow(rf.reduce(ua), beta), rf.pow(rf.reduce(ub), -alpha))
    if (alpha * beta) % 2:
        t = rf.mul(t, rf.reduce(-1 if v.field is QQ else as_eis(-1)))
    s = rf.pow(t, (v.q - 1) // n)
    return LocalInvariant(rf.dlog_mu(s, n, zeta), n)


# ---------------------------------------------------------------------------
# The quadratic Hilbert symbol over Q, by the classical closed formulas.


def _square_normalize(x) -> int:
    """An integer representing x modulo nonzero rational squares."""
    x = Fraction(x)
    if x == 0:
        raise SymbolError("nonzero argument required")
    return x.numerator * x.denominator


def hilbert2_local(a, b, place) -> LocalInvariant:
    """Quadratic Hilbert symbol invariant at p (prime), 2 or the real place.

    0 iff z^2 = a x^2 + b y^2 has a nontrivial Q_p (resp. R) solution.
    """
    ai = _square_normalize(a)
    bi = _square_normalize(b)
    if place in ("real", "oo") or (isinstance(place, Place) and place.kind == "real"):
        return LocalInvariant(1 if ai < 0 and bi < 0 else 0, 2)
    p = place.p if isinstance(place, Place) else int(place)
    if p == 2:
        alpha, u = _split_pow(ai, 2)
        beta, w = _split_pow(bi, 2)
        eps = ((u - 1) // 2) * ((w - 1) // 2)
        eps += alpha * ((w * w - 1) // 8) + beta * ((u * u - 1) // 8)
        return LocalInvariant(eps % 2, 2)
    alpha, u = _split_pow(ai, p)
    beta, w = _split_pow(bi, p)
    sign = 1
    if (alpha * beta) % 2 and p % 4 == 3:
        sign = -sign
    if alpha % 2:
        sign *= 1 if pow(w % p, (p - 1) // 2, p) == 1 else -1
    if beta % 2:
        sign *= 1 if pow(u % p, (p - 1) // 2, p) == 1 else -1
    return LocalInvariant(0 if sign == 1 else 1, 2)


def _split_pow(n: int, p: int):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


# ---------------------------------------------------------------------------
# Global symbols


def symbol_global(a, b, n, wild="reject", zeta=None):
    """The global norm-residue symbol <a, b>_n as a Brauer class.

    n = 2 is over Q (support: odd primes of a, b plus 2 and the real place);
    n = 3 is over Q(w) (tame support from the factorizations; the wild place
    is certified trivial by a cube certificate on either slot, or rejected,
    or - for wild="complete" - filled in by the reciprocity law and flagged).
    n = 9 over Q(w) is local-only: all support must satisfy q = 1 mod 9 and
    the class makes no reciprocity claim.

    For n in {2, 3} the invariants must sum to 0; failure aborts, since it
    signals a symbol-convention bug, not a mathematical possibility.
    """
    from . import brauer

    if n == 2:
        fa, _ = rational_factor_fractional(a)
        fb, _ = rational_factor_fractional(b)
        places = sorted({p for p, _ in fa} | {p for p, _ in fb} | {2})
        invariants = {}
        for p in places:
            inv = hilbert2_local(a, b, rational_place(p))
            if not inv.is_zero():
                invariants[rational_place(p)] = inv
        inv = hilbert2_local(a, b, REAL_PLACE)
        if not inv.is_zero():
            invariants[REAL_PLACE] = inv
        cls = brauer.BrauerClass(QQ, invariants, global_checked=True)
        if not brauer.reciprocity_check(cls):
            raise SymbolError("quadratic reciprocity failed: symbol convention bug")
        return cls
    if n == 3:
        fa, _ = eis_factor_fractional(as_eis(a))
        fb, _ = eis_factor_fractional(as_eis(b))
        support = {}
        for prime, _e in list(fa) + list(fb):
            v = _place_of_prime(prime)
            support[str(v)] = v
        invariants = {}
        wild_note = None
        for v in support.values():
            if v == WILD_PLACE:
                continue
            inv = tame_symbol(a, b, v, 3, zeta)
            if not inv.is_zero():
                invariants[v] = inv
        if is_nth_power_local(a, WILD_PLACE, 3) or is_nth_power_local(b, WILD_PLACE, 3):
            wild_note = "certified-zero"
        elif wild == "reject":
            raise SymbolError(
                "uncertified wild support: neither slot is a cube at (1-w)"
            )
        else:
            total = LocalInvariant(0, 3)
            for inv in invariants.values():
                total = total + inv
            if not total.is_zero():
                invariants[WILD_PLACE] = -total
            wild_note = "reciprocity-completed"
        cls = brauer.BrauerClass(
            QW, invariants, global_checked=True, wild_provenance=wild_note
        )
        if not brauer.reciprocity_check(cls):
            raise SymbolError("cubic reciprocity failed: symbol convention bug")
        return cls
    if n == 9:
        fa, _ = eis_factor_fractional(as_eis(a))
        fb, _ = eis_factor_fractional(as_eis(b))
        support = {}
        for prime, _e in list(fa) + list(fb):
            v = _place_of_prime(prime)
            support[str(v)] = v
        invariants = {}
        for v in support.values():
            if (v.q - 1) % 9 != 0:
                raise SymbolError(f"level 9 is not tame at {v} (q = {v.q})")
            inv = tame_symbol(a, b, v, 9, zeta)
            if not inv.is_zero():
                invariants[v] = inv
        return brauer.BrauerClass(QW, invariants, global_checked=False)
    raise SymbolError(f"unsupported symbol level {n}")


def _place_of_prime(prime):
    from .arith import eis_place

    return eis_place(prime)
