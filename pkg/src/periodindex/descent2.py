"""Independent P = 2 brute-force oracle over Q.

Conic and quadric-intersection local solvability by exhaustive search with
Hensel-verified lifting, two-covering torsors for curves with full rational
2-torsion, and a sampler for the eight-parameter versal family.  This module
validates the symbol layer against searches and never claims global index
values: the full-level symbol dictionary is not available at P = 2 over Q.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from . import kernels
from .arith import factor_int, is_prime

ENUM_PRIME_CAP = 997
ENUM_EXPONENT_CAP = 6
_PROJ_ENUM_CAP = 2_000_000  # projective points to visit mod p at stage 1
_DEEP_ENUM_CAP = 8_000_000  # tuples to visit in the mod p^k escalation


class Inconclusive(Exception):
    """The enumeration caps were reached without a verified decision."""


def squarefree_part(x) -> int:
    """The squarefree integer representing x modulo nonzero rational squares."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("nonzero value required")
    n = x.numerator * x.denominator
    sign = 1 if n > 0 else -1
    out = sign
    for p, e in factor_int(abs(n)).items():
        if e % 2:
            out *= p
    return out


def conic_local_solvable(a, b, place) -> bool:
    """Does z^2 = a x^2 + b y^2 have a nontrivial solution over Q_p (or R)?

    Decided by exhaustive primitive-solution search modulo p^3 (odd p) or
    2^6, on the squarefree parts; for squarefree coefficients every solution
    found by the unit-normalized slot scans is Hensel-liftable, and every
    true solution reduces to one of them, so the search is a decision
    procedure.  The real place is sign inspection.
    """
    a = squarefree_part(a)
    b = squarefree_part(b)
    if place in ("real", "oo"):
        return a > 0 or b > 0
    p = int(place)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > ENUM_PRIME_CAP:
        raise Inconclusive(f"prime {p} exceeds the enumeration cap {ENUM_PRIME_CAP}")
    if p == 2:
        return bool(kernels.conic_solvable_two(a, b))
    return bool(kernels.conic_solvable_odd(a, b, p))


# ---------------------------------------------------------------------------
# Quadric pairs


class QuadricPair:
    """Two quaternary quadratic forms with rational coefficients.

    Forms are coefficient maps {(i, j): c} with i <= j over the variables
    (0, 1, 2, 3); integer-rescaled copies are used for the mod-p searches.
    """

    def __init__(self, q1, q2, varnames=("x0", "x1", "x2", "x3")):
        if not q1 or not q2:
            raise ValueError("both forms must be nonzero")
        self.q1 = {k: Fraction(v) for k, v in q1.items() if v}
        self.q2 = {k: Fraction(v) for k, v in q2.items() if v}
        self.varnames = tuple(varnames)
        self.iq1 = _integerize(self.q1)
        self.iq2 = _integerize(self.q2)

    def __repr__(self):
        return f"QuadricPair({_form_str(self.q1, self.varnames)}; {_form_str(self.q2, self.varnames)})"

    def to_json(self):
        return {
            "variables": list(self.varnames),
            "q1": [[list(k), str(v)] for k, v in sorted(self.q1.items())],
            "q2": [[list(k), str(v)] for k, v in sorted(self.q2.items())],
        }


def _integerize(form):
    den = 1
    for v in form.values():
        den = den * v.denominator // __import__("math").gcd(den, v.denominator)
    out = {k: int(v * den) for k, v in form.items()}
    g = 0
    for v in out.values():
        g = __import__("math").gcd(g, v)
    return {k: v // g for k, v in out.items()}


def _form_str(form, names):
    parts = []
    for (i, j), c in sorted(form.items()):
        mono = f"{names[i]}^2" if i == j else f"{names[i]}*{names[j]}"
        parts.append(f"{c}*{mono}")
    return " + ".join(parts)


def _eval_form(form, x, m):
    total = 0
    for (i, j), c in form.items():
        total += c * x[i] * x[j]
    return total % m


def _gradient(form, x, m):
    g = [0, 0, 0, 0]
    for (i, j), c in form.items():
        if i == j:
            g[i] += 2 * c * x[i]
        else:
            g[i] += c * x[j]
            g[j] += c * x[i]
    return [v % m for v in g]


def _minor_vals(g1, g2, m):
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            out.append((g1[i] * g2[j] - g1[j] * g2[i]) % m)
    return out


# ---------------------------------------------------------------------------
# Two-covering torsors


def two_covering_torsor(E, ab) -> QuadricPair:
    """The standard 2-covering torsor of y^2 = (x-e1)(x-e2)(x-e3) for (a, b):

        a u^2 - b v^2 = e2 - e1,    a u^2 - ab w^2 = e3 - e1,

    homogenized with t.  Requires distinct roots and squarefree a, b.
    """
    a, b = ab
    if not E.two_torsion_roots or len(set(E.two_torsion_roots)) != 3:
        raise ValueError("curve must have three distinct rational 2-torsion roots")
    if squarefree_part(a) != a or squarefree_part(b) != b:
        raise ValueError("a and b must be squarefree integers")
    e1, e2, e3 = E.two_torsion_roots
    c1 = Fraction(e2) - Fraction(e1)
    c2 = Fraction(e3) - Fraction(e1)
    q1 = {(0, 0): a, (1, 1): -b, (3, 3): -c1}
    q2 = {(0, 0): a, (2, 2): -a * b, (3, 3): -c2}
    return QuadricPair(q1, q2, varnames=("u", "v", "w", "t"))


# ---------------------------------------------------------------------------
# Local solvability of a quadric pair


def torsor_local_solvable(Q: QuadricPair, place) -> bool:
    """Local solvability of the intersection, by exhaustive search.

    Finite places: first a smooth-point scan mod p (a smooth point lifts);
    when every mod-p point is singular, a full primitive enumeration mod p^k
    with the Hensel minor criterion decides or, past the caps, raises
    Inconclusive.  No points mod p^k at all is a proof of unsolvability.
    The real place is interval analysis (diagonal torsor shape).
    """
    if place in ("real", "oo"):
        return _torsor_real_solvable(Q)
    p = int(place)
    if not is_prime(p) or p > ENUM_PRIME_CAP:
        raise Inconclusive(f"place {p} outside the enumeration caps")
    return _pair_solvable_at_p(Q, p)


def _pair_solvable_at_p(Q, p):
    found_any, smooth = _smooth_scan_mod_p(Q, p)
    if smooth:
        return True
    if not found_any:
        return False  # no points mod p at all: no primitive Z_p point exists
    return _deep_scan(Q, p)


def _smooth_scan_mod_p(Q, p):
    """(any point found, smooth point found) over P^3(F_p) on both quadrics."""
    npts = p ** 3 + p ** 2 + p + 1
    if npts > _PROJ_ENUM_CAP:
        raise Inconclusive(f"projective scan mod {p} exceeds the cap")
    found_any = False
    for x in _proj_points(p):
        if _eval_form(Q.iq1, x, p) or _eval_form(Q.iq2, x, p):
            continue
        found_any = True
        minors = _minor_vals(_gradient(Q.iq1, x, p), _gradient(Q.iq2, x, p), p)
        if any(minors):
            return True, True
    return found_any, False


def _proj_points(p):
    # representatives with first nonzero coordinate 1
    for k in range(4):
        head = [0] * k + [1]
        tail = 3 - k
        for rest in range(p ** tail):
            x = head[:]
            r = rest
            for _ in range(tail):
                x.append(r % p)
                r //= p
            yield x


def _deep_scan(Q, p):
    k = ENUM_EXPONENT_CAP if p == 2 else 3
    m = p ** k
    if 4 * m ** 3 > _DEEP_ENUM_CAP:
        raise Inconclusive(
            f"all points singular mod {p} and the mod {p}^{k} enumeration "
            "exceeds the cap"
        )
    found_any = False
    for slot in range(4):
        for rest in range(m ** 3):
            x = []
            r = rest
            for i in range(4):
                if i == slot:
                    x.append(1)
                else:
                    x.append(r % m)
                    r //= m
            if _eval_form(Q.iq1, x, m) or _eval_form(Q.iq2, x, m):
                continue
            found_any = True
            minors = _minor_vals(_gradient(Q.iq1, x, m), _gradient(Q.iq2, x, m), m)
            mv = min((_valp(v, p, k) for v in minors), default=k)
            if k >= 2 * mv + 1:
                return True
    if not found_any:
        return False
    raise Inconclusive(
        f"solutions mod {p}^{k} exist but none is Hensel-liftable at that precision"
    )


def _valp(v, p, cap):
    if v == 0:
        return cap
    out = 0
    while v % p == 0:
        v //= p
        out += 1
    return out


def _torsor_real_solvable(Q):
    """Interval analysis for the diagonal torsor shape."""
    a = Q.q1.get((0, 0))
    b = -Q.q1.get((1, 1), Fraction(0))
    c1 = -Q.q1.get((3, 3), Fraction(0))
    ab = -Q.q2.get((2, 2), Fraction(0))
    c2 = -Q.q2.get((3, 3), Fraction(0))
    if a is None or not b or not ab:
        raise Inconclusive("real analysis implemented for the torsor shape")
    # t = 0 slice: a u^2 = b v^2 and a u^2 = ab w^2 with u != 0
    if a > 0 and b > 0:
        return True
    # t = 1 slice: s = u^2 >= 0 with (a s - c1)/b >= 0 and (a s - c2)/(ab) >= 0
    lo = Fraction(0)
    hi = None  # +infinity
    for coeff, den in ((c1, b), (c2, ab)):
        # constraint (a s - coeff)/den >= 0
        if den > 0:
            if a > 0:
                lo = max(lo, coeff / a)
            elif a < 0:
                h = coeff / a
                hi = h if hi is None else min(hi, h)
            elif coeff > 0:
                return False
        else:
            if a > 0:
                h = coeff / a
                hi = h if hi is None else min(hi, h)
            elif a < 0:
                lo = max(lo, coeff / a)
            elif coeff < 0:
                return False
    return hi is None or lo <= hi


# ---------------------------------------------------------------------------
# The versal family sampler


def versal_pair(ts) -> QuadricPair:
    """The two-quadric model t1 X^2 + t2 Y^2 = Z^2, W^2 = q(X, Y, Z)."""
    if len(ts) != 8:
        raise ValueError("eight parameters required")
    t = [Fraction(v) for v in ts]
    q1 = {(0, 0): t[0], (1, 1): t[1], (2, 2): Fraction(-1)}
    q2 = {
        (0, 0): t[2],
        (0, 1): t[3],
        (0, 2): t[4],
        (1, 1): t[5],
        (1, 2): t[6],
        (2, 2): t[7],
        (3, 3): Fraction(-1),
    }
    if t[0] == 0 or t[1] == 0:
        raise ValueError("degenerate parameters: t1 t2 = 0")
    if not _versal_nondegenerate(t):
        raise ValueError("degenerate parameters: singular branch locus")
    return QuadricPair(q1, q2, varnames=("X", "Y", "Z", "W"))


def _versal_nondegenerate(t) -> bool:
    """Are the four branch points (q1 = 0 = q2|_{W=0}) distinct?

    Project away from the center (s : s^2 : 1) via X -> X + sZ, Y -> Y + s^2 Z
    and take the discriminant of the binary quartic Z-resultant.  A tangency
    gives every projection a double root; for distinct points the bad centers
    lie on the six chords (at most two moment-curve parameters each) or on
    the conic (at most four), so some s in 0..18 certifies distinctness.
    """
    for s in range(19):
        if _branch_disc(t, Fraction(s)) != 0:
            return True
    return False


def _branch_disc(t, s):
    s2 = s * s

    def resultant_at(x, y):
        # coefficients of q1, q2|_{W=0} in Z after X -> x + sZ, Y -> y + s^2 Z
        a2 = t[0] * s * s + t[1] * s2 * s2 - 1
        a1 = 2 * t[0] * s * x + 2 * t[1] * s2 * y
        a0 = t[0] * x * x + t[1] * y * y
        b2 = t[2] * s * s + t[3] * s * s2 + t[4] * s + t[5] * s2 * s2 + t[6] * s2 + t[7]
        b1 = (
            2 * t[2] * s * x
            + t[3] * (s2 * x + s * y)
            + t[4] * x
            + 2 * t[5] * s2 * y
            + t[6] * y
        )
        b0 = t[2] * x * x + t[3] * x * y + t[5] * y * y
        return (a2 * b0 - a0 * b2) ** 2 - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)

    xs = [Fraction(k) for k in range(5)]
    vals = [resultant_at(x, Fraction(1)) for x in xs]
    c0, c1, c2, c3, c4 = _interp_coeffs(xs, vals)
    I = 12 * c4 * c0 - 3 * c3 * c1 + c2 * c2
    J = 72 * c4 * c2 * c0 - 27 * c4 * c1 * c1 - 27 * c3 * c3 * c0 + 9 * c3 * c2 * c1 - 2 * c2 ** 3
    return 4 * I ** 3 - J ** 2


def _interp_coeffs(xs, vals):
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i, (xi, vi) in enumerate(zip(xs, vals)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            denom *= xi - xj
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] -= c * xj
                new[k + 1] += c
            basis = new
        for k, c in enumerate(basis):
            coeffs[k] += vi * c / denom
    return coeffs


def versal_real_status(ts):
    """Sound real-place decision for a versal sample, else None (inconclusive).

    False when the base conic has no real point (t1, t2 < 0); True when a
    rational witness (X:Y:Z) with q2 + |cross| sqrt-term >= 0 certifies one.
    """
    t = [Fraction(v) for v in ts]
    if t[0] < 0 and t[1] < 0:
        return False
    # Y = 0 slice: q2(1, 0, z) with z^2 = t1: value A + B z, A = t3 + t8 t1, B = t5
    if t[0] > 0:
        A = t[2] + t[7] * t[0]
        B = t[4]
        if A >= 0 or B * B * t[0] >= A * A:
            return True
    # rational grid on the Y = 1 slice: certify A(X) + |B(X)| sqrt(D(X)) >= 0
    for num in range(-12, 13):
        for den in (1, 2, 3):
            X = Fraction(num, den)
            D = t[0] * X * X + t[1]
            if D < 0:
                continue
            A = t[2] * X * X + t[3] * X + t[5] + t[7] * D
            B = t[4] * X + t[6]
            if A >= 0 or B * B * D >= A * A:
                return True
    return None


def versal_sample(ts, places) -> dict:
    """Local solvability table of a versal family member over the given places."""
    Q = versal_pair(ts)
    table = []
    all_ok = True
    for pl in places:
        if pl in ("real", "oo"):
            st = versal_real_status(ts)
            status = "inconclusive" if st is None else ("solvable" if st else "unsolvable")
        else:
            try:
                status = "solvable" if _pair_solvable_at_p(Q, int(pl)) else "unsolvable"
            except Inconclusive as exc:
                status = "inconclusive"
        table.append({"place": str(pl), "status": status})
        if status != "solvable":
            all_ok = False
    return {
        "kind": "versal-sample",
        "parameters": [str(Fraction(v)) for v in ts],
        "table": table,
        "everywhere_locally_solvable": all_ok,
    }
