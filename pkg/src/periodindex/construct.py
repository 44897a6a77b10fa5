"""The construction engine.

Prime-pair searches under the splitting conditions, the index-certificate
builders, the Galois action and norm machinery for the corestriction route,
the difference sequence of locally trivial classes, and the totally ramified
splitting plan.  Every certificate separates machine-checked premises from
theorem-supplied deductions and trusted-external catalog data, and verifying
a certificate rebuilds all machine-checked content bit-exactly.

Shipped configuration: P = 3, K = Q(w) for the single-pair route and
K = Q with splitting field Q(w) for the sequence route, both on the Fermat
cubic catalog curve.
"""

from __future__ import annotations

import json

from .arith import (
    QW,
    WILD_PLACE,
    ArithmeticError_,
    Place,
    as_eis,
    eis_place,
    factor_int,
    format_eis,
    is_nth_power_local,
    iter_primes,
    parse_eis,
    power_residue_order,
    split_prime_above,
    valuation,
)
from .brauer import BrauerClass, restrict_class
from .elliptic import (
    CurveDatum,
    get_curve,
    is_good_place,
    nine_split_report,
    weil_pairing,
)
from .obstruction import KummerClass, delta, phi, phi_inv
from .symbols import tame_symbol

CERT_VERSION = 1


class ConstructionError(Exception):
    pass


class ExhaustionError(Exception):
    """The scan range was exhausted; carries the diagnostic report."""

    def __init__(self, report):
        super().__init__(report.get("message", "search exhausted"))
        self.report = report


class InconclusiveError(Exception):
    """A test failed to discriminate; reported, never guessed."""


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def _check_level(P: int):
    fac = factor_int(P)
    if len(fac) != 1:
        raise ConstructionError(
            f"P = {P} is not a prime power: decompose first (the index of a sum "
            "of coprime-order classes is the product of the indices)"
        )


def _proper_divisors(P: int) -> list:
    (p, a), = factor_int(P).items()
    return [p ** i for i in range(a)]


# ---------------------------------------------------------------------------
# Splitting conditions SC1-SC4 (single pair over K = Q(w))


def _sc3_places(E: CurveDatum):
    places = {str(w): w for w in E.bad_places}
    places[str(WILD_PLACE)] = WILD_PLACE
    return [places[k] for k in sorted(places)]


def _sc1_evidence(tag, gen):
    return {
        "condition": "SC1",
        "element": tag,
        "generator": format_eis(gen),
        "principal": True,
        "positivity": "vacuous (totally complex field)",
    }


def check_sc(pi, pi_prime, E: CurveDatum, P: int = 3):
    """Check SC1-SC4 for the pair (pi, pi_prime); every record re-checkable.

    SC1 holds by construction (class number one; positivity vacuous), SC2 is
    the nine-division splitting test at v, SC3 are cube certificates at the
    bad places and the wild place, SC4 is the power-residue order of
    pi_prime at v.  Failures are named with their witness.
    """
    _check_level(P)
    if P != E.level:
        raise ConstructionError(f"P = {P} does not match the catalog level of {E.id}")
    pi = parse_eis(pi)
    pi_prime = parse_eis(pi_prime)
    v = eis_place(pi)
    v_prime = eis_place(pi_prime)
    if v == v_prime:
        raise ConstructionError("pi and pi_prime must generate distinct places")
    for place, tag in ((v, "pi"), (v_prime, "pi_prime")):
        if not is_good_place(E, place) or place.p == 3:
            raise ConstructionError(f"{tag} must be a good place coprime to P")
    evidence = []
    failures = []
    evidence.append(_sc1_evidence("pi", v.gen))
    evidence.append(_sc1_evidence("pi_prime", v_prime.gen))
    rep = nine_split_report(E, v)
    rep = {"condition": "SC2", "element": "pi", **rep}
    evidence.append(rep)
    if not rep["splits"]:
        failures.append({"condition": "SC2", "witness": {"place": str(v), "count": rep["count"]}})
    for tag, gen in (("pi", pi), ("pi_prime", pi_prime)):
        for w in _sc3_places(E):
            ok = is_nth_power_local(gen, w, P)
            evidence.append(
                {
                    "condition": "SC3",
                    "element": tag,
                    "place": str(w),
                    "is_nth_power": ok,
                }
            )
            if not ok:
                failures.append(
                    {"condition": "SC3", "witness": {"element": tag, "place": str(w)}}
                )
    order = power_residue_order(pi_prime, v, P)
    evidence.append(
        {"condition": "SC4", "element": "pi_prime", "place": str(v), "order": order}
    )
    if order != P:
        failures.append({"condition": "SC4", "witness": {"order": order}})
    return {"passed": not failures, "evidence": evidence, "failures": failures}


def search_prime_pair(E: CurveDatum, P: int, bound: int, seed: int = 0):
    """Deterministic scan for the first (seed-indexed) pair satisfying SC1-SC4.

    Pairs are enumerated lexicographically by (N(pi), N(pi_prime)) over
    unit-normalized generators; the seed skips that many certified pairs, so
    the same (P, bound, seed) always yields the same certificate.
    """
    _check_level(P)
    if P != 3 or E.field is not QW:
        raise ConstructionError("the pair search ships for P = 3 over Q(w)")
    sc3p = _sc3_places(E)
    gens = []
    for p in iter_primes(bound):
        if p % 3 != 1:
            continue
        gens.extend(split_prime_above(p))
    sc3_cache = {}
    sc2_cache = {}

    def sc3_ok(g):
        key = g.coords()
        if key not in sc3_cache:
            sc3_cache[key] = all(is_nth_power_local(g, w, P) for w in sc3p)
        return sc3_cache[key]

    def sc2_ok(v):
        if v.p not in sc2_cache:
            from .elliptic import splits_in_nine_division_field

            sc2_cache[v.p] = splits_in_nine_division_field(E, v)
        return sc2_cache[v.p]

    skipped = 0
    tried = []
    for g in gens:
        v = eis_place(g)
        if not sc3_ok(g):
            tried.append({"candidate": format_eis(g), "first_failure": "SC3"})
            continue
        if v.q % 9 != 1 or not sc2_ok(v):
            tried.append({"candidate": format_eis(g), "first_failure": "SC2"})
            continue
        for g2 in gens:
            v2 = eis_place(g2)
            if v2 == v:
                continue
            if not sc3_ok(g2):
                continue
            if power_residue_order(g2, v, P) != P:
                continue
            if skipped < seed:
                skipped += 1
                continue
            report = check_sc(g, g2, E, P)
            if not report["passed"]:
                raise AssertionError("scan and checker disagree")
            return {
                "kind": "prime-pair",
                "version": CERT_VERSION,
                "field": "Q(w)",
                "curve_id": E.id,
                "P": P,
                "pi": format_eis(g),
                "pi_prime": format_eis(g2),
                "search": {"bound": bound, "seed": seed},
                "evidence": report["evidence"],
            }
    raise ExhaustionError(
        {
            "message": f"no certified pair with norms below {bound}",
            "scanned_norm_bound": bound,
            "seed": seed,
            "pairs_skipped": skipped,
            "candidates": tried[:200],
        }
    )


# ---------------------------------------------------------------------------
# The single-pair route: class, period, index certificate


def build_theorem1_class(cert: dict, D: int) -> KummerClass:
    """xi = Phi(pi^(P/D), pi_prime) for D | P."""
    P = cert["P"]
    if D <= 0 or P % D:
        raise ConstructionError(f"D = {D} does not divide P = {P}")
    E = get_curve(cert["curve_id"])
    pi = parse_eis(cert["pi"])
    pi_prime = parse_eis(cert["pi_prime"])
    return phi(pi ** (P // D), pi_prime, P, E)


def period_of(xi: KummerClass, cert: dict):
    """Period of the image of xi in the Weil-Chatelet group, with premises.

    Each proper divisor P' of P is excluded by the ramification of P'*xi at
    v' (a Kummer image of a point would be unramified there: good reduction,
    residue characteristic prime to P; trusted-external reduction theory).
    """
    P = xi.level
    if xi.is_zero():
        return {"value": 1, "premises": [{"note": "zero class"}]}
    v_prime = eis_place(parse_eis(cert["pi_prime"]))
    premises = [
        {
            "status": "trusted-external",
            "claim": "Kummer images of local points are unramified at good places "
            "of residue characteristic prime to P (standard reduction theory)",
        }
    ]
    for Pp in _proper_divisors(P):
        cls = xi.smul(Pp)
        va = valuation(cls.a, v_prime) % P
        vb = valuation(cls.b, v_prime) % P
        if va == 0 and vb == 0:
            raise InconclusiveError(
                f"ramification test cannot exclude period {Pp}: "
                f"{Pp}*xi is unramified at {v_prime}"
            )
        premises.append(
            {
                "status": "machine-checked",
                "claim": f"period does not divide {Pp}",
                "detail": {
                    "divisor": Pp,
                    "ramified_at": str(v_prime),
                    "slot_valuations_mod_P": [va, vb],
                },
            }
        )
    premises.append(
        {"status": "machine-checked", "claim": f"class has level {P}, so period divides {P}"}
    )
    return {"value": P, "premises": premises}


def certify_index_theorem1(xi: KummerClass, cert: dict, D: int) -> dict:
    """Emit the period/support/index certificate for the single-pair class."""
    E = xi.curve
    P = xi.level
    if D <= 0 or P % D:
        raise ConstructionError(f"D = {D} does not divide P = {P}")
    v = eis_place(parse_eis(cert["pi"]))
    v_prime = eis_place(parse_eis(cert["pi_prime"]))
    dcls = delta(xi, wild="reject")  # SC3 certifies the wild invariant zero
    allowed = {str(v), str(v_prime)}
    extra = [str(w) for w in dcls.support() if str(w) not in allowed]
    if extra:
        raise ConstructionError(f"obstruction supported outside {{v, v'}}: {extra}")
    period = period_of(xi, cert)
    # triviality of xi itself at the bad places (kills eta there)
    bad_trivial = []
    for w in _sc3_places(E):
        ok = is_nth_power_local(xi.a, w, P) and is_nth_power_local(xi.b, w, P)
        if not ok:
            raise ConstructionError(f"SC3 premise failed at {w} on the built class")
        bad_trivial.append(str(w))
    inv_v = dcls.invariant_at(v)
    inv_vp = dcls.invariant_at(v_prime)
    if inv_v.order() != D:
        raise ConstructionError(
            f"local obstruction order at v is {inv_v.order()}, expected D = {D}"
        )
    upper_ok = dcls.scale(D).is_zero()
    if not upper_ok:
        raise ConstructionError("D * Delta(xi) != 0: upper bound premise failed")
    index_value = P * D
    ledger = [
        {
            "status": "machine-checked",
            "claim": f"Delta(xi) is supported inside {{{v}, {v_prime}}}",
            "detail": {
                "support": [str(w) for w in dcls.support()],
                "wild": dcls.wild_provenance,
            },
        },
        {
            "status": "machine-checked",
            "claim": "xi restricts to zero at every bad place (cube certificates)",
            "detail": {"places": bad_trivial},
        },
        {
            "status": "trusted-external",
            "claim": "at good places outside the support, unramified classes die in "
            "the Weil-Chatelet group (restriction to the maximal unramified "
            "extension is injective)",
        },
        {
            "status": "machine-checked",
            "claim": f"local obstruction order at v is {D}",
            "detail": {
                "v": {"place": str(v), "num": inv_v.num, "den": inv_v.den},
                "v_prime": {"place": str(v_prime), "num": inv_vp.num, "den": inv_vp.den},
            },
        },
        {
            "status": "machine-checked",
            "claim": f"D * Delta(xi) = 0, so the index divides P*D = {index_value}",
        },
        {
            "status": "theorem-supplied",
            "claim": f"index is at least P*D (duality: a smaller index forces the "
            f"obstruction to vanish at {v} against the order-{D} local symbol, "
            "via reciprocity and the local Hasse principle)",
            "machine_premises": ["SC2 (nine-division splitting at v)", "SC4 (order at v)"],
        },
        {
            "status": "trusted-external",
            "claim": "Mordell-Weil description of the catalog curve",
            "detail": cert_mw_note(E),
        },
    ]
    if D == 1:
        ledger[4] = {
            "status": "machine-checked",
            "claim": "Delta(xi) = 0, so some Kummer lift has vanishing obstruction "
            f"and the index equals the period {P}",
        }
        ledger[5] = {
            "status": "machine-checked",
            "claim": f"period {P} divides the index",
        }
    if not (index_value % P == 0 and P * P % index_value == 0):
        raise AssertionError("index certificate violates P | I | P^2")
    out = {
        "kind": "index-theorem1",
        "version": CERT_VERSION,
        "field": "Q(w)",
        "curve_id": E.id,
        "P": P,
        "D": D,
        "pi": cert["pi"],
        "pi_prime": cert["pi_prime"],
        "evidence": cert["evidence"],
        "class": {"a": format_eis(xi.a), "b": format_eis(xi.b)},
        "delta": {
            "support": [str(w) for w in dcls.support()],
            "invariants": dcls.to_json()["invariants"],
            "wild": dcls.wild_provenance,
        },
        "period": period,
        "index": {"value": index_value, "ledger": ledger},
    }
    return out


def cert_mw_note(E: CurveDatum):
    return {"structure": list(E.mw_structure), "citation": E.mw_citation}


# ---------------------------------------------------------------------------
# Galois action and the norm (res o cores) machinery


class GaloisAction:
    """Gal(K_P/K) acting on E[P] through matrices over Z/P.

    The matrix columns express sigma(S), sigma(T) in the basis (S, T), read
    off the exhaustive torsion table; sigma -> M_sigma is checked to be a
    homomorphism with det compatible with the action on zeta.
    """

    def __init__(self, E: CurveDatum):
        if E.field is not QW or E.level != 3:
            raise ConstructionError("Galois action ships for Q(w)/Q at level 3")
        self.curve = E
        P = E.level
        table = {}
        for i in range(P):
            for j in range(P):
                pt = E.add(E.mul(i, E.S), E.mul(j, E.T))
                table[_ptkey(pt)] = (i, j)
        sS = table[_ptkey(E.conj_point(E.S))]
        sT = table[_ptkey(E.conj_point(E.T))]
        i, k = sS
        j, l = sT
        self.elements = ("1", "sigma")
        self.matrices = {"1": ((1, 0), (0, 1)), "sigma": ((i, j), (k, l))}
        self.dets = {g: (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % P for g, m in self.matrices.items()}
        self.P = P
        self._self_check()

    def _self_check(self):
        E = self.curve
        P = self.P
        m = self.matrices["sigma"]
        sq = _matmul(m, m, P)
        if sq != ((1, 0), (0, 1)):
            raise ConstructionError("sigma -> M_sigma is not a homomorphism (M^2 != I)")
        if self.dets["sigma"] == 0:
            raise ConstructionError("M_sigma is singular")
        # det compatibility with the Weil pairing: e(sS, sT) = zeta^det
        lhs = weil_pairing(E, E.conj_point(E.S), E.conj_point(E.T), P)
        if lhs != E.zeta ** self.dets["sigma"]:
            raise ConstructionError("det M_sigma is incompatible with e_P")

    def apply(self, g, x):
        x = as_eis(x)
        return x if g == "1" else x.conj()

    def to_json(self):
        return {
            "elements": list(self.elements),
            "matrices": {g: [list(r) for r in m] for g, m in self.matrices.items()},
            "dets": dict(self.dets),
        }


def _ptkey(P):
    return "O" if P is None else (str(P[0]), str(P[1]))


def _matmul(A, B, P):
    return (
        (
            (A[0][0] * B[0][0] + A[0][1] * B[1][0]) % P,
            (A[0][0] * B[0][1] + A[0][1] * B[1][1]) % P,
        ),
        (
            (A[1][0] * B[0][0] + A[1][1] * B[1][0]) % P,
            (A[1][0] * B[0][1] + A[1][1] * B[1][1]) % P,
        ),
    )


def galois_action(E: CurveDatum) -> GaloisAction:
    return GaloisAction(E)


def nm_corestrict(theta: KummerClass, act: GaloisAction) -> KummerClass:
    """res o cores on pairs, exactly as the explicit norm product displays:

        Nm Phi(a,b) = Phi( prod_g g(a)^i(g) g(b)^j(g),  prod_g g(a)^k(g) g(b)^l(g) ).

    This follows the displayed product verbatim (no det twist); the
    galois_invariance_report is the arbiter for the det discrepancy.
    """
    a, b = theta.pair()
    P = act.P
    A = as_eis(1)
    B = as_eis(1)
    for g in act.elements:
        (i, j), (k, l) = act.matrices[g]
        ga, gb = act.apply(g, a), act.apply(g, b)
        A = A * ga ** (i % P) * gb ** (j % P)
        B = B * ga ** (k % P) * gb ** (l % P)
    return phi(A, B, P, theta.curve)


def _nm_det_twisted(theta: KummerClass, act: GaloisAction) -> KummerClass:
    # the action-formula variant: exponents M_g / det M_g
    a, b = theta.pair()
    P = act.P
    A = as_eis(1)
    B = as_eis(1)
    for g in act.elements:
        dinv = pow(act.dets[g], -1, P)
        (i, j), (k, l) = [[e * dinv % P for e in row] for row in act.matrices[g]]
        ga, gb = act.apply(g, a), act.apply(g, b)
        A = A * ga ** i * gb ** j
        B = B * ga ** k * gb ** l
    return phi(A, B, P, theta.curve)


def _conjugate_class(theta: KummerClass, act: GaloisAction) -> KummerClass:
    """theta^sigma via the twisted action formula Phi(M/det (sa, sb))."""
    a, b = theta.pair()
    P = act.P
    dinv = pow(act.dets["sigma"], -1, P)
    (i, j), (k, l) = [[e * dinv % P for e in row] for row in act.matrices["sigma"]]
    sa, sb = act.apply("sigma", a), act.apply("sigma", b)
    return phi(sa ** i * sb ** j, sa ** k * sb ** l, P, theta.curve)


def galois_invariance_report(theta: KummerClass, act: GaloisAction) -> dict:
    """Test Nm(theta^sigma) = Nm(theta) for the verbatim product form.

    A failure fires the det-discrepancy report (the det-twisted form is
    evaluated alongside for comparison); nothing is silently patched.
    """
    ts = _conjugate_class(theta, act)
    nm_plain = nm_corestrict(theta, act)
    nm_plain_conj = nm_corestrict(ts, act)
    nm_tw = _nm_det_twisted(theta, act)
    nm_tw_conj = _nm_det_twisted(ts, act)
    plain_ok = nm_plain == nm_plain_conj
    tw_ok = nm_tw == nm_tw_conj
    return {
        "theta": {"a": format_eis(theta.a), "b": format_eis(theta.b)},
        "corollary_form_invariant": plain_ok,
        "det_twisted_form_invariant": tw_ok,
        "discrepancy_report": None
        if plain_ok
        else (
            "Nm(theta^sigma) != Nm(theta) for the displayed product; the "
            "det-twisted action formula "
            + ("is" if tw_ok else "is also not")
            + " Galois-invariant.  The displayed product is kept, per the "
            "recorded convention; local symbol orders are unaffected."
        ),
    }


# ---------------------------------------------------------------------------
# The corestriction route: the difference sequence over K = Q, K_P = Q(w)


def _conjugate_place(v: Place) -> Place:
    return eis_place(v.gen.conj())


def _sc_prime_evidence(E, P, tag, gen, p, sc3_bad, earlier, sc2):
    ev = [
        {
            "condition": "SC1'",
            "element": tag,
            "generator": format_eis(gen),
            "principal": True,
            "positivity": "vacuous (totally complex field)",
        },
        {"condition": "SC5'", "element": tag, "p": p, "splits_in_K_P": p % 3 == 1},
        {"condition": "SC2'", "element": tag, **sc2},
    ]
    for w, ok in sc3_bad:
        ev.append(
            {"condition": "SC3'", "element": tag, "place": str(w), "is_nth_power": ok}
        )
    for w, ok in earlier:
        ev.append(
            {
                "condition": "SC3'",
                "element": tag,
                "place": str(w),
                "earlier_prime": True,
                "is_nth_power": ok,
            }
        )
    return ev


def build_theorem2_sequence(
    r: int,
    S_K=(),
    bound: int = 2_000_000,
    seed: int = 0,
    E: CurveDatum = None,
) -> dict:
    """Build r classes over K = Q by corestriction from K_P = Q(w).

    Inductive scan: each index accumulates cube conditions at all Galois
    conjugates of the earlier primes (SC3'), the nine-division splitting at
    both rational primes below (SC2', both places by design), the order-P
    residue condition with conjugate cube-ness (SC4'), and complete splitting
    in K_P (SC5').  Per index the norm pairs (c, d), (c', d') are computed
    and the branch lemma picks theta; the stored pair (a_n, b_n) represents
    the restriction of the corestriction.
    """
    if r < 0:
        raise ConstructionError("r must be nonnegative")
    E = E or get_curve("fermat3")
    P = E.level
    act = galois_action(E)
    S_K = tuple(sorted(int(p) for p in S_K))
    sc3p = _sc3_places(E)
    from .elliptic import splits_in_nine_division_field

    sc2_cache = {}

    def sc2_ok(p):
        if p not in sc2_cache:
            sc2_cache[p] = splits_in_nine_division_field(E, eis_place(split_prime_above(p)[0]))
        return sc2_cache[p]

    sc3_cache = {}

    def sc3_bad_ok(g):
        key = g.coords()
        if key not in sc3_cache:
            sc3_cache[key] = [(w, is_nth_power_local(g, w, P)) for w in sc3p]
        return sc3_cache[key]

    def candidates():
        for p in iter_primes(bound):
            if p % 9 != 1 or p in S_K:
                continue
            for g in split_prime_above(p):
                yield p, g

    used_places = []  # v_1, v'_1, v_2, ... in construction order
    used_primes = set()
    entries = []
    inv_reports = []
    skip = seed
    for idx in range(1, r + 1):
        earlier = []
        for u in used_places:
            earlier.extend((u, _conjugate_place(u)))
        v_found = None
        for p, g in candidates():
            if p in used_primes:
                continue
            bad = sc3_bad_ok(g)
            if not all(ok for _, ok in bad):
                continue
            earl = [(w, is_nth_power_local(g, w, P)) for w in earlier]
            if not all(ok for _, ok in earl):
                continue
            if not sc2_ok(p):
                continue
            if skip > 0:
                skip -= 1
                continue
            v_found = (p, g, bad, earl)
            break
        if v_found is None:
            raise ExhaustionError(
                {
                    "message": f"no index-{idx} prime v below {bound}",
                    "scanned_norm_bound": bound,
                    "index": idx,
                }
            )
        p_i, pi_i, bad_i, earl_i = v_found
        v_i = eis_place(pi_i)
        vp_found = None
        for p, g in candidates():
            if p in used_primes or p == p_i:
                continue
            bad = sc3_bad_ok(g)
            if not all(ok for _, ok in bad):
                continue
            earl = [(w, is_nth_power_local(g, w, P)) for w in earlier]
            if not all(ok for _, ok in earl):
                continue
            if power_residue_order(g, v_i, P) != P:
                continue
            if not is_nth_power_local(g.conj(), v_i, P):
                continue
            if not sc2_ok(p):
                continue
            vp_found = (p, g, bad, earl)
            break
        if vp_found is None:
            raise ExhaustionError(
                {
                    "message": f"no index-{idx} prime v' below {bound}",
                    "scanned_norm_bound": bound,
                    "index": idx,
                }
            )
        pp_i, pip_i, bad_ip, earl_ip = vp_found
        vp_i = eis_place(pip_i)
        # norm pairs and the branch lemma
        c, d = phi_inv(nm_corestrict(phi(pi_i, 1, P, E), act))
        cp, dp = phi_inv(nm_corestrict(phi(1, pip_i, P, E), act))
        inv_cd = tame_symbol(c, d, v_i, P, E.zeta) if d != 1 or c != 1 else None
        order_cd = inv_cd.order() if inv_cd is not None else 1
        if order_cd == P:
            branch = "Phi(pi, 1)"
            a_n, b_n = c, d
        else:
            branch = "Phi(pi, pi')"
            a_n, b_n = c * cp, d * dp
        pair_cls = phi(a_n, b_n, P, E)
        theta = phi(pi_i, pip_i, P, E) if branch == "Phi(pi, pi')" else phi(pi_i, 1, P, E)
        inv_reports.append(galois_invariance_report(theta, act))
        sc2_i = nine_split_report(E, eis_place(split_prime_above(p_i)[0]))
        sc2_ip = nine_split_report(E, eis_place(split_prime_above(pp_i)[0]))
        ev = _sc_prime_evidence(E, P, "pi", pi_i, p_i, bad_i, earl_i, sc2_i)
        ev += _sc_prime_evidence(E, P, "pi_prime", pip_i, pp_i, bad_ip, earl_ip, sc2_ip)
        ev.append(
            {
                "condition": "SC4'",
                "element": "pi_prime",
                "place": str(v_i),
                "order": power_residue_order(pip_i, v_i, P),
                "conjugate_is_nth_power": is_nth_power_local(pip_i.conj(), v_i, P),
            }
        )
        entries.append(
            {
                "index": idx,
                "p": p_i,
                "pi": format_eis(pi_i),
                "p_prime": pp_i,
                "pi_prime": format_eis(pip_i),
                "branch": branch,
                "branch_order": order_cd,
                "norm_pairs": {
                    "c": format_eis(c),
                    "d": format_eis(d),
                    "c_prime": format_eis(cp),
                    "d_prime": format_eis(dp),
                },
                "a": format_eis(pair_cls.a),
                "b": format_eis(pair_cls.b),
                "evidence": ev,
            }
        )
        used_places.extend([v_i, vp_i])
        used_primes.update({p_i, pp_i})
    return {
        "kind": "sequence-theorem2",
        "version": CERT_VERSION,
        "base_field": "Q",
        "splitting_field": "Q(w)",
        "curve_id": E.id,
        "P": P,
        "r": r,
        "S_K": list(S_K),
        "search": {"bound": bound, "seed": seed},
        "galois_action": act.to_json(),
        "invariance_reports": inv_reports,
        "entries": entries,
    }


def check_difference_order(bundle: dict, i: int, j: int) -> dict:
    """Machine-check that Delta(res(xi_i - xi_j)) has order P at v_min.

    Evaluates the symbol of (a_i/a_j, b_i/b_j) at the v place of the smaller
    index, both directly and through the four-term bilinear expansion whose
    unit-unit terms the SC3' certificates force to vanish; order != P aborts.
    """
    if i == j:
        raise ConstructionError("difference of an entry with itself is the zero class")
    E = get_curve(bundle["curve_id"])
    P = bundle["P"]
    by_index = {e["index"]: e for e in bundle["entries"]}
    if i not in by_index or j not in by_index:
        raise ConstructionError(f"bundle has no entries {i}, {j}")
    em = by_index[min(i, j)]
    ei, ej = by_index[i], by_index[j]
    v_m = eis_place(parse_eis(em["pi"]))
    ai, bi = parse_eis(ei["a"]), parse_eis(ei["b"])
    aj, bj = parse_eis(ej["a"]), parse_eis(ej["b"])
    direct = tame_symbol(ai / aj, bi / bj, v_m, P, E.zeta)
    t_ii = tame_symbol(ai, bi, v_m, P, E.zeta)
    t_ij = tame_symbol(ai, bj, v_m, P, E.zeta)
    t_ji = tame_symbol(aj, bi, v_m, P, E.zeta)
    t_jj = tame_symbol(aj, bj, v_m, P, E.zeta)
    expansion = t_ii - t_ij - t_ji + t_jj
    if direct != expansion:
        raise ConstructionError("four-term expansion disagrees with the direct symbol")
    # at v_m only the term of the smaller index survives: the others are
    # unit-unit symbols or are killed by the SC3' cube certificates
    m, n = (i, j) if i < j else (j, i)
    vanishing = (
        (f"<a_{m},b_{n}>", t_ij if m == i else t_ji),
        (f"<a_{n},b_{m}>", t_ji if m == i else t_ij),
        (f"<a_{n},b_{n}>", t_jj if m == i else t_ii),
    )
    unit_terms = []
    for name, val in vanishing:
        unit_terms.append({"term": name, "num": val.num, "den": val.den, "zero": val.is_zero()})
        if not val.is_zero():
            raise ConstructionError(f"{name} does not vanish at {v_m}")
    if direct.order() != P:
        raise ConstructionError(
            f"difference class has local order {direct.order()} at {v_m}, expected {P}"
        )
    ledger = [
        {
            "status": "machine-checked",
            "claim": f"Delta(res(xi_{i} - xi_{j})) has order {P} at {v_m}",
            "detail": {"num": direct.num, "den": direct.den},
        },
        {
            "status": "machine-checked",
            "claim": "four-term bilinear expansion matches; unit-unit and SC3'-"
            "certified terms vanish",
            "detail": unit_terms,
        },
        {
            "status": "machine-checked",
            "claim": "SC2' nine-division splitting at the rational primes below",
            "detail": {"p_i": by_index[min(i, j)]["p"], "p_j": by_index[max(i, j)]["p"]},
        },
        {
            "status": "theorem-supplied",
            "claim": f"duality at the place below {v_m} forces D = {P}, hence the "
            f"difference has index {P * P} and (by P | I | P^2) period {P}",
        },
    ]
    return {
        "kind": "difference-order",
        "version": CERT_VERSION,
        "curve_id": bundle["curve_id"],
        "P": P,
        "i": i,
        "j": j,
        "place": str(v_m),
        "local_invariant": {"num": direct.num, "den": direct.den},
        "period": {"value": P},
        "index": {"value": P * P, "ledger": ledger},
    }


# ---------------------------------------------------------------------------
# The totally ramified splitting plan


def splitting_plan_theorem3(bundle: dict, r: int = None) -> dict:
    """The local specification of a degree-P extension splitting the classes.

    S is the union of the infinite places, the places dividing P and the bad
    places; the classes' supports S_r must avoid it.  At every support place
    the plan imposes a totally ramified degree-P extension, and restrict_class
    verifies that the scaled invariants all die (ramification-index rule);
    distinctness premises are re-verified by the difference checks.  Global
    existence of the extension is weak approximation (theorem-supplied).
    """
    E = get_curve(bundle["curve_id"])
    P = bundle["P"]
    entries = bundle["entries"] if r is None else bundle["entries"][:r]
    r = len(entries)
    S = sorted({"oo"} | {str(w.p) for w in _sc3_places(E)})
    support_classes = []
    rational_support = set()
    for e in entries:
        cls = delta(phi(parse_eis(e["a"]), parse_eis(e["b"]), P, E), wild="reject")
        support_classes.append((e["index"], cls))
        rational_support.update(w.p for w in cls.support())
    overlap = {str(p) for p in rational_support} & set(S)
    if overlap:
        raise ConstructionError(f"class support meets the excluded set S: {overlap}")
    plan = [
        {"place": p, "ramification_index": P, "local_extension": "totally ramified"}
        for p in sorted(rational_support)
    ]
    killed = []
    for idx, cls in support_classes:
        degrees = {w: P for w in cls.support()}
        res = restrict_class(cls, degrees)
        killed.append(
            {
                "index": idx,
                "support": [str(w) for w in cls.support()],
                "restricted_is_zero": res.is_zero(),
            }
        )
        if not res.is_zero():
            raise ConstructionError("restriction failed to kill a support invariant")
    distinct = []
    for a in range(len(entries)):
        for b in range(a + 1, len(entries)):
            rep = check_difference_order(bundle, entries[a]["index"], entries[b]["index"])
            distinct.append(
                {
                    "pair": [entries[a]["index"], entries[b]["index"]],
                    "local_order": rep["local_invariant"],
                    "place": rep["place"],
                }
            )
    return {
        "kind": "splitting-plan",
        "version": CERT_VERSION,
        "curve_id": bundle["curve_id"],
        "P": P,
        "r": r,
        "excluded_set_S": S,
        "plan": plan,
        "restriction_checks": killed,
        "distinctness_checks": distinct,
        "global_extension": {
            "status": "theorem-supplied",
            "claim": "a degree-P global extension realizing the plan exists by "
            "weak approximation / Krasner",
        },
    }


# ---------------------------------------------------------------------------
# Certificate verification


def verify_certificate(data: dict) -> tuple[bool, str]:
    """Re-run every machine-checked computation and compare bit-exactly.

    Accepts exactly the outputs of the pipeline builders; anything else is a
    verification failure, not a usage error.
    """
    try:
        kind = data.get("kind")
        if kind == "prime-pair":
            E = get_curve(data["curve_id"])
            report = check_sc(data["pi"], data["pi_prime"], E, data["P"])
            rebuilt = dict(data)
            rebuilt["evidence"] = report["evidence"]
            if not report["passed"]:
                return False, "conditions no longer hold"
            return _bitcmp(data, rebuilt)
        if kind == "index-theorem1":
            E = get_curve(data["curve_id"])
            pair = {
                "kind": "prime-pair",
                "version": data["version"],
                "field": data["field"],
                "curve_id": data["curve_id"],
                "P": data["P"],
                "pi": data["pi"],
                "pi_prime": data["pi_prime"],
                "search": None,
                "evidence": data["evidence"],
            }
            report = check_sc(data["pi"], data["pi_prime"], E, data["P"])
            if not report["passed"]:
                return False, "SC conditions failed on re-check"
            if report["evidence"] != data["evidence"]:
                return False, "evidence mismatch"
            xi = build_theorem1_class(pair, data["D"])
            rebuilt = certify_index_theorem1(xi, pair, data["D"])
            return _bitcmp(data, rebuilt)
        if kind == "sequence-theorem2":
            rebuilt = _reverify_sequence(data)
            return _bitcmp(data, rebuilt)
        if kind == "difference-order":
            return False, "difference certificates verify through their bundle"
        if kind == "difference-order-bundle":
            bundle = data["bundle"]
            okb, msg = verify_certificate(bundle)
            if not okb:
                return False, f"embedded bundle failed: {msg}"
            rebuilt = dict(data)
            rebuilt["check"] = check_difference_order(bundle, data["i"], data["j"])
            return _bitcmp(data, rebuilt)
        if kind == "splitting-plan":
            return False, "splitting plans verify through their bundle"
        if kind in (
            "symbol",
            "kummer-class",
            "local-solve",
            "reciprocity-suite",
            "splitting-plan-bundle",
        ):
            from . import cli

            return cli.reverify_simple(data)
        return False, f"unknown certificate kind {kind!r}"
    except Exception as exc:  # verification must be total
        return False, f"re-verification error: {exc}"


def _reverify_sequence(data: dict) -> dict:
    """Recompute a sequence bundle from its stored primes (no re-search)."""
    E = get_curve(data["curve_id"])
    P = data["P"]
    act = galois_action(E)
    if act.to_json() != data["galois_action"]:
        raise ConstructionError("galois action mismatch")
    if data["r"] != len(data["entries"]):
        raise ConstructionError("entry count does not match r")
    if any(e["p"] in data["S_K"] or e["p_prime"] in data["S_K"] for e in data["entries"]):
        raise ConstructionError("an entry prime lies in the excluded set S_K")
    if len({e["p"] for e in data["entries"]} | {e["p_prime"] for e in data["entries"]}) != 2 * len(
        data["entries"]
    ):
        raise ConstructionError("entry primes are not pairwise distinct")
    used_places = []
    entries = []
    inv_reports = []
    for e in data["entries"]:
        earlier = []
        for u in used_places:
            earlier.extend((u, _conjugate_place(u)))
        pi_i = parse_eis(e["pi"])
        pip_i = parse_eis(e["pi_prime"])
        p_i, pp_i = e["p"], e["p_prime"]
        v_i = eis_place(pi_i)
        vp_i = eis_place(pip_i)
        bad_i = [(w, is_nth_power_local(pi_i, w, P)) for w in _sc3_places(E)]
        bad_ip = [(w, is_nth_power_local(pip_i, w, P)) for w in _sc3_places(E)]
        earl_i = [(w, is_nth_power_local(pi_i, w, P)) for w in earlier]
        earl_ip = [(w, is_nth_power_local(pip_i, w, P)) for w in earlier]
        if not all(ok for _, ok in bad_i + bad_ip + earl_i + earl_ip):
            raise ConstructionError("SC3' failed on re-check")
        if power_residue_order(pip_i, v_i, P) != P:
            raise ConstructionError("SC4' order failed on re-check")
        if not is_nth_power_local(pip_i.conj(), v_i, P):
            raise ConstructionError("SC4' conjugate cube failed on re-check")
        c, d = phi_inv(nm_corestrict(phi(pi_i, 1, P, E), act))
        cp, dp = phi_inv(nm_corestrict(phi(1, pip_i, P, E), act))
        inv_cd = tame_symbol(c, d, v_i, P, E.zeta) if d != 1 or c != 1 else None
        order_cd = inv_cd.order() if inv_cd is not None else 1
        if order_cd == P:
            branch = "Phi(pi, 1)"
            a_n, b_n = c, d
        else:
            branch = "Phi(pi, pi')"
            a_n, b_n = c * cp, d * dp
        pair_cls = phi(a_n, b_n, P, E)
        theta = phi(pi_i, pip_i, P, E) if branch == "Phi(pi, pi')" else phi(pi_i, 1, P, E)
        inv_reports.append(galois_invariance_report(theta, act))
        sc2_i = nine_split_report(E, eis_place(split_prime_above(p_i)[0]))
        sc2_ip = nine_split_report(E, eis_place(split_prime_above(pp_i)[0]))
        if not (sc2_i["splits"] and sc2_ip["splits"]):
            raise ConstructionError("SC2' failed on re-check")
        ev = _sc_prime_evidence(E, P, "pi", pi_i, p_i, bad_i, earl_i, sc2_i)
        ev += _sc_prime_evidence(E, P, "pi_prime", pip_i, pp_i, bad_ip, earl_ip, sc2_ip)
        ev.append(
            {
                "condition": "SC4'",
                "element": "pi_prime",
                "place": str(v_i),
                "order": power_residue_order(pip_i, v_i, P),
                "conjugate_is_nth_power": is_nth_power_local(pip_i.conj(), v_i, P),
            }
        )
        entries.append(
            {
                "index": e["index"],
                "p": p_i,
                "pi": format_eis(pi_i),
                "p_prime": pp_i,
                "pi_prime": format_eis(pip_i),
                "branch": branch,
                "branch_order": order_cd,
                "norm_pairs": {
                    "c": format_eis(c),
                    "d": format_eis(d),
                    "c_prime": format_eis(cp),
                    "d_prime": format_eis(dp),
                },
                "a": format_eis(pair_cls.a),
                "b": format_eis(pair_cls.b),
                "evidence": ev,
            }
        )
        used_places.extend([v_i, vp_i])
    out = dict(data)
    out["galois_action"] = act.to_json()
    out["invariance_reports"] = inv_reports
    out["entries"] = entries
    return out


def _bitcmp(given: dict, rebuilt: dict) -> tuple[bool, str]:
    if canonical_json(given) == canonical_json(rebuilt):
        return True, "certificate re-verified bit-exactly"
    return False, "certificate does not match its re-computation"
