"""Command-line surface: every pipeline stage scriptable, every output
re-verifiable.

JSON goes to standard output (byte-identical for identical request + seed);
diagnostics go to standard error.  Exit codes: 0 success, 1 verification
failure, 2 usage error, 3 exhaustion or inconclusive.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .arith import (
    ArithmeticError_,
    REAL_PLACE,
    WILD_PLACE,
    eis_place,
    is_nth_power_local,
    iter_primes,
    parse_eis,
    rational_place,
    split_prime_above,
)
from .construct import (
    CERT_VERSION,
    ConstructionError,
    ExhaustionError,
    InconclusiveError,
    build_theorem1_class,
    build_theorem2_sequence,
    canonical_json,
    certify_index_theorem1,
    check_difference_order,
    search_prime_pair,
    splitting_plan_theorem3,
    verify_certificate,
)
from .descent2 import (
    Inconclusive,
    conic_local_solvable,
    torsor_local_solvable,
    two_covering_torsor,
    versal_sample,
)
from .elliptic import CatalogError, get_curve, load_catalog
from .obstruction import ObstructionError
from .symbols import SymbolError, hilbert2_local, symbol_global, tame_symbol

USAGE_ERRORS = (
    SymbolError,
    ArithmeticError_,
    ConstructionError,
    CatalogError,
    ObstructionError,
    InconclusiveError,
    ValueError,
    KeyError,
)


def _emit(payload, out=None):
    text = canonical_json(payload)
    sys.stdout.write(text + "\n")
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _parse_place(text, field="Q(w)"):
    if text in ("real", "oo"):
        return REAL_PLACE
    if field == "Q":
        return rational_place(int(text))
    return eis_place(parse_eis(text))


def _check_norm_cap(value, n, cap):
    from fractions import Fraction

    if n == 2:
        x = Fraction(value)
        size = abs(x.numerator * x.denominator)
    else:
        x = parse_eis(value)
        d = x.r.denominator * x.s.denominator
        size = int((x * d).norm()) * d * d
    if size > cap:
        raise ValueError(f"input norm {size} exceeds the cap {cap} (raise --norm-cap)")


# ---------------------------------------------------------------------------
# payload builders (shared by the commands and by verify)


def symbol_payload(n, a, b, place=None):
    out = {
        "kind": "symbol",
        "version": CERT_VERSION,
        "n": n,
        "a": a,
        "b": b,
        "place": place,
    }
    if n == 2:
        av, bv = a, b
        if place is not None:
            inv = hilbert2_local(av, bv, _parse_place(place, "Q"))
            out["invariant"] = {"num": inv.num, "den": inv.den}
        else:
            out["class"] = symbol_global(av, bv, 2).to_json()
    elif n in (3, 9):
        av, bv = parse_eis(a), parse_eis(b)
        if place is not None:
            inv = tame_symbol(av, bv, _parse_place(place), n)
            out["invariant"] = {"num": inv.num, "den": inv.den}
        else:
            out["class"] = symbol_global(av, bv, n).to_json()
    else:
        raise SymbolError(f"unsupported level {n}")
    return out


def _random_eis_element(rng, certified_at_wild):
    split_ps = [p for p in iter_primes(150) if p % 3 == 1]
    inert_ps = [p for p in iter_primes(40) if p % 3 == 2]
    for _ in range(3000):
        val = parse_eis(rng.choice(("1", "-1")))
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.75:
                pi = rng.choice(split_prime_above(rng.choice(split_ps)))
            else:
                pi = parse_eis(str(rng.choice(inert_ps)))
            val = val * pi ** rng.randint(1, 2)
        if not certified_at_wild or is_nth_power_local(val, WILD_PLACE, 3):
            return val
    raise AssertionError("rejection sampling failed to certify a slot")


def reciprocity_payload(n, count, seed):
    rng = random.Random(seed)
    pairs = []
    all_zero = True
    for _ in range(count):
        if n == 2:
            a = rng.choice([x for x in range(-400, 401) if x])
            b = rng.choice([x for x in range(-400, 401) if x])
            cls = symbol_global(a, b, 2)
            pairs.append({"a": a, "b": b, "sum_zero": True, "support": len(cls.inv)})
        elif n == 3:
            a = _random_eis_element(rng, certified_at_wild=True)
            b = _random_eis_element(rng, certified_at_wild=False)
            cls = symbol_global(a, b, 3)  # construction aborts on reciprocity failure
            pairs.append(
                {"a": str(a), "b": str(b), "sum_zero": True, "support": len(cls.inv)}
            )
        else:
            raise SymbolError("reciprocity suite covers n in {2, 3}")
    return {
        "kind": "reciprocity-suite",
        "version": CERT_VERSION,
        "n": n,
        "count": count,
        "seed": seed,
        "all_zero": all_zero,
        "pairs": pairs,
    }


def local_solve_payload(args_dict):
    mode = args_dict["mode"]
    out = {"kind": "local-solve", "version": CERT_VERSION, "mode": mode}
    places = args_dict["places"]
    if mode == "conic":
        a, b = args_dict["a"], args_dict["b"]
        out.update({"a": a, "b": b})
        table = []
        for pl in places:
            try:
                ok = conic_local_solvable(a, b, pl)
                table.append({"place": str(pl), "status": "solvable" if ok else "unsolvable"})
            except Inconclusive:
                table.append({"place": str(pl), "status": "inconclusive"})
        out["table"] = table
    elif mode == "torsor":
        E = get_curve(args_dict["curve"])
        ab = tuple(args_dict["ab"])
        Q = two_covering_torsor(E, ab)
        out.update({"curve": E.id, "ab": list(ab), "torsor": Q.to_json()})
        table = []
        for pl in places:
            try:
                ok = torsor_local_solvable(Q, pl)
                table.append({"place": str(pl), "status": "solvable" if ok else "unsolvable"})
            except Inconclusive:
                table.append({"place": str(pl), "status": "inconclusive"})
        out["table"] = table
    elif mode == "versal":
        rep = versal_sample(args_dict["params"], places)
        out.update({"params": rep["parameters"], "table": rep["table"]})
        out["everywhere_locally_solvable"] = rep["everywhere_locally_solvable"]
    else:
        raise ValueError(f"unknown local-solve mode {mode!r}")
    return out


def reverify_simple(data):
    kind = data.get("kind")
    if kind == "symbol":
        rebuilt = symbol_payload(data["n"], data["a"], data["b"], data.get("place"))
    elif kind == "kummer-class":
        pair = {
            "curve_id": data["curve_id"],
            "P": data["P"],
            "pi": data["pi"],
            "pi_prime": data["pi_prime"],
        }
        xi = build_theorem1_class(pair, data["D"])
        rebuilt = dict(data)
        rebuilt["class"] = {"a": str(xi.a), "b": str(xi.b)}
    elif kind == "reciprocity-suite":
        rebuilt = reciprocity_payload(data["n"], data["count"], data["seed"])
    elif kind == "local-solve":
        args = {
            "mode": data["mode"],
            "places": [r["place"] for r in data["table"]],
        }
        if data["mode"] == "conic":
            args.update({"a": data["a"], "b": data["b"]})
        elif data["mode"] == "torsor":
            args.update({"curve": data["curve"], "ab": data["ab"]})
        else:
            args.update({"params": data["params"]})
        rebuilt = local_solve_payload(args)
    elif kind == "splitting-plan-bundle":
        okb, msg = verify_certificate(data["bundle"])
        if not okb:
            return False, f"embedded bundle failed: {msg}"
        rebuilt = dict(data)
        rebuilt["plan"] = splitting_plan_theorem3(data["bundle"], data.get("r"))
    else:
        return False, f"unknown certificate kind {kind!r}"
    if canonical_json(rebuilt) == canonical_json(data):
        return True, "certificate re-verified bit-exactly"
    return False, "certificate does not match its re-computation"


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    p = argparse.ArgumentParser(
        prog="periodindex",
        description="Exact period-index machinery for genus one curves: "
        "searches, symbols and machine-checkable certificates.",
    )
    p.add_argument("--catalog", help="path to an alternative curve catalog")
    p.add_argument(
        "--norm-cap",
        type=int,
        default=10 ** 12,
        help="norm bound on ad-hoc field-element inputs (trial-division guard)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("search-primes", help="find a certified prime pair")
    sp.add_argument("--curve", default="fermat3")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--bound", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    bc = sub.add_parser("build-class", help="build the Kummer class of a pair")
    bc.add_argument("--pair", required=True, help="prime-pair certificate file")
    bc.add_argument("--d", type=int, default=3)
    bc.add_argument("--out")

    ci = sub.add_parser("certify-index", help="emit the period/index certificate")
    ci.add_argument("--pair", required=True)
    ci.add_argument("--d", type=int, default=3)
    ci.add_argument("--out")

    sq = sub.add_parser("sequence", help="build the locally trivial difference sequence")
    sq.add_argument("--r", type=int, default=2)
    sq.add_argument("--bound", type=int, default=2_000_000)
    sq.add_argument("--seed", type=int, default=0)
    sq.add_argument("--sk", default="", help="comma-separated rational primes to avoid")
    sq.add_argument("--out")

    dc = sub.add_parser("difference-check", help="check a difference class order")
    dc.add_argument("--bundle", required=True)
    dc.add_argument("--i", type=int, required=True)
    dc.add_argument("--j", type=int, required=True)
    dc.add_argument("--out")

    sp3 = sub.add_parser("splitting-plan", help="totally ramified splitting plan")
    sp3.add_argument("--bundle", required=True)
    sp3.add_argument("--r", type=int)
    sp3.add_argument("--out")

    sy = sub.add_parser("symbol", help="evaluate a norm-residue symbol")
    sy.add_argument("--n", type=int, required=True)
    sy.add_argument("--a", required=True)
    sy.add_argument("--b", required=True)
    sy.add_argument("--place")
    sy.add_argument("--out")

    rs = sub.add_parser("reciprocity-suite", help="random global reciprocity checks")
    rs.add_argument("--n", type=int, required=True)
    rs.add_argument("--count", type=int, default=200)
    rs.add_argument("--seed", type=int, default=0)
    rs.add_argument("--out")

    ls = sub.add_parser("local-solve", help="exhaustive local solvability searches")
    ls.add_argument("--mode", choices=("conic", "torsor", "versal"), required=True)
    ls.add_argument("--a", type=int)
    ls.add_argument("--b", type=int)
    ls.add_argument("--curve", default="32a3")
    ls.add_argument("--ab", help="a,b for the torsor mode")
    ls.add_argument("--params", help="t1,...,t8 for the versal mode")
    ls.add_argument("--places", default="2,3,5,real")
    ls.add_argument("--out")

    vf = sub.add_parser("verify", help="re-check any certificate file")
    vf.add_argument("path")
    return p


def _places_list(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        out.append(tok if tok in ("real", "oo") else int(tok))
    return out


def dispatch(args):
    if args.catalog:
        load_catalog(args.catalog, force=True)
    cmd = args.command
    if cmd == "search-primes":
        E = get_curve(args.curve)
        cert = search_prime_pair(E, args.p, args.bound, args.seed)
        return cert, 0, args.out
    if cmd == "build-class":
        pair = _load(args.pair)
        xi = build_theorem1_class(pair, args.d)
        payload = {
            "kind": "kummer-class",
            "version": CERT_VERSION,
            "curve_id": pair["curve_id"],
            "P": pair["P"],
            "D": args.d,
            "pi": pair["pi"],
            "pi_prime": pair["pi_prime"],
            "class": {"a": str(xi.a), "b": str(xi.b)},
        }
        return payload, 0, args.out
    if cmd == "certify-index":
        pair = _load(args.pair)
        xi = build_theorem1_class(pair, args.d)
        return certify_index_theorem1(xi, pair, args.d), 0, args.out
    if cmd == "sequence":
        sk = tuple(int(t) for t in args.sk.split(",") if t.strip())
        bundle = build_theorem2_sequence(args.r, sk, args.bound, args.seed)
        return bundle, 0, args.out
    if cmd == "difference-check":
        bundle = _load(args.bundle)
        check = check_difference_order(bundle, args.i, args.j)
        payload = {
            "kind": "difference-order-bundle",
            "version": CERT_VERSION,
            "i": args.i,
            "j": args.j,
            "check": check,
            "bundle": bundle,
        }
        return payload, 0, args.out
    if cmd == "splitting-plan":
        bundle = _load(args.bundle)
        plan = splitting_plan_theorem3(bundle, args.r)
        payload = {
            "kind": "splitting-plan-bundle",
            "version": CERT_VERSION,
            "r": args.r,
            "plan": plan,
            "bundle": bundle,
        }
        return payload, 0, args.out
    if cmd == "symbol":
        for val in (args.a, args.b):
            _check_norm_cap(val, args.n, args.norm_cap)
        return symbol_payload(args.n, args.a, args.b, args.place), 0, args.out
    if cmd == "reciprocity-suite":
        return reciprocity_payload(args.n, args.count, args.seed), 0, args.out
    if cmd == "local-solve":
        spec = {"mode": args.mode, "places": _places_list(args.places)}
        if args.mode == "conic":
            if args.a is None or args.b is None:
                raise ValueError("conic mode needs --a and --b")
            spec.update({"a": args.a, "b": args.b})
        elif args.mode == "torsor":
            if not args.ab:
                raise ValueError("torsor mode needs --ab a,b")
            spec.update(
                {"curve": args.curve, "ab": [int(t) for t in args.ab.split(",")]}
            )
        else:
            if not args.params:
                raise ValueError("versal mode needs --params t1,...,t8")
            spec.update({"params": [int(t) for t in args.params.split(",")]})
        return local_solve_payload(spec), 0, args.out
    if cmd == "verify":
        try:
            data = _load(args.path)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"not a certificate: {exc}", file=sys.stderr)
            return {"kind": "verify", "ok": False, "detail": "unreadable"}, 1, None
        ok, msg = verify_certificate(data)
        print(msg, file=sys.stderr)
        return {"kind": "verify", "ok": ok, "detail": msg}, 0 if ok else 1, None
    raise ValueError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code, out = dispatch(args)
    except ExhaustionError as exc:
        _emit({"kind": "exhaustion", **exc.report})
        return 3
    except Inconclusive as exc:
        print(str(exc), file=sys.stderr)
        return 3
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
