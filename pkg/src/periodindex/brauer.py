"""Brauer classes as finitely supported local-invariant vectors.

A class is an ordered map from places to nonzero invariants in (1/n)Z/Z.
Global classes carry a reciprocity flag; restriction along a field extension
multiplies each invariant by its local degree (the splitting-plan mechanism).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .arith import QQ, QW, Place, eis_place, rational_place, REAL_PLACE
from .symbols import LocalInvariant, SymbolError


class BrauerClass:
    """A finitely supported vector of local invariants."""

    __slots__ = ("field", "inv", "global_checked", "wild_provenance")

    def __init__(self, field, invariants, global_checked=False, wild_provenance=None):
        pruned = {v: i for v, i in invariants.items() if not i.is_zero()}
        items = tuple(sorted(pruned.items(), key=lambda t: t[0].sort_key()))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "inv", items)
        object.__setattr__(self, "global_checked", bool(global_checked))
        object.__setattr__(self, "wild_provenance", wild_provenance)

    def __setattr__(self, *a):
        raise AttributeError("BrauerClass is immutable")

    @classmethod
    def zero(cls, field):
        return cls(field, {}, global_checked=True)

    # -- structure -------------------------------------------------------------

    def support(self):
        return tuple(v for v, _ in self.inv)

    def invariant_at(self, v: Place) -> LocalInvariant:
        for w, i in self.inv:
            if w == v:
                return i
        return LocalInvariant(0, 1)

    def is_zero(self):
        return not self.inv

    def order(self) -> int:
        if not self.inv:
            return 1
        return lcm(*(i.order() for _, i in self.inv))

    # -- group operations --------------------------------------------------------

    def _merge(self, other, sign):
        if self.field is not other.field:
            raise SymbolError("cannot combine Brauer classes over different fields")
        acc = dict(self.inv)
        for v, i in other.inv:
            term = i if sign > 0 else -i
            acc[v] = acc[v] + term if v in acc else term
        return BrauerClass(
            self.field,
            acc,
            global_checked=self.global_checked and other.global_checked,
            wild_provenance=_merge_notes(self.wild_provenance, other.wild_provenance),
        )

    def __add__(self, other):
        return self._merge(other, +1)

    def __sub__(self, other):
        return self._merge(other, -1)

    def __neg__(self):
        return BrauerClass(
            self.field,
            {v: -i for v, i in self.inv},
            global_checked=self.global_checked,
            wild_provenance=self.wild_provenance,
        )

    def scale(self, m: int):
        return BrauerClass(
            self.field,
            {v: i.scale(m) for v, i in self.inv},
            global_checked=self.global_checked,
            wild_provenance=self.wild_provenance,
        )

    def __eq__(self, other):
        if not isinstance(other, BrauerClass):
            return NotImplemented
        return self.field is other.field and {
            v: i.fraction() for v, i in self.inv
        } == {v: i.fraction() for v, i in other.inv}

    def __hash__(self):
        return hash((self.field.tag, tuple((str(v), i.fraction()) for v, i in self.inv)))

    def __repr__(self):
        body = ", ".join(f"{v}: {i.num}/{i.den}" for v, i in self.inv)
        return f"BrauerClass({{{body}}})"

    # -- serialization -------------------------------------------------------------

    def to_json(self):
        return {
            "field": self.field.tag,
            "invariants": [
                {"place": _place_json(v), "num": i.num, "den": i.den}
                for v, i in self.inv
            ],
            "reciprocity_checked": self.global_checked,
            "wild": self.wild_provenance,
        }

    @classmethod
    def from_json(cls, data):
        field = QW if data["field"] == "Q(w)" else QQ
        invariants = {}
        for item in data["invariants"]:
            v = _place_from_json(field, item["place"])
            invariants[v] = LocalInvariant(item["num"], item["den"])
        return cls(
            field,
            invariants,
            global_checked=data.get("reciprocity_checked", False),
            wild_provenance=data.get("wild"),
        )


def _merge_notes(a, b):
    if a == "reciprocity-completed" or b == "reciprocity-completed":
        return "reciprocity-completed"
    return a or b


def _place_json(v: Place):
    if v.kind == "real":
        return {"kind": "real"}
    return {"kind": "finite", "gen": str(v), "p": v.p, "q": v.q}


def _place_from_json(field, data):
    if data["kind"] == "real":
        return REAL_PLACE
    if field is QW:
        return eis_place(data["gen"])
    return rational_place(int(data["gen"]))


# ---------------------------------------------------------------------------
# The spec operations


def class_order(c: BrauerClass) -> int:
    """lcm of the local invariant orders; 1 for the zero class."""
    return c.order()


def reciprocity_check(c: BrauerClass) -> bool:
    """True iff the invariants sum to 0 mod 1."""
    total = sum((i.fraction() for _, i in c.inv), Fraction(0))
    return total.denominator == 1


def restrict_class(c: BrauerClass, ext) -> BrauerClass:
    """Restriction along a field extension with local degrees ext[v] = [L_w : K_v].

    Each invariant is multiplied by its local degree; zeros are pruned.  The
    degree map must cover the support.
    """
    out = {}
    for v, i in c.inv:
        if v not in ext:
            raise SymbolError(f"extension data missing the support place {v}")
        out[v] = i.scale(ext[v])
    return BrauerClass(c.field, out, global_checked=c.global_checked,
                       wild_provenance=c.wild_provenance)
