"""Closed-form and interval rules for the s_n family, for every n >= 2.

Exact values come from the positive-diagram formula and the split/
connected-sum identities; everything else propagates as an integer
interval whose endpoints cite the rule that produced them.  The n=2
engine can refine any realizable expression to an exact value.
"""

import json
import math
from dataclasses import dataclass, field

from . import diagram as dg
from . import lee
from .errors import (
    InexactInput,
    MixedN,
    NotCoprime,
    NotPositiveDiagram,
    NonIntegerGenus,
    UnevaluableLeaf,
)


@dataclass
class SnValue:
    n: int
    lo: int
    hi: int
    trace: list = field(default_factory=list)

    @property
    def exact(self):
        return self.lo == self.hi

    @property
    def value(self):
        if not self.exact:
            raise InexactInput(f"interval [{self.lo}, {self.hi}] is not exact")
        return self.lo

    def to_json(self):
        return json.dumps({"n": self.n, "lo": self.lo, "hi": self.hi,
                           "trace": self.trace})

    def __repr__(self):
        body = str(self.lo) if self.exact else f"[{self.lo}, {self.hi}]"
        return f"s_{self.n} = {body}"


def _exact(n, v, trace):
    return SnValue(n, v, v, trace)


# -- closed forms -----------------------------------------------------------


def sn_positive(d, n):
    """s_n of a positive diagram: (1-n)(c-r+1)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not d.is_positive:
        raise NotPositiveDiagram("diagram has a negative crossing")
    st = dg.resolution_stats(d)
    return _exact(n, (1 - n) * (st.c - st.r + 1),
                  [f"positive diagram: s_n = (1-n)(c-r+1) with c={st.c}, r={st.r}"])


def genus_positive(d):
    """Slice and Seifert genus of a positive diagram, (g3, g4); equal."""
    if not d.is_positive:
        raise NotPositiveDiagram("diagram has a negative crossing")
    st = dg.resolution_stats(d)
    num = 2 - (st.r - st.c + st.l)
    if num % 2:
        raise NonIntegerGenus(f"(2-(r-c+l)) = {num} is odd")
    g = num // 2
    return g, g


def torus_g4(p, q):
    """Slice genus of the (p, q) torus link, ((p-1)(q-1)+1-gcd)/2."""
    return ((p - 1) * (q - 1) + 1 - math.gcd(p, q)) // 2


def torus_splitting(p, q):
    """Exact splitting number of the positive torus link T(p, q)."""
    l = math.gcd(p, q)
    return (l * (l - 1) // 2) * (p // l) * (q // l)


def torus_split_schedule(l, p, q):
    """Crossing changes splitting T(lp, lq) in its standard braid diagram.

    A crossing is scheduled whenever its under-strand belongs to an
    earlier component than its over-strand; afterwards each component
    passes entirely over every later one, so the components can be
    pulled apart.  Returns 0-based crossing indices into
    ``torus_link(l*p, l*q)``, one block of pq crossings per component
    pair, for a total of l(l-1)pq/2.
    """
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"({p}, {q}) are not coprime")
    d = dg.torus_link(l * p, l * q)
    comp = d.edge_component
    return [k for k, x in enumerate(d.crossings)
            if comp[x.a] < comp[x.over_in]]


def sn_diagram_interval(d, n):
    """A sound s_n interval for any diagram, via the crossing-change bound.

    Changing each negative crossing to positive reaches a positive
    diagram whose s_n is exact; each change moves s_n by at most
    2(n-1), so the value propagates back as an interval.  Positive
    diagrams come out exact.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if d.is_positive:
        return sn_positive(d, n)
    pos = d
    m = 0
    for k, x in enumerate(d.crossings):
        if x.sign < 0:
            pos = dg.crossing_change(pos, k)
            m += 1
    base = sn_positive(pos, n)
    slack = 2 * (n - 1) * m
    trace = base.trace + [
        f"{m} crossing changes from a positive diagram, each within 2(n-1)"]
    return SnValue(n, base.value - slack, base.value + slack, trace)


# -- bounds -----------------------------------------------------------------


def g4_lower_bound(v, l):
    """Sound slice-genus lower bound from an s_n value or interval."""
    n = v.n

    def bound(s):
        # ceil((|s|/(n-1) - l + 1) / 2), never negative
        num = abs(s) - (l - 1) * (n - 1)
        return max(0, -(-num // (2 * (n - 1))))

    if v.exact:
        return bound(v.lo)
    # the interval member minimizing |s| gives the sound (weakest) bound
    if v.lo <= 0 <= v.hi:
        return 0
    s_star = v.lo if v.lo > 0 else v.hi
    return bound(s_star)


def sp_lower_bound(s_link, s_components, l):
    """Splitting-number lower bound for a link with knot components."""
    if not s_link.exact or any(not s.exact for s in s_components):
        raise InexactInput("splitting bound needs exact s_n values")
    n = s_link.n
    if any(s.n != n for s in s_components):
        raise MixedN("mixed n among inputs")
    defect = abs(s_link.value - sum(s.value for s in s_components)
                 - (n - 1) * (l - 1))
    return -(-defect // (2 * (n - 1)))


# -- expression trees --------------------------------------------------------


class LinkExpr:
    """Base node; subclasses know their component count and how to
    evaluate themselves against the paper's rules."""

    def components(self):
        raise NotImplementedError

    def eval(self, n):
        raise NotImplementedError

    def realize(self):
        """A concrete diagram of the link, when one can be built."""
        raise UnevaluableLeaf(f"{type(self).__name__} has no diagram")

    def to_dict(self):
        raise NotImplementedError


@dataclass
class PositiveDiagram(LinkExpr):
    diagram: object

    def components(self):
        return self.diagram.n_components

    def eval(self, n):
        return sn_positive(self.diagram, n)

    def realize(self):
        return self.diagram

    def to_dict(self):
        return {"type": "PositiveDiagram", "pd": dg.serialize_pd(self.diagram)}


@dataclass
class EngineDiagram(LinkExpr):
    diagram: object

    def components(self):
        return self.diagram.n_components

    def eval(self, n):
        if n != 2:
            raise UnevaluableLeaf("the homology engine only computes n=2")
        return _exact(2, lee.s2(self.diagram), ["engine: filtered homology at n=2"])

    def realize(self):
        return self.diagram

    def to_dict(self):
        return {"type": "EngineDiagram", "pd": dg.serialize_pd(self.diagram)}


@dataclass
class Unknot(LinkExpr):
    def components(self):
        return 1

    def eval(self, n):
        return _exact(n, 0, ["unknot: s_n = 0"])

    def realize(self):
        return dg.unknot()

    def to_dict(self):
        return {"type": "Unknot"}


@dataclass
class StronglySliceLink(LinkExpr):
    l: int

    def components(self):
        return self.l

    def eval(self, n):
        return _exact(n, (n - 1) * (self.l - 1),
                      [f"strongly slice, {self.l} components: s_n = (n-1)(l-1)"])

    def to_dict(self):
        return {"type": "StronglySliceLink", "l": self.l}


@dataclass
class KnownValue(LinkExpr):
    n: int
    value: int
    l: int
    provenance: str

    def __post_init__(self):
        if not self.provenance:
            raise InexactInput("known values must carry a provenance string")

    def components(self):
        return self.l

    def eval(self, n):
        if n != self.n:
            raise UnevaluableLeaf(
                f"known value is for n={self.n}, requested n={n}")
        return _exact(n, self.value, [f"known value ({self.provenance})"])

    def to_dict(self):
        return {"type": "KnownValue", "n": self.n, "value": self.value,
                "l": self.l, "provenance": self.provenance}


@dataclass
class DisjointUnion(LinkExpr):
    children: list

    def components(self):
        return sum(c.components() for c in self.children)

    def eval(self, n):
        vals = [c.eval(n) for c in self.children]
        m = len(vals)
        lo = sum(v.lo for v in vals) + (n - 1) * (m - 1)
        hi = sum(v.hi for v in vals) + (n - 1) * (m - 1)
        trace = [t for v in vals for t in v.trace]
        trace.append(f"disjoint union of {m}: add values plus (n-1)(m-1)")
        return SnValue(n, lo, hi, trace)

    def realize(self):
        out = self.children[0].realize()
        for c in self.children[1:]:
            out = dg.disjoint_union(out, c.realize())
        return out

    def to_dict(self):
        return {"type": "DisjointUnion",
                "children": [c.to_dict() for c in self.children]}


@dataclass
class ConnectSum(LinkExpr):
    left: LinkExpr
    right: LinkExpr
    i1: int = 0
    i2: int = 0

    def components(self):
        return self.left.components() + self.right.components() - 1

    def eval(self, n):
        a, b = self.left.eval(n), self.right.eval(n)
        trace = a.trace + b.trace + ["connected sum: s_n adds"]
        return SnValue(n, a.lo + b.lo, a.hi + b.hi, trace)

    def realize(self):
        return dg.connect_sum(self.left.realize(), self.i1,
                              self.right.realize(), self.i2)

    def to_dict(self):
        return {"type": "ConnectSum", "i1": self.i1, "i2": self.i2,
                "left": self.left.to_dict(), "right": self.right.to_dict()}


@dataclass
class Mirror(LinkExpr):
    child: LinkExpr

    def components(self):
        return self.child.components()

    def eval(self, n):
        v = self.child.eval(n)
        l = self.components()
        if l == 1 and v.exact:
            return SnValue(n, -v.value, -v.value,
                           v.trace + ["mirror knot: s_n flips sign"])
        lo = -v.hi
        hi = (2 * l - 2) * (n - 1) - v.lo
        return SnValue(n, lo, hi,
                       v.trace + [f"mirror, l={l}: 0 <= s_n(L) + s_n(mirror) "
                                  f"<= (2l-2)(n-1)"])

    def realize(self):
        return dg.mirror(self.child.realize())

    def to_dict(self):
        return {"type": "Mirror", "child": self.child.to_dict()}


@dataclass
class CrossingChange(LinkExpr):
    child: LinkExpr
    crossing: int = None

    def components(self):
        return self.child.components()

    def eval(self, n):
        v = self.child.eval(n)
        return SnValue(n, v.lo - 2 * (n - 1), v.hi + 2 * (n - 1),
                       v.trace + ["crossing change: |delta s_n| <= 2(n-1)"])

    def realize(self):
        if self.crossing is None:
            raise UnevaluableLeaf("crossing change without a marked crossing")
        return dg.crossing_change(self.child.realize(), self.crossing)

    def to_dict(self):
        return {"type": "CrossingChange", "crossing": self.crossing,
                "child": self.child.to_dict()}


@dataclass
class ConcordantTo(LinkExpr):
    child: LinkExpr
    note: str = ""

    def components(self):
        return self.child.components()

    def eval(self, n):
        v = self.child.eval(n)
        return SnValue(n, v.lo, v.hi,
                       v.trace + [f"concordance preserves s_n ({self.note})"])

    def to_dict(self):
        return {"type": "ConcordantTo", "note": self.note,
                "child": self.child.to_dict()}


def sn_eval(expr, n):
    if n < 2:
        raise ValueError("n must be at least 2")
    return expr.eval(n)


def refine_with_engine(expr):
    """Exact n=2 value of a realizable expression via the homology engine."""
    return _exact(2, lee.s2(expr.realize()),
                  ["engine refinement: filtered homology at n=2"])


# -- (de)serialization --------------------------------------------------------

_NODE_TYPES = {}


def expr_to_json(expr):
    return json.dumps(expr.to_dict(), indent=2)


def expr_from_dict(data):
    kind = data.get("type")
    if kind == "PositiveDiagram":
        return PositiveDiagram(dg.parse_pd(data["pd"]))
    if kind == "EngineDiagram":
        return EngineDiagram(dg.parse_pd(data["pd"]))
    if kind == "Unknot":
        return Unknot()
    if kind == "StronglySliceLink":
        return StronglySliceLink(data["l"])
    if kind == "KnownValue":
        return KnownValue(data["n"], data["value"], data["l"],
                          data.get("provenance", ""))
    if kind == "DisjointUnion":
        return DisjointUnion([expr_from_dict(c) for c in data["children"]])
    if kind == "ConnectSum":
        return ConnectSum(expr_from_dict(data["left"]),
                          expr_from_dict(data["right"]),
                          data.get("i1", 0), data.get("i2", 0))
    if kind == "Mirror":
        return Mirror(expr_from_dict(data["child"]))
    if kind == "CrossingChange":
        return CrossingChange(expr_from_dict(data["child"]),
                              data.get("crossing"))
    if kind == "ConcordantTo":
        return ConcordantTo(expr_from_dict(data["child"]),
                            data.get("note", ""))
    raise UnevaluableLeaf(f"unknown expression node {kind!r}")


def expr_from_json(text):
    return expr_from_dict(json.loads(text))
