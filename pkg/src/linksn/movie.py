"""Movies of elementary cobordisms and their bookkeeping.

A movie is a start diagram plus a sequence of Reidemeister moves
(R1+/R1-/R2/R3) and Morse moves (H0 birth, H1 saddle, H2 death).  We
never compute the chain-level cobordism maps; validation replays the
moves combinatorially and records what the inequalities need: Euler
characteristic, filtered degree (1-n)*chi, the fate of the canonical
generators, and the move ordering of the genus-bound proof.

Reidemeister kinds are bidirectional: giving ``edges`` inserts the
pattern, giving ``crossings`` removes it.
"""

import json
from dataclasses import dataclass, field

from . import diagram as dg
from .diagram import Crossing, LinkDiagram, _crossing_from_strands
from .errors import InapplicableMove, NotEndingInUnlink

CHI = {"R1+": 0, "R1-": 0, "R2": 0, "R3": 0, "H0": 1, "H1": -1, "H2": 1}


@dataclass(frozen=True)
class Move:
    kind: str
    edges: tuple = ()
    crossings: tuple = ()
    comment: str = ""

    def __post_init__(self):
        if self.kind not in CHI:
            raise InapplicableMove(f"unknown move kind {self.kind!r}")
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "crossings", tuple(self.crossings))

    def to_dict(self):
        out = {"kind": self.kind}
        if self.edges:
            out["edges"] = list(self.edges)
        if self.crossings:
            out["crossings"] = list(self.crossings)
        if self.comment:
            out["comment"] = self.comment
        return out


@dataclass
class Movie:
    start: LinkDiagram
    moves: list = field(default_factory=list)


# -- single-move rewriting ----------------------------------------------------


def _fresh(d, count):
    base = max(d.edges, default=0)
    return [base + i + 1 for i in range(count)]


def _rename(crossings, old, new):
    out = []
    for x in crossings:
        e = [x.a, x.b, x.c, x.d]
        out.append(Crossing(*(new if v == old else v for v in e), x.sign))
    return out


def _replace_incoming(crossings, old, new):
    """Replace the single incoming-slot occurrence of ``old``."""
    out = []
    for x in crossings:
        a, b, c, d = x.a, x.b, x.c, x.d
        if a == old:
            a = new
        elif x.sign > 0 and d == old:
            d = new
        elif x.sign < 0 and b == old:
            b = new
        out.append(Crossing(a, b, c, d, x.sign))
    return out


def _strand_data(x):
    """(under_in, under_out, over_in, over_out) of a crossing."""
    return x.a, x.c, x.over_in, x.over_out


def _apply(d, m):
    """Returns (new diagram, info) where info records edge genealogy:
    ``inherit`` maps new/kept edge -> parent edge, ``births``/``deaths``
    list loop edges created or removed, ``spliced`` holds H1 arcs."""
    info = {"inherit": {}, "births": [], "deaths": [], "spliced": None}
    if m.kind in ("R1+", "R1-"):
        d2 = _r1(d, m, info)
    elif m.kind == "R2":
        d2 = _r2(d, m, info)
    elif m.kind == "R3":
        d2 = _r3(d, m, info)
    elif m.kind == "H0":
        new = _fresh(d, 1)[0]
        info["births"].append(new)
        d2 = LinkDiagram(d.crossings, d.loops + (new,))
    elif m.kind == "H1":
        if len(m.edges) != 2:
            raise InapplicableMove("H1 needs the two arcs being joined")
        e1, e2 = m.edges
        d2 = dg.splice_edges(d, e1, e2)
        info["spliced"] = (e1, e2)
        new_loops = set(d2.loops) - set(d.loops)
        gone = set(d.loops) - set(d2.loops)
        for e in new_loops:
            info["inherit"][e] = e1
        for e in gone:
            info["deaths"].append(e)  # loop absorbed into the other strand
    elif m.kind == "H2":
        if len(m.edges) != 1:
            raise InapplicableMove("H2 needs one circle edge")
        e = m.edges[0]
        if e not in d.loops:
            raise InapplicableMove(
                f"edge {e} is not a crossing-free circle disjoint from the rest")
        info["deaths"].append(e)
        d2 = LinkDiagram(d.crossings, tuple(x for x in d.loops if x != e))
    else:  # pragma: no cover - guarded by Move.__post_init__
        raise InapplicableMove(f"unknown move kind {m.kind!r}")
    return d2, info


def _r1(d, m, info):
    sign = 1 if m.kind == "R1+" else -1
    if m.edges and not m.crossings:
        (e,) = m.edges
        if e not in d.successor:
            raise InapplicableMove(f"no edge {e} to kink")
        f, g = _fresh(d, 2)
        if e in d.loops:
            x = Crossing(e, e, g, g, 1) if sign > 0 else Crossing(e, g, g, e, -1)
            info["inherit"][g] = e
            return LinkDiagram(d.crossings + (x,),
                               tuple(x for x in d.loops if x != e))
        crossings = _replace_incoming(d.crossings, e, f)
        x = Crossing(e, f, g, g, 1) if sign > 0 else Crossing(e, g, g, f, -1)
        info["inherit"][f] = e
        info["inherit"][g] = e
        return LinkDiagram(crossings + [x], d.loops)
    if m.crossings and not m.edges:
        (k,) = m.crossings
        if not 0 <= k < d.n_crossings:
            raise InapplicableMove(f"no crossing {k}")
        x = d.crossings[k]
        if x.sign != sign:
            raise InapplicableMove(f"crossing {k} has the wrong sign for {m.kind}")
        ins = {x.a, x.over_in}
        outs = {x.c, x.over_out}
        loops = ins & outs
        if not loops:
            raise InapplicableMove(f"crossing {k} is not a kink")
        rest = [y for i, y in enumerate(d.crossings) if i != k]
        if len(loops) == 2:
            # standalone kinked circle; it becomes a free loop
            e = min(loops)
            info["births"].append(e)
            return LinkDiagram(rest, d.loops + (e,))
        loop = loops.pop()
        e_in = (ins - {loop}).pop()
        e_out = (outs - {loop}).pop()
        if e_in == e_out:
            info["births"].append(e_in)
            return LinkDiagram(rest, d.loops + (e_in,))
        info["inherit"][e_in] = e_out
        return LinkDiagram(_rename(rest, e_out, e_in), d.loops)
    raise InapplicableMove("R1 takes one edge (insert) or one crossing (remove)")


def _r2(d, m, info):
    if m.edges and not m.crossings:
        e_a, e_b = m.edges if len(m.edges) == 2 else (None, None)
        if e_a is None or e_a == e_b:
            raise InapplicableMove("R2 insertion needs two distinct edges")
        for e in (e_a, e_b):
            if e not in d.successor:
                raise InapplicableMove(f"no edge {e}")
        m_a, m_b, f_a, f_b = _fresh(d, 4)
        crossings = list(d.crossings)
        loops = list(d.loops)
        if e_a in d.loops:
            loops.remove(e_a)
            f_a = e_a
        else:
            crossings = _replace_incoming(crossings, e_a, f_a)
            info["inherit"][f_a] = e_a
        if e_b in d.loops:
            loops.remove(e_b)
            f_b = e_b
        else:
            crossings = _replace_incoming(crossings, e_b, f_b)
            info["inherit"][f_b] = e_b
        info["inherit"][m_a] = e_a
        info["inherit"][m_b] = e_b
        # strand A passes over strand B twice, with cancelling signs
        x1 = Crossing(e_b, m_a, m_b, e_a, 1)
        x2 = Crossing(m_b, m_a, f_b, f_a, -1)
        return LinkDiagram(crossings + [x1, x2], loops)
    if m.crossings and not m.edges:
        if len(m.crossings) != 2:
            raise InapplicableMove("R2 removal needs two crossings")
        k1, k2 = m.crossings
        for k in (k1, k2):
            if not 0 <= k < d.n_crossings:
                raise InapplicableMove(f"no crossing {k}")
        if k1 == k2:
            raise InapplicableMove("R2 removal needs two distinct crossings")
        x1, x2 = d.crossings[k1], d.crossings[k2]
        if x1.sign + x2.sign != 0:
            raise InapplicableMove("R2 removal needs cancelling signs")
        # a bigon: one strand over at both crossings, one under at both,
        # with both middle edges running from the same crossing to the other
        joins = None
        for p, q in ((x1, x2), (x2, x1)):
            if p.over_out != q.over_in:
                continue
            if p.c == q.a and p.c != p.over_out:
                # parallel strands: both pass p first
                joins = ((p.over_in, q.over_out), (p.a, q.c))
                break
            if q.c == p.a and q.c != p.over_out:
                # anti-parallel: the under-strand passes q first
                joins = ((p.over_in, q.over_out), (q.a, p.c))
                break
        if joins is None:
            raise InapplicableMove("crossings do not bound an R2 bigon")
        rest = [y for i, y in enumerate(d.crossings) if i not in (k1, k2)]
        loops = list(d.loops)
        # reconnect each strand across the deleted bigon
        for e_in, e_out in joins:
            if e_in == e_out:
                info["births"].append(e_in)
                loops.append(e_in)
            else:
                info["inherit"][e_in] = e_out
                rest = _rename(rest, e_out, e_in)
        return LinkDiagram(rest, loops)
    raise InapplicableMove("R2 takes two edges (insert) or two crossings (remove)")


def _r3(d, m, info):
    if len(m.crossings) != 3:
        raise InapplicableMove("R3 needs the three crossings of the triangle")
    for k in m.crossings:
        if not 0 <= k < d.n_crossings:
            raise InapplicableMove(f"no crossing {k}")
    k1, k2, k3 = m.crossings
    xs = {k: d.crossings[k] for k in (k1, k2, k3)}
    pairs = [(k1, k2), (k1, k3), (k2, k3)]
    mids = {}
    for p, q in pairs:
        shared = set(xs[p].edges) & set(xs[q].edges)
        if len(shared) != 1:
            raise InapplicableMove(
                "triangle crossings must pairwise share exactly one edge")
        mids[(p, q)] = shared.pop()
    if len(set(mids.values())) != 3:
        raise InapplicableMove("triangle edges are not distinct")

    # the moving strand is the one through the k1-k2 edge; it must pass
    # the other two strands on the same level at both crossings
    alpha = mids[(k1, k2)]
    role = {}
    for k in (k1, k2):
        x = xs[k]
        if alpha in (x.over_in, x.over_out):
            role[k] = "over"
        else:
            role[k] = "under"
    if role[k1] != role[k2]:
        raise InapplicableMove(
            "moving strand must be entirely over or entirely under")

    # per strand: middle edge runs from crossing p (out) to q (in); after
    # the move the strand meets q first and p second
    new_ends = {}  # crossing -> {"over": (in, out), "under": (in, out)} updates
    for (p, q), mid in mids.items():
        xp, xq = xs[p], xs[q]
        if mid in (xp.c, xp.over_out):
            first, second = p, q
        else:
            first, second = q, p
        xf, xs_ = xs[first], xs[second]
        lvl_f = "over" if mid in (xf.over_in, xf.over_out) else "under"
        lvl_s = "over" if mid in (xs_.over_in, xs_.over_out) else "under"
        e_in = xf.over_in if lvl_f == "over" else xf.a
        e_out = xs_.over_out if lvl_s == "over" else xs_.c
        # strand now enters `second` from outside and exits `first`
        new_ends.setdefault(second, {})[lvl_s] = (e_in, mid)
        new_ends.setdefault(first, {})[lvl_f] = (mid, e_out)

    crossings = list(d.crossings)
    for k in (k1, k2, k3):
        x = xs[k]
        u_in, u_out = new_ends[k]["under"]
        o_in, o_out = new_ends[k]["over"]
        crossings[k] = _crossing_from_strands(u_in, u_out, o_in, o_out, x.sign)
    return LinkDiagram(crossings, d.loops)


def apply_move(d, m):
    """The diagram after one move; raises InapplicableMove on pattern failure."""
    return _apply(d, m)[0]


# -- replay and bookkeeping ---------------------------------------------------


@dataclass
class Ledger:
    chi: int
    end: LinkDiagram
    fate: dict                   # root label -> "survives" / "annihilated"
    frames: list                 # diagrams D_0 ... D_n
    kinds: list                  # per-move phase class: O R U I T
    k: int                       # connected components of the swept surface
    h0_absorbed: bool            # every birth circle later fused in

    def filtered_degree(self, n):
        return (1 - n) * self.chi

    def lemma2_certificate(self):
        """The concordance-inequality instance this movie witnesses.

        The inequality needs the composite map to carry the canonical
        generator to a nonzero multiple; every elementary move does this
        except a 0-handle, whose new circle must be fused into the rest
        before the end of the movie.
        """
        survives = all(v == "survives" for v in self.fate.values())
        return {
            "theorem": "cobordism inequality",
            "chi": self.chi,
            "inequality": (f"s_n(start) - (n-1)*({self.chi}) >= s_n(end)"
                           " for all n >= 2"),
            "applies": survives and self.h0_absorbed,
        }


def _classify(kind, fusion):
    if kind == "H0":
        return "O"
    if kind == "H2":
        return "T"
    if kind == "H1":
        return "U" if fusion else "I"
    return "R"


def validate_movie(movie):
    """Replay a movie; returns the Ledger or raises InapplicableMove
    with the index of the offending move."""
    d = movie.start
    chi = 0
    frames = [d]
    kinds = []

    # worldsheet bookkeeping: each link component sweeps out a sheet;
    # saddles glue sheets, births start new ones
    sheet = {}
    parents = {}

    def find(s):
        while parents[s] != s:
            parents[s] = parents[parents[s]]
            s = parents[s]
        return s

    next_id = 0
    for comp in d.components:
        parents[next_id] = next_id
        for e in comp:
            sheet[e] = next_id
        next_id += 1
    n_start_sheets = next_id
    h0_sheets = []

    for i, m in enumerate(movie.moves):
        try:
            d2, info = _apply(d, m)
        except InapplicableMove as exc:
            raise InapplicableMove(f"move {i} ({m.kind}): {exc}", index=i) from exc
        if info["spliced"]:
            e1, e2 = info["spliced"]
            r1, r2 = find(sheet[e1]), find(sheet[e2])
            if r1 != r2:
                parents[r1] = r2
            winner = sheet[e1]
            for cid in {d.edge_component[e1], d.edge_component[e2]}:
                for e in d.components[cid]:
                    sheet[e] = winner
        for new, parent in info["inherit"].items():
            if parent in sheet:
                sheet[new] = sheet[parent]
        for e in info["births"]:
            if e not in sheet:
                parents[next_id] = next_id
                sheet[e] = next_id
                if m.kind == "H0":
                    h0_sheets.append(next_id)
                next_id += 1
        if m.kind == "H1":
            kinds.append(_classify("H1", d2.n_components < d.n_components))
        else:
            kinds.append(_classify(m.kind, None))
        chi += CHI[m.kind]
        d = d2
        frames.append(d)

    k = len({find(s) for s in range(next_id)})
    start_roots = {find(s) for s in range(n_start_sheets)}
    h0_absorbed = all(find(s) in start_roots for s in h0_sheets)
    # constant labelings merge equal labels under fusion and duplicate
    # under fission, so they always survive
    fate = {1: "survives", -1: "survives"}
    return Ledger(chi=chi, end=d, fate=fate, frames=frames, kinds=kinds,
                  k=k, h0_absorbed=h0_absorbed)


def generator_fate(movie, labeling, birth_label=1):
    """Track a (possibly non-constant) labeling of the start components.

    ``labeling`` lists one label per component of the start diagram, in
    component order.  A fusion of circles with different labels kills
    the generator; fission duplicates the label; births take
    ``birth_label``.  Returns (survives, end labeling per component).
    """
    d = movie.start
    if len(labeling) != d.n_components:
        raise ValueError("one label per start component")
    label = {}
    for comp, lab in zip(d.components, labeling):
        for e in comp:
            label[e] = lab
    survives = True
    for i, m in enumerate(movie.moves):
        try:
            d2, info = _apply(d, m)
        except InapplicableMove as exc:
            raise InapplicableMove(f"move {i} ({m.kind}): {exc}", index=i) from exc
        if info["spliced"]:
            e1, e2 = info["spliced"]
            if label[e1] != label[e2]:
                survives = False
            # the joined strand carries one label afterwards
            winner = label[e1]
            comp_ids = {d.edge_component[e1], d.edge_component[e2]}
            for cid in comp_ids:
                for e in d.components[cid]:
                    label[e] = winner
        for new, parent in info["inherit"].items():
            label[new] = label.get(parent, label.get(new))
        for e in info["births"]:
            label.setdefault(e, birth_label)
        d = d2
    end_labeling = tuple(label[min(comp)] for comp in d.components)
    return survives, end_labeling


# -- move ordering -------------------------------------------------------------

_PHASES = lambda g: [("O", None), ("R", None), ("U", None),
                     ("I", g), ("U", g), ("RI", None), ("RT", None)]


@dataclass
class OrderCheck:
    ok: bool
    index: int = None

    def __bool__(self):
        return self.ok


def check_lobb_order(movie):
    """Does the move sequence follow the genus-proof phase order?

    Phases: 0-handles, Reidemeister moves, fusions, g fissions, g
    fusions, Reidemeister/fission moves, then Reidemeister moves and
    2-handles.  Returns a truthy record; on failure ``.index`` is the
    first move that no phase assignment can accept.
    """
    ledger = validate_movie(movie)
    s = ledger.kinds
    best_fail = -1
    for g in range(s.count("I") + 1):
        pos = 0
        ok = True
        for allowed, count in _PHASES(g):
            if count is None:
                while pos < len(s) and s[pos] in allowed:
                    pos += 1
            else:
                for _ in range(count):
                    if pos < len(s) and s[pos] in allowed:
                        pos += 1
                    else:
                        ok = False
                        break
            if not ok:
                break
        if ok and pos == len(s):
            return OrderCheck(True)
        best_fail = max(best_fail, pos if pos < len(s) else len(s) - 1)
    return OrderCheck(False, best_fail)


# -- slice certificates ----------------------------------------------------------


@dataclass
class SliceCertificate:
    n: int
    chi_movie: int
    chi_surface: int      # chi(F): movie capped with one disk per end circle
    k: int                # connected components of F
    end_circles: int
    lo: int
    hi: int

    def to_json(self):
        return json.dumps({
            "theorem": "genus bound for slice surfaces",
            "n": self.n,
            "chi_movie": self.chi_movie,
            "chi_F": self.chi_surface,
            "k": self.k,
            "end_circles": self.end_circles,
            "lo": self.lo,
            "hi": self.hi,
            "inequalities": [
                f"s_{self.n}(L) >= ({self.n}-1)*(chi(F)-1) = {self.lo}",
                f"({self.n}-1)*(2k-1-chi(F)) = {self.hi} >= s_{self.n}(L)",
            ],
        })


def slice_certificate(movie, n):
    """Both genus-bound inequalities instantiated by a movie ending in
    an unlink: (n-1)(2k-1-chi(F)) >= s_n(L) >= (n-1)(chi(F)-1)."""
    ledger = validate_movie(movie)
    end = ledger.end
    if end.n_crossings or end.n_components == 0:
        raise NotEndingInUnlink(
            "slice certificates need a movie ending in an unlink")
    m_circles = len(end.loops)
    chi_f = ledger.chi + m_circles
    k = ledger.k
    lo = (n - 1) * (chi_f - 1)
    hi = (n - 1) * (2 * k - 1 - chi_f)
    return SliceCertificate(n=n, chi_movie=ledger.chi, chi_surface=chi_f,
                            k=k, end_circles=m_circles, lo=lo, hi=hi)


# -- file format -----------------------------------------------------------------


def save_movie(movie, path):
    with open(path, "w") as fh:
        fh.write(json.dumps({"start": dg.serialize_pd(movie.start)}) + "\n")
        for m in movie.moves:
            fh.write(json.dumps(m.to_dict()) + "\n")


def movie_from_lines(lines):
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise NotEndingInUnlink("empty movie file")
    head = json.loads(lines[0])
    start = dg.parse_pd(head["start"])
    moves = []
    for ln in lines[1:]:
        data = json.loads(ln)
        moves.append(Move(kind=data["kind"],
                          edges=tuple(data.get("edges", ())),
                          crossings=tuple(data.get("crossings", ())),
                          comment=data.get("comment", "")))
    return Movie(start, moves)


def load_movie(path):
    with open(path) as fh:
        return movie_from_lines(fh.readlines())
