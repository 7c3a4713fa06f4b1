"""The n=2 perturbed filtered chain complex of a link diagram.

The cube of resolutions is indexed by per-crossing coordinates
t in {0,1}^N, where t=0 denotes the smoothing pairing (a,b),(c,d) of
the PD tuple; the oriented resolution is t_i = 0 at positive crossings
and t_i = 1 at negative ones, and every differential edge raises one
t_i from 0 to 1.

Each circle of a resolution carries the algebra Q[x]/(x^2 - 1) with

    m: 1*1 -> 1,  1*x -> x,  x*x -> 1
    D: 1 -> 1(x)x + x(x)1,  x -> x(x)x + 1(x)1

and basis elements are monomials with a 0/1 exponent per circle.  The
gradings are h = |t| - N_minus and q = 2*deg - r_t - w - h; the
differential preserves q or drops it by 4.
"""

import json
from dataclasses import dataclass

from . import linalg
from .errors import InconsistentDiagram, NotACycle, TooLarge, ZeroClass

DEFAULT_MAX_CROSSINGS = 16


@dataclass
class CanonicalClass:
    """A Gornik/Lee canonical cycle supported at the oriented resolution."""
    label: int                  # global root label, +1 or -1
    circle_labels: tuple        # per-Seifert-circle value in {+1, -1}
    chain: dict                 # basis index -> integer coefficient


@dataclass
class HClass:
    """Homogeneous-parity piece of the canonical generators."""
    p: int                      # residue in {0, 1}
    chain: dict


class FilteredComplex:
    def __init__(self, diagram, max_crossings=DEFAULT_MAX_CROSSINGS):
        if diagram.n_crossings > max_crossings:
            raise TooLarge(
                f"{diagram.n_crossings} crossings exceeds limit {max_crossings}")
        self.diagram = diagram
        self.n = diagram.n_crossings
        self.writhe = diagram.writhe
        self.n_minus = sum(1 for x in diagram.crossings if x.sign < 0)
        self._build()

    # -- construction ----------------------------------------------------

    def _build(self):
        d = self.diagram
        n = self.n
        self.circles = {}      # t -> tuple of frozensets
        self.start = {}        # t -> first basis index
        self.basis_t = []      # per basis element
        self.basis_subset = []
        self.basis_h = []
        self.basis_q = []
        idx = 0
        for t in range(1 << n):
            circ = d.circles(t)
            self.circles[t] = circ
            self.start[t] = idx
            r = len(circ)
            h = bin(t).count("1") - self.n_minus
            for subset in range(1 << r):
                self.basis_t.append(t)
                self.basis_subset.append(subset)
                self.basis_h.append(h)
                self.basis_q.append(
                    2 * bin(subset).count("1") - r - self.writhe - h)
                idx += 1
        self.dim = idx

        self.by_h = {}
        for i, h in enumerate(self.basis_h):
            self.by_h.setdefault(h, []).append(i)

        # differential columns: basis index -> list of (row, coeff)
        self.columns = [[] for _ in range(self.dim)]
        for t in range(1 << n):
            for i in range(n):
                if (t >> i) & 1:
                    continue
                self._add_edge_maps(t, i)

    def _add_edge_maps(self, t, i):
        d = self.diagram
        t2 = t | (1 << i)
        src, dst = self.circles[t], self.circles[t2]
        sign = -1 if bin(t & ((1 << i) - 1)).count("1") % 2 else 1
        touched = set(d.crossings[i].edges)

        src_active = [k for k, c in enumerate(src) if c & touched]
        dst_active = [k for k, c in enumerate(dst) if c & touched]
        dst_lookup = {c: k for k, c in enumerate(dst)}
        # circles untouched by crossing i are carried across by identity
        carry = {k: dst_lookup[c] for k, c in enumerate(src)
                 if k not in src_active and c in dst_lookup}
        if len(carry) != len(src) - len(src_active):
            raise InconsistentDiagram(
                "resolution change moved a circle it should not touch")

        merge = len(src_active) == 2 and len(dst_active) == 1
        split = len(src_active) == 1 and len(dst_active) == 2
        if not (merge or split):
            raise InconsistentDiagram(
                "smoothing change is neither a merge nor a split "
                "(input PD is not planar)")

        r_src = len(src)
        for subset in range(1 << r_src):
            col = self.start[t] + subset
            base = 0
            for k, k2 in carry.items():
                if (subset >> k) & 1:
                    base |= 1 << k2
            if merge:
                e1 = (subset >> src_active[0]) & 1
                e2 = (subset >> src_active[1]) & 1
                out = base | ((e1 ^ e2) << dst_active[0])
                self.columns[col].append((self.start[t2] + out, sign))
            else:
                e = (subset >> src_active[0]) & 1
                k1, k2 = dst_active
                if e == 0:
                    terms = (1 << k1, 1 << k2)
                else:
                    terms = ((1 << k1) | (1 << k2), 0)
                for out in terms:
                    self.columns[col].append((self.start[t2] + base + out, sign))

    # -- chain-level helpers ----------------------------------------------

    def apply_differential(self, chain):
        out = {}
        for i, coeff in chain.items():
            for row, c in self.columns[i]:
                out[row] = out.get(row, 0) + coeff * c
        return {k: v for k, v in out.items() if v}

    def check_d_squared(self):
        for i in range(self.dim):
            if self.apply_differential(dict(self.columns[i])):
                return False
        return True

    def boundary_columns(self, h):
        """Images of the basis elements in homological degree h."""
        return [dict(self.columns[i]) for i in self.by_h.get(h, [])]

    def homology_rank(self, h):
        dim_h = len(self.by_h.get(h, []))
        rank_out = linalg.rank(self.boundary_columns(h))
        rank_in = linalg.rank(self.boundary_columns(h - 1))
        return dim_h - rank_out - rank_in

    def homology_dimension(self):
        return sum(self.homology_rank(h) for h in self.by_h)

    # -- the quantum filtration grading ------------------------------------

    def qgr(self, chain):
        """Smallest filtration level containing the class of ``chain``.

        ``chain`` must be a cycle in homological degree 0.  Works down
        through the q-levels: level j is reachable iff the part of the
        chain above j can be cancelled by the part of a boundary above j.
        """
        if not chain:
            raise ZeroClass("the zero chain has no filtration grading")
        hs = {self.basis_h[i] for i in chain}
        if hs != {0}:
            raise NotACycle("chain is not homogeneous of homological degree 0")
        if self.apply_differential(chain):
            raise NotACycle("chain is not a cycle")

        boundaries = self.boundary_columns(-1)
        ech = linalg.Echelon()
        for b in boundaries:
            ech.add(b)
        if ech.contains(chain):
            raise ZeroClass("chain is a boundary")

        jmax = max(self.basis_q[i] for i in chain)
        levels = sorted({self.basis_q[i] for i in self.by_h[0]
                         if self.basis_q[i] <= jmax}, reverse=True)
        best = jmax
        for j in levels[1:]:
            if self._reachable(chain, boundaries, j):
                best = j
            else:
                break
        return best

    def _reachable(self, chain, boundaries, j):
        proj = {i: v for i, v in chain.items() if self.basis_q[i] > j}
        cols = []
        for b in boundaries:
            pb = {i: v for i, v in b.items() if self.basis_q[i] > j}
            if pb:
                cols.append(pb)
        return linalg.in_span(cols, proj)

    # -- canonical generators ----------------------------------------------

    @property
    def oriented_t(self):
        return self.diagram.oriented_mask

    def seifert_coloring(self):
        """2-coloring of the Seifert graph by nesting parity."""
        t = self.oriented_t
        circ = self.circles[t]
        where = {}
        for k, c in enumerate(circ):
            for e in c:
                where[e] = k
        adj = {k: set() for k in range(len(circ))}
        for i, x in enumerate(self.diagram.crossings):
            (u1, _), (u2, _) = x.smoothing((t >> i) & 1)
            k1, k2 = where[u1], where[u2]
            if k1 == k2:
                raise InconsistentDiagram(
                    "a crossing joins a Seifert circle to itself "
                    "(input PD is not planar)")
            adj[k1].add(k2)
            adj[k2].add(k1)
        color = {}
        for root in range(len(circ)):
            if root in color:
                continue
            color[root] = 0
            stack = [root]
            while stack:
                k = stack.pop()
                for k2 in adj[k]:
                    if k2 not in color:
                        color[k2] = 1 - color[k]
                        stack.append(k2)
                    elif color[k2] == color[k]:
                        raise InconsistentDiagram(
                            "Seifert graph is not bipartite "
                            "(input PD is not planar)")
        return [color[k] for k in range(len(circ))]

    def canonical_cycle(self, label):
        """The constant-label canonical cycle, a product over Seifert
        circles of (x_c + label_c) with alternating per-circle labels."""
        if label not in (1, -1):
            raise ValueError("label must be +1 or -1")
        coloring = self.seifert_coloring()
        eps = [label * (1 if col == 0 else -1) for col in coloring]
        chain = self._product_chain(eps)
        cls = CanonicalClass(label=label, circle_labels=tuple(eps), chain=chain)
        if self.apply_differential(chain):
            raise InconsistentDiagram("canonical chain is not a cycle")
        return cls

    def _product_chain(self, eps, parity=None):
        t = self.oriented_t
        r = len(self.circles[t])
        chain = {}
        for subset in range(1 << r):
            if parity is not None and bin(subset).count("1") % 2 != parity:
                continue
            coeff = 1
            for k in range(r):
                if not (subset >> k) & 1:
                    coeff *= eps[k]
            chain[self.start[t] + subset] = coeff
        return chain

    def h_cycle(self, p):
        """Parity-p piece: all squarefree monomials of degree = p (mod 2),
        signed so that the +1 canonical cycle equals h_0 + h_1."""
        if p not in (0, 1):
            raise ValueError("p must be 0 or 1")
        coloring = self.seifert_coloring()
        eps = [1 if col == 0 else -1 for col in coloring]
        chain = self._product_chain(eps, parity=p)
        if self.apply_differential(chain):
            raise InconsistentDiagram("h-chain is not a cycle")
        return HClass(p=p, chain=chain)

    def low_generator(self):
        """A parity class whose filtration level certifies the spread
        below the canonical generator."""
        graded = [(self.qgr(self.h_cycle(p).chain), p) for p in (0, 1)]
        level, p = min(graded)
        return p, self.h_cycle(p), level

    # -- top-level invariant -------------------------------------------------

    def s2(self):
        return self.qgr(self.canonical_cycle(1).chain) - 1

    # -- debug dump ------------------------------------------------------------

    def dump_json(self):
        triplets = []
        for col in range(self.dim):
            for row, coeff in self.columns[col]:
                triplets.append([row, col, f"{coeff}/1"])
        return json.dumps({
            "dimension": self.dim,
            "h": self.basis_h,
            "q": self.basis_q,
            "differential": triplets,
        })


def build_filtered_complex(diagram, max_crossings=DEFAULT_MAX_CROSSINGS):
    return FilteredComplex(diagram, max_crossings=max_crossings)


def s2(diagram, max_crossings=DEFAULT_MAX_CROSSINGS):
    """The n=2 concordance invariant of the link presented by ``diagram``."""
    if diagram.n_components == 0:
        raise ValueError("s2 of the empty link is undefined")
    return FilteredComplex(diagram, max_crossings=max_crossings).s2()
