"""Exact sparse linear algebra over the rationals.

Vectors are dicts {index: int}; scaling a vector does not change any
question we ask (rank, span membership), so everything is kept in
integers via fraction-free elimination with gcd normalization.
"""

from math import gcd


def _normalize(vec):
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        return {k: v // g for k, v in vec.items()}
    return vec


class Echelon:
    """Incrementally built row-echelon basis of a span of sparse vectors."""

    def __init__(self):
        self.pivots = {}  # pivot index -> reduced row (dict)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vec):
        """Residue of ``vec`` modulo the current span (up to scale)."""
        vec = dict(vec)
        while vec:
            # reduce against known pivots, smallest index first
            p = min(vec)
            if vec[p] == 0:
                del vec[p]
                continue
            row = self.pivots.get(p)
            if row is None:
                return _normalize(vec)
            a, b = row[p], vec[p]
            vec = {k: a * v for k, v in vec.items()}
            for k, v in row.items():
                newv = vec.get(k, 0) - b * v
                if newv:
                    vec[k] = newv
                else:
                    vec.pop(k, None)
            vec = _normalize(vec)
        return vec

    def add(self, vec):
        """Insert a vector; returns True if it enlarged the span."""
        res = self.reduce(vec)
        if not res:
            return False
        self.pivots[min(res)] = res
        return True

    def contains(self, vec):
        return not self.reduce(vec)


def rank(vectors):
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def in_span(vectors, target):
    """Is ``target`` a rational linear combination of ``vectors``?"""
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.contains(target)
