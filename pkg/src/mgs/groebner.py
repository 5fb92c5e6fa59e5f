"""Buchberger's algorithm for graded submodules of free modules.

Vectors are dicts ``{(component, exponent): coefficient}``.  The monomial
order is position-over-term (lower component index is larger) refined by the
product of graded reverse lexicographic orders on the blocks, taken in block
order.  Syzygies come from the usual elimination trick: the GB of the columns
(v_i, e_i) in F ⊕ R^s meets 0 ⊕ R^s in a generating set of the syzygy module.
"""

from __future__ import annotations

import heapq
import itertools
import operator
from functools import lru_cache

import numpy as np

from .field import FieldSpec, rank
from .ring import Ring
from .region import add, sub


def _order_key_factory(n: tuple):
    bounds = []
    start = 0
    for b in n:
        bounds.append((start, start + b))
        start += b

    @lru_cache(maxsize=None)
    def key(exp):
        out = []
        for s, e in bounds:
            part = exp[s:e]
            out.append(sum(part))
            out.extend(-x for x in reversed(part))
        return tuple(out)

    return key


@lru_cache(maxsize=None)
def order_key(n: tuple):
    return _order_key_factory(n)


def term_key(n: tuple):
    mk = order_key(n)

    def key(term):
        comp, exp = term
        return (-comp, mk(exp))

    return key


def divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def vec_from_columns(col: dict) -> dict:
    """Convert ``{row: polynomial}`` to a term dict."""
    out = {}
    for r, p in col.items():
        for e, c in p.items():
            out[(r, e)] = c
    return out


def vec_to_columns(v: dict, offset: int = 0) -> dict:
    out: dict = {}
    for (r, e), c in v.items():
        out.setdefault(r - offset, {})[e] = c
    return out


class GroebnerBasis:
    """A Gröbner basis of a submodule of a graded free module."""

    def __init__(self, ring: Ring, shifts, vectors):
        self.ring = ring
        self.F: FieldSpec = ring.field
        self.shifts = [tuple(s) for s in shifts]
        self.key = term_key(ring.n)
        mk = order_key(ring.n)
        # min-heap key: the largest term comes out first
        self._heap_key = lru_cache(maxsize=None)(lambda t: (t[0],) + tuple(-x for x in mk(t[1])))
        self.elements: list[dict] = []
        self.leads: list[tuple] = []
        self.by_comp: dict[int, list[int]] = {}
        self._counter = itertools.count()
        self._run([v for v in vectors if v])

    # arithmetic ---------------------------------------------------------

    def lead(self, v: dict):
        return max(v, key=self.key)

    def _sub_multiple(self, v: dict, g: dict, mono, coef, heap=None) -> dict:
        """v - coef * mono * g, in place; new terms are pushed on ``heap``."""
        p = self.F.p
        hk = self._heap_key
        for (r, e), c in g.items():
            t = (r, tuple(map(operator.add, e, mono)))
            old = v.get(t)
            if p is None:
                x = (0 if old is None else old) - coef * c
            else:
                x = ((0 if old is None else old) - coef * c) % p
            if x == 0:
                if old is not None:
                    del v[t]
            else:
                v[t] = x
                if old is None and heap is not None:
                    heapq.heappush(heap, (hk(t), t))
        return v

    def find_reducer(self, term):
        comp, exp = term
        for i in self.by_comp.get(comp, ()):
            le = self.leads[i][1]
            if divides(le, exp):
                return i
        return None

    def reduce(self, v: dict, full: bool = False) -> dict:
        """Reduce v modulo the current basis (top reduction unless ``full``)."""
        v = dict(v)
        F = self.F
        heap = [(self._heap_key(t), t) for t in v]
        heapq.heapify(heap)
        done: dict = {}
        while heap:
            t = heapq.heappop(heap)[1]
            if t not in v:
                continue
            i = self.find_reducer(t)
            if i is None:
                if not full:
                    return v
                done[t] = v.pop(t)
                continue
            g = self.elements[i]
            lt = self.leads[i]
            mono = sub(t[1], lt[1])
            coef = F.div(v[t], g[lt])
            self._sub_multiple(v, g, mono, coef, heap)
        return done if full else v

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    # Buchberger ----------------------------------------------------------

    def _deg(self, term) -> tuple:
        comp, exp = term
        return add(self.ring.degree(exp), self.shifts[comp])

    def _add(self, v: dict, pairs: list, live: set):
        F = self.F
        lt = self.lead(v)
        inv = F.inv(v[lt])
        v = {t: F.mul(c, inv) for t, c in v.items()}
        h = len(self.elements)
        self.elements.append(v)
        self.leads.append(lt)
        comp, eh = lt
        same = self.by_comp.setdefault(comp, [])
        # Gebauer-Moeller: criterion B on old pairs
        for pr in list(live):
            i, j, l = pr[2], pr[3], pr[4]
            if self.leads[i][0] != comp:
                continue
            if divides(eh, l) and lcm(self.leads[i][1], eh) != l and lcm(self.leads[j][1], eh) != l:
                live.discard(pr)
        # criteria M and F on the new pairs
        cand = {}
        for g in same:
            cand[g] = lcm(self.leads[g][1], eh)
        chosen = []
        seen_lcms = set()
        for g in sorted(cand, key=lambda g: (sum(cand[g]), g)):
            l = cand[g]
            if l in seen_lcms:
                continue
            if any(divides(l2, l) and l2 != l for l2 in cand.values()):
                continue
            seen_lcms.add(l)
            chosen.append(g)
        for g in chosen:
            l = cand[g]
            deg = sum(self._deg((comp, l)))
            pr = (deg, next(self._counter), g, h, l)
            live.add(pr)
            heapq.heappush(pairs, pr)
        same.append(h)

    def _spoly(self, i, j, l):
        F = self.F
        gi, gj = self.elements[i], self.elements[j]
        li, lj = self.leads[i], self.leads[j]
        mi = sub(l, li[1])
        mj = sub(l, lj[1])
        v = {}
        for (r, e), c in gi.items():
            v[(r, tuple(a + b for a, b in zip(e, mi)))] = c
        return self._sub_multiple(v, gj, mj, F.one)

    def _run(self, vectors):
        pairs: list = []
        live: set = set()
        todo = sorted(vectors, key=lambda v: sum(self._deg(self.lead(v))))
        # interleave generators with pairs by degree (homogeneous input)
        gi = 0
        while gi < len(todo) or pairs:
            next_gen = sum(self._deg(self.lead(todo[gi]))) if gi < len(todo) else None
            while pairs and pairs[0] not in live:
                heapq.heappop(pairs)
            if pairs and (next_gen is None or pairs[0][0] < next_gen):
                pr = heapq.heappop(pairs)
                live.discard(pr)
                v = self.reduce(self._spoly(pr[2], pr[3], pr[4]))
            elif next_gen is not None:
                v = self.reduce(todo[gi])
                gi += 1
            else:
                continue
            if v:
                self._add(v, pairs, live)


def syzygies(ring: Ring, target_shifts, columns, col_degrees):
    """Generators of the syzygy module of ``columns`` (dicts row -> polynomial).

    Returns ``(syzygies, degrees)`` with each syzygy a dict ``{column index: polynomial}``.
    """
    r = len(target_shifts)
    shifts = [tuple(s) for s in target_shifts] + [tuple(d) for d in col_degrees]
    one = (0,) * ring.d
    vecs = []
    for i, col in enumerate(columns):
        v = vec_from_columns(col)
        v[(r + i, one)] = ring.field.one
        vecs.append(v)
    gb = GroebnerBasis(ring, shifts, vecs)
    out, degs = [], []
    for v, lt in zip(gb.elements, gb.leads):
        if lt[0] >= r:
            out.append(vec_to_columns(v, offset=r))
            degs.append(add(ring.degree(lt[1]), shifts[lt[0]]))
    return out, degs


def groebner(ring: Ring, shifts, columns) -> GroebnerBasis:
    return GroebnerBasis(ring, shifts, [vec_from_columns(c) for c in columns if c])


def minimal_generators(ring: Ring, shifts, vectors, degrees):
    """Select a minimal generating subset of homogeneous ``vectors`` (dicts row -> poly).

    Uses graded Nakayama: a generator is dropped when it lies in the span of
    the degree-mu piece of the submodule generated by the ones kept so far.
    """
    F = ring.field
    order = sorted(range(len(vectors)), key=lambda i: (sum(degrees[i]), tuple(degrees[i]), i))
    kept: list[int] = []
    for i in order:
        v = vectors[i]
        if not any(v.values()):
            continue
        mu = tuple(degrees[i])
        basis = []
        for r, g in enumerate(shifts):
            for e in ring.monomials(sub(mu, g)):
                basis.append((r, e))
        index = {b: t for t, b in enumerate(basis)}
        rows = []
        for j in kept:
            dj = degrees[j]
            if not all(a <= b for a, b in zip(dj, mu)):
                continue
            for m in ring.monomials(sub(mu, dj)):
                rows.append(_dense(F, vectors[j], m, index, len(basis)))
        if rows:
            A = F.array(rows)
            r0 = rank(F, A)
            r1 = rank(F, np.vstack([A, F.array([_dense(F, v, (0,) * ring.d, index, len(basis))])]))
            if r1 == r0:
                continue
        kept.append(i)
    return sorted(kept, key=lambda i: (sum(degrees[i]), tuple(degrees[i]), i))


def _dense(F, vec, mono, index, n):
    out = [0] * n
    for r, p in vec.items():
        for e, c in p.items():
            t = index[(r, tuple(a + b for a, b in zip(e, mono)))]
            out[t] = F.add(out[t], c)
    return out
