"""Minimal graded free resolutions, Tor supports and the Koszul-homology oracle."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .field import rank
from .groebner import minimal_generators, syzygies
from .region import Window, sub
from .ring import GradedPresentation, Ring, poly_add, poly_mul


@dataclass
class FreeResolution:
    """F_0 <- F_1 <- ... ; ``shifts[j]`` lists the generator degrees of F_j and
    ``maps[j]`` (j >= 1) the columns of F_j -> F_{j-1} as dicts row -> polynomial."""

    ring: Ring
    shifts: list
    maps: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.shifts) - 1

    def betti(self) -> list:
        """Per homological index, a Counter of multidegrees (graded Betti numbers)."""
        return [Counter(s) for s in self.shifts]

    def all_shifts(self) -> list:
        return [c for s in self.shifts for c in s]

    def compose_is_zero(self) -> bool:
        F = self.ring.field
        for j in range(2, len(self.maps)):
            upper, lower = self.maps[j], self.maps[j - 1]
            for col in upper:
                acc: dict = {}
                for mid, p in col.items():
                    for r, q in lower[mid].items():
                        acc[r] = poly_add(F, acc.get(r, {}), poly_mul(F, q, p))
                if any(acc.values()):
                    return False
        return True

    def is_minimal(self) -> bool:
        zero = (0,) * self.ring.d
        for cols in self.maps[1:]:
            for col in cols:
                for p in col.values():
                    if zero in p:
                        return False
        return True

    def total_summary(self):
        """Per step: max and min total degree of the shifts."""
        out = []
        for s in self.shifts:
            if s:
                tot = [sum(c) for c in s]
                out.append((max(tot), min(tot)))
            else:
                out.append(None)
        return out


def prune(M: GradedPresentation) -> GradedPresentation:
    """Remove generators killed by relations with a unit entry."""
    F = M.field
    zero = (0,) * M.ring.d
    target = list(M.target)
    source = list(M.source)
    cols = [dict(c) for c in M.columns]
    while True:
        hit = None
        for c, col in enumerate(cols):
            for r, p in col.items():
                if zero in p and len(p) == 1:
                    hit = (c, r)
                    break
            if hit:
                break
        if hit is None:
            break
        c, r = hit
        pivot = cols[c]
        u = pivot[r][zero]
        uinv = F.inv(u)
        new_cols = []
        for c2, col in enumerate(cols):
            if c2 == c:
                continue
            e = col.get(r)
            if e:
                factor = {m: F.neg(F.mul(v, uinv)) for m, v in e.items()}
                col = dict(col)
                for rr, p in pivot.items():
                    col[rr] = poly_add(F, col.get(rr, {}), poly_mul(F, factor, p))
                col = {rr: p for rr, p in col.items() if p}
            new_cols.append(col)
        keep_src = [s for c2, s in enumerate(source) if c2 != c]
        # drop row r and reindex
        fixed = []
        for col in new_cols:
            assert not col.get(r)
            fixed.append({(rr if rr < r else rr - 1): p for rr, p in col.items() if rr != r})
        target.pop(r)
        cols, source = fixed, keep_src
    cols_src = [(col, s) for col, s in zip(cols, source) if col]
    return GradedPresentation(
        M.ring, target, [s for _, s in cols_src], [c for c, _ in cols_src], name=M.name
    )


def minimal_resolution(M: GradedPresentation, max_length: int | None = None) -> FreeResolution:
    """Minimal graded free resolution via iterated syzygies and graded Nakayama."""
    ring = M.ring
    P = prune(M)
    res = FreeResolution(ring, [list(P.target)], [None])
    if not P.target:
        return res
    keep = minimal_generators(ring, P.target, P.columns, P.source)
    cols = [P.columns[i] for i in keep]
    degs = [P.source[i] for i in keep]
    limit = ring.d if max_length is None else max_length
    while cols:
        res.shifts.append(list(degs))
        res.maps.append(cols)
        if len(res.shifts) - 1 >= limit + 1:
            raise RuntimeError("resolution longer than the Hilbert syzygy bound")
        prev_shifts = res.shifts[-1]
        syz, sdeg = syzygies(ring, res.shifts[-2], cols, degs)
        keep = minimal_generators(ring, prev_shifts, syz, sdeg)
        cols = [syz[i] for i in keep]
        degs = [sdeg[i] for i in keep]
    return res


def tor_supports(M: GradedPresentation) -> list:
    """T_j(M) with multiplicities, read off the minimal resolution."""
    return M.resolution().betti()


# -- Koszul complexes ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _subsets(vars_: tuple, j: int) -> tuple:
    return tuple(itertools.combinations(vars_, j))


def koszul_shifts(ring: Ring, blocks: Iterable[int], j: int) -> Counter:
    """Multiset of degrees of the j-fold wedge monomials of the variables in blocks I."""
    vars_ = tuple(v for i in sorted(set(blocks)) for v in ring.block_vars(i))
    if not 0 <= j <= len(vars_):
        raise ValueError(f"exterior degree {j} out of range 0..{len(vars_)}")
    out: Counter = Counter()
    for S in _subsets(vars_, j):
        deg = [0] * ring.k
        for v in S:
            deg[ring.var_block[v]] += 1
        out[tuple(deg)] += 1
    return out


def _subset_degree(ring: Ring, S) -> tuple:
    deg = [0] * ring.k
    for v in S:
        deg[ring.var_block[v]] += 1
    return tuple(deg)


def koszul_differential(M: GradedPresentation, vars_: tuple, j: int, mu) -> np.ndarray:
    """Matrix of d_j : K_j(X; M)_mu -> K_{j-1}(X; M)_mu."""
    ring = M.ring
    F = M.field
    src_sets = _subsets(vars_, j)
    dst_sets = _subsets(vars_, j - 1)
    dst_off, n_dst = {}, 0
    for S in dst_sets:
        dst_off[S] = n_dst
        n_dst += M.dim(sub(mu, _subset_degree(ring, S)))
    src_off, n_src = {}, 0
    for S in src_sets:
        src_off[S] = n_src
        n_src += M.dim(sub(mu, _subset_degree(ring, S)))
    D = F.zeros(n_dst, n_src)
    if n_dst == 0 or n_src == 0:
        return D
    for S in src_sets:
        nu = sub(mu, _subset_degree(ring, S))
        ds = M.dim(nu)
        if not ds:
            continue
        for pos, v in enumerate(S):
            T = S[:pos] + S[pos + 1:]
            nu_t = sub(mu, _subset_degree(ring, T))
            dt = M.dim(nu_t)
            if not dt:
                continue
            block = M.mult_matrix(nu, v)
            if pos % 2:
                block = F.reduce(-block)
            D[dst_off[T]:dst_off[T] + dt, src_off[S]:src_off[S] + ds] = block
    return D


def koszul_homology_dims(M: GradedPresentation, blocks: Iterable[int], mu) -> list:
    """dim H_j(K(X_I; M))_mu for j = 0..|X_I|; equals dim Tor_j(M, R/B_I)_mu."""
    ring = M.ring
    vars_ = tuple(v for i in sorted(set(blocks)) for v in ring.block_vars(i))
    nv = len(vars_)
    dims = []
    for j in range(nv + 1):
        dims.append(sum(M.dim(sub(mu, _subset_degree(ring, S))) for S in _subsets(vars_, j)))
    ranks = [0] * (nv + 2)
    for j in range(1, nv + 1):
        if dims[j] and dims[j - 1]:
            ranks[j] = rank(M.field, koszul_differential(M, vars_, j, mu))
    return [dims[j] - ranks[j] - ranks[j + 1] for j in range(nv + 1)]


def tor_supports_blocks(M: GradedPresentation, blocks: Iterable[int], w: Window) -> dict:
    """{j: {mu: dim}} for the nonzero Koszul homology H_j(K(X_I; M))_mu, mu in w."""
    blocks = tuple(sorted(set(blocks)))
    out: dict = {}
    for mu in w.points():
        for j, h in enumerate(koszul_homology_dims(M, blocks, mu)):
            if h:
                out.setdefault(j, {})[mu] = h
    return out


def oracle_window(res: FreeResolution, pad: int = 1) -> Window:
    """Bounding box of all resolution shifts, padded."""
    pts = res.all_shifts()
    k = res.ring.k
    if not pts:
        return Window((0,) * k, (0,) * k)
    lo = tuple(min(p[i] for p in pts) - pad for i in range(k))
    hi = tuple(max(p[i] for p in pts) + pad for i in range(k))
    return Window(lo, hi)


def betti_from_koszul(M: GradedPresentation, w: Window | None = None) -> list:
    """Graded Betti numbers from Koszul homology over all variables on a window."""
    if w is None:
        w = oracle_window(M.resolution())
    table = tor_supports_blocks(M, range(M.k), w)
    if not table:
        return [Counter()]
    top = max(table)
    return [Counter(table.get(j, {})) for j in range(top + 1)]
