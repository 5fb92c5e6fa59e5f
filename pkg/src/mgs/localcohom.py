"""Local cohomology with support in block ideals.

For I a set of blocks and r = n_I, H^r_{B_I}(R) is the inverse-polynomial
module: monomials negative in the I-blocks and nonnegative elsewhere.  Given
a free resolution F of M, H^p_{B_I}(M) is the homology in position r - p of
the complex H^r_{B_I}(F), whose maps contract inverse monomials by the
entries of the differentials.  Everything here is exact per degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .field import rank
from .region import INF, StarRegion, Window, add, star, sub
from .ring import GradedPresentation, IdealDescriptor, Ring, compositions, hilbert_R

EXACT = "ExactWindow"
ENCLOSURE = "CertifiedEnclosure"
HEURISTIC = "Heuristic"
_CERT_ORDER = {EXACT: 0, ENCLOSURE: 1, HEURISTIC: 2}


class WindowTooSmall(ValueError):
    pass


def weakest(*certs: str) -> str:
    return max(certs, key=_CERT_ORDER.__getitem__)


def blocks_of(ideal, k: int) -> tuple:
    """Normalize an ideal given as IdealDescriptor, text or block iterable (0-based)."""
    if isinstance(ideal, str):
        ideal = IdealDescriptor.parse(ideal, k)
    if isinstance(ideal, IdealDescriptor):
        if ideal.product:
            raise ValueError("the product ideal B is handled by mv_forced_hb / hb_koszul_limit")
        return tuple(sorted(ideal.blocks))
    out = tuple(sorted(set(ideal)))
    if not out or not all(0 <= i < k for i in out):
        raise ValueError(f"bad block set {ideal!r} for k={k}")
    return out


def ideal_name(blocks: Sequence[int], k: int) -> str:
    if len(blocks) == k and k > 1:
        return "m"
    return "+".join(f"B{i + 1}" for i in blocks)


# -- inverse pieces ---------------------------------------------------------------


@lru_cache(maxsize=200_000)
def inverse_basis(n: tuple, blocks: tuple, nu: tuple, pole: int | None = None) -> tuple:
    """Monomials of degree nu with I-block exponents <= -1 (and >= -pole), others >= 0."""
    parts = []
    for i, (ni, v) in enumerate(zip(n, nu)):
        if i in blocks:
            if -v < ni:
                return ()
            opts = [tuple(-1 - x for x in c) for c in compositions(-v - ni, ni)]
            if pole is not None:
                opts = [o for o in opts if min(o) >= -pole]
        else:
            if v < 0:
                return ()
            opts = compositions(v, ni)
        if not opts:
            return ()
        parts.append(opts)
    return tuple(tuple(x for p in combo for x in p) for combo in itertools.product(*parts))


def inverse_dim(n: Sequence[int], blocks: Iterable[int], c: Sequence[int], mu: Sequence[int]) -> int:
    """dim H^{n_I}_{B_I}(R(-c))_mu."""
    from math import comb

    blocks = set(blocks)
    out = 1
    for i, (ni, v) in enumerate(zip(n, sub(mu, c))):
        if i in blocks:
            out *= comb(-v - 1, ni - 1) if -v >= ni else 0
        else:
            out *= comb(v + ni - 1, ni - 1) if v >= 0 else 0
    return out


def _block_ranges(n: tuple, blocks: tuple) -> list:
    out, start = [], 0
    for i, ni in enumerate(n):
        if i in blocks:
            out.append((start, start + ni))
        start += ni
    return out


def _contract(m, e, ranges):
    prod = tuple(a + b for a, b in zip(m, e))
    for s, t in ranges:
        for j in range(s, t):
            if prod[j] >= 0:
                return None
    return prod


def contraction_matrix(ring: Ring, f: dict, blocks, src_shift, dst_shift, mu, pole=None) -> np.ndarray:
    """Multiplication by f: H^{n_I}_{B_I}(R(-src))_mu -> H^{n_I}_{B_I}(R(-dst))_mu.

    ``f`` must be homogeneous of degree src - dst.  Products with a nonnegative
    exponent in some I-block vanish.
    """
    blocks = blocks_of(blocks, ring.k)
    want = sub(src_shift, dst_shift)
    for e in f:
        if ring.degree(e) != want:
            raise ValueError(f"term of degree {ring.degree(e)} where {want} is required")
    src = inverse_basis(ring.n, blocks, sub(mu, src_shift), pole)
    dst = inverse_basis(ring.n, blocks, sub(mu, dst_shift), pole)
    index = {m: i for i, m in enumerate(dst)}
    ranges = _block_ranges(ring.n, blocks)
    F = ring.field
    A = F.zeros(len(dst), len(src))
    for j, m in enumerate(src):
        for e, c in f.items():
            p = _contract(m, e, ranges)
            if p is not None:
                A[index[p], j] = F.add(A[index[p], j], c)
    return A


def _complex_at(ring: Ring, shifts: list, maps: list, blocks: tuple, mu, pole=None):
    """Dimensions and differentials of H^{n_I}_{B_I}(F_.) in degree mu."""
    F = ring.field
    ranges = _block_ranges(ring.n, blocks)
    bases = []
    for sh in shifts:
        offs, total, idx = [], 0, []
        for c in sh:
            b = inverse_basis(ring.n, blocks, sub(mu, c), pole)
            offs.append(total)
            idx.append({m: t for t, m in enumerate(b)})
            total += len(b)
        bases.append((offs, idx, total))
    mats = [None]
    for j in range(1, len(shifts)):
        soffs, sidx, stotal = bases[j]
        doffs, didx, dtotal = bases[j - 1]
        A = F.zeros(dtotal, stotal)
        if stotal and dtotal:
            for ci, col in enumerate(maps[j]):
                for m, t in sidx[ci].items():
                    for r, p in col.items():
                        for e, coef in p.items():
                            q = _contract(m, e, ranges)
                            if q is None:
                                continue
                            u = didx[r].get(q)
                            if u is not None:
                                row = doffs[r] + u
                                A[row, soffs[ci] + t] = F.add(A[row, soffs[ci] + t], coef)
        mats.append(A)
    return [b[2] for b in bases], mats


def _homology(F, dims, mats) -> list:
    """dim H_j of C_L -> ... -> C_0 given dims and mats[j]: C_j -> C_{j-1}."""
    L = len(dims)
    ranks = [0] * (L + 1)
    for j in range(1, L):
        if dims[j] and dims[j - 1]:
            ranks[j] = rank(F, mats[j])
    return [dims[j] - ranks[j] - ranks[j + 1] for j in range(L)]


# -- tables -----------------------------------------------------------------------


@dataclass
class CohomologyTable:
    """dim H^p_I(M)_mu for mu in a window; ``dims[mu][p]``."""

    ideal: str
    blocks: tuple
    window: Window
    dims: dict
    cert: str = EXACT
    enclosure: StarRegion | None = None

    def dim(self, p: int, mu) -> int:
        row = self.dims.get(tuple(mu))
        if row is None:
            raise KeyError(f"{tuple(mu)} is outside the scanned window {self.window}")
        return row[p] if 0 <= p < len(row) else 0

    def support(self, p: int | None = None) -> set:
        if p is None:
            return {mu for mu, row in self.dims.items() if any(row)}
        return {mu for mu, row in self.dims.items() if p < len(row) and row[p]}

    def indices(self) -> list:
        return sorted({p for row in self.dims.values() for p, v in enumerate(row) if v})

    def entries(self) -> list:
        out = []
        for mu in sorted(self.dims):
            for p, v in enumerate(self.dims[mu]):
                if v:
                    out.append({"p": p, "mu": list(mu), "dim": v, "cert": self.cert})
        return out

    def to_json(self) -> dict:
        out = {"ideal": self.ideal, "window": str(self.window), "entries": self.entries()}
        if self.enclosure is not None:
            out["enclosure"] = self.enclosure.to_json()
        return out


def enclosure(M: GradedPresentation, blocks) -> StarRegion:
    """Star of the union over resolution shifts c of c + a_I + Q_I; contains C_{B_I}(M)*."""
    k = M.k
    blocks = blocks_of(blocks, k)
    res = M.resolution()
    corners = []
    for c in res.all_shifts():
        corners.append(tuple(c[i] - M.ring.n[i] if i in blocks else INF for i in range(k)))
    return StarRegion(k, corners)


def local_cohomology_dims(M: GradedPresentation, ideal, w: Window) -> CohomologyTable:
    """Exact dims of H^p_{B_I}(M)_mu, p = 0..n_I, for every mu in w."""
    ring = M.ring
    blocks = blocks_of(ideal, ring.k)
    r = ring.block.n_of(blocks)
    res = M.resolution()
    dims = {}
    for mu in w.points():
        cd, mats = _complex_at(ring, res.shifts, res.maps, blocks, mu)
        h = _homology(ring.field, cd, mats)
        row = [0] * (r + 1)
        for j, v in enumerate(h):
            if v and r - j >= 0:
                row[r - j] = v
        dims[mu] = tuple(row)
    return CohomologyTable(ideal_name(blocks, ring.k), blocks, w, dims, EXACT, enclosure(M, blocks))


def all_tables(M: GradedPresentation, w: Window) -> dict:
    """Tables for every nonempty block set."""
    k = M.k
    out = {}
    for size in range(1, k + 1):
        for I in itertools.combinations(range(k), size):
            out[I] = local_cohomology_dims(M, I, w)
    return out


# -- stars --------------------------------------------------------------------------


@dataclass
class StarResult:
    region: StarRegion
    cert: str
    rays: tuple
    window: Window
    table: CohomologyTable | None = None

    def to_json(self) -> dict:
        return {"star": self.region.to_json(), "cert": self.cert, "rays": [i + 1 for i in self.rays],
                "window": str(self.window)}


def auto_window(M: GradedPresentation, ideal, margin: int = 3) -> Window:
    """A window large enough for support_star: enclosure corners plus margins."""
    k = M.k
    blocks = blocks_of(ideal, k)
    shifts = M.resolution().all_shifts()
    n = M.ring.n
    lo, hi = [], []
    for i in range(k):
        cs = [c[i] for c in shifts]
        if i in blocks:
            lo.append(min(cs) - n[i] - margin)
            hi.append(max(cs) - n[i] + 1)
        else:
            lo.append(min(cs) - 1)
            hi.append(max(cs) + margin)
    return Window(tuple(lo), tuple(hi))


def _check_window(M, blocks, w: Window, margin: int):
    shifts = M.resolution().all_shifts()
    n = M.ring.n
    for i in range(M.k):
        cs = [c[i] for c in shifts]
        if i in blocks:
            need = max(cs) - n[i]
            if w.hi[i] < need:
                raise WindowTooSmall(
                    f"window upper bound {w.hi[i]} in coordinate {i + 1} is below the enclosure corner {need}; "
                    f"use a larger window (for example {auto_window(M, blocks, margin)})"
                )
        else:
            need = max(cs) + margin
            if w.hi[i] < need:
                raise WindowTooSmall(
                    f"window upper bound {w.hi[i]} in coordinate {i + 1} leaves fewer than {margin} slices beyond "
                    f"the last resolution shift; use a larger window (for example {auto_window(M, blocks, margin)})"
                )


def star_from_points(points: Iterable, k: int, w: Window, margin: int, free_coords: Iterable[int]):
    """Star of a window support, with rays in coordinates whose top slices repeat."""
    pts = set(points)
    region = star(pts, k=k) if pts else StarRegion.empty(k)
    rays = []
    for j in free_coords:
        top = w.hi[j]
        slices = []
        for v in range(top - margin + 1, top + 1):
            # supports may have holes; only the downward closure of a slice matters
            sl = [mu[:j] + mu[j + 1:] for mu in pts if mu[j] == v]
            slices.append(StarRegion(k - 1, sl))
        if not slices[-1].is_empty() and all(s == slices[0] for s in slices):
            rays.append(j)
    if rays:
        corners = []
        for c in region.corners:
            corners.append(tuple(INF if (j in rays and c[j] == w.hi[j]) else c[j] for j in range(k)))
        region = StarRegion(k, corners)
    return region, tuple(rays)


def support_star(M: GradedPresentation, ideal, w: Window | None = None, margin: int = 3,
                 table: CohomologyTable | None = None) -> StarResult:
    """C_{B_I}(M)* from an exact window scan, with heuristic rays outside I."""
    k = M.k
    blocks = blocks_of(ideal, k)
    if w is None:
        w = table.window if table is not None else auto_window(M, blocks, margin)
    _check_window(M, blocks, w, margin)
    if table is None:
        table = local_cohomology_dims(M, blocks, w)
    free = [j for j in range(k) if j not in blocks]
    region, rays = star_from_points(table.support(), k, w, margin, free)
    cert = HEURISTIC if rays else ENCLOSURE
    return StarResult(region, cert, rays, w, table)


def common_window(M: GradedPresentation, margin: int = 3) -> Window:
    """One window adequate for support_star of every block set."""
    k = M.k
    w = None
    for size in range(1, k + 1):
        for I in itertools.combinations(range(k), size):
            aw = auto_window(M, I, margin)
            w = aw if w is None else w.hull(aw)
    return w


def cohB_star(M: GradedPresentation, w: Window | None = None, margin: int = 3, tables: dict | None = None) -> StarResult:
    """Union of the C_{B_i}(M)*, which equals C_B(M)*."""
    k = M.k
    if w is None:
        w = common_window(M, margin)
    region = StarRegion.empty(k)
    certs = [ENCLOSURE]
    rays = set()
    for i in range(k):
        t = tables.get((i,)) if tables else None
        s = support_star(M, (i,), w, margin, table=t)
        region = region | s.region
        certs.append(s.cert)
        rays.update(s.rays)
    return StarResult(region, weakest(*certs), tuple(sorted(rays)), w)


# -- duality ------------------------------------------------------------------------


def _mult_block(ring: Ring, p: dict, src_deg, dst_deg, index_dst: dict, src_basis) -> list:
    """Entries (row, col, coef) of multiplication by p from R_src_deg to R_dst_deg."""
    out = []
    for j, m in enumerate(src_basis):
        for e, c in p.items():
            out.append((index_dst[tuple(a + b for a, b in zip(m, e))], j, c))
    return out


def ext_dims(M: GradedPresentation, shift, nu) -> list:
    """dim Ext^j_R(M, R(shift))_nu for j = 0..length, from the dual of the minimal resolution."""
    ring = M.ring
    F = ring.field
    res = M.resolution()
    L = len(res.shifts)
    # Hom(F_j, R(s))_nu = sum over c of R_{nu + c + s}
    bases = []
    for sh in res.shifts:
        offs, total, blist = [], 0, []
        for c in sh:
            b = ring.monomials(add(add(nu, c), shift))
            offs.append(total)
            blist.append(b)
            total += len(b)
        bases.append((offs, blist, total))
    dims = [b[2] for b in bases]
    # delta_j : Hom(F_{j-1}) -> Hom(F_j), transpose-shaped: rows F_j, cols F_{j-1}
    mats = [None]
    for j in range(1, L):
        soffs, sbl, stot = bases[j - 1]
        doffs, dbl, dtot = bases[j]
        A = F.zeros(dtot, stot)
        if stot and dtot:
            for ci, col in enumerate(res.maps[j]):
                didx = {m: t for t, m in enumerate(dbl[ci])}
                for r, p in col.items():
                    for row, cc, coef in _mult_block(ring, p, None, None, didx, sbl[r]):
                        A[doffs[ci] + row, soffs[r] + cc] = F.add(A[doffs[ci] + row, soffs[r] + cc], coef)
        mats.append(A)
    ranks = [0] * (L + 1)
    for j in range(1, L):
        if dims[j] and dims[j - 1]:
            ranks[j] = rank(F, mats[j])
    return [dims[j] - ranks[j] - ranks[j + 1] for j in range(L)]


def duality_oracle(M: GradedPresentation, w: Window) -> CohomologyTable:
    """dim H^i_m(M)_mu = dim Ext^{d-i}_R(M, R(a))_{-mu}."""
    ring = M.ring
    d, k = ring.d, ring.k
    a = ring.block.a()
    dims = {}
    for mu in w.points():
        e = ext_dims(M, a, tuple(-x for x in mu))
        row = [0] * (d + 1)
        for j, v in enumerate(e):
            if v:
                row[d - j] = v
        dims[mu] = tuple(row)
    return CohomologyTable(ideal_name(tuple(range(k)), k), tuple(range(k)), w, dims, EXACT)


# -- the product ideal B ---------------------------------------------------------------


@dataclass
class MarcssBound:
    """Upper bounds dim H^q_B(M)_mu <= sum_I dim H^{q+|I|-1}_{B_I}(M)_mu."""

    window: Window
    bound: dict  # (q, mu) -> int, nonzero entries only
    support: set

    def at(self, q: int, mu) -> int:
        return self.bound.get((q, tuple(mu)), 0)


def marcss_bound(M: GradedPresentation, w: Window, tables: dict | None = None) -> MarcssBound:
    if tables is None:
        tables = all_tables(M, w)
    bound: dict = {}
    support: set = set()
    for I, tab in tables.items():
        support |= tab.support()
        for mu, row in tab.dims.items():
            for p, v in enumerate(row):
                q = p - len(I) + 1
                if v and q >= 0:
                    bound[(q, mu)] = bound.get((q, mu), 0) + v
    return MarcssBound(w, bound, support)


@dataclass
class HBEntry:
    lo: int
    hi: int
    cert: str

    @property
    def forced(self) -> bool:
        return self.lo == self.hi and self.cert == EXACT

    def to_json(self):
        return {"lo": self.lo, "hi": self.hi, "cert": self.cert}


@dataclass
class HBTable:
    window: Window
    entries: dict  # (q, mu) -> HBEntry, for every q in 0..d and mu in window

    def forced(self) -> dict:
        return {key: e.lo for key, e in self.entries.items() if e.forced}

    def forced_support(self) -> set:
        return {mu for (q, mu), e in self.entries.items() if e.forced and e.lo}

    def possible_support(self) -> set:
        return {mu for (q, mu), e in self.entries.items() if e.hi}

    def certain_support(self) -> set:
        return {mu for (q, mu), e in self.entries.items() if e.lo}

    def to_json(self) -> dict:
        rows = []
        for (q, mu) in sorted(self.entries, key=lambda t: (t[1], t[0])):
            e = self.entries[(q, mu)]
            if e.hi:
                rows.append({"p": q, "mu": list(mu), **e.to_json()})
        return {"ideal": "B", "window": str(self.window), "entries": rows}


def mv_forced_hb(M: GradedPresentation, w: Window, tables: dict | None = None) -> HBTable:
    """Mayer-Vietoris for B = B_1 ∩ B_2 (k = 2): forced values and intervals for H^q_B(M)."""
    if M.k != 2:
        raise NotImplementedError("mv_forced_hb is only available for k = 2")
    if tables is None:
        tables = all_tables(M, w)
    t1, t2, tm = tables[(0,)], tables[(1,)], tables[(0, 1)]
    d = M.ring.d
    entries = {}
    for mu in w.points():
        for q in range(d + 1):
            s_q = t1.dim(q, mu) + t2.dim(q, mu)
            s_q1 = t1.dim(q + 1, mu) + t2.dim(q + 1, mu)
            m_q, m_q1 = tm.dim(q, mu), tm.dim(q + 1, mu)
            if m_q == 0 and m_q1 == 0:
                entries[(q, mu)] = HBEntry(s_q, s_q, EXACT)
            else:
                lo = max(0, s_q - m_q) + max(0, m_q1 - s_q1)
                hi = s_q + m_q1
                entries[(q, mu)] = HBEntry(lo, hi, EXACT if lo == hi else HEURISTIC)
    return HBTable(w, entries)


# -- Koszul-limit estimator for H_B ----------------------------------------------------


@dataclass
class LimitTable:
    """Per (q, mu): the values seen for t = 1, 2, ... and the stabilized value (None if unstable)."""

    window: Window
    engine: str
    field: str
    t_max: int
    stable_steps: int
    history: dict  # (q, mu) -> list of int | None
    values: dict  # (q, mu) -> int | None
    cert: str = HEURISTIC

    def stable_fraction(self, nonzero_only: bool = False) -> float:
        keys = list(self.values)
        if nonzero_only:
            keys = [key for key in keys if any(self.history[key])]
        if not keys:
            return 1.0
        return sum(self.values[key] is not None for key in keys) / len(keys)

    def unstable(self) -> list:
        return sorted((key for key, v in self.values.items() if v is None), key=lambda t: (t[1], t[0]))

    def support(self) -> set:
        return {mu for (q, mu), v in self.values.items() if v}

    def to_json(self) -> dict:
        rows = []
        for (q, mu) in sorted(self.values, key=lambda t: (t[1], t[0])):
            v = self.values[(q, mu)]
            if v is None:
                rows.append({"p": q, "mu": list(mu), "dim": None, "cert": "Unstable",
                             "history": self.history[(q, mu)]})
            elif v:
                rows.append({"p": q, "mu": list(mu), "dim": v, "cert": self.cert})
        return {"ideal": "B", "engine": self.engine, "field": self.field, "window": str(self.window),
                "t_max": self.t_max, "stable_steps": self.stable_steps,
                "stable_fraction": round(self.stable_fraction(), 4), "entries": rows}


def _settle(hist: list, stable_steps: int):
    tail = hist[-(stable_steps + 1):]
    if len(tail) == stable_steps + 1 and tail[0] is not None and all(v == tail[0] for v in tail):
        return tail[0]
    return None


def les_applicable(M: GradedPresentation) -> bool:
    """k = 2, both blocks of size >= 2 and a resolution of length <= 1.

    Then the Mayer-Vietoris maps between the block tables vanish for degree
    reasons and H^q_B(M) is assembled from H^{q+|I|-1}_{B_I}(M).
    """
    return M.k == 2 and min(M.ring.n) >= 2 and M.resolution().length <= 1


def _pole_needed(M: GradedPresentation, mu) -> int:
    """Pole order after which every inverse piece in degree mu is complete."""
    out = 1
    n = M.ring.n
    for c in M.resolution().all_shifts():
        for i, v in enumerate(sub(mu, c)):
            out = max(out, -v - n[i] + 1)
    return out


def _les_stage(M: GradedPresentation, mu, t: int) -> dict:
    ring = M.ring
    res = M.resolution()
    out: dict = {}
    for I in ((0,), (1,), (0, 1)):
        r = ring.block.n_of(I)
        cd, mats = _complex_at(ring, res.shifts, res.maps, I, mu, pole=t)
        for j, v in enumerate(_homology(ring.field, cd, mats)):
            q = r - j - len(I) + 1
            if v and q >= 0:
                out[q] = out.get(q, 0) + v
    return out


def _koszul_generators(ring: Ring) -> list:
    """All products of one variable from each block, as exponent vectors."""
    out = []
    for combo in itertools.product(*(ring.block_vars(i) for i in range(ring.k))):
        e = [0] * ring.d
        for v in combo:
            e[v] = 1
        out.append(tuple(e))
    return out


def _koszul_stage(M: GradedPresentation, mu, t: int, cap: int) -> dict:
    """dim H^q(Hom(K(f^t), M))_mu for q = 0..s, None where a piece exceeds ``cap``."""
    ring = M.ring
    F = ring.field
    gens = _koszul_generators(ring)
    s = len(gens)
    one = (1,) * ring.k
    subsets = [list(itertools.combinations(range(s), q)) for q in range(s + 1)]
    dims = []
    for q in range(s + 1):
        nu = tuple(m + t * q * u for m, u in zip(mu, one))
        dims.append(M.dim(nu) if hilbert_total(M, nu) <= cap else None)
    sizes = [None if dims[q] is None else dims[q] * len(subsets[q]) for q in range(s + 1)]
    ranks: list = [0] * (s + 2)  # ranks[q] = rank of K^{q-1} -> K^q
    for q in range(1, s + 1):
        a, b = sizes[q - 1], sizes[q]
        if a is None or b is None:
            ranks[q] = None
            continue
        if a == 0 or b == 0:
            continue
        if a > cap or b > cap:
            ranks[q] = None
            continue
        nu = tuple(m + t * (q - 1) * u for m, u in zip(mu, one))
        d0, d1 = dims[q - 1], dims[q]
        pos = {S: i for i, S in enumerate(subsets[q])}
        A = F.zeros(b, a)
        blocks = {}
        for g in range(s):
            blocks[g] = M.mono_matrix(nu, tuple(t * x for x in gens[g]))
        for i, S in enumerate(subsets[q - 1]):
            for g in range(s):
                if g in S:
                    continue
                T = tuple(sorted(S + (g,)))
                sign = T.index(g) % 2
                blk = blocks[g] if not sign else F.reduce(-blocks[g])
                j = pos[T]
                A[j * d1:(j + 1) * d1, i * d0:(i + 1) * d0] = blk
        ranks[q] = rank(F, A)
    out = {}
    for q in range(s + 1):
        if sizes[q] is None or ranks[q] is None or ranks[q + 1] is None:
            out[q] = None
        else:
            out[q] = sizes[q] - ranks[q] - ranks[q + 1]
    return out


def hilbert_total(M: GradedPresentation, nu) -> int:
    """Upper bound for dim M_nu from the free cover."""
    return sum(hilbert_R(M.ring.n, sub(nu, g)) for g in M.target)


def hb_koszul_limit(M: GradedPresentation, w: Window, t_max: int = 8, stable_steps: int = 2,
                    engine: str = "auto", cap: int = 2500) -> LimitTable:
    """Estimate dim H^q_B(M)_mu as a limit over t of a t-dependent approximation.

    ``koszul``: cohomology of Hom(K(f_1^t, ..., f_s^t), M) for the generators
    f_j of B; pieces larger than ``cap`` leave the entry unknown.
    ``les``: the same limit taken on the inverse-module model, with pole
    order at most t, assembled through the long exact sequence of
    0 -> F_1 -> F_0 -> M -> 0 (see les_applicable).  ``auto`` picks ``les``
    when applicable.
    """
    if engine == "auto":
        engine = "les" if les_applicable(M) else "koszul"
    if engine == "les" and not les_applicable(M):
        raise ValueError("the les engine needs k = 2, n_i >= 2 and a resolution of length <= 1")
    if engine not in ("les", "koszul"):
        raise ValueError(f"unknown engine {engine!r}")
    top = M.ring.d if engine == "les" else len(_koszul_generators(M.ring))
    history: dict = {}
    values: dict = {}
    for mu in w.points():
        hs = {q: [] for q in range(top + 1)}
        done_at = _pole_needed(M, mu) if engine == "les" else None
        for t in range(1, t_max + 1):
            if engine == "les":
                stage = _les_stage(M, mu, t)
                for q in hs:
                    hs[q].append(stage.get(q, 0))
                if t >= done_at + stable_steps:
                    break
            else:
                stage = _koszul_stage(M, mu, t, cap)
                for q in hs:
                    hs[q].append(stage[q])
                if all(v is None for v in stage.values()):
                    break
        for q, h in hs.items():
            history[(q, mu)] = h
            values[(q, mu)] = _settle(h, stable_steps)
    return LimitTable(w, engine, M.field.name, t_max, stable_steps, history, values)
