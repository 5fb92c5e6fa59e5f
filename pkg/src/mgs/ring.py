"""The standard Z^k-graded polynomial ring and finitely presented graded modules.

Polynomials are dicts ``{exponent tuple: nonzero coefficient}``.  A graded
presentation stores the shifts of the target free module F_0 (its generators),
the shifts of the source F_1, and the matrix as a list of columns, each a dict
``{row: polynomial}``.  The module is M = coker(F_1 -> F_0).

Shift convention: R(-c)_nu = R_{nu - c}, so Supp(M(-c)) = Supp(M) + c.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .field import FieldSpec, rref
from .region import BlockStructure, Window, add, sub, vmax


class DegreeError(ValueError):
    pass


# -- monomials -------------------------------------------------------------


@lru_cache(maxsize=None)
def compositions(total: int, parts: int) -> tuple:
    """Nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if total < 0:
        return ()
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_of_degree(n: tuple, mu: tuple) -> tuple:
    """Exponent vectors of all monomials of multidegree mu in blocks of sizes n."""
    if any(m < 0 for m in mu):
        return ()
    per_block = [compositions(m, b) for m, b in zip(mu, n)]
    return tuple(sum(parts, ()) for parts in itertools.product(*per_block))


def hilbert_R(n: Sequence[int], mu: Sequence[int]) -> int:
    from math import comb

    out = 1
    for m, b in zip(mu, n):
        if m < 0:
            return 0
        out *= comb(m + b - 1, b - 1)
    return out


# -- polynomial arithmetic ---------------------------------------------------


def poly_add(F: FieldSpec, f: dict, g: dict, scale=None) -> dict:
    """f + scale*g."""
    out = dict(f)
    for e, c in g.items():
        if scale is not None:
            c = F.mul(c, scale)
        v = F.add(out.get(e, F.zero), c)
        if v == 0:
            out.pop(e, None)
        else:
            out[e] = v
    return out


def poly_mul(F: FieldSpec, f: dict, g: dict) -> dict:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = F.add(out.get(e, F.zero), F.mul(c1, c2))
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
    return out


def poly_scale(F: FieldSpec, f: dict, c) -> dict:
    if c == 0:
        return {}
    return {e: F.mul(v, c) for e, v in f.items()}


def mono_mul(f: dict, m: Sequence[int]) -> dict:
    return {tuple(a + b for a, b in zip(e, m)): c for e, c in f.items()}


# -- ring -----------------------------------------------------------------


@dataclass(frozen=True)
class Ring:
    block: BlockStructure
    field: FieldSpec
    names: tuple = ()

    def __post_init__(self):
        names = self.names
        if not names:
            if self.block.k == 1:
                names = tuple(f"x{j + 1}" for j in range(self.block.n[0]))
            else:
                names = tuple(f"x{i + 1}_{j + 1}" for i, b in enumerate(self.block.n) for j in range(b))
        names = tuple(names)
        if len(names) != self.block.d:
            raise DegreeError("number of variable names differs from n_1 + ... + n_k")
        object.__setattr__(self, "names", names)

    @classmethod
    def make(cls, n: Sequence[int], field: FieldSpec | str = "F32003", names=()) -> "Ring":
        if isinstance(field, str):
            field = FieldSpec.parse(field)
        return cls(BlockStructure(tuple(n)), field, tuple(names))

    @property
    def k(self) -> int:
        return self.block.k

    @property
    def n(self) -> tuple:
        return self.block.n

    @property
    def d(self) -> int:
        return self.block.d

    @property
    def var_block(self) -> tuple:
        return tuple(i for i, b in enumerate(self.n) for _ in range(b))

    def block_vars(self, i: int) -> range:
        start = sum(self.n[:i])
        return range(start, start + self.n[i])

    def degree(self, exp: Sequence[int]) -> tuple:
        out = [0] * self.k
        for v, e in zip(self.var_block, exp):
            out[v] += e
        return tuple(out)

    def monomials(self, mu: Sequence[int]) -> tuple:
        return monomials_of_degree(self.n, tuple(mu))

    def var(self, j: int) -> dict:
        e = [0] * self.d
        e[j] = 1
        return {tuple(e): self.field.one}

    def var_exp(self, j: int) -> tuple:
        e = [0] * self.d
        e[j] = 1
        return tuple(e)

    def const(self, c) -> dict:
        c = self.field(c)
        return {} if c == 0 else {(0,) * self.d: c}

    def poly_degree(self, f: dict):
        """The common multidegree of the terms of f, or None for f = 0."""
        degs = {self.degree(e) for e in f}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError(f"polynomial {self.format(f)} is not multihomogeneous")
        return degs.pop()

    def parse(self, text: str) -> dict:
        from .parse import parse_polynomial

        return parse_polynomial(text, self)

    def format(self, f: dict) -> str:
        if not f:
            return "0"
        terms = []
        for e in sorted(f, reverse=True):
            c = f[e]
            if self.field.p is not None and c > self.field.p // 2:
                c = c - self.field.p
            mono = "*".join(
                name if x == 1 else f"{name}^{x}" for name, x in zip(self.names, e) if x
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


# -- ideal descriptors -------------------------------------------------------


@dataclass(frozen=True)
class IdealDescriptor:
    """Sum(B_I) for a nonempty block set I, or the product ideal B."""

    blocks: frozenset = frozenset()
    product: bool = False

    @classmethod
    def sum_of(cls, blocks: Iterable[int]) -> "IdealDescriptor":
        blocks = frozenset(blocks)
        if not blocks:
            raise ValueError("block sum needs a nonempty block set")
        return cls(blocks, False)

    @classmethod
    def full(cls, k: int) -> "IdealDescriptor":
        return cls(frozenset(range(k)), False)

    @classmethod
    def B(cls) -> "IdealDescriptor":
        return cls(frozenset(), True)

    @classmethod
    def parse(cls, text: str, k: int) -> "IdealDescriptor":
        text = text.replace(" ", "")
        if text == "m":
            return cls.full(k)
        if text == "B":
            return cls.B()
        blocks = []
        for part in text.split("+"):
            if not (part.startswith("B") and part[1:].isdigit()):
                raise ValueError(f"bad ideal {text!r}: use B1, B1+B2, m or B")
            i = int(part[1:]) - 1
            if not 0 <= i < k:
                raise ValueError(f"block index {i + 1} out of range for k={k}")
            blocks.append(i)
        return cls.sum_of(blocks)

    def __str__(self):
        if self.product:
            return "B"
        return "+".join(f"B{i + 1}" for i in sorted(self.blocks))


# -- graded pieces ---------------------------------------------------------------


@dataclass
class Piece:
    """M_mu as a quotient F0_mu / relations_mu.

    ``basis`` lists F0 basis elements (row, exponent); ``quotient`` holds the
    indices of those that project to a basis of M_mu; ``proj`` maps F0_mu
    coordinates (row vectors) to M_mu coordinates.
    """

    mu: tuple
    basis: list
    index: dict
    quotient: list
    proj: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.quotient)

    def quotient_basis(self) -> list:
        return [self.basis[i] for i in self.quotient]


@dataclass(eq=False)
class GradedPresentation:
    ring: Ring
    target: tuple  # shifts of F_0
    source: tuple  # shifts of F_1
    columns: tuple  # each a dict row -> polynomial
    name: str = ""
    _pieces: dict = field(default_factory=dict, repr=False)
    _mult: dict = field(default_factory=dict, repr=False)
    _res: object = field(default=None, repr=False)

    def __post_init__(self):
        self.target = tuple(tuple(int(x) for x in c) for c in self.target)
        self.source = tuple(tuple(int(x) for x in c) for c in self.source)
        self.columns = tuple({r: p for r, p in col.items() if p} for col in self.columns)
        if len(self.columns) != len(self.source):
            raise DegreeError("number of columns differs from number of source shifts")
        for c, col in enumerate(self.columns):
            for r, p in col.items():
                if not 0 <= r < len(self.target):
                    raise DegreeError(f"entry ({r}, {c}) refers to a missing row")
                want = sub(self.source[c], self.target[r])
                for e in p:
                    if self.ring.degree(e) != want:
                        raise DegreeError(
                            f"entry ({r}, {c}) has a term of degree {self.ring.degree(e)}, expected {want}"
                        )

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    @property
    def k(self) -> int:
        return self.ring.k

    def __repr__(self):
        return f"GradedPresentation({self.name or '?'}, n={self.ring.n}, {self.field.name})"

    # pieces -------------------------------------------------------------

    def free_basis(self, mu) -> list:
        out = []
        for r, g in enumerate(self.target):
            for e in self.ring.monomials(sub(mu, g)):
                out.append((r, e))
        return out

    def piece(self, mu) -> Piece:
        mu = tuple(mu)
        pc = self._pieces.get(mu)
        if pc is not None:
            return pc
        F = self.field
        basis = self.free_basis(mu)
        index = {b: i for i, b in enumerate(basis)}
        rows = []
        for c, s in enumerate(self.source):
            col = self.columns[c]
            if not col:
                continue
            for m in self.ring.monomials(sub(mu, s)):
                v = [0] * len(basis)
                for r, p in col.items():
                    for e, coef in p.items():
                        idx = index[(r, tuple(a + b for a, b in zip(e, m)))]
                        v[idx] = F.add(v[idx], coef)
                rows.append(v)
        n = len(basis)
        if rows and n:
            E, piv = rref(F, F.array(rows))
        else:
            E, piv = F.zeros(0, n), []
        pivset = set(piv)
        quotient = [j for j in range(n) if j not in pivset]
        proj = F.zeros(n, len(quotient))
        for t, j in enumerate(quotient):
            proj[j, t] = F.one
        for i, pcol in enumerate(piv):
            if quotient:
                proj[pcol, :] = F.reduce(-E[i, quotient])
        pc = Piece(mu, basis, index, quotient, proj)
        self._pieces[mu] = pc
        return pc

    def dim(self, mu) -> int:
        return self.piece(mu).dim

    def mult_matrix(self, mu, var: int) -> np.ndarray:
        """Matrix of multiplication by variable ``var``: M_mu -> M_{mu+e}, as (dim target) x (dim source)."""
        key = (tuple(mu), var)
        out = self._mult.get(key)
        if out is not None:
            return out
        src = self.piece(mu)
        nu = add(mu, self.ring.degree(self.ring.var_exp(var)))
        dst = self.piece(nu)
        out = self.field.zeros(dst.dim, src.dim)
        if src.dim and dst.dim:
            idx = [dst.index[(r, _bump(e, var))] for (r, e) in src.quotient_basis()]
            out = dst.proj[idx, :].T.copy()
        self._mult[key] = out
        return out

    def mono_matrix(self, mu, exp) -> np.ndarray:
        """Multiplication by a monomial, M_mu -> M_{mu + deg}."""
        src = self.piece(mu)
        dst = self.piece(add(mu, self.ring.degree(exp)))
        out = self.field.zeros(dst.dim, src.dim)
        if src.dim and dst.dim:
            idx = [dst.index[(r, tuple(a + b for a, b in zip(e, exp)))] for (r, e) in src.quotient_basis()]
            out = dst.proj[idx, :].T.copy()
        return out

    def support_in_window(self, w: Window) -> list:
        return [mu for mu in w.points() if self.dim(mu) > 0]

    # structure ----------------------------------------------------------

    def generator_degrees(self) -> tuple:
        return self.target

    def is_free(self) -> bool:
        return not any(self.columns)

    def shifted(self, c) -> "GradedPresentation":
        """M(-c): every shift moved by +c."""
        return GradedPresentation(
            self.ring,
            [add(g, c) for g in self.target],
            [add(s, c) for s in self.source],
            self.columns,
            name=f"{self.name}(-{tuple(c)})",
        )

    def direct_sum(self, other: "GradedPresentation") -> "GradedPresentation":
        off = len(self.target)
        cols = list(self.columns) + [{r + off: p for r, p in col.items()} for col in other.columns]
        return GradedPresentation(
            self.ring,
            self.target + other.target,
            self.source + other.source,
            cols,
            name=f"{self.name}+{other.name}",
        )

    def with_field(self, F: FieldSpec) -> "GradedPresentation":
        ring = Ring(self.ring.block, F, self.ring.names)
        cols = [{r: {e: F(c) for e, c in p.items()} for r, p in col.items()} for col in self.columns]
        return GradedPresentation(ring, self.target, self.source, cols, name=self.name)

    def quotient_by_blocks(self, blocks: Iterable[int]) -> "GradedPresentation":
        """M / B_I M."""
        cols = list(self.columns)
        src = list(self.source)
        for r, g in enumerate(self.target):
            for i in blocks:
                for v in self.ring.block_vars(i):
                    cols.append({r: self.ring.var(v)})
                    src.append(add(g, self.ring.degree(self.ring.var_exp(v))))
        return GradedPresentation(self.ring, self.target, src, cols, name=f"{self.name}/B")

    def tdeg_filter(self, u: int) -> "TdegFilter":
        return TdegFilter(self, u)

    def resolution(self):
        if self._res is None:
            from .resolution import minimal_resolution

            self._res = minimal_resolution(self)
        return self._res


def _bump(e, var):
    e = list(e)
    e[var] += 1
    return tuple(e)


@dataclass
class TdegFilter:
    """Graded-piece view of M[u] = {m : tdeg(m) >= u}."""

    module: GradedPresentation
    u: int

    def dim(self, mu) -> int:
        return self.module.dim(mu) if sum(mu) >= self.u else 0

    def quotient_dim(self, mu) -> int:
        """dim (M / M[u])_mu."""
        return self.module.dim(mu) - self.dim(mu)


def graded_piece(M: GradedPresentation, mu):
    """Basis of M_mu (as F0 basis elements) and its dimension."""
    pc = M.piece(mu)
    return pc.quotient_basis(), pc.dim


def support_in_window(M: GradedPresentation, w: Window) -> list:
    return M.support_in_window(w)


# -- named modules -------------------------------------------------------------


def free_module(ring: Ring, shifts=None, name="R") -> GradedPresentation:
    shifts = [(0,) * ring.k] if shifts is None else shifts
    return GradedPresentation(ring, shifts, [], [], name=name)


def quotient_by_blocks(ring: Ring, blocks: Iterable[int], name=None) -> GradedPresentation:
    """R / B_I."""
    blocks = sorted(set(blocks))
    if name is None:
        name = "R/m" if len(blocks) == ring.k else "R/" + "+".join(f"B{i + 1}" for i in blocks)
    M = free_module(ring).quotient_by_blocks(blocks)
    M.name = name
    return M


def quotient_by_polys(ring: Ring, polys: Sequence[dict], name="R/I") -> GradedPresentation:
    cols, src = [], []
    for f in polys:
        if not f:
            continue
        cols.append({0: f})
        src.append(ring.poly_degree(f))
    return GradedPresentation(ring, [(0,) * ring.k], src, cols, name=name)


def hypersurface_example(field: FieldSpec | str = "F2") -> GradedPresentation:
    """R/(ax+by+cz) with R = S[a,b,c,x,y,z], bidegrees (1,0) and (0,1)."""
    ring = Ring.make((3, 3), field, names=("a", "b", "c", "x", "y", "z"))
    f = ring.parse("a*x + b*y + c*z")
    return quotient_by_polys(ring, [f], name=f"R/(ax+by+cz) over {ring.field.name}")


# -- truncation and block restriction --------------------------------------------


def truncate(M: GradedPresentation, t: Sequence[int]) -> GradedPresentation:
    """A presentation of M_{t+N^k}, the submodule of M spanned by the pieces M_mu, mu >= t.

    Generators: for every generator e_j of F_0 (degree g_j), the monomial
    multiples of e_j of degree max(t, g_j).  Relations: the syzygies of
    these together with the relations of M, projected to the new generators.
    """
    from .groebner import syzygies

    t = tuple(t)
    ring = M.ring
    gens, gdeg = [], []
    for r, g in enumerate(M.target):
        top = vmax(t, g)
        for e in ring.monomials(sub(top, g)):
            gens.append({r: {e: ring.field.one}})
            gdeg.append(top)
    if not gens:
        return GradedPresentation(ring, [], [], [], name=f"{M.name}_{{>={t}}}")
    combined = gens + [dict(col) for col in M.columns]
    cdeg = gdeg + list(M.source)
    syz, sdeg = syzygies(ring, M.target, combined, cdeg)
    ng = len(gens)
    cols, src = [], []
    for s, d in zip(syz, sdeg):
        col = {i: p for i, p in s.items() if i < ng}
        if col:
            cols.append(col)
            src.append(d)
    out = GradedPresentation(ring, gdeg, src, cols, name=f"{M.name}_{{>={t}}}")
    return out


def block_restrict(M: GradedPresentation, blocks: Sequence[int], nu: Sequence[int]) -> GradedPresentation:
    """M_{*,nu} as a graded module over T = S[X_I].

    ``nu`` gives one degree per block outside ``blocks`` (in increasing block
    order).  Generators of the result: the F0 basis elements (row, m) whose
    non-I part has degree nu.  Relations: the columns of M multiplied by the
    non-I monomials bringing them to degree nu, rewritten over T.
    """
    blocks = sorted(set(blocks))
    ring = M.ring
    others = [i for i in range(ring.k) if i not in blocks]
    if len(nu) != len(others):
        raise DegreeError("nu needs one entry per block outside I")
    t_ring = Ring(
        BlockStructure(tuple(ring.n[i] for i in blocks)),
        ring.field,
        tuple(ring.names[v] for i in blocks for v in ring.block_vars(i)),
    )
    in_vars = [v for i in blocks for v in ring.block_vars(i)]
    out_vars = [v for i in others for v in ring.block_vars(i)]
    out_n = tuple(ring.n[i] for i in others)

    def split(e):
        return tuple(e[v] for v in in_vars), tuple(e[v] for v in out_vars)

    def t_deg(deg):
        return tuple(deg[i] for i in blocks)

    def o_deg(deg):
        return tuple(deg[i] for i in others)

    gen_index, gen_deg = {}, []
    for r, g in enumerate(M.target):
        for m in monomials_of_degree(out_n, sub(tuple(nu), o_deg(g))):
            gen_index[(r, m)] = len(gen_deg)
            gen_deg.append(t_deg(g))
    cols, src = [], []
    for c, s in enumerate(M.source):
        col = M.columns[c]
        for m in monomials_of_degree(out_n, sub(tuple(nu), o_deg(s))):
            new: dict = {}
            for r, p in col.items():
                for e, coef in p.items():
                    ein, eout = split(e)
                    key = (r, tuple(a + b for a, b in zip(eout, m)))
                    j = gen_index[key]
                    new.setdefault(j, {})
                    new[j] = poly_add(ring.field, new[j], {ein: coef})
            new = {j: p for j, p in new.items() if p}
            if new:
                cols.append(new)
                src.append(t_deg(s))
    return GradedPresentation(t_ring, gen_deg, src, cols, name=f"{M.name}_(*,{tuple(nu)})")


def assemble_degree(k: int, blocks: Sequence[int], mu_i: Sequence[int], nu: Sequence[int]) -> tuple:
    blocks = sorted(set(blocks))
    out, a, b = [], iter(mu_i), iter(nu)
    for i in range(k):
        out.append(next(a) if i in blocks else next(b))
    return tuple(out)


def print_module(M: GradedPresentation) -> str:
    """Render a presentation in the module-file grammar."""
    import json

    ring = M.ring
    blocks = [list(ring.names[v] for v in ring.block_vars(i)) for i in range(ring.k)]
    rows = []
    for r in range(len(M.target)):
        rows.append([ring.format(col.get(r, {})) for col in M.columns])
    return (
        f"ring {{ k = {ring.k}; n = {json.dumps(list(ring.n))}; field = \"{ring.field.name}\"; "
        f"vars = {json.dumps(blocks)} }}\n"
        f"module {{ target_shifts = {json.dumps([list(g) for g in M.target])}; "
        f"source_shifts = {json.dumps([list(s) for s in M.source])}; "
        f"matrix = {json.dumps(rows)} }}\n"
    )

