"""Deterministic test corpus of small multigraded modules."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .region import add
from .ring import (
    GradedPresentation,
    Ring,
    free_module,
    hypersurface_example,
    quotient_by_blocks,
    quotient_by_polys,
)


@dataclass(frozen=True)
class CorpusLimits:
    max_k: int = 3
    max_n: int = 3  # per block; k = 3 rings use at most 2
    max_gens: int = 2
    max_rels: int = 3
    max_deg: int = 2
    field: str = "F32003"
    min_k: int = 1


def named_modules(limits: CorpusLimits = CorpusLimits()) -> list:
    """The fixed examples: R, R/m, R/B_i and the hypersurface ax+by+cz in two characteristics."""
    out = []
    F = limits.field
    if limits.min_k <= 2 <= limits.max_k:
        R = Ring.make((min(3, limits.max_n), min(3, limits.max_n)), F)
        out.append(_named(free_module(R), "R"))
        out.append(_named(quotient_by_blocks(Ring.make((1, 1), F), [0, 1]), "R/m"))
        R22 = Ring.make((2, 2), F)
        out.append(_named(quotient_by_blocks(R22, [0]), "R/B1"))
        out.append(_named(quotient_by_blocks(R22, [1]), "R/B2"))
        if limits.max_n >= 3:
            out.append(hypersurface_example("F2"))
            out.append(hypersurface_example("F5"))
    if limits.min_k <= 1 <= limits.max_k:
        R1 = Ring.make((min(2, limits.max_n),), F)
        out.append(_named(free_module(R1), "k[x]"))
        out.append(_named(quotient_by_blocks(R1, [0]), "k[x]/m"))
    return out


def _named(M: GradedPresentation, name: str) -> GradedPresentation:
    M.name = name
    return M


def _random_ring(rng: random.Random, limits: CorpusLimits) -> Ring:
    k = rng.randint(limits.min_k, limits.max_k)
    cap = limits.max_n if k <= 2 else min(2, limits.max_n)
    n = tuple(rng.randint(1, cap) for _ in range(k))
    return Ring.make(n, limits.field)


def _random_degree(rng, k, max_deg, nonzero=True):
    while True:
        d = tuple(rng.randint(0, 1 if k == 3 else max_deg) for _ in range(k))
        if not nonzero or any(d):
            return d


def _random_poly(rng, ring: Ring, deg, terms=3) -> dict:
    mons = ring.monomials(deg)
    if not mons:
        return {}
    F = ring.field
    out = {}
    for e in rng.sample(list(mons), min(terms, len(mons))):
        c = F(rng.randint(1, 50))
        if c != 0:
            out[e] = c
    return out


def _monomial_quotient(rng, ring, limits) -> GradedPresentation:
    gens = []
    for _ in range(rng.randint(1, limits.max_rels)):
        deg = _random_degree(rng, ring.k, limits.max_deg)
        mons = ring.monomials(deg)
        gens.append({rng.choice(list(mons)): ring.field.one})
    return quotient_by_polys(ring, gens, name="monomial quotient")


def _hypersurface(rng, ring, limits) -> GradedPresentation:
    deg = _random_degree(rng, ring.k, limits.max_deg)
    f = _random_poly(rng, ring, deg, terms=rng.randint(2, 4))
    return quotient_by_polys(ring, [f], name="hypersurface")


def _cokernel(rng, ring, limits) -> GradedPresentation:
    g = rng.randint(1, limits.max_gens)
    target = [_random_degree(rng, ring.k, 1, nonzero=False) for _ in range(g)]
    cols, source = [], []
    for _ in range(rng.randint(1, limits.max_rels)):
        base = max(target, key=sum)
        s = add(base, _random_degree(rng, ring.k, 1))
        col = {}
        for r, t in enumerate(target):
            deg = tuple(a - b for a, b in zip(s, t))
            if min(deg) >= 0 and any(deg):
                p = _random_poly(rng, ring, deg, terms=2)
                if p:
                    col[r] = p
        if col:
            cols.append(col)
            source.append(s)
    return GradedPresentation(ring, target, source, cols, name="cokernel")


def _shifted_sum(rng, ring, limits) -> GradedPresentation:
    A = _hypersurface(rng, ring, limits)
    B = quotient_by_blocks(ring, [rng.randrange(ring.k)]).shifted(_random_degree(rng, ring.k, 1, nonzero=False))
    M = A.direct_sum(B)
    M.name = "shifted sum"
    return M


_MAKERS = (_monomial_quotient, _hypersurface, _cokernel, _shifted_sum)


def corpus(seed: int = 0, count: int = 30, limits: CorpusLimits | None = None) -> list:
    """Named modules followed by pseudo-random ones, ``count`` in total.

    The named modules are always present, so a count below their number
    returns just the named list.
    """
    limits = limits or CorpusLimits()
    rng = random.Random(seed)
    out = named_modules(limits)
    i = 0
    while len(out) < count:
        ring = _random_ring(rng, limits)
        maker = _MAKERS[i % len(_MAKERS)]
        M = maker(rng, ring, limits)
        i += 1
        if M.resolution().shifts[0]:
            M.name = f"{M.name} #{i} n={ring.n}"
            out.append(M)
    return out
