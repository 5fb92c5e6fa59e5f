"""Multidegrees, windows and downward-closed ("starred") regions of Z^k.

A region is a finite union of corners.  A corner is given by a generator
whose entries are integers or ``None`` (standing for +infinity); it denotes
``{x : x_i <= g_i for every finite g_i}``.  Every such union is stable under
subtracting N^k, and every set of the form E - N^k with E finite (or finite up
to rays) is representable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

INF = None

Multidegree = tuple  # tuple[int, ...]
Corner = tuple  # tuple[int | None, ...]


class RegionError(ValueError):
    pass


def add(u: Sequence[int], v: Sequence[int]) -> Multidegree:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Multidegree:
    return tuple(a - b for a, b in zip(u, v))


def leq(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(u, v))


def vmax(u: Sequence[int], v: Sequence[int]) -> Multidegree:
    return tuple(max(a, b) for a, b in zip(u, v))


def positive_part(u: Sequence[int]) -> Multidegree:
    return tuple(max(a, 0) for a in u)


def total(u: Sequence[int]) -> int:
    return sum(u)


def unit(k: int, i: int) -> Multidegree:
    return tuple(1 if j == i else 0 for j in range(k))


def ones(k: int) -> Multidegree:
    return (1,) * k


@dataclass(frozen=True)
class BlockStructure:
    """Shape of R = S[X_1, ..., X_k] with block i holding n_i variables."""

    n: tuple

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if not self.n or any(x < 1 for x in self.n):
            raise RegionError("need k >= 1 blocks with n_i >= 1")

    @property
    def k(self) -> int:
        return len(self.n)

    @property
    def d(self) -> int:
        return sum(self.n)

    def a(self, blocks: Iterable[int] | None = None) -> Multidegree:
        """The shift a_I = -sum_{i in I} n_i e_i (blocks are 0-based)."""
        blocks = set(range(self.k)) if blocks is None else set(blocks)
        return tuple(-self.n[i] if i in blocks else 0 for i in range(self.k))

    def n_of(self, blocks: Iterable[int]) -> int:
        return sum(self.n[i] for i in blocks)

    @property
    def delta(self) -> "Window":
        """The box prod [0, n_i - 1]."""
        return Window(tuple(0 for _ in self.n), tuple(x - 1 for x in self.n))

    @property
    def n_minus_one(self) -> Multidegree:
        return tuple(x - 1 for x in self.n)


@dataclass(frozen=True)
class Window:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(int(x) for x in self.lo))
        object.__setattr__(self, "hi", tuple(int(x) for x in self.hi))
        if len(self.lo) != len(self.hi):
            raise RegionError("window bounds have different lengths")
        if not leq(self.lo, self.hi):
            raise RegionError(f"window lo {self.lo} exceeds hi {self.hi}")

    @property
    def k(self) -> int:
        return len(self.lo)

    def __contains__(self, mu) -> bool:
        return leq(self.lo, mu) and leq(mu, self.hi)

    def points(self) -> Iterator[Multidegree]:
        """All points, in lexicographic order."""
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def __len__(self) -> int:
        out = 1
        for a, b in zip(self.lo, self.hi):
            out *= b - a + 1
        return out

    def shift(self, mu: Sequence[int]) -> "Window":
        return Window(add(self.lo, mu), add(self.hi, mu))

    def hull(self, other: "Window") -> "Window":
        return Window(tuple(map(min, self.lo, other.lo)), tuple(map(max, self.hi, other.hi)))

    @classmethod
    def parse(cls, text: str) -> "Window":
        """Parse ``a,b..c,d``."""
        try:
            lo, hi = text.split("..")
            return cls(tuple(int(x) for x in lo.split(",")), tuple(int(x) for x in hi.split(",")))
        except ValueError as exc:
            raise RegionError(f"bad window {text!r}: expected lo..hi such as -3,-3..2,2") from exc

    def __str__(self):
        return ",".join(map(str, self.lo)) + ".." + ",".join(map(str, self.hi))


def corner_leq(c: Corner, h: Corner) -> bool:
    """corner(c) is a subset of corner(h)."""
    for a, b in zip(c, h):
        if b is INF:
            continue
        if a is INF or a > b:
            return False
    return True


def in_corner(mu: Sequence[int], c: Corner) -> bool:
    return all(g is INF or x <= g for x, g in zip(mu, c))


def _normalize(corners: Iterable[Corner]) -> frozenset:
    cs = sorted(set(tuple(c) for c in corners), key=_sort_key)
    return frozenset(c for c in cs if not any(h != c and corner_leq(c, h) for h in cs))


def _sort_key(c: Corner):
    return tuple((1, 0) if g is INF else (0, g) for g in c)


class StarRegion:
    """Downward-closed subset of Z^k held as a normalized union of corners."""

    __slots__ = ("k", "corners")

    def __init__(self, k: int, corners: Iterable[Corner] = ()):
        corners = [tuple(None if g is None else int(g) for g in c) for c in corners]
        for c in corners:
            if len(c) != k:
                raise RegionError(f"corner {c} has wrong length for k={k}")
        self.k = k
        self.corners = _normalize(corners)

    @classmethod
    def empty(cls, k: int) -> "StarRegion":
        return cls(k, ())

    @classmethod
    def everything(cls, k: int) -> "StarRegion":
        return cls(k, [(INF,) * k])

    def sorted_corners(self) -> list[Corner]:
        return sorted(self.corners, key=_sort_key)

    def is_empty(self) -> bool:
        return not self.corners

    def __contains__(self, mu) -> bool:
        return any(in_corner(mu, c) for c in self.corners)

    membership = __contains__

    def union(self, other: "StarRegion") -> "StarRegion":
        self._check(other)
        return StarRegion(self.k, self.corners | other.corners)

    __or__ = union

    def intersect(self, other: "StarRegion") -> "StarRegion":
        self._check(other)
        out = []
        for c in self.corners:
            for h in other.corners:
                out.append(tuple(_min_inf(a, b) for a, b in zip(c, h)))
        return StarRegion(self.k, out)

    __and__ = intersect

    def shift(self, mu: Sequence[int]) -> "StarRegion":
        return StarRegion(self.k, [tuple(g if g is INF else g + m for g, m in zip(c, mu)) for c in self.corners])

    def contains(self, other: "StarRegion") -> bool:
        """Decide other ⊆ self exactly."""
        return self.missing_corner(other) is None

    def missing_corner(self, other: "StarRegion"):
        """A corner of ``other`` not contained in self, with a witness point, or None."""
        self._check(other)
        finite = [g for c in self.corners for g in c if g is not INF]
        big = (max(finite) if finite else 0) + 1
        for c in other.sorted_corners():
            probe = tuple(big if g is INF else g for g in c)
            if probe not in self:
                return c, probe
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, StarRegion):
            return NotImplemented
        return self.k == other.k and self.contains(other) and other.contains(self)

    def __hash__(self):
        return hash((self.k, self.corners))

    def window_points(self, w: Window) -> list[Multidegree]:
        return [mu for mu in w.points() if mu in self]

    def to_json(self) -> dict:
        return {"corners": [list(c) for c in self.sorted_corners()]}

    @classmethod
    def from_json(cls, k: int, obj: dict) -> "StarRegion":
        return cls(k, [tuple(c) for c in obj["corners"]])

    def __repr__(self):
        def fmt(c):
            return "(" + ",".join("inf" if g is INF else str(g) for g in c) + ")"
        return "StarRegion[" + " ∪ ".join(fmt(c) for c in self.sorted_corners()) + "]"

    def _check(self, other):
        if self.k != other.k:
            raise RegionError("regions live in different Z^k")


def _min_inf(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


def star(points: Iterable[Sequence[int]] = (), corners: Iterable[Corner] = (), k: int | None = None) -> StarRegion:
    """E - N^k for a finite set of points and corners."""
    pts = [tuple(p) for p in points] + [tuple(c) for c in corners]
    if k is None:
        if not pts:
            raise RegionError("cannot infer k from an empty set")
        k = len(pts[0])
    return StarRegion(k, pts)


def half_space(k: int, i: int, bound: int) -> StarRegion:
    """{x : x_i <= bound}, e.g. t - 1 - E_i."""
    return StarRegion(k, [tuple(bound if j == i else INF for j in range(k))])


def in_quadrant(mu: Sequence[int], t: Sequence[int], blocks: Iterable[int]) -> bool:
    """mu ∈ t + E_I where E_I = {q : q_i >= 0 for i in I}."""
    return all(mu[i] >= t[i] for i in blocks)


def diagonal_half_space(*args, **kwargs):
    raise RegionError("diagonal half-spaces {t : |t| < u} are not corner unions")


def region_in_window(region: StarRegion, w: Window) -> set:
    return set(region.window_points(w))


def first_difference(a: StarRegion, b: StarRegion, w: Window | None = None):
    """A witness point in the symmetric difference of a and b, or None.

    When ``w`` is given only points of ``w`` are compared.
    """
    if w is not None:
        for mu in w.points():
            if (mu in a) != (mu in b):
                return mu
        return None
    miss = a.missing_corner(b)
    if miss is not None:
        return miss[1]
    miss = b.missing_corner(a)
    if miss is not None:
        return miss[1]
    return None
