"""Exact scalar arithmetic over F_p and Q, plus dense row reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import rank_mod_p, rref_mod_p


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field F_p (``p`` set) or the rationals (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not is_prime(self.p):
                raise FieldError(f"{self.p} is not prime")
            if self.p >= 2**31:
                raise FieldError("prime must be below 2^31")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip()
        if text == "Q":
            return cls(None)
        if text.startswith("F") and text[1:].isdigit():
            return cls(int(text[1:]))
        raise FieldError(f"unknown field {text!r}; expected 'Q' or 'F<p>'")

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def __call__(self, x):
        if self.p is not None:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is not None:
            return pow(int(a), self.p - 2, self.p)
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- arrays ---------------------------------------------------------

    def array(self, rows) -> np.ndarray:
        """Build a matrix with entries in this field."""
        if self.p is not None:
            return np.array(rows, dtype=np.int64) % self.p
        a = np.array(rows, dtype=object)
        if a.size:
            a = np.vectorize(Fraction, otypes=[object])(a)
        return a

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.p is not None:
            return np.zeros((rows, cols), dtype=np.int64)
        a = np.empty((rows, cols), dtype=object)
        a.fill(Fraction(0))
        return a

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is not None:
            return a % self.p
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p is None:
            return a.dot(b)
        if a.shape[1] == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        # keep partial sums below 2^63
        chunk = max(1, (2**62) // ((self.p - 1) ** 2 + 1))
        if a.shape[1] <= chunk:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, a.shape[1], chunk):
            out = (out + (a[:, s:s + chunk] @ b[s:s + chunk]) % self.p) % self.p
        return out


QQ = FieldSpec(None)


def _as_residues(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.size and (A.min() < 0 or A.max() >= F.p):
        A = A % F.p
    return A


def rref(F: FieldSpec, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; pivots chosen as the first nonzero in column order.

    Returns the nonzero rows of the RREF and the pivot column indices.
    """
    if F.p is not None:
        E, piv = rref_mod_p(_as_residues(F, A), F.p)
        return E, [int(c) for c in piv]
    A = np.array(A, dtype=A.dtype, copy=True)
    rows, cols = A.shape
    piv: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = F.inv(A[r, c])
        A[r] = F.reduce(A[r] * inv)
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col != 0)
        if others.size:
            A[others] = F.reduce(A[others] - np.outer(col[others], A[r]))
        piv.append(c)
        r += 1
    return A[:r], piv


def rank(F: FieldSpec, A: np.ndarray) -> int:
    """Rank by forward elimination (no back substitution)."""
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    if F.p is not None:
        return int(rank_mod_p(_as_residues(F, A), F.p))
    A = np.array(A, dtype=A.dtype, copy=True)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        below = r + 1 + np.flatnonzero(A[r + 1:, c] != 0)
        if below.size:
            factor = F.reduce(A[below, c] * F.inv(A[r, c]))
            A[below, c:] = F.reduce(A[below, c:] - np.outer(factor, A[r, c:]))
        r += 1
    return r


def kernel_basis(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Columns of the returned matrix form a basis of ker(A)."""
    A = np.asarray(A)
    c = A.shape[1]
    if A.shape[0] == 0:
        K = F.zeros(c, c)
        for i in range(c):
            K[i, i] = F.one
        return K
    E, piv = rref(F, A)
    free = [j for j in range(c) if j not in set(piv)]
    K = F.zeros(c, len(free))
    for t, j in enumerate(free):
        K[j, t] = F.one
        for i, pc in enumerate(piv):
            K[pc, t] = F.neg(E[i, j])
    return K
