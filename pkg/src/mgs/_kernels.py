"""Compiled Gaussian elimination over F_p on int64 arrays (entries in [0, p))."""

import numpy as np
from numba import njit


@njit(cache=True)
def _inv(a, p):
    # extended Euclid; a is nonzero mod p
    t, newt, r, newr = 0, 1, p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def rank_mod_p(A, p):
    A = A.copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                A[r, j], A[piv, j] = A[piv, j], A[r, j]
        inv = _inv(A[r, c], p)
        for i in range(r + 1, rows):
            f = A[i, c]
            if f != 0:
                f = (f * inv) % p
                for j in range(c, cols):
                    if A[r, j] != 0:
                        A[i, j] = (A[i, j] - f * A[r, j]) % p
        r += 1
    return r


@njit(cache=True)
def rref_mod_p(A, p):
    A = A.copy()
    rows, cols = A.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                A[r, j], A[piv, j] = A[piv, j], A[r, j]
        inv = _inv(A[r, c], p)
        for j in range(c, cols):
            A[r, j] = (A[r, j] * inv) % p
        for i in range(rows):
            if i != r:
                f = A[i, c]
                if f != 0:
                    for j in range(c, cols):
                        if A[r, j] != 0:
                            A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivots[r] = c
        r += 1
    return A[:r].copy(), pivots[:r].copy()
