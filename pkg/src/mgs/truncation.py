"""Truncations M_{t+N^k}: regularity in total degree, the delta bound and cohomology checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .localcohom import (
    cohB_star,
    local_cohomology_dims,
    star_from_points,
    support_star,
)
from .region import Window, add, half_space, in_quadrant, leq, positive_part, sub, total, unit
from .ring import GradedPresentation, truncate


class ZeroModule(ValueError):
    pass


def total_regularity(M: GradedPresentation) -> int:
    """max_i (max total degree of a generator of F_i) - i, from the minimal resolution."""
    res = M.resolution()
    if not res.shifts[0]:
        raise ZeroModule("the regularity of the zero module is not defined")
    return max(max(total(c) for c in sh) - i for i, sh in enumerate(res.shifts) if sh)


def initial_degree(M: GradedPresentation) -> int:
    res = M.resolution()
    if not res.shifts[0]:
        raise ZeroModule("the zero module has no initial degree")
    return min(total(c) for c in res.shifts[0])


def delta_bound(M: GradedPresentation, t) -> tuple:
    """(|t| + max_i (delta_i - i), {i: delta_i}) with delta_i = max over T_i(M) of |(t-mu)^+| - |t-mu|."""
    t = tuple(t)
    deltas = {}
    for i, sh in enumerate(M.resolution().shifts):
        if sh:
            deltas[i] = max(total(positive_part(sub(t, mu))) - total(sub(t, mu)) for mu in sh)
    if not deltas:
        raise ZeroModule("no bound for the zero module")
    return total(t) + max(d - i for i, d in deltas.items()), deltas


def in_delta_box(M: GradedPresentation, t, s) -> bool:
    """s in t + Delta with Delta = prod [0, n_i - 1]."""
    return leq(t, s) and leq(s, add(t, M.ring.block.n_minus_one))


@dataclass
class Check:
    name: str
    ok: bool
    witness: object = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"check": self.name, "ok": self.ok}
        if self.witness is not None:
            out["witness"] = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class TruncationReport:
    name: str
    checks: list = field(default_factory=list)
    precondition: str = ""

    @property
    def ok(self) -> bool:
        return not self.precondition and all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        out = {"report": self.name, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}
        if self.precondition:
            out["precondition"] = self.precondition
        return out


def sample_ts(M: GradedPresentation, mu, seed: int = 0, depth: int = 2) -> list:
    """t0 = mu + (n - 1), the points t0 + e_i, and one random deeper point."""
    k = M.k
    t0 = add(mu, M.ring.block.n_minus_one)
    out = [t0] + [add(t0, unit(k, i)) for i in range(k)]
    rng = random.Random(seed)
    deeper = add(t0, tuple(rng.randint(0, depth) for _ in range(k)))
    if deeper not in out:
        out.append(deeper)
    return out


def verify_linear_truncation(M: GradedPresentation, mu, w: Window | None = None, margin: int = 3,
                             seed: int = 0, ts=None, cohb=None) -> TruncationReport:
    """reg(M_{t+N^k}) = |t| and T(M_{t+N^k}) within t + Delta, for t in mu + (n - 1) + N^k."""
    mu = tuple(mu)
    rep = TruncationReport(f"linear truncation from {mu}")
    if cohb is None:
        cohb = cohB_star(M, w, margin)
    region = cohb.region if hasattr(cohb, "region") else cohb
    if mu in region:
        rep.precondition = f"{mu} lies inside C_B(M)*"
        return rep
    if ts is None:
        ts = sample_ts(M, mu, seed)
    if w is not None:
        ts = [t for t in ts if t in w] or ts[:1]
    for t in ts:
        T = truncate(M, t)
        if not T.resolution().shifts[0]:
            rep.checks.append(Check("regularity", True, t, "truncation is zero"))
            continue
        reg = total_regularity(T)
        rep.checks.append(Check("regularity", reg == total(t), t, f"reg = {reg}, |t| = {total(t)}"))
        bad = [s for s in T.resolution().all_shifts() if not in_delta_box(M, t, s)]
        rep.checks.append(Check("tor in t + Delta", not bad, bad[0] if bad else t))
        bound, _ = delta_bound(M, t)
        rep.checks.append(Check("delta bound", reg <= bound, t, f"reg = {reg}, bound = {bound}"))
    return rep


def verify_free_identity(n, box: Window, field: str = "F32003") -> TruncationReport:
    """reg(R_{t+N^k}) = |t| exactly when t in N^k, for every t in the box."""
    from .ring import Ring, free_module

    R = free_module(Ring.make(n, field))
    rep = TruncationReport(f"reg(R_t) = |t| iff t >= 0, n = {tuple(n)}")
    for t in box.points():
        reg = total_regularity(truncate(R, t))
        linear = reg == total(t)
        expected = all(x >= 0 for x in t)
        rep.checks.append(Check("identity", linear == expected and reg == total(positive_part(t)), t,
                                f"reg = {reg}, |t| = {total(t)}"))
    return rep


def truncation_cohomology_check(M: GradedPresentation, t, w: Window, margin: int = 3) -> TruncationReport:
    """Compare H^j_{B_i} of M and of M_{t+N^k} degree by degree on w."""
    t = tuple(t)
    k = M.k
    rep = TruncationReport(f"truncation cohomology at t = {t}")
    T = truncate(M, t)
    others = lambda i: [j for j in range(k) if j != i]
    for i in range(k):
        hm = local_cohomology_dims(M, (i,), w)
        ht = local_cohomology_dims(T, (i,), w)
        first_bad = {"(i)": None, "(ii)(1)": None, "(ii)(2)": None}
        for mu in w.points():
            a, b = hm.dims[mu], ht.dims[mu]
            if in_quadrant(mu, t, range(k)):
                if a != b and first_bad["(i)"] is None:
                    first_bad["(i)"] = mu
            elif not in_quadrant(mu, t, others(i)):
                if any(b) and first_bad["(ii)(1)"] is None:
                    first_bad["(ii)(1)"] = mu
            else:
                quot = M.dim(mu) - a[0]
                ok = b[0] == 0 and b[1] == quot + a[1] and b[2:] == a[2:]
                if not ok and first_bad["(ii)(2)"] is None:
                    first_bad["(ii)(2)"] = mu
        for case, bad in first_bad.items():
            rep.checks.append(Check(f"B{i + 1} case {case}", bad is None, bad))
        if k == 1:
            rep.checks.extend(_standard_support(M, t, w, hm, ht))
    rep.checks.append(_cohtrunc2(M, T, t, w, margin))
    return rep


def _standard_support(M, t, w, hm, ht) -> list:
    """The k = 1 statements about C^j_m of a truncation."""
    pts = list(w.points())
    c0 = {mu for mu in pts if hm.dims[mu][0] and mu[0] >= t[0]}
    c1 = {mu for mu in pts if hm.dims[mu][1]} | {
        mu for mu in pts if M.dim(mu) - hm.dims[mu][0] and mu[0] <= t[0] - 1
    }
    out = [
        Check("k=1 (i)", ht.support(0) == c0, _any(ht.support(0) ^ c0)),
        Check("k=1 (ii)", ht.support(1) == c1, _any(ht.support(1) ^ c1)),
    ]
    top = len(hm.dims[pts[0]])
    higher = all(ht.support(j) == hm.support(j) for j in range(2, top))
    out.append(Check("k=1 (iii)", higher))
    return out


def _any(s):
    return min(s) if s else None


def _cohtrunc2(M, T, t, w: Window, margin: int) -> Check:
    """C_m(M_t)* inside the intersection over i of (C_{B_i}(M) ∩ (t + N^k))* ∪ (t - 1 - E_i)."""
    k = M.k
    lhs = support_star(T, tuple(range(k)), w, margin, table=None) if _fits(T, w) else None
    if lhs is None:
        lhs_region = star_from_points(local_cohomology_dims(T, tuple(range(k)), w).support(), k, w, margin, [])[0]
    else:
        lhs_region = lhs.region
    rhs = None
    for i in range(k):
        tab = local_cohomology_dims(M, (i,), w)
        pts = [mu for mu in tab.support() if in_quadrant(mu, t, range(k))]
        part, _ = star_from_points(pts, k, w, margin, [j for j in range(k) if j != i])
        part = part | half_space(k, i, t[i] - 1)
        rhs = part if rhs is None else rhs & part
    miss = rhs.missing_corner(lhs_region)
    return Check("C_m(M_t)* inclusion", miss is None, miss[1] if miss else None)


def _fits(T, w) -> bool:
    try:
        from .localcohom import _check_window

        _check_window(T, tuple(range(T.k)), w, 0)
        return True
    except ValueError:
        return False
