"""Machine checks of the support theorems on concrete modules.

Region (in)equalities are decided on normalized StarRegions by mutual
containment.  A check fed by heuristic input (ray detection, interval
entries) never reports Fail on that input alone; it reports Inconclusive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .localcohom import (
    ENCLOSURE,
    EXACT,
    HEURISTIC,
    WindowTooSmall,
    all_tables,
    auto_window,
    common_window,
    local_cohomology_dims,
    marcss_bound,
    mv_forced_hb,
    star_from_points,
    support_star,
    weakest,
)
from .region import INF, StarRegion, Window, add, first_difference, leq, star, sub
from .resolution import koszul_shifts, tor_supports_blocks
from .ring import GradedPresentation

PASS, FAIL, INCONCLUSIVE = "Pass", "Fail", "Inconclusive"


@dataclass
class VerificationReport:
    theorem: str
    module: str
    window: str
    margin: int
    status: str
    witness: tuple | None = None
    reason: str = ""
    cert: str = EXACT
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError("a failing report needs a witness degree")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out = {"theorem": self.theorem, "module": self.module, "window": self.window, "margin": self.margin,
               "status": self.status, "cert": self.cert}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.reason:
            out["reason"] = self.reason
        if self.details:
            out["details"] = self.details
        return out


def _subsets(k: int):
    for size in range(1, k + 1):
        yield from itertools.combinations(range(k), size)


def _region_status(lhs: StarRegion, rhs: StarRegion, cert: str):
    """Status and witness for lhs == rhs."""
    wit = first_difference(lhs, rhs)
    if wit is None:
        return PASS, None
    return (FAIL if cert != HEURISTIC else INCONCLUSIVE), wit


def _report(theorem, M, w, margin, status, witness=None, reason="", cert=EXACT, **details):
    return VerificationReport(theorem, M.name or repr(M), str(w), margin, status,
                              tuple(witness) if witness is not None else None, reason, cert, details)


# -- Tor side --------------------------------------------------------------------------


def tor_window(M: GradedPresentation, blocks, w: Window) -> Window:
    """Window for Koszul homology over X_I whose shift by a_I covers w."""
    n = M.ring.n
    lo = tuple(w.lo[i] + (n[i] if i in blocks else 0) for i in range(M.k))
    hi = tuple(w.hi[i] + (n[i] if i in blocks else 0) for i in range(M.k))
    return Window(lo, hi)


def hat_tor_points(M: GradedPresentation, blocks, w: Window, by_j: bool = False):
    """T-hat^I(M) ∩ w from Koszul homology (points, or {j: points})."""
    a = M.ring.block.a(blocks)
    table = tor_supports_blocks(M, blocks, tor_window(M, blocks, w))
    if by_j:
        return {j: {add(mu, a) for mu in pts} for j, pts in table.items()}
    return {add(mu, a) for pts in table.values() for mu in pts}


def hat_tor_star(M: GradedPresentation, blocks, w: Window, margin: int):
    pts = hat_tor_points(M, blocks, w)
    free = [j for j in range(M.k) if j not in blocks]
    return star_from_points(pts, M.k, w, margin, free)


def ceqt_window(M: GradedPresentation, blocks, margin: int) -> Window:
    """auto_window stretched so that T-hat^I points (I-coordinates up to max shift) fit."""
    w = auto_window(M, blocks, margin)
    shifts = M.resolution().all_shifts()
    hi = tuple(max(w.hi[i], max(c[i] for c in shifts) + 1) if i in blocks else w.hi[i] for i in range(M.k))
    lo = tuple(min(w.lo[i], min(c[i] for c in shifts) - M.ring.n[i] - 1) for i in range(M.k))
    return Window(lo, hi)


# -- theorems --------------------------------------------------------------------------


def verify_basicincl(M: GradedPresentation, w: Window | None = None, margin: int = 3) -> VerificationReport:
    """C_m(M)* = T(M) + C_m(R) = T-hat(M)*."""
    k = M.k
    blocks = tuple(range(k))
    w = w or auto_window(M, blocks, margin)
    lhs = support_star(M, blocks, w, margin)
    a = M.ring.block.a()
    shifts = M.resolution().all_shifts()
    rhs = star([add(c, a) for c in shifts], k=k) if shifts else StarRegion.empty(k)
    status, wit = _region_status(lhs.region, rhs, lhs.cert)
    return _report("basicincl", M, w, margin, status, wit, cert=lhs.cert,
                   lhs=lhs.region.to_json(), rhs=rhs.to_json())


def verify_ceqt(M: GradedPresentation, blocks, w: Window | None = None, margin: int = 3) -> VerificationReport:
    """C_{B_I}(M)* = T-hat^I(M)*, plus the equality after subtracting N in the I-coordinates."""
    k = M.k
    blocks = tuple(sorted(blocks))
    w = w or ceqt_window(M, blocks, margin)
    lhs = support_star(M, blocks, w, margin)
    tpts = hat_tor_points(M, blocks, w)
    free = [j for j in range(k) if j not in blocks]
    rhs, rays = star_from_points(tpts, k, w, margin, free)
    cert = weakest(lhs.cert, HEURISTIC if rays else ENCLOSURE)
    status, wit = _region_status(lhs.region, rhs, cert)
    if status == PASS:
        # the unstarred form: close downward in the I-coordinates only
        cpts = lhs.table.support()
        a_side = _partial_closure(tpts, blocks, w)
        c_side = _partial_closure(cpts, blocks, w)
        diff = a_side ^ c_side
        if diff:
            status, wit = FAIL, min(diff)
    return _report("C=T", M, w, margin, status, wit, cert=cert, ideal="+".join(f"B{i + 1}" for i in blocks),
                   lhs=lhs.region.to_json(), rhs=rhs.to_json())


def _partial_closure(points, blocks, w: Window) -> set:
    """(points - sum_{i in I} e_i N) ∩ w."""
    by_rest: dict = {}
    for p in points:
        key = tuple(x for j, x in enumerate(p) if j not in blocks)
        by_rest.setdefault(key, []).append(p)
    out = set()
    for mu in w.points():
        key = tuple(x for j, x in enumerate(mu) if j not in blocks)
        for p in by_rest.get(key, ()):
            if all(p[i] >= mu[i] for i in blocks):
                out.add(mu)
                break
    return out


def block_stars(M: GradedPresentation, w: Window, margin: int, tables: dict | None = None) -> dict:
    """support_star for every nonempty block set on one window."""
    tables = tables or {}
    return {I: support_star(M, I, w, margin, table=tables.get(I)) for I in _subsets(M.k)}


def verify_cohB(M: GradedPresentation, w: Window | None = None, margin: int = 3) -> VerificationReport:
    """Union of the C_{B_i}(M)* equals the union over all block sums, and (k = 2) matches H_B."""
    k = M.k
    w = w or common_window(M, margin)
    tables = all_tables(M, w)
    stars = block_stars(M, w, margin, tables)
    singles = StarRegion.empty(k)
    every = StarRegion.empty(k)
    for I, s in stars.items():
        every = every | s.region
        if len(I) == 1:
            singles = singles | s.region
    cert = weakest(*(s.cert for s in stars.values()))
    status, wit = _region_status(singles, every, cert)
    details = {"union": singles.to_json()}
    if status != PASS or k != 2:
        return _report("cohB", M, w, margin, status, wit, cert=cert, **details)
    hb = mv_forced_hb(M, w, tables)
    outside = sorted(mu for mu in hb.possible_support() if mu not in singles)
    if outside:
        return _report("cohB", M, w, margin, FAIL, outside[0], "H_B support point outside the union",
                       cert=cert, **details)
    certain = hb.certain_support()
    possible = hb.possible_support()
    unwitnessed = []
    weak = []
    for c in singles.sorted_corners():
        if any(_above(mu, c) for mu in certain):
            continue
        if any(_above(mu, c) for mu in possible):
            weak.append(c)
        else:
            unwitnessed.append(c)
    details["forced_entries"] = len(hb.forced())
    if unwitnessed:
        c = unwitnessed[0]
        return _report("cohB", M, w, margin, INCONCLUSIVE,
                       reason=f"no H_B entry in the window witnesses corner {list(c)}", cert=HEURISTIC, **details)
    if weak:
        return _report("cohB", M, w, margin, INCONCLUSIVE,
                       reason=f"corner {list(weak[0])} is witnessed only by interval entries", cert=HEURISTIC,
                       **details)
    return _report("cohB", M, w, margin, PASS, cert=cert, **details)


def _above(mu, corner) -> bool:
    return all(g is INF or x >= g for x, g in zip(mu, corner))


def verify_inccoh(M: GradedPresentation, w: Window | None = None, margin: int = 3) -> VerificationReport:
    """C_{B_I}(M)* ⊆ C_{B_I minus one block}(M)* and ⊆ the intersection of the C_{B_i}(M)*."""
    w = w or common_window(M, margin)
    stars = block_stars(M, w, margin)
    cert = weakest(*(s.cert for s in stars.values()))
    for I, s in stars.items():
        if len(I) < 2:
            continue
        meet = None
        for i in I:
            single = stars[(i,)].region
            meet = single if meet is None else meet & single
            smaller = stars[tuple(j for j in I if j != i)].region
            miss = smaller.missing_corner(s.region)
            if miss:
                return _report("incCoh", M, w, margin, FAIL if cert != HEURISTIC else INCONCLUSIVE, miss[1],
                               f"C_{I} not inside C_{tuple(j for j in I if j != i)}", cert=cert)
        miss = meet.missing_corner(s.region)
        if miss:
            return _report("incCoh", M, w, margin, FAIL if cert != HEURISTIC else INCONCLUSIVE, miss[1],
                           f"C_{I} not inside the intersection", cert=cert)
    return _report("incCoh", M, w, margin, PASS, cert=cert)


def verify_torincb(M: GradedPresentation, blocks, ideal_blocks=None, w: Window | None = None,
                   margin: int = 3) -> VerificationReport:
    """T-hat^I_j(M) ⊆ ∪_{r <= n_I - j} C^r_J(M) + E^I_{j+r} + a_I, with J = B_{I'} for I' ⊆ I."""
    blocks = tuple(sorted(blocks))
    J = tuple(sorted(ideal_blocks)) if ideal_blocks is not None else blocks
    if not set(J) <= set(blocks):
        return _report("TorinCB", M, w, margin, INCONCLUSIVE,
                       reason="only block sums inside B_I are supported as the ideal", cert=HEURISTIC)
    w = w or ceqt_window(M, blocks, margin)
    tab = local_cohomology_dims(M, J, w)
    nI = M.ring.block.n_of(blocks)
    a = M.ring.block.a(blocks)
    hat = hat_tor_points(M, blocks, w, by_j=True)
    eps = {l: list(koszul_shifts(M.ring, blocks, l)) for l in range(nI + 1)}
    for j, pts in sorted(hat.items()):
        for mu in sorted(pts):
            ok = False
            for r in range(0, nI - j + 1):
                for e in eps.get(j + r, ()):
                    nu = sub(sub(mu, a), e)
                    if nu in w and tab.dim(r, nu):
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                return _report("TorinCB", M, w, margin, FAIL, mu, f"j = {j}", cert=EXACT)
    return _report("TorinCB", M, w, margin, PASS, cert=EXACT)


def verify_hatT(M: GradedPresentation, w: Window | None = None, margin: int = 3) -> VerificationReport:
    """T-hat^{I ∪ J}(M)* ⊆ T-hat^I(M)* for disjoint nonempty I, J."""
    k = M.k
    stars = {}
    rays_any = False
    for I in _subsets(k):
        region, rays = hat_tor_star(M, I, w or ceqt_window(M, I, margin), margin)
        stars[I] = region
        rays_any = rays_any or bool(rays)
    cert = HEURISTIC if rays_any else ENCLOSURE
    for big in _subsets(k):
        for size in range(1, len(big)):
            for I in itertools.combinations(big, size):
                miss = stars[I].missing_corner(stars[big])
                if miss:
                    return _report("hatT", M, w or "per block set", margin, FAIL if cert != HEURISTIC else INCONCLUSIVE, miss[1],
                                   f"T-hat^{big} not inside T-hat^{I}", cert=cert)
    return _report("hatT", M, w or "per block set", margin, PASS, cert=cert)


def verify_tor_spectral(M: GradedPresentation, w: Window | None = None) -> VerificationReport:
    """T^{I ∪ J}_j(M) ⊆ ∪_{l <= j} T^I_{j-l}(M) + E^J_l, from Koszul tables on one window."""
    k = M.k
    shifts = M.resolution().all_shifts()
    if w is None:
        lo = tuple(min(c[i] for c in shifts) - 1 for i in range(k))
        hi = tuple(max(c[i] for c in shifts) + M.ring.n[i] + 1 for i in range(k))
        w = Window(lo, hi)
    tables = {I: tor_supports_blocks(M, I, w) for I in _subsets(k)}
    for big in _subsets(k):
        for size in range(1, len(big)):
            for I in itertools.combinations(big, size):
                J = tuple(x for x in big if x not in I)
                for j, pts in tables[big].items():
                    for mu in pts:
                        ok = any(
                            sub(mu, e) in tables[I].get(j - l, {})
                            for l in range(j + 1)
                            for e in (koszul_shifts(M.ring, J, l) if l <= M.ring.block.n_of(J) else ())
                        )
                        if not ok:
                            return _report("TorSS", M, w, 0, FAIL, mu, f"I = {I}, J = {J}, j = {j}")
    return _report("TorSS", M, w, 0, PASS)


def verify_noeth_bounded(M: GradedPresentation, margin: int = 3) -> VerificationReport:
    """Finite Tor supports, a corner enclosing C_m(M), and a nu with (nu + N^k) free of H_B support."""
    k = M.k
    res = M.resolution()
    shifts = res.all_shifts()
    lo = tuple(min(c[i] for c in shifts) - 2 for i in range(k))
    hi = tuple(max(c[i] for c in shifts) + 2 for i in range(k))
    box = Window(lo, hi)
    koszul = tor_supports_blocks(M, range(k), box)
    inner = Window(add(lo, (1,) * k), sub(hi, (1,) * k))
    rim = sorted(mu for pts in koszul.values() for mu in pts if mu not in inner)
    if rim:
        return _report("NoethBounded", M, box, margin, FAIL, rim[0], "Tor support reaches the scan boundary")
    a = M.ring.block.a()
    corner = tuple(max(c[i] for c in shifts) + a[i] for i in range(k))
    w = common_window(M, margin)
    tables = all_tables(M, w)
    cm = tables[tuple(range(k))].support()
    out = sorted(mu for mu in cm if not leq(mu, corner))
    if out:
        return _report("NoethBounded", M, w, margin, FAIL, out[0], "C_m support outside the enclosure corner")
    nu = tuple(max(c[i] for c in shifts) - M.ring.n[i] + 1 for i in range(k))
    if k == 2:
        hb_support = mv_forced_hb(M, w, tables).possible_support()
    else:
        hb_support = marcss_bound(M, w, tables).support
    hit = sorted(mu for mu in hb_support if leq(nu, mu))
    if hit:
        return _report("NoethBounded", M, w, margin, FAIL, hit[0], f"H_B support meets {nu} + N^k")
    return _report("NoethBounded", M, w, margin, PASS, nu=list(nu), corner=list(corner))


THEOREMS = {
    "basicincl": lambda M, w, m: [verify_basicincl(M, w, m)],
    "ceqt": lambda M, w, m: [verify_ceqt(M, I, w, m) for I in _subsets(M.k)],
    "cohb": lambda M, w, m: [verify_cohB(M, w, m), verify_inccoh(M, w, m)],
    "torincb": lambda M, w, m: [verify_torincb(M, I, None, w, m) for I in _subsets(M.k)]
    + [verify_hatT(M, w, m), verify_tor_spectral(M)],
    "noeth": lambda M, w, m: [verify_noeth_bounded(M, m)],
}


def verify_trunc(M: GradedPresentation, w: Window | None, margin: int) -> list:
    from .localcohom import cohB_star
    from .truncation import verify_linear_truncation

    cb = cohB_star(M, None, margin)
    mu = _outside_point(cb.region, M)
    rep = verify_linear_truncation(M, mu, None, margin, cohb=cb)
    status = PASS if rep.ok else FAIL
    wit = None
    if not rep.ok:
        bad = rep.failures()
        wit = bad[0].witness if bad else mu
    return [_report("linrestrunc", M, w or cb.window, margin, status, wit, cert=cb.cert, mu=list(mu))]


def _outside_point(region: StarRegion, M: GradedPresentation) -> tuple:
    """The smallest-total-degree point of the form c + N^k... outside the region, near the origin."""
    k = M.k
    finite = [g for c in region.corners for g in c if g is not INF]
    base = tuple(min(finite + [0]) for _ in range(k))
    best = None
    for mu in Window(base, tuple(max(finite + [0]) + 1 for _ in range(k))).points():
        if mu not in region and (best is None or sum(mu) < sum(best) or (sum(mu) == sum(best) and mu < best)):
            best = mu
    return best


THEOREMS["trunc"] = verify_trunc


def verify_module(M: GradedPresentation, which: str = "all", w: Window | None = None, margin: int = 3) -> list:
    names = list(THEOREMS) if which == "all" else [which]
    out = []
    for name in names:
        if name not in THEOREMS:
            raise ValueError(f"unknown theorem {name!r}; choose from all, {', '.join(THEOREMS)}")
        try:
            out.extend(THEOREMS[name](M, w, margin))
        except WindowTooSmall as exc:
            out.append(_report(name, M, w, margin, INCONCLUSIVE, reason=str(exc), cert=HEURISTIC))
    return out
