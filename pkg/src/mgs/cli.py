"""Command-line front end: ``mgs <verb> ...``.

Exit codes: 0 success (or every verification passed), 1 usage or input
error, 2 some verification failed, 3 no failure but something inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .corpus import corpus
from .localcohom import (
    WindowTooSmall,
    auto_window,
    cohB_star,
    common_window,
    hb_koszul_limit,
    local_cohomology_dims,
    mv_forced_hb,
    support_star,
)
from .parse import ParseError, parse_module_file
from .region import RegionError, Window
from .render import RenderError, render_staircase
from .resolution import oracle_window, tor_supports_blocks
from .ring import IdealDescriptor, hypersurface_example
from .truncation import (
    ZeroModule,
    delta_bound,
    total_regularity,
    truncation_cohomology_check,
    verify_linear_truncation,
)
from .verify import FAIL, INCONCLUSIVE, THEOREMS, verify_module

EXAMPLES = {
    "hypersurface-F2": lambda: hypersurface_example("F2"),
    "hypersurface-F5": lambda: hypersurface_example("F5"),
    "hypersurface-Q": lambda: hypersurface_example("Q"),
}


class UsageError(Exception):
    pass


def load_module(source: str):
    """A module file path, or ``example:NAME`` for a built-in module."""
    if source.startswith("example:"):
        name = source.split(":", 1)[1]
        if name not in EXAMPLES:
            raise UsageError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
        return EXAMPLES[name]()
    try:
        with open(source) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    M = parse_module_file(text)
    M.name = M.name or os.path.basename(source)
    return M


def _tuple(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _window(args, M):
    if not args.window:
        return None
    w = Window.parse(args.window)
    if w.k != M.k:
        raise UsageError(f"window has {w.k} coordinates but k = {M.k}")
    return w


def _ideal(args, M) -> IdealDescriptor:
    return IdealDescriptor.parse(args.ideal, M.k)


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text.rstrip("\n"))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MGS_THREADS", "1")))
    except ValueError:
        return 1


# -- verbs ---------------------------------------------------------------------------


def cmd_info(args) -> int:
    M = load_module(args.module)
    res = M.resolution()
    betti = [{"j": j, "shifts": sorted(list(c) for c in sh)} for j, sh in enumerate(res.shifts)]
    payload = {"module": M.name, "k": M.k, "n": list(M.ring.n), "field": M.field.name,
               "generators": [list(g) for g in M.target], "relations": [list(s) for s in M.source],
               "betti": betti}
    try:
        payload["regularity"] = total_regularity(M)
    except ZeroModule:
        payload["regularity"] = None
    lines = [f"module {M.name}: k = {M.k}, n = {tuple(M.ring.n)}, field {M.field.name}",
             f"regularity (total degree) {payload['regularity']}"]
    for j, sh in enumerate(res.shifts):
        lines.append(f"F_{j}: " + (" ".join(str(c) for c in sorted(sh)) or "0"))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_tor(args) -> int:
    M = load_module(args.module)
    if args.blocks:
        blocks = tuple(sorted({i - 1 for i in _tuple(args.blocks)}))
        if not blocks or not all(0 <= i < M.k for i in blocks):
            raise UsageError(f"--blocks needs indices between 1 and {M.k}")
        ideal = IdealDescriptor.sum_of(blocks)
    else:
        ideal = _ideal(args, M)
        if ideal.product:
            raise UsageError("Tor is taken against R/(sum of blocks); use B1, B1+B2 or m")
        blocks = tuple(sorted(ideal.blocks))
    w = _window(args, M) or oracle_window(M.resolution())
    table = tor_supports_blocks(M, blocks, w)
    payload = {"module": M.name, "ideal": str(ideal), "window": str(w),
               "tor": {str(j): [{"mu": list(mu), "dim": h} for mu, h in sorted(pts.items())]
                       for j, pts in sorted(table.items())}}
    lines = [f"Tor over {ideal} on {w}"]
    for j, pts in sorted(table.items()):
        lines.append(f"T_{j}: " + " ".join(f"{mu}^{h}" if h > 1 else str(mu) for mu, h in sorted(pts.items())))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_lc(args) -> int:
    M = load_module(args.module)
    ideal = _ideal(args, M)
    w = _window(args, M)
    if ideal.product:
        if M.k != 2:
            raise UsageError("H_B is only bounded for k = 2; try hb-estimate")
        w = w or common_window(M, args.margin)
        hb = mv_forced_hb(M, w)
        payload = {"module": M.name, **hb.to_json()}
        lines = [f"H_B of {M.name} on {w} (Mayer-Vietoris)"]
        for q, mu in sorted(hb.entries, key=lambda t: (t[1], t[0])):
            e = hb.entries[(q, mu)]
            if e.hi:
                val = str(e.lo) if e.forced else f"[{e.lo}, {e.hi}]"
                lines.append(f"H^{q} at {mu}: {val}")
        _emit(args, payload, "\n".join(lines))
        return 0
    blocks = tuple(sorted(ideal.blocks))
    w = w or auto_window(M, blocks, args.margin)
    table = local_cohomology_dims(M, blocks, w)
    payload = {"module": M.name, **table.to_json()}
    lines = [f"H_{table.ideal} of {M.name} on {w}"]
    for e in table.entries():
        lines.append(f"H^{e['p']} at {tuple(e['mu'])}: {e['dim']}")
    if len(lines) == 1:
        lines.append("zero on the window")
    _emit(args, payload, "\n".join(lines))
    return 0


def _star(args, M):
    ideal = _ideal(args, M)
    w = _window(args, M)
    if ideal.product:
        return cohB_star(M, w, args.margin), "B"
    s = support_star(M, tuple(sorted(ideal.blocks)), w, args.margin)
    return s, str(ideal)


def cmd_star(args) -> int:
    M = load_module(args.module)
    s, name = _star(args, M)
    payload = {"module": M.name, "ideal": name, **s.to_json()}
    _emit(args, payload, f"C_{name}({M.name})* = {s.region!r}  [{s.cert}]")
    return 0


def cmd_trunc(args) -> int:
    M = load_module(args.module)
    t = _tuple(args.t)
    if len(t) != M.k:
        raise UsageError(f"t needs {M.k} coordinates")
    from .ring import truncate

    T = truncate(M, t)
    payload = {"module": M.name, "t": list(t)}
    lines = [f"truncation of {M.name} at t = {t}"]
    try:
        reg = total_regularity(T)
        bound, deltas = delta_bound(M, t)
        payload.update(regularity=reg, bound=bound, deltas={str(i): d for i, d in deltas.items()},
                       betti=[sorted(list(c) for c in sh) for sh in T.resolution().shifts])
        lines.append(f"reg = {reg}, |t| = {sum(t)}, delta bound = {bound}")
    except ZeroModule:
        payload["regularity"] = None
        lines.append("the truncation is zero")
    reports = []
    if args.mu:
        rep = verify_linear_truncation(M, _tuple(args.mu), _window(args, M), args.margin, seed=args.seed)
        payload["linear"] = rep.to_json()
        lines.append(f"linear truncation from {args.mu}: {'ok' if rep.ok else 'FAILED'} {rep.precondition}")
        reports.append(rep)
    if args.check == "lin":
        mu = tuple(a - b for a, b in zip(t, M.ring.block.n_minus_one))
        rep = verify_linear_truncation(M, mu, _window(args, M), args.margin, ts=[t])
        payload["check"] = rep.to_json()
        reports.append(rep)
    elif args.check == "coh":
        w = _window(args, M) or common_window(M, args.margin)
        rep = truncation_cohomology_check(M, t, w, args.margin)
        payload["check"] = rep.to_json()
        reports.append(rep)
    if args.check:
        c = payload["check"]
        lines.append(f"{c['report']}: {'ok' if c['ok'] else 'FAILED'} {c.get('precondition', '')}".rstrip())
        lines += [f"  {x['check']}: {'ok' if x['ok'] else 'FAILED at ' + str(x.get('witness'))}"
                  for x in c["checks"]]
    _emit(args, payload, "\n".join(lines))
    if any(r.failures() for r in reports):
        return 2
    return 3 if any(r.precondition for r in reports) else 0


def _verify_job(job):
    source, which, window, margin = job
    if isinstance(source, tuple):
        seed, count, idx = source
        M = corpus(seed, count)[idx]
    else:
        M = load_module(source)
    w = Window.parse(window) if window else None
    if w is not None and w.k != M.k:
        w = None
    return [r.to_json() for r in verify_module(M, which, w, margin)]


def cmd_verify(args) -> int:
    which = args.theorem
    if which != "all" and which not in THEOREMS and (os.path.exists(which) or which.startswith("example:")):
        args.module = [which] + list(args.module or ())
        which = "all"
    if which != "all" and which not in THEOREMS:
        raise UsageError(f"unknown theorem {which!r}; choose from all, {', '.join(THEOREMS)}")
    jobs = []
    if args.corpus:
        try:
            seed, count = (int(x) for x in args.corpus.split(":"))
        except ValueError:
            raise UsageError("--corpus expects seed:count, e.g. 0:30") from None
        n = len(corpus(seed, count))
        jobs = [((seed, count, i), which, args.window, args.margin) for i in range(n)]
    for m in args.module or ():
        jobs.append((m, which, args.window, args.margin))
    if not jobs:
        raise UsageError("give module files or --corpus seed:count")
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_verify_job, jobs))
    else:
        results = [_verify_job(j) for j in jobs]
    reports = [r for rs in results for r in rs]
    statuses = {r["status"] for r in reports}
    lines = []
    for r in reports:
        extra = f" witness {tuple(r['witness'])}" if "witness" in r else ""
        reason = f" ({r['reason']})" if r.get("reason") else ""
        lines.append(f"{r['status']:<12} {r['theorem']:<12} {r['module']}{extra}{reason}")
    summary = {s: sum(r["status"] == s for r in reports) for s in sorted(statuses)}
    lines.append("summary: " + ", ".join(f"{v} {k}" for k, v in summary.items()))
    _emit(args, {"reports": reports, "summary": summary}, "\n".join(lines))
    if FAIL in statuses:
        return 2
    if INCONCLUSIVE in statuses:
        return 3
    return 0


def cmd_hb_estimate(args) -> int:
    M = load_module(args.module)
    w = _window(args, M)
    if w is None:
        raise UsageError("hb-estimate needs --window")
    lim = hb_koszul_limit(M, w, args.t_max, args.stable_steps, args.engine, args.cap)
    payload = {"module": M.name, **lim.to_json()}
    lines = [f"H_B estimate for {M.name} on {w} ({lim.engine}, t <= {lim.t_max}): "
             f"{lim.stable_fraction():.1%} of entries stable"]
    for (q, mu), v in sorted(lim.values.items(), key=lambda t: (t[0][1], t[0][0])):
        if v:
            lines.append(f"H^{q} at {mu}: {v}")
        elif v is None:
            lines.append(f"H^{q} at {mu}: unstable {lim.history[(q, mu)]}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_plot(args) -> int:
    M = load_module(args.module)
    if M.k != 2:
        raise UsageError(f"plots need k = 2 (got k = {M.k}); use --json with star or lc")
    if args.table:
        ideal = _ideal(args, M)
        if ideal.product:
            raise UsageError("tables can be plotted for block sums only")
        blocks = tuple(sorted(ideal.blocks))
        w = _window(args, M) or auto_window(M, blocks, args.margin)
        obj = local_cohomology_dims(M, blocks, w)
        print(render_staircase(obj, args.format), end="")
        return 0
    s, _ = _star(args, M)
    print(render_staircase(s.region, args.format, _window(args, M)), end="")
    return 0


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mgs", description="Supports of Tor and local cohomology for multigraded modules.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, module=True, ideal=None):
        if module:
            sp.add_argument("module", help="module file, or example:NAME (" + ", ".join(EXAMPLES) + ")")
        sp.add_argument("--window", help="degree box lo..hi, e.g. -5,-5..2,2")
        sp.add_argument("--margin", type=int, default=3, help="extra rows scanned beyond the enclosure (default 3)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        if ideal:
            sp.add_argument("--ideal", default=ideal, help=f"B1, B1+B2, m or B (default {ideal})")

    sp = sub.add_parser("info", help="resolution, Betti shifts and regularity")
    common(sp)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("tor", help="Koszul homology supports against R/(sum of blocks)")
    common(sp, ideal="m")
    sp.add_argument("--blocks", help="block indices, e.g. 1,2 (overrides --ideal)")
    sp.set_defaults(func=cmd_tor)

    sp = sub.add_parser("lc", help="local cohomology dimensions on a window")
    common(sp, ideal="m")
    sp.set_defaults(func=cmd_lc)

    sp = sub.add_parser("star", help="starred support region of local cohomology")
    common(sp, ideal="m")
    sp.set_defaults(func=cmd_star)

    sp = sub.add_parser("trunc", help="regularity of the truncation at t")
    common(sp)
    sp.add_argument("--t", required=True, help="truncation degree, e.g. 1,2")
    sp.add_argument("--mu", help="also check linear truncation from this degree")
    sp.add_argument("--check", choices=["lin", "coh"], help="linear resolution at t, or the cohomology transforms")
    sp.set_defaults(func=cmd_trunc)

    sp = sub.add_parser("verify", help="check the support theorems")
    sp.add_argument("theorem", nargs="?", default="all", help="all, " + ", ".join(THEOREMS))
    sp.add_argument("module", nargs="*", help="module files")
    sp.add_argument("--corpus", help="seed:count of the built-in corpus")
    common(sp, module=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hb-estimate", help="Koszul-limit estimate of H_B")
    common(sp)
    sp.add_argument("--t-max", type=int, default=8)
    sp.add_argument("--stable-steps", type=int, default=2)
    sp.add_argument("--engine", choices=("auto", "les", "koszul"), default="auto")
    sp.add_argument("--cap", type=int, default=2500, help="largest Koszul piece computed (koszul engine)")
    sp.set_defaults(func=cmd_hb_estimate)

    sp = sub.add_parser("plot", help="ASCII or SVG staircase (k = 2)")
    common(sp, ideal="m")
    sp.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    sp.add_argument("--table", action="store_true", help="plot total dimensions instead of the starred region")
    sp.set_defaults(func=cmd_plot)
    return p


def _glue_values(argv: list) -> list:
    """Let option values start with '-' (negative degrees): --window -5,-5..2,2."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


_VALUE_OPTS = ("--window", "--t", "--mu")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except (UsageError, ParseError, RegionError, RenderError, WindowTooSmall, ValueError,
            NotImplementedError) as exc:
        print(f"mgs: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
