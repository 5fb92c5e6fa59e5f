"""ASCII and SVG staircase pictures for k = 2 regions and cohomology tables."""

from __future__ import annotations

from .region import INF, StarRegion, Window


class RenderError(ValueError):
    pass


def default_window(region: StarRegion, pad: int = 2) -> Window:
    """A box holding the origin and every finite corner coordinate, padded."""
    xs, ys = [0], [0]
    for c in region.corners:
        if c[0] is not INF:
            xs.append(c[0])
        if c[1] is not INF:
            ys.append(c[1])
    return Window((min(xs) - pad, min(ys) - pad), (max(xs) + pad, max(ys) + pad))


def _grid(obj, w: Window):
    """{(x, y): cell} with cell "#" / "." for regions, a dimension for tables."""
    if isinstance(obj, StarRegion):
        return {mu: ("#" if mu in obj else ".") for mu in w.points()}, True
    return {mu: sum(obj.dims[mu]) if mu in obj.dims else 0 for mu in w.points()}, False


_MARK = {(False, False): "o", (False, True): "^", (True, False): ">", (True, True): "*"}


def _corner_marks(region: StarRegion, w: Window) -> dict:
    """Where to draw each corner: the point itself, or the window edge along a ray."""
    out = {}
    for c in region.sorted_corners():
        x = w.hi[0] if c[0] is INF else c[0]
        y = w.hi[1] if c[1] is INF else c[1]
        if (x, y) in w:
            out[(x, y)] = _MARK[(c[0] is INF, c[1] is INF)]
    return out


def render_staircase(obj, fmt: str = "ascii", w: Window | None = None) -> str:
    """Picture of a StarRegion or a CohomologyTable in Z^2."""
    k = obj.k if isinstance(obj, StarRegion) else len(obj.window.lo)
    if k != 2:
        raise RenderError(f"plots need k = 2 (got k = {k}); use --json for the data")
    if w is None:
        w = default_window(obj) if isinstance(obj, StarRegion) else obj.window
    if fmt == "ascii":
        return _ascii(obj, w)
    if fmt == "svg":
        return _svg(obj, w)
    raise RenderError(f"unknown format {fmt!r}; expected ascii or svg")


def _ascii(obj, w: Window) -> str:
    cells, is_region = _grid(obj, w)
    marks = _corner_marks(obj, w) if is_region else {}
    width = max(len(str(w.lo[1])), len(str(w.hi[1])))
    lines = []
    for y in range(w.hi[1], w.lo[1] - 1, -1):
        row = []
        for x in range(w.lo[0], w.hi[0] + 1):
            if (x, y) in marks:
                ch = marks[(x, y)]
            elif is_region:
                ch = cells[(x, y)]
            else:
                d = cells[(x, y)]
                ch = "." if d == 0 else str(d) if d < 10 else "*"
            if ch == "." and (x == 0 or y == 0):
                ch = "|" if x == 0 and y != 0 else "-" if y == 0 and x != 0 else "+"
            row.append(ch)
        lines.append(f"{y:>{width}} " + " ".join(row))
    lines.append(" " * (width + 1) + f"x from {w.lo[0]} to {w.hi[0]}")
    return "\n".join(lines) + "\n"


def _svg(obj, w: Window, cell: int = 20) -> str:
    cells, is_region = _grid(obj, w)
    nx = w.hi[0] - w.lo[0] + 1
    ny = w.hi[1] - w.lo[1] + 1
    left, bottom = 40, 30
    width, height = left + nx * cell + 10, ny * cell + bottom + 10

    def px(x):
        return left + (x - w.lo[0]) * cell

    def py(y):
        return 10 + (w.hi[1] - y) * cell

    top = max(cells.values()) if not is_region and cells else 0
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    for (x, y), v in sorted(cells.items()):
        if is_region and v == "#":
            fill = "#9ecae1"
        elif not is_region and v:
            shade = int(230 - 180 * v / top)
            fill = f"rgb({shade},{shade},255)"
        else:
            continue
        out.append(f'<rect x="{px(x)}" y="{py(y)}" width="{cell}" height="{cell}" fill="{fill}"/>')
        if not is_region:
            out.append(f'<text x="{px(x) + cell // 2}" y="{py(y) + cell * 3 // 4}" font-size="10" '
                       f'text-anchor="middle">{v}</text>')
    if w.lo[0] <= 0 <= w.hi[0]:
        out.append(f'<line x1="{px(0)}" y1="10" x2="{px(0)}" y2="{10 + ny * cell}" stroke="black"/>')
    if w.lo[1] <= 0 <= w.hi[1]:
        out.append(f'<line x1="{left}" y1="{py(0) + cell}" x2="{left + nx * cell}" y2="{py(0) + cell}" stroke="black"/>')
    for x in range(w.lo[0], w.hi[0] + 1):
        out.append(f'<text x="{px(x) + cell // 2}" y="{height - 10}" font-size="9" text-anchor="middle">{x}</text>')
    for y in range(w.lo[1], w.hi[1] + 1):
        out.append(f'<text x="{left - 4}" y="{py(y) + cell * 3 // 4}" font-size="9" text-anchor="end">{y}</text>')
    if is_region:
        for (x, y), m in sorted(_corner_marks(obj, w).items()):
            out.append(f'<circle cx="{px(x) + cell // 2}" cy="{py(y) + cell // 2}" r="4" fill="#d62728">'
                       f'<title>corner {_label(obj, x, y, w)}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _label(region: StarRegion, x, y, w: Window) -> str:
    for c in region.corners:
        cx = w.hi[0] if c[0] is INF else c[0]
        cy = w.hi[1] if c[1] is INF else c[1]
        if (cx, cy) == (x, y):
            return "(" + ",".join("inf" if g is INF else str(g) for g in c) + ")"
    return f"({x},{y})"
