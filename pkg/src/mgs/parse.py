"""Reader for module files and polynomial expressions.

A module file has two blocks::

    ring { k = 2; n = [3,3]; field = "F2"; vars = [["a","b","c"],["x","y","z"]] }
    module { target_shifts = [[0,0]]; source_shifts = [[1,1]]; matrix = [["a*x + b*y + c*z"]] }

``matrix`` is indexed [row][column]; rows follow ``target_shifts`` and
columns follow ``source_shifts``.  ``module`` may be omitted (the ring itself)
and ``vars`` is optional.
"""

from __future__ import annotations

import json
import re

from .field import FieldError, FieldSpec
from .region import BlockStructure
from .ring import DegreeError, GradedPresentation, Ring, poly_add, poly_mul


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


def _position(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


_BLOCK = re.compile(r"(\w+)\s*\{")


def _split_blocks(text: str) -> dict:
    blocks = {}
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        if text.startswith("#", pos):
            end = text.find("\n", pos)
            pos = len(text) if end < 0 else end
            continue
        m = _BLOCK.match(text, pos)
        if not m:
            raise ParseError("expected 'ring {' or 'module {'", *_position(text, pos))
        name = m.group(1)
        depth, i, in_str = 1, m.end(), False
        while i < len(text) and depth:
            ch = text[i]
            if ch == '"':
                in_str = not in_str
            elif not in_str and ch == "{":
                depth += 1
            elif not in_str and ch == "}":
                depth -= 1
            i += 1
        if depth:
            raise ParseError(f"unterminated block '{name}'", *_position(text, m.start()))
        if name in blocks:
            raise ParseError(f"duplicate block '{name}'", *_position(text, m.start()))
        blocks[name] = (m.end(), text[m.end():i - 1])
        pos = i
    return blocks


def _assignments(text: str, body: str, offset: int) -> dict:
    out = {}
    depth, start, in_str = 0, 0, False
    parts = []
    for i, ch in enumerate(body):
        if ch == '"':
            in_str = not in_str
        elif not in_str and ch == "[":
            depth += 1
        elif not in_str and ch == "]":
            depth -= 1
        elif not in_str and depth == 0 and ch == ";":
            parts.append((start, body[start:i]))
            start = i + 1
    parts.append((start, body[start:]))
    for st, part in parts:
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError(f"expected 'key = value', got {part.strip()!r}", *_position(text, offset + st))
        key, value = part.split("=", 1)
        key = key.strip()
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError as exc:
            vpos = offset + st + len(key) + 1 + exc.pos + (len(value) - len(value.lstrip()))
            raise ParseError(f"bad value for '{key}': {exc.msg}", *_position(text, vpos)) from None
    return out


def parse_module_file(text: str) -> GradedPresentation:
    blocks = _split_blocks(text)
    if "ring" not in blocks:
        raise ParseError("missing 'ring { ... }' block")
    roff, rbody = blocks["ring"]
    rdef = _assignments(text, rbody, roff)
    for key in ("k", "n", "field"):
        if key not in rdef:
            raise ParseError(f"ring block is missing '{key}'", *_position(text, roff))
    k, n = rdef["k"], rdef["n"]
    if not isinstance(n, list) or len(n) != k:
        raise ParseError(f"n must list {k} block sizes", *_position(text, roff))
    try:
        F = FieldSpec.parse(str(rdef["field"]))
    except FieldError as exc:
        raise ParseError(str(exc), *_position(text, roff)) from None
    names = ()
    if "vars" in rdef:
        vs = rdef["vars"]
        if len(vs) != k or any(len(b) != nb for b, nb in zip(vs, n)):
            raise ParseError("vars must give n_i names for each block", *_position(text, roff))
        names = tuple(x for b in vs for x in b)
    ring = Ring(BlockStructure(tuple(n)), F, names)
    if "module" not in blocks:
        return GradedPresentation(ring, [(0,) * k], [], [], name="R")
    moff, mbody = blocks["module"]
    mdef = _assignments(text, mbody, moff)
    target = [tuple(s) for s in mdef.get("target_shifts", [[0] * k])]
    source = [tuple(s) for s in mdef.get("source_shifts", [])]
    matrix = mdef.get("matrix", [])
    for s in target + source:
        if len(s) != k:
            raise ParseError(f"shift {list(s)} does not have length {k}", *_position(text, moff))
    if source and len(matrix) != len(target):
        raise ParseError(f"matrix needs {len(target)} rows", *_position(text, moff))
    cols = [dict() for _ in source]
    for r, row in enumerate(matrix):
        if len(row) != len(source):
            raise ParseError(f"matrix row {r} needs {len(source)} entries", *_position(text, moff))
        for c, entry in enumerate(row):
            try:
                p = parse_polynomial(str(entry), ring)
            except ParseError as exc:
                raise ParseError(f"entry ({r}, {c}): {exc}", *_position(text, moff)) from None
            if p:
                want = tuple(a - b for a, b in zip(source[c], target[r]))
                for e in p:
                    if ring.degree(e) != want:
                        raise ParseError(
                            f"entry ({r}, {c}) has degree {ring.degree(e)}, expected {want}",
                            *_position(text, moff),
                        )
                cols[c][r] = p
    try:
        return GradedPresentation(ring, target, source, cols, name=mdef.get("name", ""))
    except DegreeError as exc:
        raise ParseError(str(exc)) from None


# -- polynomials ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokens(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or (m.group(0).strip() == "" and m.end() >= len(text)):
            break
        num, name, op = m.groups()
        start = m.start(1) if num else m.start(2) if name else m.start(3)
        if num:
            out.append(("num", int(num), start))
        elif name:
            out.append(("name", name, start))
        elif op is not None:
            if op not in "+-*^()":
                raise ParseError(f"unexpected character {op!r} at offset {start}")
            out.append(("op", op, start))
        pos = m.end()
    return out


def parse_polynomial(text: str, ring: Ring) -> dict:
    """Parse integer-coefficient expressions in + - * ^ and parentheses."""
    F = ring.field
    toks = _tokens(text)
    index = {name: j for j, name in enumerate(ring.names)}
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None, len(text))

    def take():
        nonlocal pos
        t = peek()
        pos += 1
        return t

    def expr():
        kind, val, at = peek()
        sign = 1
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        acc = term()
        if sign < 0:
            acc = {e: F.neg(c) for e, c in acc.items()}
        while True:
            kind, val, at = peek()
            if kind == "op" and val in "+-":
                take()
                t = term()
                acc = poly_add(F, acc, t, scale=F.one if val == "+" else F(-1))
            else:
                return acc

    def term():
        acc = power()
        while True:
            kind, val, at = peek()
            if kind == "op" and val == "*":
                take()
                acc = poly_mul(F, acc, power())
            else:
                return acc

    def power():
        base = atom()
        kind, val, at = peek()
        if kind == "op" and val == "^":
            take()
            kind, val, at = take()
            if kind != "num":
                raise ParseError(f"expected exponent at offset {at}")
            out = ring.const(1)
            for _ in range(val):
                out = poly_mul(F, out, base)
            return out
        return base

    def atom():
        kind, val, at = take()
        if kind == "num":
            return ring.const(val)
        if kind == "name":
            if val not in index:
                raise ParseError(f"unknown variable {val!r} at offset {at}")
            return ring.var(index[val])
        if kind == "op" and val == "(":
            inner = expr()
            k2, v2, a2 = take()
            if v2 != ")":
                raise ParseError(f"expected ')' at offset {a2}")
            return inner
        if kind == "op" and val == "-":
            inner = atom()
            return {e: F.neg(c) for e, c in inner.items()}
        raise ParseError(f"unexpected {'end of input' if kind is None else repr(val)} at offset {at}")

    if not toks:
        raise ParseError("empty polynomial")
    out = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input at offset {toks[pos][2]}")
    return out
