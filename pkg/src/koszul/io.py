"""Scalar text grammar and the JSON cube document.

Scalars: integers, ``p/q`` coefficients, declared variable names, ``+ - *``,
``^`` with a non-negative integer exponent and parentheses; a quotient
``(<poly>)/(<poly>)`` must have a denominator that is a unit of L.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .cube import Cube, CubeMorphism, subset_key
from .errors import KoszulError, ParseError
from .linalg import LMatrix
from .ring import BaseField, LocalRing, LocalScalar, RegularContext

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or (m.group(0).strip() == "" and m.end() == len(text)):
            break
        start = m.start(m.lastindex)
        out.append((m.lastindex, m.group(m.lastindex), start))
        pos = m.end()
    out.append((0, "", len(text)))
    return out


class _Parser:
    def __init__(self, ring: LocalRing, text: str, line: int = 1, col0: int = 1):
        self.ring = ring
        self.text = text
        self.toks = _tokens(text)
        self.i = 0
        self.line = line
        self.col0 = col0

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(f"{msg} in {self.text!r}", self.line, self.col0 + tok[2])

    def peek(self):
        return self.toks[self.i]

    def take(self, sym=None):
        t = self.toks[self.i]
        if sym is not None and t[1] != sym:
            self.error(f"expected {sym!r}" + (f", found {t[1]!r}" if t[1] else ", found end"))
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.peek()[0] != 0:
            self.error(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == 3:
            sign = -1 if self.take()[1] == "-" else 1
        v = self.term()
        if sign < 0:
            v = -v
        while self.peek()[0] == 3 and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.power()
        while self.peek()[0] == 3 and self.peek()[1] in ("*", "/"):
            op, tok = self.peek()[1], self.take()
            w = self.power()
            if op == "*":
                v = v * w
            else:
                if w.is_zero():
                    self.error("division by zero", tok)
                v = v / w
        return v

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == 3:
            self.take()
            t = self.peek()
            if t[0] != 1:
                self.error("exponent must be a non-negative integer")
            self.take()
            base = base ** int(t[1])
        return base

    def atom(self):
        t = self.peek()
        if t[0] == 1:
            self.take()
            return self.ring.frac(int(t[1]))
        if t[0] == 2:
            if t[1] not in self.ring.variables:
                self.error(f"unknown variable {t[1]!r}")
            self.take()
            return self.ring.frac(self.ring.var(t[1]).num)
        if t[1] == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if t[1] == "-":
            self.take()
            return -self.atom()
        self.error(f"unexpected {t[1]!r}" if t[1] else "unexpected end of input")


def parse_scalar(ring: LocalRing, text: str, line: int = 1, column: int = 1) -> LocalScalar:
    if not isinstance(text, (str, int)):
        raise ParseError(f"scalar must be a string, got {type(text).__name__}", line, column)
    text = str(text)
    v = _Parser(ring, text, line, column).parse()
    local = v.to_local()
    if local is None:
        raise ParseError(f"{text!r} is not in the local ring (denominator vanishes at the origin)",
                         line, column)
    return local


def format_scalar(a) -> str:
    return str(a)


# documents


@dataclass
class CubeDocument:
    field: BaseField
    variables: list
    sequence: dict  # s -> variable
    vertices: dict  # subset-key -> rank
    boundaries: dict  # (k, subset-key) -> list of rows of scalar strings

    def context(self) -> RegularContext:
        return RegularContext(LocalRing(self.field, self.variables), self.sequence)

    def to_json(self) -> dict:
        return {
            "base_field": str(self.field),
            "variables": list(self.variables),
            "sequence": {str(s): v for s, v in sorted(self.sequence.items())},
            "vertices": dict(self.vertices),
            "boundaries": [{"direction": k, "vertex": t, "matrix": m}
                           for (k, t), m in sorted(self.boundaries.items(),
                                                   key=lambda kv: (_key_order(kv[0][1]), kv[0][0]))],
        }

    def dumps(self) -> str:
        return dumps_json(self.to_json())


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with lists of scalars kept on one line, so matrices read row by row."""
    def enc(o, level):
        pad = " " * (indent * level)
        inner = " " * (indent * (level + 1))
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {enc(v, level + 1)}"
                     for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(o, list):
            if all(not isinstance(e, (dict, list)) for e in o):
                return "[" + ", ".join(json.dumps(e, ensure_ascii=False) for e in o) + "]"
            return "[\n" + ",\n".join(inner + enc(e, level + 1) for e in o) + "\n" + pad + "]"
        return json.dumps(o, ensure_ascii=False)
    return enc(obj, 0) + "\n"


def _key_order(key: str):
    if key == "∅":
        return (0, ())
    parts = tuple(int(p) for p in key.split(","))
    return (len(parts), parts)


def _mask_of_key(ctx: RegularContext, key: str) -> int:
    if key in ("∅", ""):
        return 0
    try:
        members = [int(p) for p in key.split(",")]
    except ValueError:
        raise ParseError(f"bad subset key {key!r}") from None
    if members != sorted(set(members)):
        raise ParseError(f"subset key {key!r} must be sorted without repeats")
    for s in members:
        if s not in ctx.sequence:
            raise ParseError(f"subset key {key!r} mentions unknown index {s}")
    return ctx.mask(members)


def document_from_cube(c: Cube) -> CubeDocument:
    ctx = c.ctx
    vertices = {subset_key(ctx, t): c.rank(t) for t in c.masks()}
    bounds = {(k, subset_key(ctx, t)): m.to_strings() for (k, t), m in c.boundaries().items()}
    return CubeDocument(ctx.ring.field, list(ctx.ring.variables), dict(ctx.sequence), vertices,
                        bounds)


def morphism_block(phi: CubeMorphism) -> dict:
    ctx = phi.source.ctx
    return {subset_key(ctx, t): phi[t].to_strings() for t in phi.source.masks()}


def _locate(text: str, needle: str, start: int = 0):
    """(line, column) of the first JSON string literal equal to needle at or after start."""
    idx = text.find(json.dumps(needle, ensure_ascii=False), start)
    if idx < 0:
        idx = text.find(json.dumps(needle), start)
    if idx < 0:
        return None, None, start
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 2  # inside the opening quote
    return line, col, idx + 1


def parse_document(text: str) -> tuple[CubeDocument, Cube]:
    """Parse JSON text into a document and its cube; errors carry line and column."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object", 1, 1)
    for key in ("base_field", "variables", "sequence", "vertices", "boundaries"):
        if key not in raw:
            raise ParseError(f"missing key {key!r}", 1, 1)
    try:
        field = BaseField.parse(str(raw["base_field"]))
        variables = [str(v) for v in raw["variables"]]
        sequence = {int(s): str(v) for s, v in raw["sequence"].items()}
        ring = LocalRing(field, variables)
        ctx = RegularContext(ring, sequence)
    except ParseError:
        raise
    except (KoszulError, ValueError, TypeError, AttributeError) as e:
        line, col, _ = _locate(text, "base_field")
        raise ParseError(f"bad ring header: {e}", line, col) from None

    vertices = {}
    for key, r in raw["vertices"].items():
        mask = _mask_of_key(ctx, key)
        if not isinstance(r, int) or r < 0:
            line, col, _ = _locate(text, key)
            raise ParseError(f"rank at {key!r} must be a non-negative integer", line, col)
        vertices[mask] = r
    n = 1 << ctx.size
    ranks = [vertices.get(t, 0) for t in range(n)]

    bounds, doc_bounds = {}, {}
    cursor = 0
    for entry in raw["boundaries"]:
        try:
            k = int(entry["direction"])
            key = str(entry["vertex"])
            rows = entry["matrix"]
        except (KeyError, TypeError, ValueError):
            raise ParseError("each boundary needs direction, vertex and matrix") from None
        t = _mask_of_key(ctx, key)
        if k not in ctx.members(t):
            raise ParseError(f"direction {k} is not in vertex {key!r}")
        mat = []
        for row in rows:
            out = []
            for cell in row:
                line, col, nxt = _locate(text, str(cell), cursor)
                if line is not None:
                    cursor = nxt
                out.append(parse_scalar(ring, cell, line or 1, col or 1))
            mat.append(out)
        expected = (ranks[t & ~ctx.bit(k)], ranks[t])
        if len(mat) != expected[0] or any(len(r) != expected[1] for r in mat):
            line, col, _ = _locate(text, key)
            raise ParseError(f"d^{k}_{key} must be {expected[0]}x{expected[1]}", line, col)
        bounds[(k, t)] = LMatrix(ring, expected[0], expected[1], mat)
        doc_bounds[(k, key)] = [[str(v) for v in r] for r in rows]
    cube = Cube(ctx, ranks, bounds)
    doc = CubeDocument(field, variables, sequence,
                       {k: vertices.get(_mask_of_key(ctx, k), 0) for k in raw["vertices"]},
                       doc_bounds)
    return doc, cube


def load_cube(path) -> tuple[CubeDocument, Cube]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    return parse_document(text)


def dumps_cube(c: Cube) -> str:
    return document_from_cube(c).dumps()
