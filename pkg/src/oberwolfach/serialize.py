"""Text and JSON forms of a solved instance.

Text layout::

    obw 1
    order 10
    type 3,7
    method derived-1rot
    factor: (0,1,2)(3,4,5,6,7,8,9)
    ...
    one-factor: [0-9][1-2]...

Vertices are canonical integers 0..v-1.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .factors import Factorization, Scheme, TwoFactor
from .instances import CycleType, CycleTypeError, format_cycle_type, parse_cycle_type

METHODS = ("1rot", "2rot-odd", "2rot-even", "derived-1rot", "derived-2rot")
FORMAT_VERSION = 1


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class SolutionFile:
    order: int
    cycle_type: CycleType
    method: str
    factorization: Factorization


def _cycles_text(f: TwoFactor) -> str:
    return "".join("(" + ",".join(str(x) for x in c) + ")" for c in f.cycles)


def serialize(record: SolutionFile) -> str:
    fz = record.factorization.canonical()
    if not fz.factors:
        raise FormatError("no factors")
    if record.method not in METHODS:
        raise FormatError(f"unknown method {record.method!r}")
    lines = [
        f"obw {FORMAT_VERSION}",
        f"order {record.order}",
        f"type {format_cycle_type(record.cycle_type)}",
        f"method {record.method}",
    ]
    lines += ["factor: " + _cycles_text(f) for f in fz.factors]
    if fz.one_factor is not None:
        lines.append("one-factor: " + "".join(f"[{a}-{b}]" for a, b in fz.one_factor))
    return "\n".join(lines) + "\n"


_CYCLE = re.compile(r"\(([^()]*)\)")
_EDGE = re.compile(r"\[\s*(\d+)\s*-\s*(\d+)\s*\]")


def _parse_int(tok: str, lineno: int, col: int, v: int) -> int:
    tok = tok.strip()
    if not tok.isdigit():
        raise FormatError(f"expected vertex number, got {tok!r}", lineno, col)
    x = int(tok)
    if x >= v:
        raise FormatError(f"vertex {x} out of range for order {v}", lineno, col)
    return x


def deserialize(text: str) -> SolutionFile:
    header: dict[str, str] = {}
    factors: list[TwoFactor] = []
    one = None
    order = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("factor:") or line.startswith("one-factor:"):
            if order is None:
                raise FormatError("factor line before 'order' header", lineno, 1)
            key, _, body = line.partition(":")
            offset = len(key) + 1
            if key == "factor":
                factors.append(_parse_factor(body, lineno, offset, order))
            else:
                if one is not None:
                    raise FormatError("duplicate one-factor line", lineno, 1)
                one = _parse_matching(body, lineno, offset, order)
            continue
        key, _, value = line.partition(" ")
        if key not in ("obw", "order", "type", "method"):
            raise FormatError(f"unknown line {key!r}", lineno, 1)
        if key in header:
            raise FormatError(f"duplicate header {key!r}", lineno, 1)
        header[key] = value.strip()
        col = len(key) + 2
        if key == "obw" and header[key] != str(FORMAT_VERSION):
            raise FormatError(f"unsupported version {header[key]!r}", lineno, col)
        if key == "order":
            if not header[key].isdigit() or int(header[key]) < 3:
                raise FormatError("order must be an integer >= 3", lineno, col)
            order = int(header[key])
        if key == "method" and header[key] not in METHODS:
            raise FormatError(f"unknown method {header[key]!r}", lineno, col)
    for key in ("obw", "order", "type", "method"):
        if key not in header:
            raise FormatError(f"missing header {key!r}")
    try:
        ct = parse_cycle_type(header["type"])
    except CycleTypeError as exc:
        raise FormatError(f"bad type: {exc}") from exc
    if not factors:
        raise FormatError("no factors")
    assert order is not None
    return SolutionFile(order, ct, header["method"], Factorization(tuple(factors), one, order))


def _parse_factor(body: str, lineno: int, offset: int, v: int) -> TwoFactor:
    cycles = []
    pos = 0
    stripped = body.strip()
    lead = offset + (len(body) - len(body.lstrip()))
    for m in _CYCLE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise FormatError("unexpected text between cycles", lineno, lead + pos + 1)
        cyc = []
        col = lead + m.start(1)
        for tok in m.group(1).split(","):
            cyc.append(_parse_int(tok, lineno, col + 1, v))
            col += len(tok) + 1
        cycles.append(tuple(cyc))
        pos = m.end()
    if stripped[pos:].strip() or not cycles:
        raise FormatError("malformed factor", lineno, lead + pos + 1)
    return TwoFactor(tuple(cycles), Scheme.plain(v))


def _parse_matching(body: str, lineno: int, offset: int, v: int):
    edges = []
    pos = 0
    stripped = body.strip()
    lead = offset + (len(body) - len(body.lstrip()))
    for m in _EDGE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise FormatError("unexpected text between edges", lineno, lead + pos + 1)
        a = _parse_int(m.group(1), lineno, lead + m.start(1) + 1, v)
        b = _parse_int(m.group(2), lineno, lead + m.start(2) + 1, v)
        edges.append((a, b))
        pos = m.end()
    if stripped[pos:].strip() or not edges:
        raise FormatError("malformed one-factor", lineno, lead + pos + 1)
    return tuple(edges)


def to_json(record: SolutionFile) -> str:
    fz = record.factorization.canonical()
    if not fz.factors:
        raise FormatError("no factors")
    data = {
        "format": "obw",
        "version": FORMAT_VERSION,
        "order": record.order,
        "type": format_cycle_type(record.cycle_type),
        "method": record.method,
        "factors": [[list(c) for c in f.cycles] for f in fz.factors],
        "one_factor": None if fz.one_factor is None else [list(e) for e in fz.one_factor],
    }
    return json.dumps(data, indent=None, separators=(",", ":"))


def from_json(text: str) -> SolutionFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from exc
    try:
        v = int(data["order"])
        ct = parse_cycle_type(data["type"])
        factors = tuple(
            TwoFactor(tuple(tuple(int(x) for x in c) for c in f), Scheme.plain(v)) for f in data["factors"]
        )
        one = data.get("one_factor")
        one = None if one is None else tuple((int(a), int(b)) for a, b in one)
        method = data["method"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad JSON record: {exc}") from exc
    if not factors:
        raise FormatError("no factors")
    if method not in METHODS:
        raise FormatError(f"unknown method {method!r}")
    for f in factors:
        for x in f.vertices():
            if not 0 <= x < v:
                raise FormatError(f"vertex {x} out of range for order {v}")
    return SolutionFile(v, ct, method, Factorization(factors, one, v))
