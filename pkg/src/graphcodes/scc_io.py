"""Readers and writers for the scc2020 presentation dialect and graphcode files.

Both formats are line oriented.  Blank lines and lines starting with ``#``
are skipped, CRLF endings are accepted, and every error carries the
1-based line number of the offending line.
"""
from __future__ import annotations

import io
from pathlib import Path

from .core import Graphcode, Presentation, grade_leq
from .errors import (BadHeader, BadParameterCount, DanglingEdge, IndexOutOfRange,
                     LabelInvariantViolated, MalformedLine, NonHomogeneous)

PRESENTATION_HEADER = "scc2020"
GRAPHCODE_HEADER = "graphcode"


def _text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return data.decode("utf-8")
    if hasattr(data, "read"):
        return _text(data.read())
    return data


def _lines(text):
    """Yield ``(line_number, stripped_content)`` for every meaningful line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


class _Cursor:
    def __init__(self, text, source):
        self.it = _lines(text)
        self.source = source
        self.last = 0

    def next(self, what):
        try:
            self.last, line = next(self.it)
        except StopIteration:
            raise MalformedLine(f"unexpected end of input, expected {what}",
                                line=self.last + 1, source=self.source) from None
        return line

    def ints(self, line, count, what):
        parts = line.split()
        try:
            values = [int(x) for x in parts]
        except ValueError:
            raise MalformedLine(f"expected {what}, got {line!r}", self.last, self.source) from None
        if len(values) != count:
            raise MalformedLine(f"expected {what}, got {line!r}", self.last, self.source)
        return values

    def trailing(self):
        for no, line in self.it:
            raise MalformedLine(f"unexpected trailing content {line!r}", no, self.source)


def _grade(cur, text, line_kind):
    vals = cur.ints(text, 2, f"two integer coordinates on a {line_kind} line")
    if min(vals) < 1:
        raise MalformedLine(f"coordinates must be positive, got {text!r}", cur.last, cur.source)
    return tuple(vals)


# --------------------------------------------------------------------------
# presentations

def parse_presentation(data, source=None) -> Presentation:
    """Parse scc2020 text (``str``, ``bytes`` or a readable) into a Presentation."""
    cur = _Cursor(_text(data), source)
    header = cur.next("header")
    if header != PRESENTATION_HEADER:
        raise BadHeader(f"expected {PRESENTATION_HEADER!r}, got {header!r}", cur.last, source)
    line = cur.next("parameter count")
    try:
        params = int(line)
    except ValueError:
        raise BadParameterCount(f"expected parameter count, got {line!r}", cur.last, source) from None
    if params != 2:
        raise BadParameterCount(f"only 2-parameter input is supported, got {params}", cur.last, source)
    n_rels, n_gens = cur.ints(cur.next("block sizes"), 2, "'<relations> <generators>'")
    if n_rels < 0 or n_gens < 0:
        raise MalformedLine("block sizes must be non-negative", cur.last, source)

    rel_lines = []
    for _ in range(n_rels):
        line = cur.next("relation line")
        if ";" not in line:
            raise MalformedLine(f"relation line lacks ';': {line!r}", cur.last, source)
        left, right = line.split(";", 1)
        grade = _grade(cur, left, "relation")
        try:
            col = [int(x) for x in right.split()]
        except ValueError:
            raise MalformedLine(f"bad generator index in {line!r}", cur.last, source) from None
        if len(set(col)) != len(col):
            raise MalformedLine(f"repeated generator index in {line!r}", cur.last, source)
        rel_lines.append((cur.last, grade, col))

    gens = []
    for _ in range(n_gens):
        line = cur.next("generator line")
        left, sep, right = line.partition(";")
        if not sep or right.strip():
            raise MalformedLine(f"generator line must read '<x> <y> ;': {line!r}", cur.last, source)
        gens.append(_grade(cur, left, "generator"))
    cur.trailing()

    for no, grade, col in rel_lines:
        for i in col:
            if not 0 <= i < n_gens:
                raise IndexOutOfRange(f"generator index {i} not in [0,{n_gens})", no, source)
    pres = Presentation(gens, [(g, c) for _, g, c in rel_lines])
    for j, (no, grade, col) in enumerate(rel_lines):
        for i in col:
            if not grade_leq(gens[i], grade):
                raise NonHomogeneous(
                    f"relation {j} at {grade} contains generator {i} at {gens[i]}", no, source)
    return pres


def write_presentation(p: Presentation) -> str:
    out = io.StringIO()
    out.write(f"{PRESENTATION_HEADER}\n2\n{len(p.relations)} {len(p.generators)}\n")
    for grade, col in p.relations:
        idx = " ".join(str(i) for i in col)
        out.write(f"{grade[0]} {grade[1]} ;{' ' + idx if idx else ''}\n")
    for g in p.generators:
        out.write(f"{g[0]} {g[1]} ;\n")
    return out.getvalue()


# --------------------------------------------------------------------------
# graphcodes

def parse_graphcode(data, source=None) -> Graphcode:
    cur = _Cursor(_text(data), source)
    header = cur.next("header")
    if header != GRAPHCODE_HEADER:
        raise BadHeader(f"expected {GRAPHCODE_HEADER!r}, got {header!r}", cur.last, source)
    m, n = cur.ints(cur.next("grid extents"), 2, "'<m> <n>'")
    if m < 0 or n < 0:
        raise MalformedLine("grid extents must be non-negative", cur.last, source)
    (nv,) = cur.ints(cur.next("vertex count"), 1, "vertex count")
    verts = []
    for k in range(nv):
        b, d, h = cur.ints(cur.next("vertex label"), 3, "'<b> <d> <h>'")
        if not (1 <= b < d <= m + 1 and 1 <= h <= n):
            raise LabelInvariantViolated(f"vertex {k} label ({b},{d},{h}) invalid on G({m},{n})",
                                         cur.last, source)
        verts.append((b, d, h))
    (ne,) = cur.ints(cur.next("edge count"), 1, "edge count")
    edges = []
    for _ in range(ne):
        u, v = cur.ints(cur.next("edge"), 2, "'<u> <v>'")
        if not (0 <= u < nv and 0 <= v < nv):
            raise DanglingEdge(f"edge {u}->{v} refers to a missing vertex", cur.last, source)
        edges.append((u, v))
    cur.trailing()
    return Graphcode(verts, edges, m, n)


def write_graphcode(g: Graphcode) -> str:
    out = io.StringIO()
    out.write(f"{GRAPHCODE_HEADER}\n{g.m} {g.n}\n{len(g.vertices)}\n")
    for b, d, h in g.vertices:
        out.write(f"{b} {d} {h}\n")
    out.write(f"{len(g.edges)}\n")
    for u, v in g.edges:
        out.write(f"{u} {v}\n")
    return out.getvalue()


# --------------------------------------------------------------------------

def is_blank(data) -> bool:
    """True when the input has no line besides blanks and comments."""
    return next(_lines(_text(data)), None) is None


def sniff(data) -> str:
    """``"presentation"`` or ``"graphcode"`` according to the first meaningful line."""
    for no, line in _lines(_text(data)):
        if line == PRESENTATION_HEADER:
            return "presentation"
        if line == GRAPHCODE_HEADER:
            return "graphcode"
        raise BadHeader(f"unknown header {line!r}", no)
    raise BadHeader("empty input")


def read_presentation(path) -> Presentation:
    path = Path(path)
    return parse_presentation(path.read_bytes(), source=str(path))


def read_graphcode(path) -> Graphcode:
    path = Path(path)
    return parse_graphcode(path.read_bytes(), source=str(path))
