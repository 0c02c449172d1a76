"""Shared data model: F2 columns, bars, entanglement, presentations, graphcodes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .errors import (DanglingEdge, IndexOutOfRange, InvalidGraphcode, LabelInvariantViolated,
                     NonHomogeneous)

F2Column = tuple  # sorted tuple of distinct row indices


def as_column(indices: Iterable[int]) -> F2Column:
    """Normalize ``indices`` to an F2 column, cancelling repeated indices in pairs."""
    acc = set()
    for i in indices:
        acc ^= {i}
    return tuple(sorted(acc))


def add_columns(a: Iterable[int], b: Iterable[int]) -> F2Column:
    return tuple(sorted(set(a) ^ set(b)))


def pivot(a: Iterable[int]) -> Optional[int]:
    """Largest row index of a column (its lowest entry when drawn top to bottom)."""
    return max(a, default=None)


class Bigrade(NamedTuple):
    scale: int
    height: int


def grade_leq(p, q) -> bool:
    return p[0] <= q[0] and p[1] <= q[1]


class Bar(NamedTuple):
    """Graphcode vertex label: the interval ``[b, d)`` at height ``h``."""

    b: int
    d: int
    h: int

    @property
    def interval(self):
        return (self.b, self.d)


def entangled(j, i) -> bool:
    """``J ◁ I`` for bars given as ``(b, d, ...)``: the unique nonzero map ``I -> J`` exists."""
    return j[0] <= i[0] < j[1] <= i[1]


def intersects(a, c) -> bool:
    return a[0] < c[1] and c[0] < a[1]


def bar_order_key(bar):
    return (bar[0], bar[1])


# --------------------------------------------------------------------------

class Relation(NamedTuple):
    grade: tuple
    column: F2Column


@dataclass
class Presentation:
    """Bigraded F2 matrix: generators are rows, relations are columns.

    ``m`` and ``n`` are the grid extents; they default to the largest scale
    and height that occur.
    """

    generators: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    m: Optional[int] = None
    n: Optional[int] = None

    def __post_init__(self):
        self.generators = [Bigrade(*g) for g in self.generators]
        self.relations = [Relation(Bigrade(*r[0]), as_column(r[1])) for r in self.relations]
        grades = self.generators + [r.grade for r in self.relations]
        if self.m is None:
            self.m = max((g[0] for g in grades), default=0)
        if self.n is None:
            self.n = max((g[1] for g in grades), default=0)

    @property
    def n_generators(self):
        return len(self.generators)

    @property
    def n_relations(self):
        return len(self.relations)

    def check(self):
        """Raise if an entry violates the grade order or an index is out of range."""
        g = len(self.generators)
        for j, (grade, col) in enumerate(self.relations):
            for i in col:
                if not 0 <= i < g:
                    raise IndexOutOfRange(f"relation {j} refers to generator {i}")
                if not grade_leq(self.generators[i], grade):
                    raise NonHomogeneous(
                        f"relation {j} at {grade} contains generator {i} at {self.generators[i]}")
        return self

    def same_as(self, other) -> bool:
        return self.generators == other.generators and self.relations == other.relations


def direct_sum(*parts: Presentation) -> Presentation:
    """Block-diagonal presentation of the direct sum."""
    gens, rels = [], []
    for p in parts:
        off = len(gens)
        gens.extend(p.generators)
        rels.extend((r.grade, [i + off for i in r.column]) for r in p.relations)
    m = max((p.m for p in parts), default=0)
    n = max((p.n for p in parts), default=0)
    return Presentation(gens, rels, m, n)


# --------------------------------------------------------------------------

@dataclass
class Graphcode:
    """Directed bar-labelled graph on the grid ``G(m, n)``.

    Vertices are :class:`Bar` labels in a fixed order; ``edges`` holds
    ``(u, v)`` vertex-index pairs, read as ``u -> v``.
    """

    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    m: int = 0
    n: int = 0

    def __post_init__(self):
        self.vertices = [Bar(*v) for v in self.vertices]
        self.edges = sorted(set((int(u), int(v)) for u, v in self.edges))

    def __len__(self):
        return len(self.vertices)

    def out_neighbors(self):
        out = [[] for _ in self.vertices]
        for u, v in self.edges:
            out[u].append(v)
        return out

    def in_neighbors(self):
        inn = [[] for _ in self.vertices]
        for u, v in self.edges:
            inn[v].append(u)
        return inn

    def same_as(self, other) -> bool:
        return (self.vertices == other.vertices and set(self.edges) == set(other.edges)
                and self.m == other.m and self.n == other.n)

    def is_strict(self) -> bool:
        return all(self.vertices[v].h == self.vertices[u].h + 1 for u, v in self.edges)

    def validate(self, strict=False) -> "Graphcode":
        """Check the (generalized) graphcode conditions; raise on the first violation."""
        m, n = self.m, self.n
        for k, (b, d, h) in enumerate(self.vertices):
            if not (1 <= b < d <= m + 1 and 1 <= h <= n):
                raise LabelInvariantViolated(f"vertex {k} has label ({b},{d},{h}) outside G({m},{n})")
        nv = len(self.vertices)
        target_height = {}
        for u, v in self.edges:
            if not (0 <= u < nv and 0 <= v < nv):
                raise DanglingEdge(f"edge {u}->{v} refers to a missing vertex")
            src, dst = self.vertices[u], self.vertices[v]
            if dst.h <= src.h:
                raise InvalidGraphcode(f"edge {u}->{v} does not go up")
            if strict and dst.h != src.h + 1:
                raise InvalidGraphcode(f"edge {u}->{v} skips heights")
            if target_height.setdefault(u, dst.h) != dst.h:
                raise InvalidGraphcode(f"out-neighbours of vertex {u} sit at different heights")
            if not entangled(dst, src):
                raise InvalidGraphcode(f"edge {u}->{v}: [{dst.b},{dst.d}) is not entangled with [{src.b},{src.d})")
        return self

    def vertices_by_height(self):
        by = {}
        for k, v in enumerate(self.vertices):
            by.setdefault(v.h, []).append(k)
        return by


def disjoint_union(*parts: Graphcode) -> Graphcode:
    verts, edges = [], []
    for g in parts:
        off = len(verts)
        verts.extend(g.vertices)
        edges.extend((u + off, v + off) for u, v in g.edges)
    m = max((g.m for g in parts), default=0)
    n = max((g.n for g in parts), default=0)
    return Graphcode(verts, edges, m, n)
