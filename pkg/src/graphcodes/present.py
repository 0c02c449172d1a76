"""Presentations from graphcodes, and a light same-grade minimization."""
from __future__ import annotations

from .core import Graphcode, Presentation, as_column
from .engine import UNCOMPRESSED, build_graphcode, label_isomorphic


def presentation_from_graphcode(g: Graphcode) -> Presentation:
    """One generator per vertex; a death relation per finite bar and a propagation
    relation per vertex below the top height.

    Relations are sorted by ``(height, scale)``, ties in construction order.
    """
    g.validate()
    m, n = g.m, g.n
    gens = [(b, h) for b, _d, h in g.vertices]
    out = g.out_neighbors()
    rels = []
    for k, (b, d, h) in enumerate(g.vertices):
        if d <= m:
            rels.append(((d, h), [k]))
        if h < n:
            targets = out[k]
            top = g.vertices[targets[0]].h if targets else h + 1
            rels.append(((b, top), [k] + sorted(targets)))
    rels.sort(key=lambda r: (r[0][1], r[0][0]))
    return Presentation(gens, rels, m, n)


def roundtrip_check(g: Graphcode) -> bool:
    back = build_graphcode(presentation_from_graphcode(g), UNCOMPRESSED)
    return label_isomorphic(back, g)


def minimize(p: Presentation) -> Presentation:
    """Cancel generator/relation pairs of equal grade, then drop zero and repeated relations.

    A relation ``r`` at the grade of a generator ``i`` it contains expresses
    ``i`` through the others; substituting that expression into every other
    relation removes both ``i`` and ``r`` without changing the cokernel.
    """
    gens = list(p.generators)
    rels = [(tuple(r.grade), set(r.column)) for r in p.relations]
    alive_gen = [True] * len(gens)
    alive_rel = [True] * len(rels)
    changed = True
    while changed:
        changed = False
        for j, (grade, col) in enumerate(rels):
            if not alive_rel[j]:
                continue
            cand = [i for i in col if tuple(gens[i]) == grade]
            if not cand:
                continue
            i = max(cand)
            for k, (_g, other) in enumerate(rels):
                if k != j and alive_rel[k] and i in other:
                    other ^= col
            alive_rel[j] = False
            alive_gen[i] = False
            changed = True
    keep = [i for i, a in enumerate(alive_gen) if a]
    new_index = {i: k for k, i in enumerate(keep)}
    out_rels = []
    seen = set()
    for j, (grade, col) in enumerate(rels):
        if not alive_rel[j] or not col:
            continue
        column = as_column(new_index[i] for i in col)
        if (grade, column) in seen:
            continue
        seen.add((grade, column))
        out_rels.append((grade, column))
    return Presentation([gens[i] for i in keep], out_rels, p.m, p.n)
