"""Graphcodes from presentations by batch out-of-order reduction.

Rows of the presentation matrix are the generators sorted by scale, columns
the relations sorted by scale (ties by input index).  Batch ``h`` inserts the
generators and relations of height ``h`` and re-reduces the partially filled
matrix; the column operations of a batch express every old barcode-basis
element in the new basis, which gives the edges between heights ``h-1`` and
``h``.
"""
from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from . import _kernels as K
from .core import Bar, Graphcode, Presentation, entangled

COMPRESSED = "compressed"
UNCOMPRESSED = "uncompressed"


@dataclass
class SliceReduction:
    height: int
    bars: list
    # reduced relation columns as generator-index tuples, in scale order
    columns: list = field(default_factory=list)
    column_additions: int = 0


def _orders(pres: Presentation):
    gens = pres.generators
    rels = pres.relations
    # scale ties across heights: older rows sit lower and newer columns sit
    # further left; with this choice a presentation built from a graphcode
    # reduces back to that same graphcode
    row_order = sorted(range(len(gens)), key=lambda g: (gens[g][0], -gens[g][1], g))
    col_order = sorted(range(len(rels)), key=lambda j: (rels[j].grade[0], -rels[j].grade[1], j))
    row_of = np.empty(len(gens), dtype=np.int64)
    row_of[row_order] = np.arange(len(gens))
    return row_order, col_order, row_of


def reduce_slice(pres: Presentation, height: int) -> SliceReduction:
    """Barcode of the horizontal slice at ``height`` by the standard persistence algorithm."""
    if not 1 <= height <= max(pres.n, 1):
        raise ValueError(f"height {height} outside 1..{pres.n}")
    row_order, col_order, row_of = _orders(pres)
    gens, rels = pres.generators, pres.relations
    width = K.n_words(len(gens))
    active_cols = [j for j in col_order if rels[j].grade[1] <= height]
    mat = np.zeros((len(active_cols), width), dtype=np.uint64)
    for k, j in enumerate(active_cols):
        mat[k] = K.pack((int(row_of[i]) for i in rels[j].column), width)
    pivots, adds = K.reduce_matrix(mat)
    row_scale = [gens[g][0] for g in row_order]
    bars = []
    paired = set()
    for k, j in enumerate(active_cols):
        p = int(pivots[k])
        if p < 0:
            continue
        paired.add(p)
        b, d = row_scale[p], rels[j].grade[0]
        if b < d:
            bars.append((b, d))
    for r, g in enumerate(row_order):
        if gens[g][1] <= height and r not in paired:
            bars.append((gens[g][0], pres.m + 1))
    columns = [tuple(sorted(row_order[r] for r in K.unpack(mat[k]))) for k in range(len(active_cols))]
    return SliceReduction(height, sorted(bars), columns, adds)


class BatchReducer:
    """One pass of the batch reduction over all heights of a presentation.

    Barcode-basis elements are keyed by integers: ``j < R`` is the relation
    column at scale-order position ``j``; ``R + r`` is the explicit unit
    vector of the generator in row ``r`` while that generator is unpaired.

    After :meth:`run`, ``column_additions`` counts all F2 column additions
    and ``uncompressed_vertices`` the total number of bars over all heights
    (the vertex count of the uncompressed graphcode, whatever the mode).
    """

    def __init__(self, pres: Presentation):
        self.pres = pres
        row_order, col_order, row_of = _orders(pres)
        gens, rels = pres.generators, pres.relations
        self.n_rows = len(gens)
        self.n_cols = len(rels)
        self.m = pres.m
        self.n = pres.n
        self.row_scale = [gens[g][0] for g in row_order]
        self.col_scale = [rels[j].grade[0] for j in col_order]
        width = K.n_words(self.n_rows)
        self.width = width
        self.cols = np.zeros((max(self.n_cols, 1), width), dtype=np.uint64)
        for pos, j in enumerate(col_order):
            self.cols[pos] = K.pack((int(row_of[i]) for i in rels[j].column), width)
        self.row_batches = defaultdict(list)
        for r, g in enumerate(row_order):
            self.row_batches[gens[g][1]].append(r)
        self.col_batches = defaultdict(list)
        for pos, j in enumerate(col_order):
            self.col_batches[rels[j].grade[1]].append(pos)

        self.owner = np.full(max(self.n_rows, 1), -1, dtype=np.int64)
        self.colpiv = [-1] * self.n_cols
        self.row_active = [False] * self.n_rows
        self.unpaired = set()
        self._added = np.zeros(max(self.n_cols, 1), dtype=np.int64)
        self._targets = np.zeros(max(self.n_cols + self.n_rows, 1), dtype=np.int64)

        self.column_additions = 0
        self.uncompressed_vertices = 0
        self.bars_by_height = None

    # -- basis elements ----------------------------------------------------

    def bar(self, key):
        if key < self.n_cols:
            p = self.colpiv[key]
            if p < 0:
                return None
            b, d = self.row_scale[p], self.col_scale[key]
            return (b, d) if b < d else None
        r = key - self.n_cols
        if self.row_active[r] and self.owner[r] == -1:
            return (self.row_scale[r], self.m + 1)
        return None

    # -- one batch ---------------------------------------------------------

    def _batch(self, h):
        """Insert and reduce batch ``h``.

        Returns ``(touched, old_bars, relations)`` where ``old_bars`` maps each
        touched key to its bar before the batch and ``relations`` maps each
        touched key that carried a bar to the keys of its image in the new
        basis (already filtered for zero persistence and entanglement).
        """
        R = self.n_cols
        touched = set()
        old = {}
        adds = {}

        def touch(k):
            if k not in touched:
                touched.add(k)
                old[k] = self.bar(k)

        new_rows = self.row_batches.get(h, ())
        for r in new_rows:
            touch(R + r)
            self.row_active[r] = True
        previously_unpaired = self.unpaired
        paired = []

        heap = list(self.col_batches.get(h, ()))
        heapq.heapify(heap)
        queued = set(heap)
        while heap:
            j = heapq.heappop(heap)
            queued.discard(j)
            touch(j)
            n_added, p, stolen = K.reduce_one(self.cols, j, self.owner, self._added)
            if n_added:
                self.column_additions += n_added
                srcs = adds.setdefault(j, set())
                for o in self._added[:n_added].tolist():
                    touch(o)
                    srcs ^= {o}
            self.colpiv[j] = p
            if p >= 0 and stolen < 0 and p in previously_unpaired:
                previously_unpaired.discard(p)
                paired.append(p)
            if stolen >= 0 and stolen not in queued:
                heapq.heappush(heap, stolen)
                queued.add(stolen)
        for r in new_rows:
            if self.owner[r] == -1:
                self.unpaired.add(r)

        images = {}
        for j, srcs in adds.items():
            images[j] = ([j] if self.colpiv[j] >= 0 else []) + sorted(srcs)
        for r in sorted(paired):
            key = R + r
            touched.add(key)
            old[key] = (self.row_scale[r], self.m + 1)
            c = int(self.owner[r])
            vec = self.cols[c].copy()
            vec[r >> 6] ^= np.uint64(1) << np.uint64(r & 63)
            n_t = K.reduce_remainder(vec, self.cols, self.owner, R, self._targets)
            self.column_additions += 1 + n_t
            targets = [c] + self._targets[:n_t].tolist()
            for t in targets:
                touch(t)
            images[key] = targets

        relations = {}
        for k in touched:
            src = old[k]
            if src is None:
                continue
            out = []
            for t in images.get(k, (k,)):
                tb = self.bar(t)
                if tb is not None and entangled(tb, src):
                    out.append(t)
            relations[k] = out
        return touched, old, relations

    # -- full run ----------------------------------------------------------

    def run(self, mode=COMPRESSED, record_bars=False) -> Graphcode:
        if mode not in (COMPRESSED, UNCOMPRESSED):
            raise ValueError(f"unknown mode {mode!r}")
        compressed = mode == COMPRESSED
        n = self.n
        verts = []
        edges = []
        last_vertex = {}
        alive = set()
        if record_bars:
            self.bars_by_height = {}

        # state of the previous height, emitted one batch late so that
        # "touched in the next batch" is known
        prev_touched = set()
        prev_relations = {}
        prev_alive = set()
        level_before = {}  # key -> vertex id at height h-2

        def emit(height, keys, bar_of, touched_here, relations_here, below):
            level = {}
            for k in sorted(keys):
                bd = bar_of(k)
                if bd is None:
                    continue
                vid = len(verts)
                verts.append(Bar(bd[0], bd[1], height))
                level[k] = vid
                if k not in touched_here and k in last_vertex:
                    edges.append((last_vertex[k], vid))
                last_vertex[k] = vid
            for k, targets in relations_here.items():
                u = below[k]
                for t in targets:
                    edges.append((u, level[t]))
            return level

        for h in range(1, n + 1):
            if not compressed:
                prev_alive = set(alive)
            touched, old, relations = self._batch(h)
            for k in touched:
                if self.bar(k) is None:
                    alive.discard(k)
                else:
                    alive.add(k)
            self.uncompressed_vertices += len(alive)
            if record_bars:
                self.bars_by_height[h] = sorted(self.bar(k) for k in alive)
            if h >= 2:
                keys = prev_alive if not compressed else (prev_touched | touched)
                level = emit(h - 1, keys,
                             lambda k: old[k] if k in touched else self.bar(k),
                             prev_touched, prev_relations, level_before)
                level_before = level
            prev_touched, prev_relations = touched, relations
        if n >= 1:
            emit(n, alive, self.bar, prev_touched, prev_relations, level_before)
        return Graphcode(verts, edges, self.m, n)


def build_graphcode(pres: Presentation, mode=COMPRESSED) -> Graphcode:
    return BatchReducer(pres).run(mode)


# --------------------------------------------------------------------------
# graph operations

def superfluous_vertices(g: Graphcode):
    out = g.out_neighbors()
    inn = g.in_neighbors()
    result = set()
    for w, preds in enumerate(inn):
        if len(preds) != 1 or not out[w]:
            continue
        v = preds[0]
        if len(out[v]) == 1 and g.vertices[v][:2] == g.vertices[w][:2]:
            result.add(w)
    return result


def compress(g: Graphcode) -> Graphcode:
    """Remove every superfluous vertex, rewiring its predecessor to its successors."""
    drop = superfluous_vertices(g)
    if not drop:
        return Graphcode(g.vertices, g.edges, g.m, g.n)
    out = g.out_neighbors()
    keep = [v for v in range(len(g.vertices)) if v not in drop]
    new_id = {v: k for k, v in enumerate(keep)}
    edges = []
    for v in keep:
        targets = out[v]
        # a superfluous vertex is always the sole target of its predecessor
        while len(targets) == 1 and targets[0] in drop:
            targets = out[targets[0]]
        edges.extend((new_id[v], new_id[t]) for t in targets)
    return Graphcode([g.vertices[v] for v in keep], edges, g.m, g.n)


def expand(g: Graphcode) -> Graphcode:
    """Insert chain vertices so that every edge joins consecutive heights."""
    verts = list(g.vertices)
    out = g.out_neighbors()
    edges = []
    for v, targets in enumerate(out):
        if not targets:
            continue
        b, d, h = g.vertices[v]
        top = g.vertices[targets[0]].h
        src = v
        for hh in range(h + 1, top):
            verts.append(Bar(b, d, hh))
            edges.append((src, len(verts) - 1))
            src = len(verts) - 1
        edges.extend((src, t) for t in targets)
    return Graphcode(verts, edges, g.m, g.n)


def connected_components(g: Graphcode):
    """Weak components, ordered by their smallest vertex index; vertex order is kept."""
    nv = len(g.vertices)
    if nv == 0:
        return []
    if g.edges:
        e = np.asarray(g.edges, dtype=np.int64)
        adj = coo_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(nv, nv))
    else:
        adj = coo_matrix((nv, nv), dtype=np.int8)
    _, labels = _cc(adj, directed=True, connection="weak")
    members = defaultdict(list)
    for v, lab in enumerate(labels.tolist()):
        members[lab].append(v)
    parts = sorted(members.values(), key=lambda vs: vs[0])
    comp_of = {}
    for k, vs in enumerate(parts):
        for v in vs:
            comp_of[v] = k
    local = {}
    for vs in parts:
        for i, v in enumerate(vs):
            local[v] = i
    edge_lists = [[] for _ in parts]
    for u, v in g.edges:
        edge_lists[comp_of[u]].append((local[u], local[v]))
    return [Graphcode([g.vertices[v] for v in vs], edge_lists[k], g.m, g.n)
            for k, vs in enumerate(parts)]


def is_disjoint_path_union(g: Graphcode) -> bool:
    indeg = [0] * len(g.vertices)
    outdeg = [0] * len(g.vertices)
    for u, v in g.edges:
        outdeg[u] += 1
        indeg[v] += 1
    return all(i <= 1 for i in indeg) and all(o <= 1 for o in outdeg)


def label_isomorphic(g1: Graphcode, g2: Graphcode) -> bool:
    """Graph isomorphism that preserves vertex labels."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    if sorted(g1.vertices) != sorted(g2.vertices):
        return False
    if len(set(g1.vertices)) == len(g1.vertices):
        where = {lab: k for k, lab in enumerate(g2.vertices)}
        perm = [where[lab] for lab in g1.vertices]
        return {(perm[u], perm[v]) for u, v in g1.edges} == set(g2.edges)
    import networkx as nx

    def as_nx(g):
        G = nx.DiGraph()
        G.add_nodes_from((k, {"label": lab}) for k, lab in enumerate(g.vertices))
        G.add_edges_from(g.edges)
        return G

    return nx.is_isomorphic(as_nx(g1), as_nx(g2), node_match=lambda a, b: a["label"] == b["label"])
