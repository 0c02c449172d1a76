"""Brute-force reference computations on explicit grid modules.

Everything here is exact and deliberately naive: a module is stored as a
vector space dimension at every grid point plus the matrices of all unit
arrows.  Matrices are lists of columns, each column an ``int`` bitmask over
the target basis.  This is only meant for desk-scale ground truth in tests
and in ``graphcode oracle compare``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .core import Graphcode, Presentation, grade_leq
from .errors import BudgetExceeded

MAX_TOTAL_DIM = 4096


# --------------------------------------------------------------------------
# F2 linear algebra on bitmask columns

def _insert(basis, v):
    """Insert ``v`` into a dict pivot-bit -> vector basis; return True if independent."""
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            basis[top] = v
            return True
        v ^= basis[top]
    return False


def rank(cols) -> int:
    basis = {}
    return sum(_insert(basis, v) for v in cols)


def apply(mat, v) -> int:
    out = 0
    k = 0
    while v:
        if v & 1:
            out ^= mat[k]
        v >>= 1
        k += 1
    return out


def compose(a, b):
    """Matrix of ``a ∘ b``."""
    return [apply(a, c) for c in b]


def identity(dim):
    return [1 << k for k in range(dim)]


def to_array(mat, rows):
    out = np.zeros((rows, len(mat)), dtype=np.uint8)
    for c, v in enumerate(mat):
        for r in range(rows):
            out[r, c] = (v >> r) & 1
    return out


def _nullspace(equations, n_vars):
    """Basis of solutions of a homogeneous system given as bitmask rows."""
    pivots = {}  # pivot var -> row, fully reduced
    for row in equations:
        for p, r in pivots.items():
            if (row >> p) & 1:
                row ^= r
        if not row:
            continue
        p = row.bit_length() - 1
        for q in list(pivots):
            if (pivots[q] >> p) & 1:
                pivots[q] ^= row
        pivots[p] = row
    free = [v for v in range(n_vars) if v not in pivots]
    basis = []
    for f in free:
        sol = 1 << f
        for p, r in pivots.items():
            if (r >> f) & 1:
                sol |= 1 << p
        basis.append(sol)
    return basis


# --------------------------------------------------------------------------

@dataclass
class GridModule:
    """A functor ``G(m, n) -> Vec`` given by dimensions and unit-arrow matrices.

    ``hmap[(x, y)]`` is ``M(x,y) -> M(x+1,y)``, ``vmap[(x, y)]`` is
    ``M(x,y) -> M(x,y+1)``; grid points are 1-based.
    """

    m: int
    n: int
    dims: dict = field(default_factory=dict)
    hmap: dict = field(default_factory=dict)
    vmap: dict = field(default_factory=dict)

    def dim(self, p):
        return self.dims.get(p, 0)

    def points(self):
        return [(x, y) for y in range(1, self.n + 1) for x in range(1, self.m + 1)]

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def arrow(self, p, q):
        if q == (p[0] + 1, p[1]):
            return self.hmap[p]
        if q == (p[0], p[1] + 1):
            return self.vmap[p]
        raise ValueError(f"{p} -> {q} is not a unit arrow")

    def arrows(self):
        for x, y in self.points():
            if x < self.m:
                yield (x, y), (x + 1, y)
            if y < self.n:
                yield (x, y), (x, y + 1)

    def is_commutative(self) -> bool:
        for x in range(1, self.m):
            for y in range(1, self.n):
                p = (x, y)
                right_up = compose(self.vmap[(x + 1, y)], self.hmap[p])
                up_right = compose(self.hmap[(x, y + 1)], self.vmap[p])
                if right_up != up_right:
                    return False
        return True

    def support(self):
        return {p for p, d in self.dims.items() if d > 0}


def _check_budget(total):
    if total > MAX_TOTAL_DIM:
        raise BudgetExceeded(f"total dimension {total} exceeds {MAX_TOTAL_DIM}")


def module_from_presentation(p: Presentation) -> GridModule:
    """The cokernel of ``p`` with explicit quotient bases at every grid point."""
    m, n = p.m, p.n
    gens = p.generators
    # per point: fully reduced relation basis (pivot -> vector), and quotient basis gens
    reduced = {}
    qbasis = {}
    total = 0
    for y in range(1, n + 1):
        for x in range(1, m + 1):
            active = [i for i, g in enumerate(gens) if grade_leq(g, (x, y))]
            basis = {}
            for r in p.relations:
                if grade_leq(r.grade, (x, y)):
                    v = 0
                    for i in r.column:
                        v |= 1 << i
                    _insert(basis, v)
            for piv in sorted(basis):
                for q in list(basis):
                    if q != piv and (basis[q] >> piv) & 1:
                        basis[q] ^= basis[piv]
            reduced[(x, y)] = basis
            qbasis[(x, y)] = [i for i in active if i not in basis]
            total += len(qbasis[(x, y)])
            _check_budget(total)

    def coords(v, pt):
        for piv, r in reduced[pt].items():
            if (v >> piv) & 1:
                v ^= r
        out = 0
        for k, i in enumerate(qbasis[pt]):
            if (v >> i) & 1:
                out |= 1 << k
        return out

    M = GridModule(m, n)
    for pt in M.points():
        M.dims[pt] = len(qbasis[pt])
    for p_, q_ in M.arrows():
        mat = [coords(1 << i, q_) for i in qbasis[p_]]
        if q_[0] == p_[0] + 1:
            M.hmap[p_] = mat
        else:
            M.vmap[p_] = mat
    return M


def module_from_graphcode(g: Graphcode) -> GridModule:
    """PM(g): at ``(x, y)`` the bars of height ``y`` containing ``x``."""
    from .engine import expand

    g = expand(g)
    m, n = g.m, g.n
    by_height = {}
    for k, v in enumerate(g.vertices):
        by_height.setdefault(v.h, []).append(k)
    _check_budget(sum(v.d - v.b if v.d <= m else m + 1 - v.b for v in g.vertices))
    basis = {}
    for y in range(1, n + 1):
        for x in range(1, m + 1):
            basis[(x, y)] = [k for k in by_height.get(y, ()) if g.vertices[k].b <= x < g.vertices[k].d]
    out = g.out_neighbors()
    M = GridModule(m, n)
    for pt in M.points():
        M.dims[pt] = len(basis[pt])
    for p_, q_ in M.arrows():
        index = {k: i for i, k in enumerate(basis[q_])}
        mat = []
        for k in basis[p_]:
            if q_[0] == p_[0] + 1:
                v = (1 << index[k]) if k in index else 0
            else:
                v = 0
                for t in out[k]:
                    if t in index:
                        v ^= 1 << index[t]
            mat.append(v)
        if q_[0] == p_[0] + 1:
            M.hmap[p_] = mat
        else:
            M.vmap[p_] = mat
    return M


def zero_module(m, n) -> GridModule:
    M = GridModule(m, n)
    for pt in M.points():
        M.dims[pt] = 0
    for p_, q_ in M.arrows():
        (M.hmap if q_[0] > p_[0] else M.vmap)[p_] = []
    return M


def direct_sum_modules(A: GridModule, B: GridModule) -> GridModule:
    if (A.m, A.n) != (B.m, B.n):
        raise ValueError("modules live on different grids")
    M = GridModule(A.m, A.n)
    for pt in M.points():
        M.dims[pt] = A.dim(pt) + B.dim(pt)
    for p_, q_ in M.arrows():
        shift = A.dim(q_)
        mat = list(A.arrow(p_, q_)) + [v << shift for v in B.arrow(p_, q_)]
        (M.hmap if q_[0] > p_[0] else M.vmap)[p_] = mat
    return M


# --------------------------------------------------------------------------
# invariants

def dimension_function(M: GridModule):
    out = np.zeros((M.m, M.n), dtype=np.int64)
    for (x, y), d in M.dims.items():
        out[x - 1, y - 1] = d
    return out


def rank_invariant(M: GridModule):
    """``{(p, q): rank M(p -> q)}`` for all comparable ``p <= q`` with ``dim M(p) > 0``."""
    ranks = {}
    for p in M.points():
        if not M.dim(p):
            continue
        px, py = p
        images = {}
        for y in range(py, M.n + 1):
            for x in range(px, M.m + 1):
                q = (x, y)
                if q == p:
                    img = identity(M.dim(p))
                elif x > px:
                    img = [apply(M.hmap[(x - 1, y)], v) for v in images[(x - 1, y)]]
                else:
                    img = [apply(M.vmap[(x, y - 1)], v) for v in images[(x, y - 1)]]
                basis = {}
                img = [v for v in img if _insert(basis, v)]
                images[q] = list(basis.values())
                ranks[(p, q)] = len(basis)
    return ranks


def same_invariants(M: GridModule, N: GridModule) -> tuple:
    """``(dimension functions equal, rank invariants equal)``."""
    if (M.m, M.n) != (N.m, N.n):
        return False, False
    dims = bool(np.array_equal(dimension_function(M), dimension_function(N)))
    if not dims:
        return False, False
    return True, rank_invariant(M) == rank_invariant(N)


# --------------------------------------------------------------------------
# morphisms

class Morphism(dict):
    """Point -> matrix (list of bitmask columns)."""

    def __xor__(self, other):
        return Morphism({p: [a ^ b for a, b in zip(self[p], other[p])] for p in self})


def hom_space(M: GridModule, N: GridModule, max_dim=20):
    """Basis of natural transformations ``M -> N`` as a list of :class:`Morphism`.

    ``max_dim=None`` lifts the dimension cap.
    """
    if (M.m, M.n) != (N.m, N.n):
        raise ValueError("modules live on different grids")
    offset = {}
    n_vars = 0
    for p in M.points():
        offset[p] = n_vars
        n_vars += M.dim(p) * N.dim(p)

    def var(p, r, c):
        return offset[p] + c * N.dim(p) + r

    equations = []
    for p, q in M.arrows():
        Ma, Na = M.arrow(p, q), N.arrow(p, q)
        # N(p->q) φ_p = φ_q M(p->q), entry (r, c) with r < dim N(q), c < dim M(p)
        for c in range(M.dim(p)):
            for r in range(N.dim(q)):
                row = 0
                for k in range(N.dim(p)):
                    if (Na[k] >> r) & 1:
                        row ^= 1 << var(p, k, c)
                for k in range(M.dim(q)):
                    if (Ma[c] >> k) & 1:
                        row ^= 1 << var(q, r, k)
                if row:
                    equations.append(row)
    sols = _nullspace(equations, n_vars)
    if max_dim is not None and len(sols) > max_dim:
        raise BudgetExceeded(f"Hom space has dimension {len(sols)} > {max_dim}")
    basis = []
    for s in sols:
        phi = Morphism()
        for p in M.points():
            cols = []
            for c in range(M.dim(p)):
                v = 0
                for r in range(N.dim(p)):
                    if (s >> var(p, r, c)) & 1:
                        v |= 1 << r
                cols.append(v)
            phi[p] = cols
        basis.append(phi)
    return basis


def _combination(basis, mask, points):
    phi = {p: [0] * len(basis[0][p]) for p in points} if basis else {}
    for k, b in enumerate(basis):
        if (mask >> k) & 1:
            for p in points:
                phi[p] = [x ^ y for x, y in zip(phi[p], b[p])]
    return phi


def _gray(k):
    """Yield ``(index flipped, mask)`` visiting all ``2**k`` masks; the first flip is ``None``."""
    yield None, 0
    mask = 0
    for i in range(1, 1 << k):
        bit = (i & -i).bit_length() - 1
        mask ^= 1 << bit
        yield bit, mask


def _invertible(phi, M):
    return all(rank(phi[p]) == M.dim(p) for p in M.points() if M.dim(p))


def are_isomorphic(M: GridModule, N: GridModule, max_hom_dim=20, seed=0, random_tries=4096) -> bool:
    if (M.m, M.n) != (N.m, N.n):
        return False
    if not np.array_equal(dimension_function(M), dimension_function(N)):
        return False
    pts = [p for p in M.points() if M.dim(p)]
    if not pts:
        return True
    basis = hom_space(M, N, max_dim=None)
    if not basis:
        return False
    rng = random.Random(seed)
    k = len(basis)
    # when M ≅ N a random morphism is invertible with probability about 2^-k,
    # k the number of pairwise non-isomorphic summands
    for _ in range(random_tries):
        if _invertible(_combination(basis, rng.getrandbits(k), pts), M):
            return True
    if k > max_hom_dim:
        raise BudgetExceeded(f"Hom space has dimension {k} > {max_hom_dim}; exhaustive search refused")
    phi = _combination(basis, 0, pts)
    for bit, _mask in _gray(k):
        if bit is not None:
            b = basis[bit]
            for p in pts:
                phi[p] = [x ^ y for x, y in zip(phi[p], b[p])]
            if all(rank(phi[p]) == M.dim(p) for p in pts):
                return True
    return False


# --------------------------------------------------------------------------
# decomposition by idempotents

def submodule(M: GridModule, spans) -> GridModule:
    """Submodule with basis ``spans[p]`` (bitmask vectors of ``M(p)``) at every point.

    ``spans`` must be closed under the structure maps.
    """
    S = GridModule(M.m, M.n)
    bases = {}
    for p in M.points():
        basis = {}
        vecs = [v for v in spans.get(p, []) if _insert(basis, v)]
        bases[p] = (vecs, basis)
        S.dims[p] = len(vecs)

    def express(v, q):
        vecs, _ = bases[q]
        # solve v = Σ c_k vecs[k] by elimination with tracked combinations
        tracked = {}
        for k, w in enumerate(vecs):
            comb = 1 << k
            while w:
                top = w.bit_length() - 1
                if top in tracked:
                    w ^= tracked[top][0]
                    comb ^= tracked[top][1]
                else:
                    tracked[top] = (w, comb)
                    break
        out = 0
        while v:
            top = v.bit_length() - 1
            if top not in tracked:
                raise ValueError("span not closed under the structure maps")
            v ^= tracked[top][0]
            out ^= tracked[top][1]
        return out

    for p, q in M.arrows():
        mat = [express(apply(M.arrow(p, q), v), q) for v in bases[p][0]]
        (S.hmap if q[0] > p[0] else S.vmap)[p] = mat
    return S


def _is_idempotent(e, pts):
    return all(compose(e[p], e[p]) == e[p] for p in pts)


def _is_interval(M: GridModule) -> bool:
    supp = M.support()
    if not supp:
        return False
    if any(M.dim(p) > 1 for p in supp):
        return False
    # convex: p <= q <= r with p, r in supp forces q in supp
    for p in supp:
        for r in supp:
            if grade_leq(p, r):
                for x in range(p[0], r[0] + 1):
                    for y in range(p[1], r[1] + 1):
                        if (x, y) not in supp:
                            return False
    # connected through grid-adjacent support points
    start = next(iter(supp))
    seen = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if q in supp and q not in seen:
                seen.add(q)
                stack.append(q)
    return seen == supp


def split(M: GridModule, max_end_dim=16):
    """Find a proper idempotent endomorphism and split ``M`` along it.

    Returns ``(A, B)`` with ``M ≅ A ⊕ B`` or ``None`` when ``M`` is
    indecomposable.
    """
    pts = [p for p in M.points() if M.dim(p)]
    basis = hom_space(M, M, max_dim=max_end_dim)
    ident = {p: identity(M.dim(p)) for p in pts}
    e = _combination(basis, 0, pts)
    for bit, _mask in _gray(len(basis)):
        if bit is not None:
            b = basis[bit]
            for p in pts:
                e[p] = [x ^ y for x, y in zip(e[p], b[p])]
        if all(not any(e[p]) for p in pts) or all(e[p] == ident[p] for p in pts):
            continue
        if _is_idempotent(e, pts):
            im = {p: [v for v in e[p] if v] for p in pts}
            co = {p: [v ^ w for v, w in zip(e[p], ident[p]) if v ^ w] for p in pts}
            return submodule(M, im), submodule(M, co)
    return None


def indecomposable_summands(M: GridModule, max_end_dim=16):
    parts = [M]
    leaves = []
    while parts:
        P = parts.pop()
        if not P.support():
            continue
        s = split(P, max_end_dim)
        if s is None:
            leaves.append(P)
        else:
            parts.extend(s)
    return leaves


def is_interval_decomposable_bruteforce(M: GridModule, max_total_dim=10, max_end_dim=16) -> bool:
    if M.total_dim > max_total_dim:
        raise BudgetExceeded(f"total dimension {M.total_dim} exceeds {max_total_dim}")
    return all(_is_interval(P) for P in indecomposable_summands(M, max_end_dim))
