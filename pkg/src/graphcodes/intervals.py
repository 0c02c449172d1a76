"""Interval-decomposability by normal-form reduction of the slicewise matrices.

A strict graphcode with distinct bars per height is the same thing as a
sequence of F2 matrices ``eta[i]`` (heights ``i -> i+1``) whose rows and
columns are labelled by the lex-sorted bars of the two heights.  Column
operations on ``eta[i]`` and row operations on ``eta[i-1]`` are changes of
the barcode basis at height ``i``; the module is interval-decomposable iff
some sequence of such changes brings every matrix to normal form (at most
one nonzero entry per row and per column).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import Bar, Graphcode, entangled, intersects
from .engine import expand
from .errors import DuplicateBars, PreconditionViolated

PIVOT_CONFLICT = "pivot_conflict"
ROW_ELIMINATION_FAILED = "row_elimination_failed"


def _entangle_mask(rows, cols):
    """``mask[r, c]`` iff ``entangled(rows[r], cols[c])``: the entries ``eta`` may carry."""
    mask = np.zeros((len(rows), len(cols)), dtype=bool)
    for r, rb in enumerate(rows):
        for c, cb in enumerate(cols):
            mask[r, c] = entangled(rb, cb)
    return mask


@dataclass
class EtaSequence:
    """Bars per height (1-based keys ``1..n``) and matrices ``eta[i]`` for ``i = 1..n-1``.

    ``eta[i]`` has shape ``(len(bars[i+1]), len(bars[i]))``.
    """

    m: int
    n: int
    bars: dict = field(default_factory=dict)
    eta: dict = field(default_factory=dict)

    def __post_init__(self):
        for h in range(1, self.n + 1):
            self.bars.setdefault(h, [])
        for i in range(1, self.n):
            if i not in self.eta:
                self.eta[i] = np.zeros((len(self.bars[i + 1]), len(self.bars[i])), dtype=bool)
            else:
                self.eta[i] = np.asarray(self.eta[i], dtype=bool).reshape(
                    len(self.bars[i + 1]), len(self.bars[i]))
        self._mask = {i: _entangle_mask(self.bars[i + 1], self.bars[i]) for i in range(1, self.n)}
        self.additions = 0

    def copy(self) -> "EtaSequence":
        return EtaSequence(self.m, self.n, {h: list(b) for h, b in self.bars.items()},
                           {i: e.copy() for i, e in self.eta.items()})

    @property
    def total_bars(self):
        return sum(len(b) for b in self.bars.values())

    @property
    def max_bars(self):
        return max((len(b) for b in self.bars.values()), default=0)

    def check(self):
        """Raise unless bars are strictly lex-sorted and every entry is entangled."""
        for h, bs in self.bars.items():
            for a, c in zip(bs, bs[1:]):
                if (a[0], a[1]) == (c[0], c[1]):
                    raise DuplicateBars(h, a)
                if (a[0], a[1]) > (c[0], c[1]):
                    raise PreconditionViolated(f"bars at height {h} are not lex-sorted")
        for i, e in self.eta.items():
            if np.any(e & ~self._mask[i]):
                raise PreconditionViolated(f"eta[{i}] has an entry between non-entangled bars")
        return self

    def to_graphcode(self) -> Graphcode:
        verts, edges = [], []
        vid = {}
        for h in range(1, self.n + 1):
            for k, (b, d) in enumerate(self.bars[h]):
                vid[(h, k)] = len(verts)
                verts.append(Bar(b, d, h))
        for i, e in self.eta.items():
            for r, c in zip(*np.nonzero(e)):
                edges.append((vid[(i, int(c))], vid[(i + 1, int(r))]))
        return Graphcode(verts, edges, self.m, self.n)


def eta_from_graphcode(g: Graphcode) -> EtaSequence:
    """Expand ``g`` and read off the lex-sorted bars and adjacency matrices."""
    g = expand(g.validate())
    bars = {h: [] for h in range(1, g.n + 1)}
    for v in g.vertices:
        bars[v.h].append((v.b, v.d))
    pos = {}
    for h, bs in bars.items():
        order = sorted(bs)
        for a, c in zip(order, order[1:]):
            if a == c:
                raise DuplicateBars(h, a)
        bars[h] = order
        for k, bd in enumerate(order):
            pos[(h, bd)] = k
    eta = {i: np.zeros((len(bars[i + 1]), len(bars[i])), dtype=bool) for i in range(1, g.n)}
    for u, v in g.edges:
        src, dst = g.vertices[u], g.vertices[v]
        eta[src.h][pos[(dst.h, (dst.b, dst.d))], pos[(src.h, (src.b, src.d))]] ^= True
    return EtaSequence(g.m, g.n, bars, eta)


# --------------------------------------------------------------------------
# elementary operations

def apply_column_add(eta: EtaSequence, i: int, k: int, l: int):
    """``col_l += col_k`` in ``eta[i]``, then drop entries that are not entangled with column ``l``."""
    bars = eta.bars[i]
    if not k < l:
        raise PreconditionViolated(f"column add needs k < l, got {k}, {l}")
    if not entangled(bars[k], bars[l]):
        raise PreconditionViolated(f"column {k} -> {l} at height {i}: bars not entangled")
    M = eta.eta.get(i)
    if M is not None:
        M[:, l] ^= M[:, k]
        M[:, l] &= eta._mask[i][:, l]
    eta.additions += 1


def apply_row_add(eta: EtaSequence, i: int, q: int, p: int):
    """``row_p += row_q`` in ``eta[i]`` with truncation, plus ``col_q += col_p`` in ``eta[i+1]``.

    Together these are one change of basis at height ``i+1``.
    """
    bars = eta.bars[i + 1]
    if not p < q:
        raise PreconditionViolated(f"row add needs p < q, got {p}, {q}")
    if not entangled(bars[p], bars[q]):
        raise PreconditionViolated(f"row {q} -> {p} at height {i + 1}: bars not entangled")
    M = eta.eta[i]
    M[p] ^= M[q]
    M[p] &= eta._mask[i][p]
    eta.additions += 1
    nxt = eta.eta.get(i + 1)
    if nxt is not None:
        nxt[:, q] ^= nxt[:, p]
        nxt[:, q] &= eta._mask[i + 1][:, q]
        eta.additions += 1


def change_basis(eta: EtaSequence, h: int, p: int, q: int):
    """Replace basis bar ``q`` at height ``h`` by itself plus the image in bar ``p``.

    Needs ``p < q`` and ``entangled(bars[h][p], bars[h][q])``; acts on the
    rows of ``eta[h-1]`` and the columns of ``eta[h]``.
    """
    if h >= 2:
        apply_row_add(eta, h - 1, q, p)
    else:
        apply_column_add(eta, h, p, q)


# --------------------------------------------------------------------------
# valid operations

def update_valid_ops(eta: EtaSequence, i: int, previous=None):
    """Table ``valid[k, l]``: may column ``k`` of ``eta[i]`` be added to column ``l``?

    ``previous`` is the table of height ``i-1``; ``eta[i-1]`` must be in
    normal form.  At height 1 validity is plain entanglement.
    """
    bars = eta.bars.get(i, [])
    s = len(bars)
    valid = np.zeros((s, s), dtype=bool)
    below = eta.eta.get(i - 1) if i >= 2 else None
    if below is not None:
        piv = [int(np.flatnonzero(row)[0]) if row.any() else -1 for row in below]
        prev_bars = eta.bars[i - 1]
    for k in range(s):
        for l in range(k + 1, s):
            if not entangled(bars[k], bars[l]):
                continue
            if below is None:
                valid[k, l] = True
                continue
            t = piv[l]
            if t < 0:
                valid[k, l] = True
            elif not intersects(bars[k], prev_bars[t]):
                valid[k, l] = True
            elif piv[k] >= 0 and previous is not None and previous[piv[k], t]:
                valid[k, l] = True
    return valid


# --------------------------------------------------------------------------
# decision

class StaircaseInterval(NamedTuple):
    """Interval module as the list of ``(h, b, d)`` slices, ascending in ``h``."""

    slices: tuple

    @property
    def heights(self):
        return (self.slices[0][0], self.slices[-1][0])

    def to_graphcode(self, m, n) -> Graphcode:
        verts = [Bar(b, d, h) for h, b, d in self.slices]
        return Graphcode(verts, [(k, k + 1) for k in range(len(verts) - 1)], m, n)


@dataclass
class Decomposed:
    intervals: list
    additions: int = 0

    def __bool__(self):
        return True

    def multiset(self):
        return sorted(iv.slices for iv in self.intervals)


@dataclass
class NotIntervalDecomposable:
    height: int
    step: str
    bars: tuple = ()
    additions: int = 0

    def __bool__(self):
        return False


def normal_form_check(eta: EtaSequence) -> bool:
    return all(e.sum(axis=0).max(initial=0) <= 1 and e.sum(axis=1).max(initial=0) <= 1
               for e in eta.eta.values())


def staircase_paths(eta: EtaSequence):
    """Directed paths of a normal-form sequence, as staircase intervals."""
    nxt = {}
    has_pred = set()
    for i, e in eta.eta.items():
        for r, c in zip(*np.nonzero(e)):
            nxt[(i, int(c))] = (i + 1, int(r))
            has_pred.add((i + 1, int(r)))
    out = []
    for h in range(1, eta.n + 1):
        for k in range(len(eta.bars[h])):
            if (h, k) in has_pred:
                continue
            node = (h, k)
            slices = []
            while node is not None:
                b, d = eta.bars[node[0]][node[1]]
                slices.append((node[0], b, d))
                node = nxt.get(node)
            out.append(StaircaseInterval(tuple(slices)))
    return out


def decide_interval_decomposition(eta: EtaSequence, copy=True):
    """Normalize ``eta[1], ..., eta[n-1]`` in turn; report the intervals or the failing step."""
    if copy:
        eta = eta.copy()
    eta.check()
    eta.additions = 0
    valid = update_valid_ops(eta, 1)
    for i in range(1, eta.n):
        M = eta.eta[i]
        rows, cols = eta.bars[i + 1], eta.bars[i]
        pivot_of = {}  # normalized column -> its pivot row, -1 if zero
        for j in range(M.shape[1]):
            # step 1: valid additions from normalized columns on the left,
            # rescanning after every addition until none applies
            while True:
                for jj, r in pivot_of.items():
                    if r >= 0 and M[r, j] and valid[jj, j]:
                        apply_column_add(eta, i, jj, j)
                        break
                else:
                    break
            nz = np.flatnonzero(M[:, j])
            if nz.size == 0:
                pivot_of[j] = -1
                continue
            # step 2
            k = int(nz[-1])
            # step 3
            for jj, r in pivot_of.items():
                if r == k:
                    return NotIntervalDecomposable(
                        i, PIVOT_CONFLICT,
                        (Bar(*cols[jj], i), Bar(*cols[j], i), Bar(*rows[k], i + 1)), eta.additions)
            # step 4: clear rows above the pivot, bottom to top
            for p in nz[:-1][::-1].tolist():
                if not entangled(rows[p], rows[k]):
                    return NotIntervalDecomposable(
                        i, ROW_ELIMINATION_FAILED,
                        (Bar(*cols[j], i), Bar(*rows[p], i + 1), Bar(*rows[k], i + 1)), eta.additions)
                apply_row_add(eta, i, k, p)
            pivot_of[j] = k
        valid = update_valid_ops(eta, i + 1, valid)
    return Decomposed(staircase_paths(eta), eta.additions)


def operation_bound(eta: EtaSequence, constant=8) -> int:
    s = eta.total_bars
    return constant * min(s ** 3, eta.n * eta.max_bars ** 3)


def decide_graphcode(g: Graphcode):
    return decide_interval_decomposition(eta_from_graphcode(g), copy=False)
