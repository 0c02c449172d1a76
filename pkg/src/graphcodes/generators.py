"""Seeded random instances for tests, acceptance runs and ``graphcode gen``."""
from __future__ import annotations

import random

import numpy as np

from .core import Bar, Graphcode, Presentation, direct_sum, entangled
from .intervals import EtaSequence, StaircaseInterval, change_basis


def _rng(seed_or_rng):
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def random_presentation(seed, m=None, n=None, max_gens=12, max_rels=16, density=0.5) -> Presentation:
    """Homogeneous presentation on ``G(m, n)`` with random grades and columns.

    Relation columns only use generators whose grade lies below the relation.
    """
    rng = _rng(seed)
    m = m or rng.randint(1, 8)
    n = n or rng.randint(1, 8)
    gens = [(rng.randint(1, m), rng.randint(1, n)) for _ in range(rng.randint(0, max_gens))]
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        x, y = rng.randint(1, m), rng.randint(1, n)
        below = [i for i, g in enumerate(gens) if g[0] <= x and g[1] <= y]
        rels.append(((x, y), [i for i in below if rng.random() < density]))
    return Presentation(gens, rels, m, n)


def random_bar(rng, m):
    b = rng.randint(1, m)
    return b, rng.randint(b + 1, m + 1)


def random_strict_graphcode(seed, m=None, n=None, max_bars=4, edge_prob=0.5) -> Graphcode:
    """Strict graphcode with pairwise distinct bars at every height."""
    rng = _rng(seed)
    m = m or rng.randint(1, 6)
    n = n or rng.randint(1, 6)
    per_height = {}
    verts = []
    for h in range(1, n + 1):
        bars = set()
        for _ in range(rng.randint(0, max_bars)):
            bars.add(random_bar(rng, m))
        per_height[h] = []
        for b, d in sorted(bars, key=lambda _bd: rng.random()):
            per_height[h].append(len(verts))
            verts.append(Bar(b, d, h))
    edges = []
    for h in range(1, n):
        for u in per_height[h]:
            for v in per_height[h + 1]:
                if entangled(verts[v], verts[u]) and rng.random() < edge_prob:
                    edges.append((u, v))
    return Graphcode(verts, edges, m, n)


def random_staircase(rng, m, n) -> StaircaseInterval:
    lo = rng.randint(1, n)
    hi = rng.randint(lo, n)
    b, d = random_bar(rng, m)
    slices = [(lo, b, d)]
    for h in range(lo + 1, hi + 1):
        # the next slice up must be entangled with the current one
        nb = rng.randint(1, b)
        nd = rng.randint(b + 1, d)
        b, d = nb, nd
        slices.append((h, b, d))
    return StaircaseInterval(tuple(slices))


def random_staircase_sum(seed, m=None, n=None, max_intervals=6, attempts=50):
    """Up to ``max_intervals`` staircases whose bars are distinct at every height."""
    rng = _rng(seed)
    m = m or rng.randint(1, 6)
    n = n or rng.randint(1, 6)
    used = set()
    out = []
    for _ in range(rng.randint(1, max_intervals)):
        for _try in range(attempts):
            iv = random_staircase(rng, m, n)
            if not any(s in used for s in iv.slices):
                used.update(iv.slices)
                out.append(iv)
                break
    return out, m, n


def staircase_eta(intervals, m, n) -> EtaSequence:
    bars = {h: sorted({(b, d) for iv in intervals for hh, b, d in iv.slices if hh == h})
            for h in range(1, n + 1)}
    pos = {(h, bd): k for h, bs in bars.items() for k, bd in enumerate(bs)}
    eta = {i: np.zeros((len(bars[i + 1]), len(bars[i])), dtype=bool) for i in range(1, n)}
    for iv in intervals:
        for (h, b, d), (h2, b2, d2) in zip(iv.slices, iv.slices[1:]):
            eta[h][pos[(h2, (b2, d2))], pos[(h, (b, d))]] = True
    return EtaSequence(m, n, bars, eta)


def scramble(eta: EtaSequence, rng, steps=20) -> int:
    """Apply up to ``steps`` random basis changes; return how many were applied."""
    rng = _rng(rng)
    choices = []
    for h in range(1, eta.n + 1):
        bs = eta.bars[h]
        for q in range(len(bs)):
            for p in range(q):
                if entangled(bs[p], bs[q]):
                    choices.append((h, p, q))
    if not choices:
        return 0
    done = 0
    for _ in range(rng.randint(0, steps)):
        h, p, q = rng.choice(choices)
        change_basis(eta, h, p, q)
        done += 1
    return done


def block_sum(seed, k, **kwargs) -> tuple:
    """Direct sum of ``k`` random presentations on one grid, and the summands."""
    rng = _rng(seed)
    m = kwargs.pop("m", None) or rng.randint(2, 8)
    n = kwargs.pop("n", None) or rng.randint(2, 8)
    parts = [random_presentation(rng, m, n, **kwargs) for _ in range(k)]
    return direct_sum(*parts), parts


def scaling_family(size: int) -> Presentation:
    """Nested family where batch ``h`` creates one bar and finishes the previous one.

    Generators ``g_k`` at ``(k, k)`` and relations ``{g_k}`` at ``(k+2, k+1)``:
    height ``h`` carries ``h`` bars, but each batch touches two columns.
    """
    gens = [(k, k) for k in range(1, size + 1)]
    rels = [((k + 2, k + 1), [k - 1]) for k in range(1, size)]
    return Presentation(gens, rels, size + 1, size)
