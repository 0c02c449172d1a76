from collections import Counter

import pytest
from hypothesis import given, strategies as st

from graphcodes.core import Bar, Graphcode, Presentation, direct_sum, disjoint_union
from graphcodes.engine import (COMPRESSED, UNCOMPRESSED, BatchReducer, build_graphcode, compress,
                               connected_components, expand, is_disjoint_path_union,
                               label_isomorphic, reduce_slice, superfluous_vertices)
from graphcodes.generators import random_presentation, random_strict_graphcode
from graphcodes.oracle import (dimension_function, module_from_graphcode,
                               module_from_presentation, rank_invariant)

seeds = st.integers(0, 2 ** 32)


def small_presentation(seed):
    return random_presentation(seed, max_gens=6, max_rels=8)


def test_single_relation_example():
    p = Presentation([(1, 1)], [((3, 2), [0])])
    expected = Graphcode([(1, 4, 1), (1, 3, 2)], [(0, 1)], 3, 2)
    for mode in (COMPRESSED, UNCOMPRESSED):
        assert build_graphcode(p, mode).same_as(expected)
    M = module_from_graphcode(expected)
    assert [M.dim((x, 1)) for x in (1, 2, 3)] == [1, 1, 1]
    assert [M.dim((x, 2)) for x in (1, 2, 3)] == [1, 1, 0]


def test_zero_persistence_column_has_no_bar():
    # the relation kills the generator at the scale where it is born
    p = Presentation([(1, 1), (2, 1)], [((2, 1), [1])], 3, 1)
    assert reduce_slice(p, 1).bars == [(1, 4)]
    g = build_graphcode(p)
    assert g.vertices == [Bar(1, 4, 1)]


def test_empty_presentation():
    g = build_graphcode(Presentation())
    assert g.vertices == [] and g.edges == []


def test_unknown_mode():
    with pytest.raises(ValueError):
        BatchReducer(Presentation()).run("dense")


@given(seeds)
def test_both_modes_present_the_module(seed):
    p = small_presentation(seed)
    M = module_from_presentation(p)
    for mode in (COMPRESSED, UNCOMPRESSED):
        g = build_graphcode(p, mode)
        g.validate(strict=mode == UNCOMPRESSED)
        N = module_from_graphcode(g)
        assert N.is_commutative()
        assert (dimension_function(M) == dimension_function(N)).all()
        assert rank_invariant(M) == rank_invariant(N)


@given(seeds)
def test_batch_bars_match_slice_reduction(seed):
    p = small_presentation(seed)
    red = BatchReducer(p)
    red.run(record_bars=True)
    for h in range(1, p.n + 1):
        assert Counter(red.bars_by_height[h]) == Counter(reduce_slice(p, h).bars)


@given(seeds)
def test_counters(seed):
    p = small_presentation(seed)
    red = BatchReducer(p)
    gc = red.run(COMPRESSED)
    gu = build_graphcode(p, UNCOMPRESSED)
    assert red.column_additions <= 4 * (len(p.generators) + len(p.relations)) ** 2
    assert red.uncompressed_vertices == len(gu.vertices)
    assert len(gc.vertices) + len(gc.edges) <= len(gu.vertices) + len(gu.edges)


@given(seeds)
def test_compressing_either_mode_agrees(seed):
    p = small_presentation(seed)
    a = compress(build_graphcode(p, UNCOMPRESSED))
    b = compress(build_graphcode(p, COMPRESSED))
    assert label_isomorphic(a, b)


def test_compress_example():
    g = Graphcode([(1, 4, 1), (1, 4, 2), (1, 3, 3)], [(0, 1), (1, 2)], 3, 3)
    c = compress(g)
    assert c.vertices == [(1, 4, 1), (1, 3, 3)] and c.edges == [(0, 1)]
    assert label_isomorphic(expand(c), g)


def test_compress_keeps_required_vertices():
    # the middle vertex has no out-edge, so it is not superfluous
    g = Graphcode([(1, 4, 1), (1, 4, 2)], [(0, 1)], 3, 3)
    assert compress(g).same_as(g)
    # two predecessors
    g = Graphcode([(1, 4, 1), (2, 4, 1), (1, 4, 2), (1, 3, 3)], [(0, 2), (1, 2), (2, 3)], 3, 3)
    assert not superfluous_vertices(g)


@given(seeds)
def test_expand_inverts_compress(seed):
    g = random_strict_graphcode(seed)
    c = compress(g)
    assert not superfluous_vertices(c)
    c.validate()
    e = expand(c)
    assert e.is_strict()
    assert label_isomorphic(e, g)


def test_components_examples():
    two = Graphcode([(1, 2, 1), (1, 2, 2)], [], 2, 2)
    assert len(connected_components(two)) == 2
    path = Graphcode([(1, 3, 1), (1, 3, 2), (1, 2, 3)], [(0, 1), (1, 2)], 2, 3)
    assert len(connected_components(path)) == 1
    assert connected_components(Graphcode()) == []


@given(seeds)
def test_component_dimensions_sum(seed):
    g = random_strict_graphcode(seed)
    parts = connected_components(g)
    total = dimension_function(module_from_graphcode(g))
    acc = sum(dimension_function(module_from_graphcode(c)) for c in parts)
    assert (acc == total).all() if parts else not total.any()
    assert sum(len(c) for c in parts) == len(g)
    assert sum(len(c.edges) for c in parts) == len(g.edges)


@given(seeds, st.integers(2, 4))
def test_direct_sum_gives_at_least_k_components(seed, k):
    parts = [random_presentation(seed + i, m=5, n=5, max_gens=4, max_rels=4) for i in range(k)]
    nonzero = sum(1 for p in parts if build_graphcode(p).vertices)
    g = build_graphcode(direct_sum(*parts))
    assert len(connected_components(g)) >= nonzero


def test_disjoint_path_union_examples():
    paths = Graphcode([(1, 3, 1), (1, 2, 2), (2, 3, 1), (2, 3, 2)], [(0, 1), (2, 3)], 2, 2)
    assert is_disjoint_path_union(paths)
    fork = Graphcode([(1, 3, 1), (1, 2, 2), (1, 3, 2)], [(0, 1), (0, 2)], 2, 2)
    assert not is_disjoint_path_union(fork)
    assert is_disjoint_path_union(Graphcode())


def test_label_isomorphic_with_repeated_labels():
    a = Graphcode([(1, 3, 1), (1, 3, 1), (1, 2, 2)], [(0, 2)], 2, 2)
    b = Graphcode([(1, 3, 1), (1, 3, 1), (1, 2, 2)], [(1, 2)], 2, 2)
    c = Graphcode([(1, 3, 1), (1, 3, 1), (1, 2, 2)], [(0, 2), (1, 2)], 2, 2)
    assert label_isomorphic(a, b)
    assert not label_isomorphic(a, c)
    assert label_isomorphic(disjoint_union(a, b), disjoint_union(b, a))
