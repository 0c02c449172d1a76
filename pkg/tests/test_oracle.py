import itertools

import pytest
from hypothesis import given, strategies as st

from graphcodes.core import Graphcode, Presentation, direct_sum, disjoint_union, entangled
from graphcodes.engine import build_graphcode
from graphcodes.errors import BudgetExceeded
from graphcodes.generators import random_presentation, random_strict_graphcode
from graphcodes import oracle as O

seeds = st.integers(0, 2 ** 32)


def bar_module(b, d, m):
    """One-parameter interval [b, d) on G(m, 1)."""
    rels = [((d, 1), [0])] if d <= m else []
    return O.module_from_presentation(Presentation([(b, 1)], rels, m, 1))


def test_free_module():
    M = O.module_from_presentation(Presentation([(1, 1)], [], 2, 2))
    assert O.dimension_function(M).tolist() == [[1, 1], [1, 1]]
    assert set(O.rank_invariant(M).values()) == {1}


def test_staircase_cokernel():
    M = O.module_from_presentation(Presentation([(1, 1)], [((2, 2), [0])], 3, 3))
    for x, y in M.points():
        assert M.dim((x, y)) == (0 if x >= 2 and y >= 2 else 1)
    assert M.is_commutative()


def test_zero_module_ranks():
    Z = O.zero_module(3, 2)
    assert not O.dimension_function(Z).any()
    assert O.rank_invariant(Z) == {}


def test_block_presentation_dimension_is_sum():
    a = Presentation([(1, 1)], [((3, 2), [0])], 4, 3)
    b = Presentation([(2, 1)], [((2, 3), [0])], 4, 3)
    total = O.dimension_function(O.module_from_presentation(direct_sum(a, b)))
    parts = sum(O.dimension_function(O.module_from_presentation(p)) for p in (a, b))
    assert (total == parts).all()


def test_path_graphcode_dims():
    M = O.module_from_graphcode(Graphcode([(1, 3, 1), (1, 2, 2)], [(0, 1)], 3, 2))
    assert [M.dim((x, 1)) for x in (1, 2, 3)] == [1, 1, 0]
    assert [M.dim((x, 2)) for x in (1, 2, 3)] == [1, 0, 0]
    assert not O.dimension_function(O.module_from_graphcode(Graphcode([], [], 2, 2))).any()


def test_hom_between_bars_is_entanglement():
    m = 5
    intervals = [(b, d) for b in range(1, m + 1) for d in range(b + 1, m + 2)]
    for I, J in itertools.product(intervals, repeat=2):
        dim = len(O.hom_space(bar_module(*I, m), bar_module(*J, m)))
        assert dim == (1 if entangled(J, I) else 0), (I, J)


def test_endomorphisms_contain_identity():
    M = O.module_from_presentation(random_presentation(3, m=3, n=3, max_gens=4, max_rels=3))
    if M.total_dim:
        assert len(O.hom_space(M, M)) >= 1


def test_hom_budget():
    M = O.module_from_presentation(Presentation([(1, 1)] * 5, [], 1, 1))
    with pytest.raises(BudgetExceeded):
        O.hom_space(M, M, max_dim=20)


def test_module_budget():
    big = Presentation([(1, 1)] * 100, [], 8, 8)
    with pytest.raises(BudgetExceeded):
        O.module_from_presentation(big)


def test_isomorphism_basics():
    M = bar_module(1, 3, 4)
    assert O.are_isomorphic(M, M)
    assert not O.are_isomorphic(M, bar_module(1, 4, 4))
    # same dimensions, different maps
    A = O.direct_sum_modules(bar_module(1, 2, 3), bar_module(2, 4, 3))
    B = bar_module(1, 4, 3)
    assert not O.are_isomorphic(A, B)


@given(seeds)
def test_coker_isomorphic_to_graphcode_module(seed):
    p = random_presentation(seed, m=3, n=3, max_gens=4, max_rels=4)
    M = O.module_from_presentation(p)
    N = O.module_from_graphcode(build_graphcode(p))
    assert O.are_isomorphic(M, N)
    assert O.are_isomorphic(N, M)


@given(seeds, seeds)
def test_union_dimension_is_sum(s1, s2):
    g1 = random_strict_graphcode(s1, m=4, n=3)
    g2 = random_strict_graphcode(s2, m=4, n=3)
    total = O.dimension_function(O.module_from_graphcode(disjoint_union(g1, g2)))
    parts = O.dimension_function(O.module_from_graphcode(g1)) + O.dimension_function(O.module_from_graphcode(g2))
    assert (total == parts).all()


@given(seeds)
def test_rank_invariant_monotone(seed):
    M = O.module_from_graphcode(random_strict_graphcode(seed, m=4, n=3, max_bars=3))
    ranks = O.rank_invariant(M)
    for (p, q), r in ranks.items():
        assert r <= min(M.dim(p), M.dim(q))
        for (p2, q2), r2 in ranks.items():
            if p2 == p and O.grade_leq(q, q2):
                assert r2 <= r


@given(seeds)
def test_path_modules_are_intervals(seed):
    import random
    from graphcodes.generators import random_staircase
    iv = random_staircase(random.Random(seed), 5, 4)
    M = O.module_from_graphcode(iv.to_graphcode(5, 4))
    assert all(d <= 1 for d in M.dims.values())
    assert O._is_interval(M)
    assert O.is_interval_decomposable_bruteforce(M, max_total_dim=30)


def test_bruteforce_examples():
    assert O.is_interval_decomposable_bruteforce(bar_module(1, 3, 4))
    both = O.direct_sum_modules(bar_module(1, 3, 4), bar_module(2, 4, 4))
    assert O.is_interval_decomposable_bruteforce(both)
    # two generators glued above both of them: indecomposable, dimension 2 at the top
    glued = O.module_from_presentation(Presentation([(2, 1), (1, 2)], [((2, 3), [0, 1])], 2, 3))
    assert not O.is_interval_decomposable_bruteforce(glued)
    with pytest.raises(BudgetExceeded):
        O.is_interval_decomposable_bruteforce(O.module_from_presentation(Presentation([(1, 1)], [], 4, 3)))


def test_split_recovers_summands():
    A = O.direct_sum_modules(bar_module(1, 3, 4), bar_module(2, 4, 4))
    leaves = O.indecomposable_summands(A)
    assert sorted(L.total_dim for L in leaves) == [2, 2]
    assert O.split(bar_module(1, 3, 4)) is None
