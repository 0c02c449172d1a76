import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphcodes.core import Graphcode, Presentation, disjoint_union, entangled
from graphcodes.engine import UNCOMPRESSED, build_graphcode, compress
from graphcodes.errors import DuplicateBars, PreconditionViolated
from graphcodes.generators import (random_staircase_sum,
                                   random_strict_graphcode, scramble, staircase_eta)
from graphcodes.intervals import (PIVOT_CONFLICT, ROW_ELIMINATION_FAILED, Decomposed, EtaSequence,
                                  NotIntervalDecomposable, apply_column_add, apply_row_add,
                                  decide_graphcode, decide_interval_decomposition,
                                  eta_from_graphcode, normal_form_check, operation_bound,
                                  update_valid_ops)
from graphcodes.oracle import (are_isomorphic, dimension_function,
                               is_interval_decomposable_bruteforce, module_from_graphcode,
                               module_from_presentation, rank_invariant)

seeds = st.integers(0, 2 ** 32)


# -- eta_from_graphcode ---------------------------------------------------------

def test_eta_of_empty_graphcode():
    eta = eta_from_graphcode(Graphcode())
    assert eta.eta == {} and eta.total_bars == 0


def test_eta_of_path():
    eta = eta_from_graphcode(Graphcode([(1, 3, 1), (1, 2, 2)], [(0, 1)], 3, 2))
    assert eta.eta[1].astype(int).tolist() == [[1]]


def test_eta_adjacency_transcription():
    g = Graphcode([(2, 4, 1), (1, 3, 1), (1, 2, 2)], [(0, 2), (1, 2)], 3, 2)
    g_ok = Graphcode([(1, 3, 1), (2, 4, 1), (1, 3, 2)], [(0, 2), (1, 2)], 3, 2)
    eta = eta_from_graphcode(g_ok)
    assert eta.bars[1] == [(1, 3), (2, 4)]
    assert eta.eta[1].astype(int).tolist() == [[1, 1]]
    # [1,2) is not entangled with [2,4), so g itself is not a graphcode
    with pytest.raises(Exception):
        eta_from_graphcode(g)


def test_eta_expands_generalized_graphcodes():
    g = Graphcode([(1, 4, 1), (1, 3, 3)], [(0, 1)], 3, 3)
    eta = eta_from_graphcode(g)
    assert eta.bars[2] == [(1, 4)]
    assert eta.eta[1].tolist() == [[True]] and eta.eta[2].tolist() == [[True]]


def test_duplicate_bars_rejected():
    with pytest.raises(DuplicateBars):
        eta_from_graphcode(Graphcode([(1, 3, 1), (1, 3, 1)], [], 3, 1))


# -- elementary operations ------------------------------------------------------

def test_column_add_truncates():
    # a row entangled with column [1,4) but not with [2,5) loses the added entry
    assert not entangled((3, 6), (2, 5))
    eta = EtaSequence(5, 2, {1: [(1, 4), (2, 5)], 2: [(1, 2), (1, 3)]},
                      {1: np.array([[1, 0], [1, 0]], dtype=bool)})
    eta.check()
    assert entangled((1, 2), (1, 4)) and not entangled((1, 2), (2, 5))
    apply_column_add(eta, 1, 0, 1)
    assert eta.eta[1].astype(int).tolist() == [[1, 0], [1, 1]]
    eta.check()


def test_column_add_preconditions():
    eta = EtaSequence(5, 1, {1: [(1, 4), (2, 5), (4, 6)]})
    with pytest.raises(PreconditionViolated):
        apply_column_add(eta, 1, 1, 1)
    with pytest.raises(PreconditionViolated):
        apply_column_add(eta, 1, 1, 0)
    with pytest.raises(PreconditionViolated):
        apply_column_add(eta, 1, 0, 2)  # [1,4) and [4,6) are disjoint


def test_row_add_preconditions():
    eta = EtaSequence(5, 2, {1: [(1, 4)], 2: [(1, 3), (4, 6)]})
    with pytest.raises(PreconditionViolated):
        apply_row_add(eta, 1, 1, 0)


@given(seeds)
def test_operations_keep_support_constraint(seed):
    rng = random.Random(seed)
    eta = eta_from_graphcode(random_strict_graphcode(rng, max_bars=4, edge_prob=0.7))
    for _ in range(20):
        scramble(eta, rng, 3)
        eta.check()


@given(seeds)
def test_basis_changes_preserve_module(seed):
    rng = random.Random(seed)
    g = random_strict_graphcode(rng, m=4, n=3, max_bars=3, edge_prob=0.7)
    eta = eta_from_graphcode(g)
    scramble(eta, rng, 6)
    assert are_isomorphic(module_from_graphcode(g), module_from_graphcode(eta.to_graphcode()))


# -- valid operations -----------------------------------------------------------

def test_valid_ops_at_height_one_are_entanglement():
    bars = [(1, 3), (1, 4), (2, 4), (3, 5)]
    eta = EtaSequence(5, 1, {1: bars})
    valid = update_valid_ops(eta, 1)
    for k in range(4):
        for l in range(4):
            assert valid[k, l] == (k < l and entangled(bars[k], bars[l]))


def figure_instance():
    """Height 2 bars [2,6) [3,5) [5,7) in normal form against height 3 bars [1,4) [2,5) [3,6)."""
    bars = {1: [], 2: [(2, 6), (3, 5), (5, 7)], 3: [(1, 4), (2, 5), (3, 6)], 4: []}
    eta2 = np.eye(3, dtype=bool)
    return EtaSequence(6, 4, bars, {2: eta2})


def test_valid_ops_figure_scenario():
    eta = figure_instance()
    eta.check()
    v2 = update_valid_ops(eta, 2, update_valid_ops(eta, 1))
    v3 = update_valid_ops(eta, 3, v2)
    # column 1 -> column 2: pivots [2,6) and [3,5) are not entangled
    assert entangled((1, 4), (2, 5))
    assert not v3[0, 1]
    # column 1 -> column 3: [1,4) misses the pivot [5,7) of column 3
    assert v3[0, 2]


def chain_instance(first_level, eta1):
    bars = {1: first_level, 2: [(1, 5), (2, 6)], 3: [(1, 4), (2, 5)]}
    eta = EtaSequence(6, 3, bars, {1: np.array(eta1, dtype=bool), 2: np.eye(2, dtype=bool)})
    eta.check()
    v1 = update_valid_ops(eta, 1)
    v2 = update_valid_ops(eta, 2, v1)
    return v1, v2, update_valid_ops(eta, 3, v2)


def test_valid_ops_chain_through_pivots():
    # paths [1,6)->[1,5)->[1,4) and [2,7)->[2,6)->[2,5): validity propagates up
    _, v2, v3 = chain_instance([(1, 6), (2, 7)], np.eye(2))
    assert v2[0, 1] and v3[0, 1]
    # paths [3,7)->[1,5)->[1,4) and [2,6)->[2,6)->[2,5): at height 1 the path
    # of the lower bar starts above the other one, so no extension exists
    v1, v2, v3 = chain_instance([(2, 6), (3, 7)], [[0, 1], [1, 0]])
    assert not v1[1, 0]
    assert not v2[0, 1] and not v3[0, 1]


# -- decisions ------------------------------------------------------------------

def test_single_path():
    g = Graphcode([(1, 3, 1), (1, 2, 2)], [(0, 1)], 3, 2)
    res = decide_graphcode(g)
    assert isinstance(res, Decomposed)
    assert res.multiset() == [((1, 1, 3), (2, 1, 2))]


def test_mixed_basis_of_two_intervals():
    # intervals A->D and B->C with A=[1,3), B=[1,4), C=[1,2), D=[1,3)
    bars = {1: [(1, 3), (1, 4)], 2: [(1, 2), (1, 3)]}
    eta = EtaSequence(4, 2, bars, {1: np.array([[0, 1], [1, 0]], dtype=bool)})
    apply_column_add(eta, 1, 0, 1)
    apply_row_add(eta, 1, 1, 0)
    assert eta.eta[1].astype(int).tolist() == [[1, 0], [1, 1]]
    res = decide_interval_decomposition(eta)
    assert res.multiset() == sorted([((1, 1, 3), (2, 1, 3)), ((1, 1, 4), (2, 1, 2))])


def test_certified_no_instance():
    p = Presentation([(2, 1), (1, 2)], [((2, 3), [0, 1])], 2, 3)
    assert not is_interval_decomposable_bruteforce(module_from_presentation(p))
    res = decide_graphcode(build_graphcode(p, UNCOMPRESSED))
    assert isinstance(res, NotIntervalDecomposable)
    assert res.step == PIVOT_CONFLICT and res.height == 2


def test_row_elimination_failure_reported():
    # search a seeded corpus; every small hit must be confirmed by brute force
    hits = []
    for seed in range(4000):
        rng = random.Random(seed)
        g = random_strict_graphcode(rng, m=rng.randint(2, 4), n=rng.randint(2, 4), max_bars=3, edge_prob=0.8)
        res = decide_graphcode(g)
        if not res and res.step == ROW_ELIMINATION_FAILED:
            hits.append(g)
            M = module_from_graphcode(g)
            if M.total_dim <= 10:
                assert not is_interval_decomposable_bruteforce(M)
        if len(hits) >= 3:
            break
    assert hits


def test_normal_form_examples():
    ident = EtaSequence(3, 2, {1: [(1, 3), (2, 4)], 2: [(1, 3), (2, 4)]},
                        {1: np.eye(2, dtype=bool)})
    assert normal_form_check(ident)
    full = EtaSequence(3, 2, {1: [(1, 3)], 2: [(1, 2), (1, 3)]},
                       {1: np.array([[1], [1]], dtype=bool)})
    assert not normal_form_check(full)


def test_empty_sequence_is_decomposed():
    res = decide_interval_decomposition(EtaSequence(0, 0))
    assert res and res.intervals == []


@given(seeds)
def test_staircase_sums_are_recovered(seed):
    rng = random.Random(seed)
    ivs, m, n = random_staircase_sum(rng)
    eta = staircase_eta(ivs, m, n)
    scramble(eta, rng, 20)
    res = decide_interval_decomposition(eta)
    assert isinstance(res, Decomposed)
    assert res.multiset() == sorted(iv.slices for iv in ivs)
    assert res.additions <= operation_bound(eta)


@given(seeds)
def test_successful_output_is_normal_form_and_isomorphic(seed):
    rng = random.Random(seed)
    g = random_strict_graphcode(rng, m=4, n=3, max_bars=3, edge_prob=0.6)
    eta = eta_from_graphcode(g)
    work = eta.copy()
    res = decide_interval_decomposition(work, copy=False)
    if res:
        assert normal_form_check(work)
        summed = disjoint_union(*[iv.to_graphcode(g.m, g.n) for iv in res.intervals]) \
            if res.intervals else Graphcode([], [], g.m, g.n)
        M, N = module_from_graphcode(g), module_from_graphcode(summed)
        assert (dimension_function(M) == dimension_function(N)).all()
        assert rank_invariant(M) == rank_invariant(N)
        assert are_isomorphic(M, N)


@given(seeds)
def test_agrees_with_bruteforce(seed):
    rng = random.Random(seed)
    g = random_strict_graphcode(rng, m=rng.randint(2, 4), n=rng.randint(2, 3), max_bars=3, edge_prob=0.8)
    M = module_from_graphcode(g)
    if 0 < M.total_dim <= 10:
        assert bool(decide_graphcode(g)) == is_interval_decomposable_bruteforce(M)


@given(seeds)
def test_compressed_input_gives_same_answer(seed):
    g = random_strict_graphcode(seed, max_bars=3, edge_prob=0.7)
    a, b = decide_graphcode(g), decide_graphcode(compress(g))
    assert bool(a) == bool(b)
    if a:
        assert a.multiset() == b.multiset()
