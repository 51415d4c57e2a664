"""Transversal search: agreement with the naive oracle, honest three-way
status reporting, counting, block-minimality, and constrained maximum
partial transversals."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from noit.construct import (
    gen_ahhs_cx,
    gen_complete_bipartite,
    gen_szabo_tardos,
    gen_three_cycles,
)
from noit.errors import InvalidConstraint, InvalidInput
from noit.graph import PartitionedGraph
from noit.transversal import (
    ITStatus,
    SearchBudget,
    Transversal,
    count_its,
    find_it,
    is_block_minimal,
    max_partial_it,
)

from conftest import (
    brute_force_count,
    brute_force_it,
    brute_force_max_partial,
    random_graph,
)


# == exhaustive agreement on tiny graphs =====================================


def all_small_graphs(n: int, blocks: list[list[int]]):
    """Every graph on the given partition: all subsets of cross-block pairs."""
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    pairs = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if block_of[u] != block_of[v]
    ]
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        yield PartitionedGraph.build(n, edges, blocks)


@pytest.mark.parametrize(
    "n, blocks",
    [
        (2, [[0], [1]]),
        (3, [[0], [1], [2]]),
        (3, [[0, 1], [2]]),
        (4, [[0, 1], [2, 3]]),
        (4, [[0], [1], [2, 3]]),
    ],
)
def test_find_it_exhaustive_agreement(n: int, blocks: list[list[int]]) -> None:
    for g in all_small_graphs(n, blocks):
        res = find_it(g)
        oracle = brute_force_it(g)
        assert res.status is (ITStatus.NONE if oracle is None else ITStatus.FOUND)
        if res.status is ITStatus.FOUND:
            assert res.transversal is not None and res.transversal.is_full(g)


@given(st.integers(0, 10_000))
def test_find_it_random_agreement(seed: int) -> None:
    rng = random.Random(seed)
    g = random_graph(rng, r=rng.randint(2, 4), lo=1, hi=3, p=rng.random())
    assert g.n <= 12
    res = find_it(g)
    oracle = brute_force_it(g)
    assert res.status is (ITStatus.NONE if oracle is None else ITStatus.FOUND)
    if res.transversal is not None:
        assert res.transversal.is_full(g)


@given(st.integers(0, 10_000))
def test_count_its_matches_enumeration(seed: int) -> None:
    rng = random.Random(seed)
    g = random_graph(rng, r=rng.randint(2, 4), lo=1, hi=3, p=rng.random())
    assert count_its(g) == brute_force_count(g)


# == three-way status ========================================================


def test_budget_status_is_honest() -> None:
    g, _ = gen_szabo_tardos(3)
    res = find_it(g, SearchBudget(max_nodes=5))
    assert res.status is ITStatus.BUDGET
    assert res.transversal is None
    full = find_it(g)
    assert full.status is ITStatus.NONE
    assert full.nodes > 5


def test_budget_validation() -> None:
    with pytest.raises(InvalidInput):
        SearchBudget(max_nodes=0)


def test_found_on_trivial_graph() -> None:
    g = PartitionedGraph.build(2, [], [[0], [1]])
    res = find_it(g)
    assert res.status is ITStatus.FOUND
    assert res.transversal == Transversal.of({0: 0, 1: 1})


def test_search_determinism() -> None:
    g, _ = gen_szabo_tardos(2)
    first = find_it(g)
    second = find_it(g)
    assert first == second


def test_frozen_node_counts() -> None:
    """Determinism pins: the exhaustive search explores exactly this many
    nodes on these inputs (regression guard against accidental reordering)."""
    g3, _ = gen_szabo_tardos(3)
    assert (find_it(g3).status, find_it(g3).nodes) == (ITStatus.NONE, 159)
    g4, _ = gen_szabo_tardos(4)
    assert (find_it(g4).status, find_it(g4).nodes) == (ITStatus.NONE, 5788)


# == block-minimality ========================================================


def test_block_minimal_on_known_families() -> None:
    assert is_block_minimal(gen_complete_bipartite(2, 2))
    assert is_block_minimal(gen_complete_bipartite(3, 3))
    assert is_block_minimal(gen_szabo_tardos(2)[0])
    assert is_block_minimal(gen_three_cycles(4, 4, 4)[0])


def test_block_minimal_rejects_graph_with_it() -> None:
    g = PartitionedGraph.build(2, [], [[0], [1]])
    assert not is_block_minimal(g)


def test_block_minimal_rejects_redundant_block() -> None:
    # K22 plus an isolated extra block: still no IT, but dropping the new
    # block leaves a no-IT graph, so the graph is not block-minimal.
    g = PartitionedGraph.build(
        5, [(0, 2), (0, 3), (1, 2), (1, 3)], [[0, 1], [2, 3], [4]]
    )
    assert find_it(g).status is ITStatus.NONE
    assert not is_block_minimal(g)


# == maximum partial transversals ============================================


@given(st.integers(0, 10_000))
def test_max_partial_matches_enumeration(seed: int) -> None:
    rng = random.Random(seed)
    g = random_graph(rng, r=rng.randint(2, 4), lo=1, hi=3, p=rng.random())
    t = max_partial_it(g)
    assert t.is_valid(g)
    assert t.size == brute_force_max_partial(g)


def test_max_partial_on_block_minimal_graphs_is_r_minus_1() -> None:
    for g in (
        gen_szabo_tardos(2)[0],
        gen_complete_bipartite(3, 3),
        gen_ahhs_cx(2)[0],
        gen_three_cycles(4, 4, 4)[0],
    ):
        assert max_partial_it(g).size == g.r - 1


def test_max_partial_respects_forced_and_forbidden() -> None:
    g, _ = gen_szabo_tardos(2)
    free = max_partial_it(g)
    pick_block, pick_vertex = free.assignment[0]
    t = max_partial_it(g, forced={pick_block: pick_vertex})
    assert t.get(pick_block) == pick_vertex
    assert t.size == free.size  # forcing an extendable pick loses nothing

    banned = set(g.blocks[0])
    t2 = max_partial_it(g, forbidden_vertices=banned)
    assert t2.is_valid(g)
    assert not (t2.vertices() & banned)

    with pytest.raises(InvalidConstraint):
        max_partial_it(g, forced={0: min(g.blocks[1])})  # vertex not in block


def test_max_partial_minimize_degree_tiebreak() -> None:
    # Both block-0 picks extend to a size-2 partial; minimizing the
    # T-degree of vertex 3 must avoid its neighbor 0.
    g = PartitionedGraph.build(4, [(0, 3)], [[0, 1], [2, 3]])
    t = max_partial_it(g, minimize_degree_of=3)
    assert t.size == 2
    assert dict(t.assignment)[0] == 1
