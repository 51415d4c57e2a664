"""Decomposition: qualifying-condition checks, trapped-component scans, the
induced-matching-configuration builder, and certificate round trips.

The strict-progress and claim checks of the configuration builder are
enforced inside the implementation itself (any violation raises
InvariantViolated), so every successful call here exercises them.
"""

from __future__ import annotations

import random

import pytest

from noit.certify import Base, Join, cross_validate, replays_to, verify_certificate
from noit.construct import (
    gen_ahhs_cx,
    gen_complete_bipartite,
    gen_multipartite_base,
    gen_szabo_tardos,
    gen_three_cycles,
)
from noit.decompose import (
    IMCWitness,
    build_imc,
    check_abc,
    decompose_to_certificate,
    find_side_in_block,
    find_two_block_component,
    scan_side_in_block,
)
from noit.errors import NotFound, PreconditionFailed
from noit.graph import PartitionedGraph, block_graph, components
from noit.transversal import find_it, ITStatus


# == qualifying conditions ===================================================


def test_check_abc_on_qualifying_graphs() -> None:
    assert check_abc(gen_complete_bipartite(3, 3)) == (True, True, True)
    assert check_abc(gen_szabo_tardos(2)[0]) == (True, True, True)
    assert check_abc(gen_three_cycles(4, 4, 4)[0]) == (True, True, True)


def test_check_abc_flags_each_failure() -> None:
    # Union of complete multipartite (not bipartite) pieces: (b) fails.
    multi = gen_multipartite_base(3, 2)
    a, b, c = check_abc(multi)
    assert not b

    # A redundant extra block: no IT still, but not block-minimal.
    g = PartitionedGraph.build(
        5, [(0, 2), (0, 3), (1, 2), (1, 3)], [[0, 1], [2, 3], [4]]
    )
    a, b, c = check_abc(g)
    assert not a and b

    # Two disjoint edges across two blocks: component count is 2, not r-1=1.
    g2 = PartitionedGraph.build(4, [(0, 1), (2, 3)], [[0, 2], [1, 3]])
    assert check_abc(g2)[2] is False


# == trapped components ======================================================


def test_scan_and_two_block_component_on_k33() -> None:
    g = gen_complete_bipartite(3, 3)
    comp = scan_side_in_block(g, 0)
    assert comp.side_a <= set(g.blocks[0]) or comp.side_b <= set(g.blocks[0])

    ci, i, j = find_two_block_component(g)
    assert (ci, i, j) == (0, 0, 1)
    comp = components(g)[ci]
    assert comp.side_a <= set(g.blocks[i]) and comp.side_b <= set(g.blocks[j])


def test_two_block_component_via_imc_agrees() -> None:
    for g in (gen_complete_bipartite(3, 3), gen_szabo_tardos(2)[0]):
        direct = find_two_block_component(g)
        via_imc = find_two_block_component(g, use_imc=True)
        ci, i, j = via_imc
        comp = components(g)[ci]
        assert comp.side_a <= set(g.blocks[i]) and comp.side_b <= set(g.blocks[j])
        dci = direct[0]
        dcomp = components(g)[dci]
        assert dcomp.side_a <= set(g.blocks[direct[1]])
        assert dcomp.side_b <= set(g.blocks[direct[2]])


def test_scan_raises_not_found() -> None:
    triangle = PartitionedGraph.build(3, [(0, 1), (1, 2), (0, 2)], [[0, 1, 2]])
    with pytest.raises(NotFound):
        scan_side_in_block(triangle, 0)
    with pytest.raises(NotFound):
        find_two_block_component(triangle)


# == induced matching configurations =========================================


def assert_witness_shape(g: PartitionedGraph, w: IMCWitness) -> None:
    """Independent re-check of every claimed property of a finished
    configuration."""
    I, T = w.pair.I, w.pair.T
    assert T <= I
    assert len(T) == g.r - 1 and len(I) == 2 * (g.r - 1)
    # G[I] is a perfect matching: every I-vertex has exactly one I-neighbor.
    for v in I:
        assert len(g.adj[v] & I) == 1
    # Every star center pairs with exactly one T-leaf.
    for c, star in w.pair.stars(g).items():
        assert len(star) == 2 and c in star
    # The block graph on I is a tree covering all blocks.
    bg = block_graph(g, I)
    assert set(bg.active) == set(range(g.r))
    assert bg.is_tree()
    # The root block is exactly the block T misses.
    assert all(g.block_of[v] != w.root for v in T)


def test_build_imc_from_every_root() -> None:
    for g in (gen_complete_bipartite(2, 2), gen_szabo_tardos(2)[0]):
        for root in range(g.r):
            w = build_imc(g, root)
            assert w.root == root
            assert_witness_shape(g, w)


def test_find_side_in_block_matches_scan_oracle() -> None:
    g, _ = gen_szabo_tardos(2)
    for i in range(g.r):
        walked = find_side_in_block(g, i)
        scanned = scan_side_in_block(g, i)
        for comp in (walked, scanned):
            assert comp.is_complete_bipartite
            assert comp.side_a <= set(g.blocks[i]) or comp.side_b <= set(g.blocks[i])


def test_imc_claim_checks_on_randomized_constructions() -> None:
    rng = random.Random(2024)
    tested = 0
    for _ in range(100):
        d = rng.choice([2, 3])
        g, _ = gen_szabo_tardos(d, seed=rng.randrange(10**9))
        if check_abc(g) != (True, True, True):
            continue
        root = rng.randrange(g.r)
        assert_witness_shape(g, build_imc(g, root))
        tested += 1
    assert tested >= 90  # the randomized family qualifies almost always


# == full decomposition ======================================================


def test_decompose_smallest_case_is_single_base() -> None:
    g = gen_complete_bipartite(2, 2)
    cert = decompose_to_certificate(g)
    assert len(cert.steps) == 1 and isinstance(cert.steps[0], Base)
    assert replays_to(cert, g)


def test_decompose_step_counts() -> None:
    g3, _ = gen_szabo_tardos(3)
    cert = decompose_to_certificate(g3)
    kinds = [type(s).__name__ for s in cert.steps]
    assert kinds == ["Base"] + ["Join"] * 4  # five complete bipartite units

    g2, _ = gen_szabo_tardos(2)
    cert2 = decompose_to_certificate(g2)
    assert [type(s).__name__ for s in cert2.steps] == ["Base", "Join", "Join"]


def test_decompose_roundtrip_verifies() -> None:
    for g, _ in (gen_szabo_tardos(2), gen_three_cycles(4, 4, 4)):
        cert = decompose_to_certificate(g)
        verify_certificate(cert)
        assert replays_to(cert, g)
        assert cross_validate(cert)["agrees"]
        assert all(isinstance(s, (Base, Join)) for s in cert.steps)


def test_decompose_rejects_non_qualifying_input() -> None:
    with pytest.raises(PreconditionFailed):
        decompose_to_certificate(gen_multipartite_base(3, 2))
    with pytest.raises(PreconditionFailed):
        decompose_to_certificate(PartitionedGraph.build(2, [], [[0], [1]]))


def test_decompose_randomized_roundtrips() -> None:
    rng = random.Random(7)
    done = 0
    while done < 10:
        g, _ = gen_szabo_tardos(2, seed=rng.randrange(10**9))
        if check_abc(g) != (True, True, True):
            continue
        cert = decompose_to_certificate(g)
        assert replays_to(cert, g)
        assert find_it(g).status is ITStatus.NONE
        done += 1
