"""Shared oracles and random models for the test suite.

The oracles here are deliberately naive — full Cartesian-product enumeration
of one pick per block — so that every optimized answer in the library can be
cross-checked against an implementation too simple to share its bugs.  All
randomness is seeded; reruns are deterministic.
"""

from __future__ import annotations

import itertools
import random

from hypothesis import HealthCheck, settings

from noit.graph import PartitionedGraph

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("suite")


# == naive oracles ===========================================================


def brute_force_it(g: PartitionedGraph) -> tuple[int, ...] | None:
    """Some independent transversal, or None if there is none.

    Tries every element of the Cartesian product of the blocks and keeps the
    first pairwise-nonadjacent tuple.  Exponential; for small graphs only.
    """
    for picks in itertools.product(*g.blocks):
        if _independent(g, picks):
            return picks
    return None


def brute_force_count(g: PartitionedGraph) -> int:
    """Number of independent transversals, by full enumeration."""
    return sum(1 for picks in itertools.product(*g.blocks) if _independent(g, picks))


def brute_force_max_partial(g: PartitionedGraph) -> int:
    """Size of the largest partial independent transversal, by trying every
    subset of blocks from largest to smallest."""
    for size in range(g.r, 0, -1):
        for blocks in itertools.combinations(range(g.r), size):
            for picks in itertools.product(*(g.blocks[b] for b in blocks)):
                if _independent(g, picks):
                    return size
    return 0


def _independent(g: PartitionedGraph, picks) -> bool:
    for a, b in itertools.combinations(picks, 2):
        if b in g.adj[a]:
            return False
    return True


def count_proper_colorings(inst) -> int:
    """Number of proper list colorings of a ListInstance, by enumeration."""
    count = 0
    for choice in itertools.product(*inst.lists):
        if all(choice[u] != choice[v] for (u, v) in inst.edges):
            count += 1
    return count


# == random models ===========================================================


def random_blocks(rng: random.Random, r: int, lo: int, hi: int) -> list[list[int]]:
    """A partition of 0..n-1 into r consecutive runs of random sizes."""
    sizes = [rng.randint(lo, hi) for _ in range(r)]
    blocks, start = [], 0
    for s in sizes:
        blocks.append(list(range(start, start + s)))
        start += s
    return blocks


def random_graph(
    rng: random.Random,
    *,
    r: int,
    lo: int = 1,
    hi: int = 3,
    p: float = 0.5,
    intra: bool = False,
) -> PartitionedGraph:
    """Random partitioned graph: r blocks of size lo..hi, each cross-block
    pair an edge with probability p (intra-block pairs too when asked)."""
    blocks = random_blocks(rng, r, lo, hi)
    n = sum(len(b) for b in blocks)
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if (intra or block_of[u] != block_of[v]) and rng.random() < p:
                edges.append((u, v))
    return PartitionedGraph.build(n, edges, blocks)


def random_no_it_graph(
    rng: random.Random, *, max_r: int = 4, max_block: int = 2
) -> PartitionedGraph:
    """A small graph with no independent transversal (certified by the naive
    oracle).  Dense edge probability makes rejection sampling fast."""
    while True:
        r = rng.randint(2, max_r)
        g = random_graph(rng, r=r, lo=1, hi=max_block, p=0.8)
        if g.n <= 10 and brute_force_it(g) is None:
            return g


def random_bounded_degree_graph(
    rng: random.Random, *, d: int, r: int, block_size: int
) -> PartitionedGraph:
    """Random graph with maximum degree at most d and r blocks of the given
    size: shuffled candidate cross edges added greedily while degrees allow."""
    blocks = random_blocks(rng, r, block_size, block_size)
    n = r * block_size
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    cand = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if block_of[u] != block_of[v]
    ]
    rng.shuffle(cand)
    deg = [0] * n
    edges = []
    for u, v in cand:
        if deg[u] < d and deg[v] < d:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return PartitionedGraph.build(n, edges, blocks)


def random_list_instance(rng: random.Random, *, max_n: int = 8, max_list: int = 3):
    """Random small list-coloring instance with int and str color names."""
    from noit.listcover import ListInstance

    palette: list[int | str] = [0, 1, 2, "red", "blue"]
    n = rng.randint(1, max_n)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < 0.4
    ]
    lists = [
        rng.sample(palette, rng.randint(1, max_list))
        for _ in range(n)
    ]
    return ListInstance.build(n, edges, lists)
