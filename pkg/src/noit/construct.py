"""Constructions of vertex-partitioned graphs with no independent
transversal.

Everything here is built from one primitive: the *join*.  Take two disjoint
partitioned graphs, dissolve a single block of one of them, and distribute
the dissolved block's vertices into blocks of the other graph.  If neither
input had an IT, the result has none either: a transversal of the result
restricted to the surviving blocks of each side would yield a transversal of
that side, because the vertex standing in for the dissolved block lives in
one of the enlarged opposite-side blocks.  Iterating this step from small
exhaustively-checkable pieces produces every construction family in this
module, and each generator records its steps as a
:class:`~noit.certify.Certificate` so the result can be re-verified without
a global search.

A second primitive handles the degree-two family: delete one cross-block
edge uv and reconnect a third block entirely to {u, v}.  Together with edge
additions (monotone), vertex deletions (monotone), and blow-ups, these are
exactly the certificate step types of :mod:`noit.certify`.

The generator families:

* ``gen_szabo_tardos`` / ``gen_yuster`` — 2d−1 copies of K_{d,d} carved
  into 2d blocks of size 2d−1, the extremal family for maximum degree d.
* ``gen_cycle_partition`` / ``gen_three_cycles`` — cycles of length 1 mod 3
  with all-but-two blocks of size 3, the extremal family for d = 2.
* ``gen_locally_sparse`` — maximum degree d with local degree and
  multiplicity m and blocks of size ≥ d + 2m − ⌈(2m²+m)/(d+m)⌉.
* ``gen_list_coloring_cx`` — a multiplicity-one, adjacency-consistent graph
  on 4(d+1)² blocks of size d+1 with no IT; via the list-cover
  correspondence (:mod:`noit.listcover`) it yields an uncolorable list
  assignment with all lists of size d+1 and maximum color degree d.
* ``gen_star_free_cx`` — K_{1,k}-free graphs whose block size exceeds
  d + k − 1.
* ``gen_ahhs_cx`` — blocks of size 2d−1 in which no complete bipartite
  component is trapped inside the union of two blocks.
* ``gen_join_power`` / ``gen_general_szabo_tardos`` — iterated self-joins
  raising every block of an arbitrary no-IT seed to size ≥ n.

All distribution choices are deterministic (ascending vertex ids, grouped
by component where the family requires it); ``gen_szabo_tardos`` and
``gen_yuster`` also accept a ``seed`` for randomized-but-valid distribution
variants used by property tests.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .certify import (
    AddEdges,
    Base,
    BlowUp,
    Certificate,
    DeleteVertices,
    EdgeDelete,
    Join,
)
from .errors import (
    BadLength,
    BudgetExceededError,
    ConditionFails,
    EdgeAbsent,
    EmptiesBlock,
    InvalidDistribution,
    InvalidInput,
    InvalidPlan,
    InvariantViolated,
    LoopEdge,
    NotDivisible,
    NotPowerOfTwo,
    SeedHasIT,
)
from .graph import (
    Edge,
    PartitionedGraph,
    canon_edge,
    components,
    graph_stats,
    induced,
)
from .transversal import ITStatus, SearchBudget, find_it

_log = logging.getLogger(__name__)

#: A Distribution maps each vertex of the dissolved block to the index of
#: the block that absorbs it.
Distribution = Mapping[int, int]


# == the join primitive =====================================================


def union_join(
    state: PartitionedGraph,
    payload: PartitionedGraph,
    s: int,
    dist: Distribution,
) -> PartitionedGraph:
    """Disjoint union of `state` and `payload` with one block dissolved.

    Block slots are indexed over the union: `state` blocks keep indices
    ``0..state.r-1`` and `payload` blocks follow at ``state.r..``; payload
    vertex ids are offset by ``state.n``.  Slot `s` (either side) is
    dissolved, and `dist` must send each of its vertices (by union id) to a
    slot strictly on the *other* side — the requirement that makes the
    no-IT argument work.  The result's blocks are the union order with slot
    `s` removed.
    """
    rs, rp = state.r, payload.r
    off = state.n
    if not (0 <= s < rs + rp):
        raise InvalidDistribution(f"dissolved slot {s} out of range 0..{rs + rp - 1}")
    union_blocks: list[set[int]] = [set(b) for b in state.blocks] + [
        {v + off for v in b} for b in payload.blocks
    ]
    dissolved = union_blocks[s]
    if set(dist) != dissolved:
        missing = sorted(dissolved - set(dist))
        extra = sorted(set(dist) - dissolved)
        raise InvalidDistribution(
            f"distribution must cover exactly the dissolved block; "
            f"missing {missing}, extraneous {extra}"
        )
    lo, hi = (rs, rs + rp) if s < rs else (0, rs)
    for v, t in dist.items():
        if not (lo <= t < hi):
            raise InvalidDistribution(
                f"vertex {v} sent to slot {t}, not on the side opposite slot {s}"
            )
    for v, t in dist.items():
        union_blocks[t].add(v)
    new_blocks = [sorted(b) for i, b in enumerate(union_blocks) if i != s]
    edges = list(state.edges) + [(u + off, v + off) for (u, v) in payload.edges]
    labels = None
    if state.labels is not None and payload.labels is not None:
        labels = list(state.labels) + list(payload.labels)
    return PartitionedGraph.build(state.n + payload.n, edges, new_blocks, labels)


def join(
    host: PartitionedGraph,
    added: PartitionedGraph,
    s: int,
    dist: Distribution,
) -> PartitionedGraph:
    """Dissolve block `s` of `added` into the blocks of `host`.

    `dist` maps each vertex of ``added.blocks[s]`` (by its id in `added`)
    to a host block index.  The result's partition is the host blocks
    (enlarged) followed by the remaining blocks of `added`.  If neither
    input has an IT, the output has none.
    """
    if not (0 <= s < added.r):
        raise InvalidDistribution(f"block index {s} out of range for the added graph")
    shifted = {v + host.n: t for v, t in dist.items()}
    return union_join(host, added, host.r + s, shifted)


# == further no-IT-preserving transforms ====================================


@dataclass(frozen=True)
class EdgeDeletePlan:
    """Delete edge uv (endpoints in distinct blocks i, j) and add the edges
    F, which must connect every vertex of block k ∉ {i, j} to u or v."""

    u: int
    v: int
    k: int
    F: frozenset[Edge]

    def __post_init__(self) -> None:
        object.__setattr__(self, "F", frozenset(canon_edge(x, y) for (x, y) in self.F))


def edge_delete(g: PartitionedGraph, plan: EdgeDeletePlan) -> PartitionedGraph:
    """Apply an edge-delete plan; preserves the no-IT property.

    Any IT of the result either avoids u and v — making it an IT of g — or
    uses one of them, which F makes adjacent to whichever vertex the IT
    picked in block k.
    """
    u, v, k = plan.u, plan.v, plan.k
    for x in (u, v):
        if not (0 <= x < g.n):
            raise InvalidPlan(f"endpoint {x} out of range")
    if not g.has_edge(u, v):
        raise EdgeAbsent(f"edge ({u},{v}) not in the graph")
    i, j = g.block_of[u], g.block_of[v]
    if i == j:
        raise InvalidPlan(f"endpoints {u},{v} share block {i}")
    if not (0 <= k < g.r):
        raise InvalidPlan(f"block index {k} out of range")
    if k in (i, j):
        raise InvalidPlan(f"block {k} must differ from the endpoint blocks {i},{j}")
    touched: set[int] = set()
    for (x, y) in plan.F:
        if not (0 <= x < g.n and 0 <= y < g.n) or x == y:
            raise InvalidPlan(f"invalid replacement edge ({x},{y})")
        ends = {x, y}
        anchor = ends & {u, v}
        other = ends - {u, v}
        if len(anchor) != 1 or len(other) != 1:
            raise InvalidPlan(
                f"replacement edge ({x},{y}) must pair one of u,v with a block-{k} vertex"
            )
        (w,) = other
        if g.block_of[w] != k:
            raise InvalidPlan(f"replacement endpoint {w} lies outside block {k}")
        touched.add(w)
    if touched != set(g.blocks[k]):
        miss = sorted(set(g.blocks[k]) - touched)
        raise InvalidPlan(f"replacement edges miss block-{k} vertices {miss}")
    edges = (set(g.edges) - {canon_edge(u, v)}) | set(plan.F)
    return PartitionedGraph(g.n, frozenset(edges), g.blocks, g.labels)


def add_edges(g: PartitionedGraph, extra: Iterable[Edge]) -> PartitionedGraph:
    """Edge union; adding edges can only destroy independent sets."""
    new = set(g.edges)
    for (x, y) in extra:
        if x == y:
            raise LoopEdge(f"loop at vertex {x}")
        new.add(canon_edge(x, y))
    return PartitionedGraph.build(g.n, new, [sorted(b) for b in g.blocks], g.labels)


def delete_vertices(
    g: PartitionedGraph, doomed: Iterable[int]
) -> tuple[PartitionedGraph, dict[int, int]]:
    """Induced subgraph on the complement of `doomed`, blocks restricted;
    no block may be emptied.  Returns the graph and the old→new vertex map.
    An IT of the result is an IT of g, so the no-IT property is preserved.
    """
    dead = set(doomed)
    for x in dead:
        if not (0 <= x < g.n):
            raise InvalidInput(f"vertex {x} out of range")
    for idx, b in enumerate(g.blocks):
        if b <= dead:
            raise EmptiesBlock(f"deleting {sorted(dead)} empties block {idx}")
    return induced(g, (v for v in range(g.n) if v not in dead))


def blow_up(g: PartitionedGraph, m: int) -> PartitionedGraph:
    """Replace every vertex by m independent copies and every edge by
    K_{m,m}; copies stay in their vertex's block.  An IT of the blow-up
    projects to an IT of g, so the no-IT property is preserved."""
    if m < 1:
        raise InvalidInput(f"blow-up factor must be >= 1, got {m}")
    edges = [
        (u * m + a, v * m + b)
        for (u, v) in g.edges
        for a in range(m)
        for b in range(m)
    ]
    blocks = [[v * m + a for v in sorted(b) for a in range(m)] for b in g.blocks]
    labels = None
    if g.labels is not None:
        labels = [f"{g.labels[v]}.{a}" for v in range(g.n) for a in range(m)]
    return PartitionedGraph.build(g.n * m, edges, blocks, labels)


def check_block_sum_condition(g: PartitionedGraph, n: int) -> bool:
    """True iff every subset I of blocks satisfies Σ|V_i| ≥ n(|I|−1)+1.

    The minimizing subset of each cardinality consists of the smallest
    blocks, so ascending prefix sums suffice.
    """
    if n < 1:
        raise InvalidInput(f"target size must be >= 1, got {n}")
    sizes = sorted(len(b) for b in g.blocks)
    prefix = 0
    for idx, size in enumerate(sizes, start=1):
        prefix += size
        if prefix < n * (idx - 1) + 1:
            return False
    return True


# == shared generator helpers ===============================================


def gen_complete_bipartite(a: int, b: int) -> PartitionedGraph:
    """K_{a,b} with the standard bipartition: ids 0..a-1 vs a..a+b-1.
    Any transversal must pick one vertex per side, and all cross pairs are
    edges, so there is no IT."""
    if a < 1 or b < 1:
        raise InvalidInput(f"side sizes must be >= 1, got ({a},{b})")
    edges = [(x, a + y) for x in range(a) for y in range(b)]
    return PartitionedGraph.build(a + b, edges, [range(a), range(a, a + b)])


def gen_multipartite_base(r: int, m: int) -> PartitionedGraph:
    """r−1 disjoint copies of the complete r-partite graph K_r(m), block t =
    part t of every copy.  A transversal picks r vertices inside r−1
    copies, so two of them share a copy and lie in different parts — hence
    adjacent, and there is no IT.  Max degree (r−1)m; local degree and
    multiplicity m."""
    if r < 2 or m < 1:
        raise InvalidInput(f"need r >= 2 and m >= 1, got ({r},{m})")
    per = r * m
    edges = []
    for c in range(r - 1):
        base = c * per
        for t1 in range(r):
            for t2 in range(t1 + 1, r):
                for q1 in range(m):
                    for q2 in range(m):
                        edges.append((base + t1 * m + q1, base + t2 * m + q2))
    blocks = [
        [c * per + t * m + q for c in range(r - 1) for q in range(m)]
        for t in range(r)
    ]
    return PartitionedGraph.build((r - 1) * per, edges, blocks)


def _grouped_by_component(state: PartitionedGraph, block: frozenset[int]) -> list[int]:
    """Vertices of `block` sorted by (containing component, id)."""
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(components(state)):
        for v in comp.vertices & block:
            comp_of[v] = ci
    return sorted(block, key=lambda v: (comp_of[v], v))


def _structure_check(g: PartitionedGraph, r: int, size: int) -> None:
    if g.r != r or any(len(b) != size for b in g.blocks):
        raise InvariantViolated(
            f"expected {r} blocks of size {size}, got {sorted(len(b) for b in g.blocks)}"
        )


# == complete-bipartite families ============================================


def gen_szabo_tardos(
    d: int, *, seed: int | None = None
) -> tuple[PartitionedGraph, Certificate]:
    """2d−1 copies of K_{d,d} partitioned into 2d blocks of size 2d−1.

    Grow a distinguished block from each side of the first copy: at step k
    the current distinguished block U (d fresh vertices from the latest
    copy plus k−1 accumulated singletons) dissolves into a fresh copy,
    sending the singletons plus the lowest fresh vertex — one vertex from
    each of the k components present — to the copy's first side and the
    remaining d−1 fresh vertices to its second side.  After d−1 steps per
    side, every block has size 2d−1.

    With `seed`, each step instead sends a uniformly random subset of U to
    the first side (still a valid join, so the result still has no IT, but
    the block-size profile is no longer guaranteed).
    """
    if d < 1:
        raise InvalidInput(f"d must be >= 1, got {d}")
    rng = random.Random(seed) if seed is not None else None
    unit = gen_complete_bipartite(d, d)
    state = unit
    steps: list = [Base(unit)]
    for side_start in (0, d):
        if d == 1:
            break
        original = frozenset(range(side_start, side_start + d))
        u_idx = next(i for i, b in enumerate(state.blocks) if b == original)
        fresh = list(range(side_start, side_start + d))
        singles: list[int] = []
        for _ in range(d - 1):
            rs = state.r
            block = sorted(state.blocks[u_idx])
            if rng is None:
                to_first = set(singles) | {min(fresh)}
            else:
                to_first = set(rng.sample(block, rng.randint(0, len(block))))
            dist = {v: rs + (0 if v in to_first else 1) for v in block}
            prev_n = state.n
            state = union_join(state, unit, u_idx, dist)
            steps.append(Join(unit, u_idx, dist))
            fresh = list(range(prev_n, prev_n + d))
            singles = sorted(to_first)
            u_idx = rs - 1
    cert = Certificate(tuple(steps))
    if rng is None:
        _structure_check(state, 2 * d, 2 * d - 1)
    return state, cert


def gen_yuster(
    d: int, *, seed: int | None = None
) -> tuple[PartitionedGraph, Certificate]:
    """The same 2d−1 copies of K_{d,d} (d a power of two), partitioned by
    equitable halving: while some block is smaller than 2d−1, dissolve a
    current smallest block into a fresh copy, half to each side (ascending
    ids to the first side; with `seed`, a random half).  Each join splits a
    power-of-two-sized block evenly, so the sizes work out to 2d−1 for all
    2d blocks after 2d−2 steps."""
    if d < 1 or d & (d - 1) != 0:
        raise NotPowerOfTwo(f"d must be a power of two, got {d}")
    rng = random.Random(seed) if seed is not None else None
    unit = gen_complete_bipartite(d, d)
    state = unit
    steps: list = [Base(unit)]
    while True:
        sizes = [len(b) for b in state.blocks]
        if min(sizes) >= 2 * d - 1:
            break
        u_idx = min(range(state.r), key=lambda i: (sizes[i], i))
        block = sorted(state.blocks[u_idx])
        half = (len(block) + 1) // 2
        if rng is None:
            to_first = set(block[:half])
        else:
            to_first = set(rng.sample(block, half))
        rs = state.r
        dist = {v: rs + (0 if v in to_first else 1) for v in block}
        state = union_join(state, unit, u_idx, dist)
        steps.append(Join(unit, u_idx, dist))
    _structure_check(state, 2 * d, 2 * d - 1)
    return state, Certificate(tuple(steps))


# == degree-two families ====================================================


def gen_cycle_partition(r: int) -> tuple[PartitionedGraph, Certificate]:
    """The cycle C_{3r+1} with r+1 blocks — r−1 of size 3 and two of size 2
    — and no IT.

    Induction from the 4-cycle with its standard bipartition: attach a path
    of three fresh vertices in place of the lexicographically smallest edge
    uv of the current cycle (join a K_{1,2} whose center dissolves into
    block V_{r−1}, then delete uv and connect the two new leaves to u and
    v), giving a cycle three longer with one new block of size 2 and one
    block grown to size 3."""
    if r < 1:
        raise InvalidInput(f"r must be >= 1, got {r}")
    c4 = PartitionedGraph.build(
        4, [(0, 1), (1, 2), (2, 3), (0, 3)], [[0, 2], [1, 3]]
    )
    state = c4
    steps: list = [Base(c4)]
    path3 = PartitionedGraph.build(3, [(0, 2), (1, 2)], [[0, 1], [2]])
    for rr in range(2, r + 1):
        u, v = state.sorted_edges()[0]
        if state.block_of[u] == state.block_of[v]:
            raise InvariantViolated("cycle edge inside a block")
        n0, rs = state.n, state.r
        center = n0 + 2
        dist = {center: rr - 2}
        state = union_join(state, path3, rs + 1, dist)
        steps.append(Join(path3, rs + 1, dist))
        k_idx = state.r - 1
        F = frozenset({canon_edge(u, n0), canon_edge(v, n0 + 1)})
        state = edge_delete(state, EdgeDeletePlan(u, v, k_idx, F))
        steps.append(EdgeDelete(u, v, k_idx, F))
    sizes = sorted(len(b) for b in state.blocks)
    if (
        state.n != 3 * r + 1
        or sizes != [2, 2] + [3] * (r - 1)
        or any(state.degree(v) != 2 for v in range(state.n))
    ):
        raise InvariantViolated("cycle construction lost its shape")
    return state, Certificate(tuple(steps))


def gen_three_cycles(
    l1: int, l2: int, l3: int
) -> tuple[PartitionedGraph, Certificate]:
    """C_{ℓ1} ⊔ C_{ℓ2} ⊔ C_{ℓ3} (each ℓ ≡ 1 mod 3) with all blocks of size
    3: the two size-2 blocks of each successive cycle absorb, one vertex
    apiece, a size-2 block of the accumulated graph."""
    lengths = (l1, l2, l3)
    for l in lengths:
        if l < 4 or l % 3 != 1:
            raise BadLength(f"cycle length {l} is not ≡ 1 (mod 3) and >= 4")
    state, cert = gen_cycle_partition((l1 - 1) // 3)
    steps = list(cert.steps)
    for l in (l2, l3):
        payload, _ = gen_cycle_partition((l - 1) // 3)
        small_state = [i for i, b in enumerate(state.blocks) if len(b) == 2]
        small_payload = [i for i, b in enumerate(payload.blocks) if len(b) == 2]
        if not small_state or len(small_payload) != 2:
            raise InvariantViolated("expected size-2 blocks on both sides")
        s_idx = small_state[0]
        a, b = sorted(state.blocks[s_idx])
        rs = state.r
        dist = {a: rs + small_payload[0], b: rs + small_payload[1]}
        state = union_join(state, payload, s_idx, dist)
        steps.append(Join(payload, s_idx, dist))
    _structure_check(state, sum(lengths) // 3, 3)
    if any(state.degree(v) != 2 for v in range(state.n)):
        raise InvariantViolated("three-cycle union is not 2-regular")
    return state, Certificate(tuple(steps))


# == locally sparse and list-coloring families ==============================


def gen_locally_sparse(d: int, m: int) -> tuple[PartitionedGraph, Certificate]:
    """Maximum degree d, local degree and multiplicity m (m | d), blocks of
    size ≥ d + 2m − ⌈(2m²+m)/(d+m)⌉, no IT.

    Each block U of the 2d-block complete-bipartite family dissolves into a
    fresh copy of gen_multipartite_base(d/m+1, m), dealt round-robin over
    the d/m+1 target blocks with U's vertices grouped by component, so each
    target gains ≥ ⌊(2d−1)/(d/m+1)⌋ vertices and receives at most
    ⌈d/(d/m+1)⌉ ≤ m vertices of any one component."""
    if m < 1 or d < m:
        raise InvalidInput(f"need d >= m >= 1, got ({d},{m})")
    if d % m != 0:
        raise NotDivisible(f"d = {d} is not a multiple of m = {m}")
    r_t = d // m + 1
    state, cert = gen_szabo_tardos(d)
    steps = list(cert.steps)
    payload = gen_multipartite_base(r_t, m)
    original_blocks = state.r
    for _ in range(original_blocks):
        rs = state.r
        block = state.blocks[0]
        ordered = _grouped_by_component(state, block)
        dist = {v: rs + (p % r_t) for p, v in enumerate(ordered)}
        state = union_join(state, payload, 0, dist)
        steps.append(Join(payload, 0, dist))
    stats = graph_stats(state)
    bound = d + 2 * m - math.ceil((2 * m * m + m) / (d + m))
    if (
        state.r != original_blocks * r_t
        or stats.max_degree != d
        or stats.local_degree != m
        or stats.multiplicity != m
        or min(stats.block_sizes) < bound
    ):
        raise InvariantViolated("locally sparse construction out of profile")
    return state, Certificate(tuple(steps))


def gen_list_coloring_cx(d: int) -> tuple[PartitionedGraph, Certificate]:
    """A no-IT graph on 4(d+1)² blocks of size d+1 with maximum degree d,
    multiplicity one, and consistent cross-component adjacency — the two
    structural conditions of a list cover graph.

    Seeded by K_{2,2} ⊔ K_{d,d} ⊔ K_{d,d} carved into 4 blocks of size d+1
    (each side of the 4-cycle dissolves into a fresh K_{d,d}, one vertex
    per side).  Two rounds of joins follow, each dissolving every current
    block into a fresh union of d copies of K_{d+1} with one vertex per
    target block; the first round kills multiplicity, the second restores
    adjacency consistency between old and new components.  Blocks would be
    trimmed to size d+1 between rounds if they overshot, but with this seed
    every block lands on d+1 exactly."""
    if d < 2:
        raise InvalidInput(f"d must be >= 2, got {d}")
    k22 = gen_complete_bipartite(2, 2)
    kdd = gen_complete_bipartite(d, d)
    state = k22
    steps: list = [Base(k22)]
    for _ in range(2):
        rs = state.r
        a, b = sorted(state.blocks[0])
        dist = {a: rs, b: rs + 1}
        state = union_join(state, kdd, 0, dist)
        steps.append(Join(kdd, 0, dist))
    _structure_check(state, 4, d + 1)
    cliques = gen_multipartite_base(d + 1, 1)
    for round_no in range(2):
        doomed = [v for b in state.blocks for v in sorted(b)[d + 1 :]]
        if doomed:
            state, _ = delete_vertices(state, doomed)
            steps.append(DeleteVertices(frozenset(doomed)))
        for _ in range(state.r):
            rs = state.r
            block = state.blocks[0]
            if len(block) != d + 1:
                raise InvariantViolated("block out of size before dissolving")
            ordered = _grouped_by_component(state, block)
            dist = {v: rs + p for p, v in enumerate(ordered)}
            state = union_join(state, cliques, 0, dist)
            steps.append(Join(cliques, 0, dist))
    _structure_check(state, 4 * (d + 1) * (d + 1), d + 1)
    stats = graph_stats(state)
    if stats.max_degree != d or stats.multiplicity != 1:
        raise InvariantViolated("list-coloring construction out of profile")
    return state, Certificate(tuple(steps))


# == counterexample families ================================================


@dataclass(frozen=True)
class StarFreeReport:
    """Degree and block-size arithmetic for a star-free construction."""

    max_degree: int
    block_size: int
    bound: int  # d + k − 1, the block size conjectured to force an IT
    exceeds_bound: bool

    def to_json_dict(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "block_size": self.block_size,
            "bound": self.bound,
            "exceeds_bound": self.exceeds_bound,
        }


def gen_star_free_cx(
    k: int, m: int
) -> tuple[PartitionedGraph, Certificate, StarFreeReport]:
    """K_{1,k}-free graphs with no IT whose blocks have size 2m−1, versus
    maximum degree d = km/(k−1) − 1.

    Take the 2m−1 copies of K_{m,m} on blocks of size 2m−1 and overlay
    k−1 disjoint cliques of size m/(k−1) on each side of every copy: a
    neighborhood now consists of one complete side plus a clique remnant,
    whose largest independent set has k−1 < k vertices.  For
    d > k + 2/(k−2) the block size 2m−1 strictly exceeds d + k − 1."""
    if k < 3:
        raise InvalidInput(f"k must be >= 3, got {k}")
    if m < 1 or m % (k - 1) != 0:
        raise NotDivisible(f"m = {m} is not a positive multiple of k-1 = {k - 1}")
    q = m // (k - 1)
    state, cert = gen_szabo_tardos(m)
    steps = list(cert.steps)
    extra: set[Edge] = set()
    for comp in components(state):
        for side in (comp.side_a, comp.side_b):
            ordered = sorted(side)
            for c in range(k - 1):
                group = ordered[c * q : (c + 1) * q]
                extra.update(
                    canon_edge(group[i], group[jj])
                    for i in range(len(group))
                    for jj in range(i + 1, len(group))
                )
    if extra:
        state = add_edges(state, extra)
        steps.append(AddEdges(frozenset(extra)))
    d_val = k * m // (k - 1) - 1
    bound = d_val + k - 1
    report = StarFreeReport(
        max_degree=d_val,
        block_size=2 * m - 1,
        bound=bound,
        exceeds_bound=2 * m - 1 > bound,
    )
    if graph_stats(state).max_degree != d_val:
        raise InvariantViolated("star-free construction has unexpected degree")
    return state, Certificate(tuple(steps)), report


def gen_ahhs_cx(d: int) -> tuple[PartitionedGraph, Certificate]:
    """4d blocks of size 2d−1, no IT, and no complete bipartite component
    trapped inside the union of two blocks.

    Each block U of the 2d-block complete-bipartite family meets exactly
    one component K in d vertices; U dissolves into a fresh K_{d,d−1},
    sending d−1 of U∩K to the d-side and the remaining d vertices to the
    (d−1)-side.  Every original K_{d,d} then meets at least four blocks."""
    if d < 2:
        raise InvalidInput(f"d must be >= 2, got {d}")
    state, cert = gen_szabo_tardos(d)
    steps = list(cert.steps)
    payload = gen_complete_bipartite(d, d - 1)
    original_blocks = state.r
    for _ in range(original_blocks):
        rs = state.r
        block = state.blocks[0]
        heavy = [c for c in components(state) if len(c.vertices & block) == d]
        if len(heavy) != 1:
            raise InvariantViolated(
                f"expected exactly one component meeting the block in {d} vertices, "
                f"found {len(heavy)}"
            )
        shared = sorted(block & heavy[0].vertices)
        to_a = shared[: d - 1]
        to_b = sorted(block - set(to_a))
        dist = {v: rs for v in to_a}
        dist.update({v: rs + 1 for v in to_b})
        state = union_join(state, payload, 0, dist)
        steps.append(Join(payload, 0, dist))
    _structure_check(state, 4 * d, 2 * d - 1)
    return state, Certificate(tuple(steps))


# == iterated self-joins ====================================================


def _join_power_step(
    state: PartitionedGraph,
    steps: list,
    payload: PartitionedGraph,
    u_idx: int,
    deficit: list[tuple[int, int]],
    j: int,
) -> PartitionedGraph:
    """Dissolve state block `u_idx` into a fresh payload copy: top up each
    deficient payload block i ≠ j by its deficit, remainder to block j."""
    rs = state.r
    block = sorted(state.blocks[u_idx])
    dist: dict[int, int] = {}
    pos = 0
    for i, need in deficit:
        if i == j:
            continue
        for _ in range(need):
            dist[block[pos]] = rs + i
            pos += 1
    if pos >= len(block):
        raise InvariantViolated("dissolved block too small to feed the copy")
    for v in block[pos:]:
        dist[v] = rs + j
    steps.append(Join(payload, u_idx, dist))
    return union_join(state, payload, u_idx, dist)


def gen_join_power(
    seed_graph: PartitionedGraph,
    n: int,
    min_copies: int | None = None,
) -> tuple[PartitionedGraph, Certificate]:
    """Iterated self-join of a no-IT seed until every block has size ≥ n.

    Requires every block subset I of the seed to satisfy
    Σ|V_i| ≥ n(|I|−1)+1.  While a block of size < n exists — preferring
    the block created by the previous step, initially the minimum-size
    block (ties by index) — dissolve it into a fresh copy of the seed:
    n−|V_i| vertices (ascending) top up each deficient copy-block i ≠ j
    and the remainder lands on copy-block j (j = a minimum-size deficient
    seed block, fixed once), creating at most one new deficient block that
    is strictly larger than the dissolved one.  The copy count equals
    1 + Σ_{i∈J} ⌈(n−|V_i|)/D⌉ where J indexes the seed's deficient blocks
    and D = |V(G_J)| − n(|J|−1); a mismatch is logged, not fatal.

    `min_copies` pads with further copies (each dissolving one more block
    the same way, or an arbitrary copy-block into block 0 when the seed has
    no deficient blocks), preserving all guarantees.
    """
    if n < 1:
        raise InvalidInput(f"target block size must be >= 1, got {n}")
    res = find_it(seed_graph)
    if res.status is ITStatus.FOUND:
        raise SeedHasIT("the seed graph has an independent transversal")
    if res.status is ITStatus.BUDGET:
        raise BudgetExceededError(res.nodes, "could not verify the seed exhaustively")
    if not check_block_sum_condition(seed_graph, n):
        raise ConditionFails(
            f"block sizes {sorted(len(b) for b in seed_graph.blocks)} violate "
            f"the subset-sum condition for n = {n}"
        )
    sizes = [len(b) for b in seed_graph.blocks]
    J = [i for i, size in enumerate(sizes) if size < n]
    state = seed_graph
    steps: list = [Base(seed_graph)]
    copies = 1
    deficit = [(i, n - sizes[i]) for i in J]
    j = min(J, key=lambda i: (sizes[i], i)) if J else 0
    if J:
        gj = sum(sizes[i] for i in J)
        d_gain = gj - n * (len(J) - 1)
        prev_created: int | None = None
        while True:
            current = [len(b) for b in state.blocks]
            if prev_created is not None and current[prev_created] < n:
                u_idx = prev_created
            else:
                small = [i for i, size in enumerate(current) if size < n]
                if not small:
                    break
                u_idx = min(small, key=lambda i: (current[i], i))
            rs = state.r
            state = _join_power_step(state, steps, seed_graph, u_idx, deficit, j)
            copies += 1
            prev_created = rs - 1 + j
        k_formula = 1 + sum(math.ceil((n - sizes[i]) / d_gain) for i in J)
        if copies != k_formula:
            _log.warning(
                "join power used %d copies; the closed-form bound gives %d",
                copies,
                k_formula,
            )
    while min_copies is not None and copies < min_copies:
        if J:
            current = [len(b) for b in state.blocks]
            u_idx = min(range(state.r), key=lambda i: (current[i], i))
            state = _join_power_step(state, steps, seed_graph, u_idx, deficit, j)
        else:
            rs = state.r
            off = state.n
            last = seed_graph.r - 1
            dist = {v + off: 0 for v in seed_graph.blocks[last]}
            state = union_join(state, seed_graph, rs + last, dist)
            steps.append(Join(seed_graph, rs + last, dist))
        copies += 1
    if state.r != copies * (seed_graph.r - 1) + 1 or any(
        len(b) < n for b in state.blocks
    ):
        raise InvariantViolated("join power result out of profile")
    return state, Certificate(tuple(steps))


def gen_general_szabo_tardos(n: int, r: int) -> tuple[PartitionedGraph, Certificate]:
    """r−1 copies of K_{d,d}, d = ⌈rn/(2(r−1))⌉, partitioned into r blocks
    of size ≥ n with no IT (r even) — the extremal block-count family for
    a given minimum block size."""
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    if r < 2 or r % 2 != 0:
        raise InvalidInput(f"r must be an even integer >= 2, got {r}")
    d = -(-r * n // (2 * (r - 1)))
    seed = gen_complete_bipartite(d, d)
    state, cert = gen_join_power(seed, n, min_copies=r - 1)
    if state.r != r:
        raise InvariantViolated(f"expected {r} blocks, got {state.r}")
    return state, cert
