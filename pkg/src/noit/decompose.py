"""Decomposition of extremal no-IT graphs back into join certificates.

A partitioned graph qualifies for decomposition when it satisfies three
conditions: (a) it is block-minimal with no IT (no IT exists, but deleting
any one block leaves a graph with an IT), (b) it is a disjoint union of
complete bipartite graphs, and (c) it has exactly r−1 connected components
for r blocks.  Under (a)–(c), some complete bipartite component K_{A,B}
has one side inside a single block V_i and the other inside a second block
V_j.  Peeling that component off and merging what remains of V_i and V_j
into one block preserves (a)–(c), so the whole graph unwinds, component by
component, into a sequence of join steps over complete bipartite bases —
the certificate emitted by :func:`decompose_to_certificate`.

The existence proof behind the peeling step is algorithmic and implemented
here in full.  Its engine is the *induced matching configuration* (IMC): a
pair (I, T) where T is a maximum partial independent transversal, G[I] is
a perfect matching containing T, and the *block graph* 𝒢_I — blocks as
nodes, adjacent when I has an edge between them — is a tree on all r
blocks.  :func:`build_imc` grows an IMC greedily from any root block,
re-optimizing T under agreement constraints at every step and runtime-
checking each structural claim the proof relies on.  :func:`find_side_in_block`
then walks the IMC: while the root has tree-degree ≥ 2 it swaps one
matching center for a neighbor of its partner, strictly decreasing the
root's degree, until the root is a leaf — at which point one switch along
the leaf edge exposes a vertex whose entire neighborhood lies inside the
root block, i.e. one side of a complete bipartite component.

Searching the components directly is of course far cheaper, so the direct
scan is the production path (:func:`scan_side_in_block`,
:func:`find_two_block_component`); the IMC walk is kept as an executable
form of the argument and as a cross-check, selected with ``use_imc=True``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certify import Base, Certificate, Join, replays_to
from .errors import (
    BudgetExceededError,
    InvalidInput,
    InvariantViolated,
    NotFound,
    PreconditionFailed,
)
from .graph import (
    Component,
    PartitionedGraph,
    block_graph,
    components,
    induced,
    is_cb_union,
)
from .transversal import (
    ITStatus,
    SearchBudget,
    Transversal,
    find_it,
    is_block_minimal,
    max_partial_it,
)

# == feasible pairs and induced matching configurations =====================


@dataclass(frozen=True)
class FeasiblePair:
    """A maximum partial independent transversal T plus a vertex set I whose
    induced subgraph is a disjoint union of |I∖T| non-trivial stars, each
    centered at a vertex of I∖T with leaves in T, such that the block graph
    of I is a tree on the blocks meeting I."""

    I: frozenset[int]
    T: frozenset[int]

    @property
    def W(self) -> frozenset[int]:
        """The star centers."""
        return self.I - self.T

    def stars(self, g: PartitionedGraph) -> dict[int, frozenset[int]]:
        """Map each center w to its star C(w, T) = {w} ∪ (N(w) ∩ T)."""
        return {w: frozenset({w} | (g.adj[w] & self.T)) for w in self.W}


@dataclass(frozen=True)
class IMCWitness:
    """A feasible pair whose I induces a perfect matching and whose block
    graph is a tree on all blocks, rooted at a block disjoint from T."""

    pair: FeasiblePair
    root: int


# == qualifying conditions ===================================================


def check_abc(
    g: PartitionedGraph, budget: SearchBudget | None = None
) -> tuple[bool, bool, bool]:
    """The decomposition hypotheses: (a) block-minimal with no IT,
    (b) disjoint union of complete bipartite graphs, (c) exactly r−1
    components."""
    b = is_cb_union(g)
    c = len(components(g)) == g.r - 1
    a = is_block_minimal(g, budget)
    return (a, b, c)


# == locating complete bipartite components inside blocks ===================


def _nontrivial_cb(comp: Component) -> bool:
    return comp.is_complete_bipartite and bool(comp.side_a) and bool(comp.side_b)


def scan_side_in_block(g: PartitionedGraph, i: int) -> Component:
    """Direct-scan oracle: the first complete bipartite component (by
    minimum vertex id) with one side entirely inside block i."""
    if not (0 <= i < g.r):
        raise InvalidInput(f"block index {i} out of range")
    blk = g.blocks[i]
    for comp in components(g):
        if _nontrivial_cb(comp) and (comp.side_a <= blk or comp.side_b <= blk):
            return comp
    raise NotFound(f"no complete bipartite component has a side inside block {i}")


def find_two_block_component(
    g: PartitionedGraph,
    *,
    use_imc: bool = False,
    budget: SearchBudget | None = None,
) -> tuple[int, int, int]:
    """A component index c and distinct blocks (i, j) with the component's
    sides satisfying A ⊆ V_i and B ⊆ V_j.  The hypotheses (a)–(c) guarantee
    one exists; NotFound therefore signals they are violated.

    The default is a linear scan of the components.  With ``use_imc`` the
    witness is produced the long way instead: one IMC walk per block yields
    a served component per block, and with only r−1 components some
    component must serve two blocks — necessarily with different sides.
    """
    comps = components(g)
    if use_imc:
        served: dict[int, dict[str, int]] = {}
        key_of = {comp.vertices: idx for idx, comp in enumerate(comps)}
        for i in range(g.r):
            comp = find_side_in_block(g, i, budget)
            ci = key_of[comp.vertices]
            side = "a" if comp.side_a <= g.blocks[i] else "b"
            served.setdefault(ci, {})[side] = i
        for ci in sorted(served):
            if "a" in served[ci] and "b" in served[ci]:
                return (ci, served[ci]["a"], served[ci]["b"])
        raise NotFound("no component serves two blocks; hypotheses violated")
    for ci, comp in enumerate(comps):
        if not _nontrivial_cb(comp):
            continue
        blocks_a = {g.block_of[v] for v in comp.side_a}
        blocks_b = {g.block_of[v] for v in comp.side_b}
        if len(blocks_a) == 1 and len(blocks_b) == 1 and blocks_a != blocks_b:
            return (ci, blocks_a.pop(), blocks_b.pop())
    raise NotFound("no complete bipartite component lies inside two blocks")


# == the IMC construction ====================================================


def _next_center(g: PartitionedGraph, I: frozenset[int], root: int) -> int | None:
    """Lowest-id vertex eligible to start a new star: in an active block,
    outside I, nonadjacent to I (any root-block vertex while I is empty)."""
    if not I:
        return min(g.blocks[root])
    active = {g.block_of[v] for v in I}
    for v in range(g.n):
        if g.block_of[v] in active and v not in I and not (g.adj[v] & I):
            return v
    return None


def _constrained_transversal(
    g: PartitionedGraph,
    I: frozenset[int],
    T: frozenset[int],
    w: int,
    budget: SearchBudget | None,
) -> frozenset[int]:
    """The re-optimized transversal T′ of the growth step: maximum partial
    IT that agrees with T on every active block (same pick, or pinned
    absence), avoids neighbors of I outside I, stays out of w's block when
    that block is inactive, and subject to all that has as few neighbors of
    w as possible."""
    active = {g.block_of[v] for v in I}
    pick_of_block = {g.block_of[t]: t for t in T}
    forced = {b: pick_of_block[b] for b in active if b in pick_of_block}
    forbidden: set[int] = set()
    for b in active:
        if b not in pick_of_block:
            forbidden |= set(g.blocks[b])
    neighborhood: set[int] = set()
    for u in I:
        neighborhood |= g.adj[u]
    forbidden |= neighborhood - I
    wb = g.block_of[w]
    if wb not in active:
        forbidden |= set(g.blocks[wb])
    if w in forced.values():
        raise InvariantViolated(
            f"center {w} is the pinned transversal pick of its block; "
            f"its star would be trivial"
        )
    overlap = forbidden & set(forced.values())
    if overlap:
        raise InvariantViolated(
            f"agreement and avoidance constraints clash on {sorted(overlap)}"
        )
    tprime = max_partial_it(
        g,
        forced=forced,
        forbidden_vertices=forbidden,
        minimize_degree_of=w,
        budget=budget,
    )
    if tprime.size != len(T):
        raise InvariantViolated(
            f"constrained transversal has size {tprime.size}, expected {len(T)}; "
            f"the re-optimized pick is not globally maximum"
        )
    return tprime.vertices()


def _claim_checks(
    g: PartitionedGraph, I: frozenset[int], T: frozenset[int], root: int
) -> None:
    """The structural facts the decomposition proof derives for the
    terminal pair; any failure means the hypotheses or the implementation
    are broken, so it is raised loudly rather than returned."""
    r = g.r
    active = {g.block_of[v] for v in I}
    if len(active) != r:
        raise InvariantViolated(f"only {len(active)} of {r} blocks are active")
    if not T <= I:
        raise InvariantViolated("transversal vertices escaped the matched set")
    if len(T) != r - 1 or len(I - T) != r - 1:
        raise InvariantViolated(
            f"expected {r - 1} transversal vertices and {r - 1} centers, "
            f"got {len(T)} and {len(I - T)}"
        )
    for w in I - T:
        if len(g.adj[w] & T) != 1:
            raise InvariantViolated(f"center {w} has T-degree {len(g.adj[w] & T)}")
    for v in I:
        if len(g.adj[v] & I) != 1:
            raise InvariantViolated(f"matched vertex {v} lacks a unique partner")
    bg = block_graph(g, I)
    if len(bg.active) != r or not bg.is_tree():
        raise InvariantViolated("block graph of the matching is not a tree on all blocks")
    for v in range(g.n):
        if len(g.adj[v] & I) != 1:
            raise InvariantViolated(
                f"vertex {v} has {len(g.adj[v] & I)} neighbors in the matching"
            )
    if T & g.blocks[root]:
        raise InvariantViolated("the root block is not transversal-free")


def build_imc(
    g: PartitionedGraph, root: int, budget: SearchBudget | None = None
) -> IMCWitness:
    """Grow an induced matching configuration rooted at `root`.

    Start from a maximum partial IT avoiding the root block (which exists
    by block-minimality) and an empty I.  Repeatedly pick the lowest-id
    eligible center w, re-optimize the transversal to T′ under the
    agreement/avoidance constraints while minimizing w's degree into it,
    and absorb the star of w into I.  When no center remains, the claim
    checks certify the result is an IMC.
    """
    if not (0 <= root < g.r):
        raise InvalidInput(f"block index {root} out of range")
    keep = [v for v in range(g.n) if g.block_of[v] != root]
    if not keep:
        raise InvalidInput("the root block is the whole graph")
    sub, remap = induced(g, keep)
    res = find_it(sub, budget)
    if res.status is ITStatus.BUDGET:
        raise BudgetExceededError(res.nodes, "initial transversal search exhausted")
    if res.status is not ITStatus.FOUND:
        raise InvariantViolated(
            "no transversal avoids the root block; the graph is not block-minimal"
        )
    back = {new: old for old, new in remap.items()}
    assert res.transversal is not None
    T = frozenset(back[v] for v in res.transversal.vertices())
    I: frozenset[int] = frozenset()
    while True:
        w = _next_center(g, I, root)
        if w is None:
            break
        T = _constrained_transversal(g, I, T, w, budget)
        leaves = g.adj[w] & T
        if not leaves:
            raise InvariantViolated(
                f"center {w} acquired no transversal neighbors: trivial star"
            )
        grown = I | {w} | leaves
        if not len(grown) > len(I):
            raise InvariantViolated("the matched set stopped growing")
        I = grown
    _claim_checks(g, I, T, root)
    return IMCWitness(FeasiblePair(I, T), root)


# == walking the IMC down to a trapped side =================================


def _component_of(g: PartitionedGraph, v: int) -> Component:
    for comp in components(g):
        if v in comp.vertices:
            return comp
    raise InvariantViolated(f"vertex {v} in no component")


def find_side_in_block(
    g: PartitionedGraph, i: int, budget: SearchBudget | None = None
) -> Component:
    """A complete bipartite component with one side inside block i, found
    by the IMC walk (see the module docstring); the direct-scan oracle
    :func:`scan_side_in_block` must agree on existence."""
    wit = build_imc(g, i, budget)
    I = set(wit.pair.I)
    T = set(wit.pair.T)
    blk = set(g.blocks[i])
    prev_deg: int | None = None
    for _ in range(g.r + 1):
        bg = block_graph(g, I)
        deg_i = bg.degree(i)
        if prev_deg is not None and deg_i != prev_deg - 1:
            raise InvariantViolated(
                f"root degree went {prev_deg} → {deg_i}; the swap must shed exactly one"
            )
        centers = sorted(v for v in I - T if g.block_of[v] == i)
        if not centers:
            raise InvariantViolated("the root block lost all matching centers")
        w = centers[0]
        partners = g.adj[w] & T
        if len(partners) != 1:
            raise InvariantViolated(f"center {w} has {len(partners)} partners")
        (v,) = partners
        if deg_i <= 1:
            # Root is a leaf: switching the lone root edge re-roots the tree
            # at the partner's block and leaves the root block as the sole
            # descendant below v, so v's whole neighborhood sits inside it.
            if len(centers) != 1:
                raise InvariantViolated("leaf root with multiple matching centers")
            if not g.adj[v] <= blk:
                raise InvariantViolated(
                    f"leaf switch failed: vertex {v} has neighbors outside block {i}"
                )
            comp = _component_of(g, v)
            if not _nontrivial_cb(comp):
                raise InvariantViolated("exposed component is not complete bipartite")
            if not (comp.side_a <= blk or comp.side_b <= blk):
                raise InvariantViolated("exposed side is not inside the root block")
            return comp
        if g.adj[v] <= blk:
            comp = _component_of(g, v)
            if not _nontrivial_cb(comp):
                raise InvariantViolated("exposed component is not complete bipartite")
            return comp
        x = min(g.adj[v] - blk)
        if g.block_of[x] == g.block_of[v]:
            raise InvariantViolated(
                "swap target shares the partner's block, which would yield an IT"
            )
        if g.adj[x] & I != {v}:
            raise InvariantViolated(
                f"swap target {x} is not matched solely to {v}"
            )
        I.remove(w)
        I.add(x)
        bg2 = block_graph(g, I)
        if len(bg2.active) != g.r or not bg2.is_tree():
            raise InvariantViolated("swap broke the block-graph tree")
        prev_deg = deg_i
    raise InvariantViolated("IMC walk failed to terminate")


# == recursive decomposition =================================================


def _peel(g: PartitionedGraph) -> tuple[list, list[int], list[int]]:
    """Recursive engine: returns (steps, mapping, order) where replaying
    `steps` yields a graph whose vertex u is g's vertex mapping[u] and
    whose block at position p is g's block order[p]."""
    if g.r == 2:
        return [Base(g)], list(range(g.n)), [0, 1]
    try:
        ci, i, j = find_two_block_component(g)
    except NotFound as exc:
        raise InvariantViolated(
            f"recursion step found no two-block component: {exc}"
        ) from exc
    comp = components(g)[ci]
    side_a, side_b = sorted(comp.side_a), sorted(comp.side_b)
    doomed = comp.vertices
    merged = sorted((g.blocks[i] | g.blocks[j]) - doomed)
    if not merged:
        raise InvariantViolated(
            "the two host blocks are exactly the peeled component"
        )
    keep_sorted = sorted(set(range(g.n)) - doomed)
    remap = {old: new for new, old in enumerate(keep_sorted)}
    kept = set(keep_sorted)
    edges = [
        (remap[u], remap[v]) for (u, v) in g.edges if u in kept and v in kept
    ]
    blocks = [
        sorted(remap[v] for v in g.blocks[k]) for k in range(g.r) if k not in (i, j)
    ] + [[remap[v] for v in merged]]
    inner = PartitionedGraph.build(len(keep_sorted), edges, blocks)
    sub_steps, sub_map, sub_order = _peel(inner)
    a, b = len(side_a), len(side_b)
    payload = PartitionedGraph.build(
        a + b,
        [(x, a + y) for x in range(a) for y in range(b)],
        [range(a), range(a, a + b)],
    )
    rp = inner.r
    s = sub_order.index(rp - 1)
    block_i = g.blocks[i]
    dist: dict[int, int] = {}
    for u in range(inner.n):
        orig = keep_sorted[sub_map[u]]
        if orig in g.blocks[i] or orig in g.blocks[j]:
            dist[u] = rp + (0 if orig in block_i else 1)
    steps = sub_steps + [Join(payload, s, dist)]
    mapping = [keep_sorted[sub_map[u]] for u in range(inner.n)] + side_a + side_b
    outer_of_inner = [k for k in range(g.r) if k not in (i, j)]
    order = [outer_of_inner[sub_order[p]] for p in range(rp) if p != s] + [i, j]
    return steps, mapping, order


def decompose_to_certificate(
    g: PartitionedGraph, budget: SearchBudget | None = None
) -> Certificate:
    """Unwind a graph satisfying (a)–(c) into a certificate of join steps
    over complete bipartite bases.

    Each level peels off a complete bipartite component trapped in two
    blocks and merges the remainder of those blocks; the corresponding
    join step re-attaches it, distributing the merged block's vertices
    back to the side each came from.  The certificate's relabeling sends
    replayed vertex ids to the input's ids; replaying and relabeling
    reproduces the input up to block order.
    """
    a, b, c = check_abc(g, budget)
    if not (a and b and c):
        raise PreconditionFailed(
            f"decomposition hypotheses not met: block-minimal={a}, "
            f"complete-bipartite-union={b}, components-r-minus-1={c}"
        )
    steps, mapping, _ = _peel(g)
    cert = Certificate(tuple(steps), relabeling=tuple(mapping))
    if not replays_to(cert, g):
        raise InvariantViolated("decomposition certificate does not replay to the input")
    return cert
