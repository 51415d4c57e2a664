"""Vertex-partitioned graphs and their structural queries.

A partitioned graph is a finite simple graph together with an ordered
partition of its vertex set into nonempty *blocks* V_1, ..., V_r.  An
*independent transversal* (IT) picks exactly one vertex from every block so
that the picks are pairwise nonadjacent.  Everything in this package is about
graphs engineered to have **no** IT, so the structural queries here are the
vocabulary of that study: connected components and whether they are complete
bipartite, degree statistics relative to the partition, the block graph
obtained by contracting blocks over a vertex subset, connectivity of the
complement, and star-freeness.

Vertices are dense integers 0..n-1.  Edges are stored as (u, v) pairs with
u < v.  Blocks keep their construction order in memory; the canonical JSON
form sorts blocks by minimum member, so two graphs that differ only in block
order serialize identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvalidGraph, InvalidInput

Edge = tuple[int, int]


def canon_edge(u: int, v: int) -> Edge:
    if u == v:
        raise InvalidGraph(f"loop edge at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class PartitionedGraph:
    """Immutable simple graph with an ordered partition into blocks.

    Invariants (checked on construction): vertex ids are exactly 0..n-1,
    edges are loop-free canonical pairs within range, blocks are nonempty,
    pairwise disjoint and cover every vertex.  labels, when present, give one
    provenance string per vertex.
    """

    n: int
    edges: frozenset[Edge]
    blocks: tuple[frozenset[int], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidGraph("graph must have at least one vertex")
        seen: set[int] = set()
        for b, blk in enumerate(self.blocks):
            if not blk:
                raise InvalidGraph(f"block {b} is empty")
            if seen & blk:
                raise InvalidGraph(f"block {b} overlaps an earlier block")
            seen |= blk
        if seen != set(range(self.n)):
            raise InvalidGraph("blocks do not partition 0..n-1")
        for (u, v) in self.edges:
            if not (0 <= u < v < self.n):
                raise InvalidGraph(f"edge ({u},{v}) is not canonical/in range")
        if self.labels is not None and len(self.labels) != self.n:
            raise InvalidGraph("labels must have one entry per vertex")

    @staticmethod
    def build(
        n: int,
        edges: Iterable[tuple[int, int]],
        blocks: Iterable[Iterable[int]],
        labels: Iterable[str] | None = None,
    ) -> "PartitionedGraph":
        """Normalizing constructor: canonicalizes edge pairs, freezes blocks."""
        es = frozenset(canon_edge(u, v) for u, v in edges)
        bs = tuple(frozenset(b) for b in blocks)
        labs = tuple(labels) if labels is not None else None
        return PartitionedGraph(n, es, bs, labs)

    # -- derived views -----------------------------------------------------

    @property
    def r(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        out = [0] * self.n
        for b, blk in enumerate(self.blocks):
            for v in blk:
                out[v] = b
        return tuple(out)

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbr: list[set[int]] = [set() for _ in range(self.n)]
        for (u, v) in self.edges:
            nbr[u].add(v)
            nbr[v].add(u)
        return tuple(frozenset(s) for s in nbr)

    @cached_property
    def adj_mask(self) -> tuple[int, ...]:
        """Neighborhoods as bitmasks; the search engine lives on these."""
        nbr = [0] * self.n
        for (u, v) in self.edges:
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        return tuple(nbr)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return canon_edge(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


# == components =============================================================


@dataclass(frozen=True)
class Component:
    """A connected component, with its complete-bipartite analysis.

    If the component is complete bipartite, side_a is the side containing its
    minimum vertex id and side_b the other (empty for a single vertex).  If
    not, both sides are empty and the flag is false.
    """

    vertices: frozenset[int]
    is_complete_bipartite: bool
    side_a: frozenset[int]
    side_b: frozenset[int]


def components(g: PartitionedGraph) -> tuple[Component, ...]:
    """Connected components ordered by minimum vertex id."""
    seen = [False] * g.n
    out: list[Component] = []
    for start in range(g.n):
        if seen[start]:
            continue
        # BFS with 2-coloring; colors only matter if the component turns out
        # bipartite.
        color = {start: 0}
        queue = [start]
        seen[start] = True
        bipartite = True
        verts = [start]
        while queue:
            u = queue.pop()
            cu = color[u]
            for w in g.adj[u]:
                if w not in color:
                    color[w] = 1 - cu
                    seen[w] = True
                    verts.append(w)
                    queue.append(w)
                elif color[w] == cu:
                    bipartite = False
        vs = frozenset(verts)
        cb = False
        side_a: frozenset[int] = frozenset()
        side_b: frozenset[int] = frozenset()
        if bipartite:
            s0 = frozenset(v for v in verts if color[v] == 0)
            s1 = vs - s0
            ecount = sum(1 for (u, v) in g.edges if u in vs)
            if ecount == len(s0) * len(s1):
                cb = True
                if min(vs) in s0:
                    side_a, side_b = s0, s1
                else:
                    side_a, side_b = s1, s0
        out.append(Component(vs, cb, side_a, side_b))
    return tuple(out)


def is_cb_union(g: PartitionedGraph) -> bool:
    """True iff every component is complete bipartite."""
    return all(c.is_complete_bipartite for c in components(g))


def colorful_components(g: PartitionedGraph) -> list[int]:
    """Indices of components that meet every block (one vertex from each)."""
    out = []
    for idx, comp in enumerate(components(g)):
        touched = {g.block_of[v] for v in comp.vertices}
        if len(touched) == g.r:
            out.append(idx)
    return out


# == statistics =============================================================


@dataclass(frozen=True)
class GraphStats:
    max_degree: int
    local_degree: int
    multiplicity: int
    component_count: int
    block_sizes: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "local_degree": self.local_degree,
            "multiplicity": self.multiplicity,
            "component_count": self.component_count,
            "block_sizes": list(self.block_sizes),
        }


def graph_stats(g: PartitionedGraph) -> GraphStats:
    """Degree and partition statistics.

    local_degree is the maximum, over vertices v and blocks B not containing
    v, of |N(v) ∩ B|; multiplicity is the maximum, over components C and
    blocks B, of |C ∩ B|.  Any vertex's neighbors inside B are vertices of
    its own component inside B, so local_degree ≤ multiplicity always.
    """
    max_deg = max((len(g.adj[v]) for v in range(g.n)), default=0)
    local = 0
    for v in range(g.n):
        per_block: dict[int, int] = {}
        for w in g.adj[v]:
            b = g.block_of[w]
            if b != g.block_of[v]:
                per_block[b] = per_block.get(b, 0) + 1
        if per_block:
            local = max(local, max(per_block.values()))
    mult = 0
    comps = components(g)
    for comp in comps:
        per_block = {}
        for v in comp.vertices:
            b = g.block_of[v]
            per_block[b] = per_block.get(b, 0) + 1
        mult = max(mult, max(per_block.values()))
    return GraphStats(
        max_degree=max_deg,
        local_degree=local,
        multiplicity=mult,
        component_count=len(comps),
        block_sizes=tuple(len(b) for b in g.blocks),
    )


# == block graph ============================================================


@dataclass(frozen=True)
class BlockGraph:
    """Contraction of the blocks over a vertex subset I.

    Nodes are the *active* blocks (those meeting I); two distinct blocks are
    adjacent iff I contains an edge between them.  covered is U(I), the union
    of the active blocks as a vertex set.
    """

    active: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    covered: frozenset[int]

    def degree(self, block: int) -> int:
        return sum(1 for (a, b) in self.edges if a == block or b == block)

    def is_tree(self) -> bool:
        if not self.active:
            return True
        if len(self.edges) != len(self.active) - 1:
            return False
        # connectivity over the active nodes
        adj: dict[int, list[int]] = {a: [] for a in self.active}
        for (a, b) in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        stack = [self.active[0]]
        seen = {self.active[0]}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.active)


def block_graph(g: PartitionedGraph, chosen: Iterable[int]) -> BlockGraph:
    iset = set(chosen)
    for v in iset:
        if not (0 <= v < g.n):
            raise InvalidInput(f"vertex {v} out of range")
    active = sorted({g.block_of[v] for v in iset})
    bedges: set[tuple[int, int]] = set()
    for (u, v) in g.edges:
        if u in iset and v in iset:
            a, b = g.block_of[u], g.block_of[v]
            if a != b:
                bedges.add((min(a, b), max(a, b)))
    covered = frozenset(v for b in active for v in g.blocks[b])
    return BlockGraph(tuple(active), frozenset(bedges), covered)


# == complement and star-freeness ==========================================


def complement_connected(g: PartitionedGraph) -> bool:
    """True iff the complement graph of g is connected.

    BFS keeping the set of still-unreached vertices, so the running time is
    O(n + m) rather than O(n^2) on sparse complements.
    """
    if g.n == 1:
        return True
    unreached = set(range(1, g.n))
    frontier = [0]
    while frontier and unreached:
        u = frontier.pop()
        nbrs = g.adj[u]
        gained = [w for w in unreached if w not in nbrs]
        for w in gained:
            unreached.remove(w)
        frontier.extend(gained)
    return not unreached


def _has_independent_k(g: PartitionedGraph, cand_mask: int, k: int) -> bool:
    # branch on the lowest candidate: either take it (dropping its
    # neighbors) or skip it.
    if k <= 0:
        return True
    if cand_mask.bit_count() < k:
        return False
    v = (cand_mask & -cand_mask).bit_length() - 1
    take = cand_mask & ~g.adj_mask[v] & ~(1 << v)
    if _has_independent_k(g, take, k - 1):
        return True
    return _has_independent_k(g, cand_mask & ~(1 << v), k)


def is_star_free(g: PartitionedGraph, k: int) -> bool:
    """True iff g contains no induced K_{1,k}: no vertex has an independent
    set of size k inside its neighborhood."""
    if k < 2:
        raise InvalidInput("star order k must be at least 2")
    for v in range(g.n):
        if len(g.adj[v]) < k:
            continue
        if _has_independent_k(g, g.adj_mask[v], k):
            return False
    return True


# == induced subgraphs ======================================================


def induced(g: PartitionedGraph, keep: Iterable[int]) -> tuple[PartitionedGraph, dict[int, int]]:
    """Induced subgraph on `keep`, vertices re-densified in ascending order.

    Blocks that lose all their vertices are dropped; surviving blocks keep
    their relative order.  Returns the graph and the old→new id mapping.
    """
    keep_sorted = sorted(set(keep))
    if not keep_sorted:
        raise InvalidGraph("induced subgraph must keep at least one vertex")
    for v in keep_sorted:
        if not (0 <= v < g.n):
            raise InvalidInput(f"vertex {v} out of range")
    remap = {v: i for i, v in enumerate(keep_sorted)}
    kset = set(keep_sorted)
    edges = [(remap[u], remap[v]) for (u, v) in g.edges if u in kset and v in kset]
    blocks = []
    for blk in g.blocks:
        nb = sorted(remap[v] for v in blk if v in kset)
        if nb:
            blocks.append(nb)
    labels = None
    if g.labels is not None:
        labels = [g.labels[v] for v in keep_sorted]
    return PartitionedGraph.build(len(keep_sorted), edges, blocks, labels), remap


# == canonical JSON =========================================================

_VERSION = 1


def to_json_dict(g: PartitionedGraph, *, canonical_blocks: bool = True) -> dict:
    """Dictionary form: edges sorted lexicographically, block members
    ascending.  With `canonical_blocks` the blocks are also reordered by
    minimum member; certificate payloads disable this because their step
    indices refer to the in-memory block order."""
    blocks = [sorted(b) for b in g.blocks]
    if canonical_blocks:
        blocks.sort(key=lambda b: b[0])
    d: dict = {
        "version": _VERSION,
        "n": g.n,
        "edges": [list(e) for e in sorted(g.edges)],
        "blocks": blocks,
    }
    if g.labels is not None:
        d["labels"] = {str(v): g.labels[v] for v in range(g.n)}
    return d


def from_json_dict(d: object) -> PartitionedGraph:
    if not isinstance(d, dict):
        raise InvalidGraph("graph JSON must be an object")
    if d.get("version") != _VERSION:
        raise InvalidGraph(f"unsupported graph version {d.get('version')!r}")
    try:
        n = int(d["n"])
        edges = [(int(u), int(v)) for (u, v) in d["edges"]]
        blocks = [[int(v) for v in blk] for blk in d["blocks"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGraph(f"malformed graph JSON: {exc}") from exc
    labels = None
    if "labels" in d:
        raw = d["labels"]
        if not isinstance(raw, dict):
            raise InvalidGraph("labels must be an object")
        try:
            labels = [str(raw[str(v)]) for v in range(n)]
        except KeyError as exc:
            raise InvalidGraph(f"labels missing vertex {exc}") from exc
    return PartitionedGraph.build(n, edges, blocks, labels)


def canonical_bytes(g: PartitionedGraph) -> bytes:
    return (json.dumps(to_json_dict(g), sort_keys=True, separators=(",", ":")) + "\n").encode()


def save_graph(g: PartitionedGraph, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_bytes(g))


def load_graph(path: str) -> PartitionedGraph:
    with open(path, "rb") as fh:
        try:
            data = json.loads(fh.read().decode())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise InvalidGraph(f"not valid JSON: {exc}") from exc
    return from_json_dict(data)


def relabel_vertices(g: PartitionedGraph, new_ids: Iterable[int]) -> PartitionedGraph:
    """Rename vertex v to new_ids[v]; new_ids must be a permutation of
    0..n-1.  Block order is preserved."""
    perm = list(new_ids)
    if sorted(perm) != list(range(g.n)):
        raise InvalidInput("relabeling is not a permutation of the vertex ids")
    edges = [(perm[u], perm[v]) for (u, v) in g.edges]
    blocks = [sorted(perm[v] for v in b) for b in g.blocks]
    labels = None
    if g.labels is not None:
        by_new = {perm[v]: g.labels[v] for v in range(g.n)}
        labels = [by_new[v] for v in range(g.n)]
    return PartitionedGraph.build(g.n, edges, blocks, labels)


def with_canonical_blocks(g: PartitionedGraph) -> PartitionedGraph:
    """Same graph with blocks reordered into canonical (min-member) order."""
    order = sorted(range(g.r), key=lambda b: min(g.blocks[b]))
    return PartitionedGraph(g.n, g.edges, tuple(g.blocks[b] for b in order), g.labels)


def same_canonical_graph(a: PartitionedGraph, b: PartitionedGraph) -> bool:
    return canonical_bytes(a) == canonical_bytes(b)
