"""List-coloring instances and their cover graphs.

A list-coloring instance is a graph H with a set L(x) of allowed colors per
vertex.  Finding a proper coloring from the lists is exactly finding an
independent transversal in the *cover graph*: one vertex (x, c) per allowed
pair, edges between (x, c) and (y, c) when xy ∈ E(H), and one block
V_x = {(x, c) : c ∈ L(x)} per H-vertex.  A proper list coloring picks one
color per vertex with no monochromatic edge — precisely one cover vertex
per block with no edge inside the pick.

Cover graphs are characterized by two checkable conditions:

(a) multiplicity one — every component meets every block at most once
    (each component of a cover graph is one color class restricted to a
    connected region, so a block V_x contains at most its (x, c)); and
(b) adjacency consistency — for components C, C′ and blocks V_i, V_j, the
    pairs of C and of C′ spanning V_i, V_j are adjacent or not *together*
    (all such pairs realize the single fact "ij ∈ E(H)").

:func:`recover_instance` inverts :func:`cover_graph` on graphs satisfying
both: H gets one vertex per block, adjacent when any cross edge exists,
and one fresh color per component, listed on the blocks the component
meets.  The round trip is the identity up to block-respecting isomorphism,
which for graphs satisfying (a) and (b) amounts to comparing the multiset
of component block-sets and the per-block-pair adjacency values —
:func:`blockwise_isomorphic` does exactly that.

The package's interest in cover graphs: a cover graph with maximum degree
d (= the instance's maximum color degree), all blocks of size ≥ d+1, and
no IT is a counterexample to the conjecture that lists of size d+1 always
suffice; ``gen_list_coloring_cx`` builds one, and this module converts it
into the uncolorable instance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InvalidInput, InvalidTransversal, NotCoverGraph
from .graph import Edge, PartitionedGraph, canon_edge, components
from .transversal import Transversal

Color = int | str

_VERSION = 1


def _color_key(c: Color) -> tuple:
    # ints sort before strings so mixed lists still order deterministically
    return (isinstance(c, str), c)


@dataclass(frozen=True)
class ListInstance:
    """A simple graph on vertices 0..n-1 with a nonempty color list per
    vertex.  Lists are stored sorted; edges canonical."""

    n: int
    edges: frozenset[Edge]
    lists: tuple[tuple[Color, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInput("instance must have at least one vertex")
        if len(self.lists) != self.n:
            raise InvalidInput("need exactly one color list per vertex")
        for x, lst in enumerate(self.lists):
            if not lst:
                raise InvalidInput(f"vertex {x} has an empty list")
            if len(set(lst)) != len(lst):
                raise InvalidInput(f"vertex {x} repeats a color")
        for (u, v) in self.edges:
            if not (0 <= u < v < self.n):
                raise InvalidInput(f"edge ({u},{v}) is not canonical/in range")

    @staticmethod
    def build(
        n: int,
        edges: Iterable[tuple[int, int]],
        lists: Iterable[Iterable[Color]],
    ) -> "ListInstance":
        es = frozenset(canon_edge(u, v) for (u, v) in edges)
        ls = tuple(tuple(sorted(lst, key=_color_key)) for lst in lists)
        return ListInstance(n, es, ls)

    def colors(self) -> list[Color]:
        out: set[Color] = set()
        for lst in self.lists:
            out |= set(lst)
        return sorted(out, key=_color_key)


def max_color_degree(inst: ListInstance) -> int:
    """Maximum over pairs (x, c) with c ∈ L(x) of the number of neighbors y
    of x that also carry c; equals the cover graph's maximum degree."""
    adj: list[set[int]] = [set() for _ in range(inst.n)]
    for (u, v) in inst.edges:
        adj[u].add(v)
        adj[v].add(u)
    best = 0
    for x in range(inst.n):
        for c in inst.lists[x]:
            best = max(best, sum(1 for y in adj[x] if c in inst.lists[y]))
    return best


# == the correspondence =====================================================


def _cover_ids(inst: ListInstance) -> dict[tuple[int, Color], int]:
    ids: dict[tuple[int, Color], int] = {}
    for x in range(inst.n):
        for c in inst.lists[x]:
            ids[(x, c)] = len(ids)
    return ids


def cover_graph(inst: ListInstance) -> PartitionedGraph:
    """The cover graph: vertices (x, c), edges between equal colors across
    H-edges, blocks V_x; vertex labels record the (x, c) provenance."""
    ids = _cover_ids(inst)
    edges = []
    for (x, y) in inst.edges:
        for c in inst.lists[x]:
            if c in inst.lists[y]:
                edges.append((ids[(x, c)], ids[(y, c)]))
    blocks = [
        [ids[(x, c)] for c in inst.lists[x]] for x in range(inst.n)
    ]
    labels = [""] * len(ids)
    for (x, c), v in ids.items():
        labels[v] = f"{x}:{c}"
    return PartitionedGraph.build(len(ids), edges, blocks, labels)


def check_list_cover_conditions(g: PartitionedGraph) -> tuple[bool, bool]:
    """(a) multiplicity one; (b) per block pair, all component-internal
    cross pairs carry one common adjacency value."""
    mult_one = True
    consistent = True
    value: dict[tuple[int, int], bool] = {}
    for comp in components(g):
        by_block: dict[int, list[int]] = {}
        for v in comp.vertices:
            by_block.setdefault(g.block_of[v], []).append(v)
        if any(len(vs) > 1 for vs in by_block.values()):
            mult_one = False
        touched = sorted(by_block)
        for a_idx, bi in enumerate(touched):
            for bj in touched[a_idx + 1 :]:
                vals = {
                    w in g.adj[v] for v in by_block[bi] for w in by_block[bj]
                }
                if len(vals) != 1:
                    consistent = False
                    continue
                val = vals.pop()
                if value.setdefault((bi, bj), val) != val:
                    consistent = False
    return (mult_one, consistent)


def recover_instance(g: PartitionedGraph) -> ListInstance:
    """Invert the cover construction: H on the blocks, adjacent when any
    cross edge exists; one fresh color per component (its index), listed
    on every block the component meets."""
    a, b = check_list_cover_conditions(g)
    if not (a and b):
        raise NotCoverGraph(
            f"not a cover graph: multiplicity-one={a}, adjacency-consistent={b}"
        )
    h_edges = set()
    for (u, v) in g.edges:
        bu, bv = g.block_of[u], g.block_of[v]
        if bu != bv:
            h_edges.add(canon_edge(bu, bv))
        else:
            raise NotCoverGraph("a cover graph cannot have an edge inside a block")
    lists: list[list[int]] = [[] for _ in range(g.r)]
    for ci, comp in enumerate(components(g)):
        for blk in {g.block_of[v] for v in comp.vertices}:
            lists[blk].append(ci)
    return ListInstance.build(g.r, h_edges, lists)


def it_to_coloring(inst: ListInstance, t: Transversal) -> dict[int, Color]:
    """Read a full IT of cover_graph(inst) back as a proper list coloring
    φ(x) = the color whose cover vertex the transversal picked in V_x."""
    ids = _cover_ids(inst)
    pair_of = {v: pair for pair, v in ids.items()}
    phi: dict[int, Color] = {}
    for x in range(inst.n):
        v = t.get(x)
        if v is None or v not in pair_of or pair_of[v][0] != x:
            raise InvalidTransversal(
                f"transversal does not pick a color vertex for {x}"
            )
        phi[x] = pair_of[v][1]
    for (x, y) in inst.edges:
        if phi[x] == phi[y]:
            raise InvalidTransversal(
                f"picks are not independent: edge ({x},{y}) is monochromatic"
            )
    return phi


def blockwise_isomorphic(g1: PartitionedGraph, g2: PartitionedGraph) -> bool:
    """Isomorphism respecting block indices, for graphs satisfying the
    cover conditions: such a graph is determined by the multiset of
    component block-sets plus the adjacency value of each realized block
    pair, so comparing those suffices."""
    for g in (g1, g2):
        a, b = check_list_cover_conditions(g)
        if not (a and b):
            raise NotCoverGraph("blockwise comparison requires cover-graph structure")
    if g1.n != g2.n or g1.r != g2.r:
        return False

    def profile(g: PartitionedGraph):
        block_sets = sorted(
            tuple(sorted({g.block_of[v] for v in comp.vertices}))
            for comp in components(g)
        )
        adj_value: dict[tuple[int, int], bool] = {}
        for comp in components(g):
            rep = {g.block_of[v]: v for v in comp.vertices}
            touched = sorted(rep)
            for i_idx, bi in enumerate(touched):
                for bj in touched[i_idx + 1 :]:
                    adj_value[(bi, bj)] = rep[bj] in g.adj[rep[bi]]
        return block_sets, adj_value

    return profile(g1) == profile(g2)


# == JSON ====================================================================


def instance_to_json_dict(inst: ListInstance) -> dict:
    return {
        "version": _VERSION,
        "n": inst.n,
        "edges": [list(e) for e in sorted(inst.edges)],
        "lists": [list(lst) for lst in inst.lists],
    }


def instance_from_json_dict(d: object) -> ListInstance:
    if not isinstance(d, dict):
        raise InvalidInput("instance JSON must be an object")
    if d.get("version") != _VERSION:
        raise InvalidInput(f"unsupported instance version {d.get('version')!r}")
    try:
        n = int(d["n"])
        edges = [(int(u), int(v)) for (u, v) in d["edges"]]
        lists = [list(lst) for lst in d["lists"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed instance JSON: {exc}") from exc
    for lst in lists:
        for c in lst:
            if not isinstance(c, (int, str)):
                raise InvalidInput(f"color {c!r} must be an integer or string")
    return ListInstance.build(n, edges, lists)


def instance_canonical_bytes(inst: ListInstance) -> bytes:
    return (
        json.dumps(instance_to_json_dict(inst), sort_keys=True, separators=(",", ":"))
        + "\n"
    ).encode()


def save_instance(inst: ListInstance, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(instance_canonical_bytes(inst))


def load_instance(path: str) -> ListInstance:
    with open(path, "rb") as fh:
        try:
            data = json.loads(fh.read().decode())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise InvalidInput(f"not valid JSON: {exc}") from exc
    return instance_from_json_dict(data)
