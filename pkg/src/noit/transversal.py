"""Searching for independent transversals.

An independent transversal (IT) of a partitioned graph picks one vertex per
block, pairwise nonadjacent.  Deciding existence is NP-complete in general,
so every search here is budgeted and returns a three-way outcome: Found (with
a witness), None (exhaustively proven absent), or budget exceeded.  Callers
must branch on the status, never coerce a result to a boolean: a "no" under
an exhausted budget proves nothing.

The engine is a backtracking search over blocks with forward checking
(choosing a vertex deletes its neighbors from the candidate sets of
unassigned blocks), minimum-remaining-values block ordering, and immediate
failure when a block's candidate set empties.  Candidate sets are Python-int
bitmasks.  Because a vertex's neighbors all lie in its own connected
component, groups of blocks touched by disjoint sets of components are
independent subproblems; the search splits on such groups both at the top
level and again at branch nodes as forward checking disconnects the residual
problem.  That re-splitting is what makes exhaustive "no IT" proofs feasible
on the larger construction outputs, whose components are tiny.

max_partial_it maximizes the number of blocks covered by a partial IT,
subject to forced assignments and forbidden vertices, optionally minimizing
the number of picked neighbors of a distinguished vertex (cardinality first,
degree second).  On graphs whose components are all complete bipartite an
independent set inside a component is a subset of one side, so the search
enumerates a side per component and covers blocks greedily; a generic
branch-and-bound handles everything else.  Ties are broken toward the
lexicographically smallest assignment, making results reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import BudgetExceededError, InvalidConstraint, InvalidInput
from .graph import PartitionedGraph, components, induced

DEFAULT_MAX_NODES = 20_000_000


@dataclass(frozen=True)
class SearchBudget:
    """Node and optional wall-clock limits for a search.

    A "node" is one attempted vertex assignment (or, in max_partial_it, one
    explored choice point).
    """

    max_nodes: int = DEFAULT_MAX_NODES
    max_millis: int | None = None

    def __post_init__(self) -> None:
        if self.max_nodes < 1:
            raise InvalidInput("budget must allow at least one node")


class ITStatus(Enum):
    FOUND = "found"
    NONE = "none"
    BUDGET = "budget"


@dataclass(frozen=True)
class Transversal:
    """A partial independent transversal as sorted (block, vertex) pairs."""

    assignment: tuple[tuple[int, int], ...]

    @staticmethod
    def of(pairs: Iterable[tuple[int, int]] | Mapping[int, int]) -> "Transversal":
        if isinstance(pairs, Mapping):
            items = pairs.items()
        else:
            items = list(pairs)
        return Transversal(tuple(sorted(items)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)

    @property
    def size(self) -> int:
        return len(self.assignment)

    def blocks(self) -> frozenset[int]:
        return frozenset(b for b, _ in self.assignment)

    def vertices(self) -> frozenset[int]:
        return frozenset(v for _, v in self.assignment)

    def covers(self, block: int) -> bool:
        return any(b == block for b, _ in self.assignment)

    def get(self, block: int) -> int | None:
        for b, v in self.assignment:
            if b == block:
                return v
        return None

    def is_valid(self, g: PartitionedGraph) -> bool:
        """Valid partial IT: picks lie in their blocks, one per block,
        pairwise nonadjacent."""
        seen_blocks = set()
        verts = []
        for b, v in self.assignment:
            if not (0 <= b < g.r and 0 <= v < g.n):
                return False
            if v not in g.blocks[b] or b in seen_blocks:
                return False
            seen_blocks.add(b)
            verts.append(v)
        for i, u in enumerate(verts):
            for w in verts[i + 1 :]:
                if w in g.adj[u]:
                    return False
        return True

    def is_full(self, g: PartitionedGraph) -> bool:
        return self.is_valid(g) and self.size == g.r

    def to_json_list(self) -> list[list[int]]:
        return [list(p) for p in self.assignment]


@dataclass(frozen=True)
class SearchResult:
    status: ITStatus
    transversal: Transversal | None
    nodes: int


class _OutOfBudget(Exception):
    pass


class _Ticker:
    """Shared node counter with budget enforcement."""

    __slots__ = ("nodes", "max_nodes", "deadline")

    def __init__(self, budget: SearchBudget):
        self.nodes = 0
        self.max_nodes = budget.max_nodes
        self.deadline = (
            time.monotonic() + budget.max_millis / 1000.0
            if budget.max_millis is not None
            else None
        )

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _OutOfBudget
        if self.deadline is not None and self.nodes % 4096 == 0:
            if time.monotonic() > self.deadline:
                raise _OutOfBudget


def _block_clusters(g: PartitionedGraph, comp_masks: list[int]) -> list[list[int]]:
    """Partition block indices into groups coupled by shared components."""
    parent = list(range(g.r))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    block_mask = [0] * g.r
    for b, blk in enumerate(g.blocks):
        m = 0
        for v in blk:
            m |= 1 << v
        block_mask[b] = m
    for cm in comp_masks:
        first = -1
        for b in range(g.r):
            if block_mask[b] & cm:
                if first < 0:
                    first = b
                else:
                    ra, rb = find(first), find(b)
                    if ra != rb:
                        parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for b in range(g.r):
        groups.setdefault(find(b), []).append(b)
    return [groups[k] for k in sorted(groups, key=lambda k: min(groups[k]))]


class _Engine:
    """One IT search (find or count) over a partitioned graph."""

    def __init__(self, g: PartitionedGraph, budget: SearchBudget):
        self.g = g
        self.ticker = _Ticker(budget)
        comps = components(g)
        self.comp_masks: list[int] = []
        self.comp_of = [0] * g.n
        for ci, comp in enumerate(comps):
            m = 0
            for v in comp.vertices:
                m |= 1 << v
                self.comp_of[v] = ci
            self.comp_masks.append(m)
        self.assignment: dict[int, int] = {}

    # -- helpers ------------------------------------------------------------

    def _initial_cands(self, blocks: list[int]) -> dict[int, int]:
        out = {}
        for b in blocks:
            m = 0
            for v in self.g.blocks[b]:
                m |= 1 << v
            out[b] = m
        return out

    def _split(self, cand: dict[int, int], unassigned: list[int]) -> list[list[int]]:
        """Regroup the unassigned blocks by the components still feeding them."""
        parent = {b: b for b in unassigned}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        alive = 0
        for b in unassigned:
            alive |= cand[b]
        for cm in self.comp_masks:
            if not (cm & alive):
                continue
            first = -1
            for b in unassigned:
                if cand[b] & cm:
                    if first < 0:
                        first = b
                    else:
                        ra, rb = find(first), find(b)
                        if ra != rb:
                            parent[rb] = ra
        groups: dict[int, list[int]] = {}
        for b in unassigned:
            groups.setdefault(find(b), []).append(b)
        return [groups[k] for k in sorted(groups, key=lambda k: min(groups[k]))]

    # -- existence ----------------------------------------------------------

    def solve(self, cand: dict[int, int], unassigned: list[int]) -> bool:
        if not unassigned:
            return True
        # MRV with immediate failure on an emptied block; unit assignments
        # are followed without branching.
        best, best_cnt = -1, 1 << 62
        for b in unassigned:
            c = cand[b].bit_count()
            if c == 0:
                return False
            if c < best_cnt:
                best, best_cnt = b, c
        if best_cnt > 1 and len(unassigned) >= 4:
            groups = self._split(cand, unassigned)
            if len(groups) > 1:
                for grp in groups:
                    if not self.solve(cand, grp):
                        return False
                return True
        rest = [b for b in unassigned if b != best]
        mask = cand[best]
        while mask:
            v = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            self.ticker.tick()
            nbr = self.g.adj_mask[v]
            trail = []
            ok = True
            for b in rest:
                old = cand[b]
                new = old & ~nbr
                if new != old:
                    cand[b] = new
                    trail.append((b, old))
                    if new == 0:
                        ok = False
            if ok:
                self.assignment[best] = v
                if self.solve(cand, rest):
                    return True
                del self.assignment[best]
            for b, old in trail:
                cand[b] = old
        return False

    # -- counting -----------------------------------------------------------

    def count(self, cand: dict[int, int], unassigned: list[int]) -> int:
        if not unassigned:
            return 1
        best, best_cnt = -1, 1 << 62
        for b in unassigned:
            c = cand[b].bit_count()
            if c == 0:
                return 0
            if c < best_cnt:
                best, best_cnt = b, c
        if best_cnt > 1 and len(unassigned) >= 4:
            groups = self._split(cand, unassigned)
            if len(groups) > 1:
                total = 1
                for grp in groups:
                    total *= self.count(cand, grp)
                    if total == 0:
                        return 0
                return total
        rest = [b for b in unassigned if b != best]
        mask = cand[best]
        total = 0
        while mask:
            v = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            self.ticker.tick()
            nbr = self.g.adj_mask[v]
            trail = []
            dead = False
            for b in rest:
                old = cand[b]
                new = old & ~nbr
                if new != old:
                    cand[b] = new
                    trail.append((b, old))
                    if new == 0:
                        dead = True
            if not dead:
                total += self.count(cand, rest)
            for b, old in trail:
                cand[b] = old
        return total


def find_it(g: PartitionedGraph, budget: SearchBudget | None = None) -> SearchResult:
    """Search for an independent transversal.

    Returns Found with a witness, None only when the search space was
    exhausted, or BUDGET with the node count when the budget ran out first.
    """
    budget = budget or SearchBudget()
    eng = _Engine(g, budget)
    try:
        for cluster in _block_clusters(g, eng.comp_masks):
            cand = eng._initial_cands(cluster)
            if not eng.solve(cand, cluster):
                return SearchResult(ITStatus.NONE, None, eng.ticker.nodes)
        t = Transversal.of(eng.assignment)
        return SearchResult(ITStatus.FOUND, t, eng.ticker.nodes)
    except _OutOfBudget:
        return SearchResult(ITStatus.BUDGET, None, eng.ticker.nodes)


def count_its(g: PartitionedGraph, budget: SearchBudget | None = None) -> int:
    """Number of independent transversals; raises BudgetExceededError."""
    budget = budget or SearchBudget()
    eng = _Engine(g, budget)
    try:
        total = 1
        for cluster in _block_clusters(g, eng.comp_masks):
            cand = eng._initial_cands(cluster)
            total *= eng.count(cand, cluster)
            if total == 0:
                return 0
        return total
    except _OutOfBudget:
        raise BudgetExceededError(eng.ticker.nodes, "count_its budget exceeded")


def is_block_minimal(g: PartitionedGraph, budget: SearchBudget | None = None) -> bool:
    """True iff g has no IT but deleting any single block leaves one.

    Raises BudgetExceededError if any of the r+1 searches is inconclusive.
    """
    budget = budget or SearchBudget()
    res = find_it(g, budget)
    if res.status is ITStatus.BUDGET:
        raise BudgetExceededError(res.nodes, "minimality: search on g inconclusive")
    if res.status is ITStatus.FOUND:
        return False
    for b in range(g.r):
        keep = [v for v in range(g.n) if g.block_of[v] != b]
        sub, _ = induced(g, keep)
        sub_res = find_it(sub, budget)
        if sub_res.status is ITStatus.BUDGET:
            raise BudgetExceededError(
                sub_res.nodes, f"minimality: search on g minus block {b} inconclusive"
            )
        if sub_res.status is ITStatus.NONE:
            return False
    return True


# == maximum partial independent transversals ===============================


@dataclass
class _PartialProblem:
    g: PartitionedGraph
    forbidden: frozenset[int]
    w: int | None
    ticker: _Ticker
    # vertices allowed anywhere (not forbidden)
    allowed: list[frozenset[int]] = field(init=False)

    def __post_init__(self) -> None:
        self.allowed = [
            frozenset(v for v in blk if v not in self.forbidden) for blk in self.g.blocks
        ]


def _normalize_forced(
    g: PartitionedGraph,
    forced: Transversal | Mapping[int, int] | None,
    forbidden: frozenset[int],
) -> dict[int, int]:
    if forced is None:
        return {}
    pairs = forced.as_dict() if isinstance(forced, Transversal) else dict(forced)
    t = Transversal.of(pairs)
    if not t.is_valid(g):
        raise InvalidConstraint("forced assignment is not a valid partial transversal")
    if t.vertices() & forbidden:
        raise InvalidConstraint("forced assignment uses a forbidden vertex")
    return pairs


class _GenericMax:
    """Branch and bound over blocks in ascending order (any graph)."""

    def __init__(self, p: _PartialProblem, pins: dict[int, int]):
        self.p = p
        self.pins = pins

    def best(self, need_size: int | None, deg_cap: int | None) -> tuple[int, int] | None:
        """Best (size, deg) reachable, or None if need_size unreachable.

        When need_size is given, stops as soon as some completion reaches it
        (with deg ≤ deg_cap if that is given); the exact returned deg is then
        the best found before stopping, which is only used as a feasibility
        answer.
        """
        g = self.p.g
        self.best_pair: tuple[int, int] | None = None
        self.need = need_size
        self.cap = deg_cap
        order = list(range(g.r))

        def remaining_bound(idx: int, chosen: list[int]) -> int:
            cnt = 0
            for b in order[idx:]:
                if b in self.pins:
                    cnt += 1
                    continue
                for v in self.p.allowed[b]:
                    if all(v not in g.adj[u] for u in chosen):
                        cnt += 1
                        break
            return cnt

        def dfs(idx: int, chosen: list[int], size: int, deg: int) -> bool:
            self.p.ticker.tick()
            if self.cap is not None and deg > self.cap:
                return False
            if idx == len(order):
                pair = (size, deg)
                if self.best_pair is None or (-pair[0], pair[1]) < (
                    -self.best_pair[0],
                    self.best_pair[1],
                ):
                    self.best_pair = pair
                return self.need is not None and size >= self.need
            # optimistic bound
            if self.need is not None and size + remaining_bound(idx, chosen) < self.need:
                return False
            b = order[idx]
            cands: list[int]
            if b in self.pins:
                cands = [self.pins[b]]
            else:
                cands = sorted(self.p.allowed[b])
            for v in cands:
                if any(v in self.p.g.adj[u] for u in chosen):
                    if b in self.pins:
                        return False
                    continue
                extra = 1 if (self.p.w is not None and v in g.adj[self.p.w]) else 0
                if dfs(idx + 1, chosen + [v], size + 1, deg + extra):
                    return True
            if b in self.pins:
                return False
            return dfs(idx + 1, chosen, size, deg)

        dfs(0, [], 0, 0)
        return self.best_pair


class _CBMax:
    """Side-per-component optimizer for complete-bipartite unions.

    Within such a graph an independent set meets each component inside one
    side, so a partial IT is: a side choice per component, plus one allowed
    vertex of a chosen side per covered block.  Coverage of distinct blocks
    never conflicts (a vertex lies in exactly one block), hence maximizing
    cardinality reduces to maximizing the number of blocks meeting the chosen
    sides.  The neighbor count of w only accrues on blocks all of whose
    usable candidates are neighbors of w.
    """

    def __init__(self, p: _PartialProblem, comps, pins: dict[int, int]):
        self.p = p
        g = p.g
        self.pins = pins
        pinned_comp_side: dict[int, int] = {}
        comp_of: dict[int, int] = {}
        for ci, c in enumerate(comps):
            for v in c.vertices:
                comp_of[v] = ci
        for b, v in pins.items():
            ci = comp_of[v]
            side = 0 if v in comps[ci].side_a else 1
            prev = pinned_comp_side.get(ci)
            if prev is not None and prev != side:
                raise InvalidConstraint("pinned vertices straddle both sides of a component")
            pinned_comp_side[ci] = side
        self.comps = comps
        self.comp_of = comp_of
        self.pinned_comp_side = pinned_comp_side
        # For each (component, side): per-block usable candidates.
        g = p.g
        self.free_blocks = [b for b in range(g.r) if b not in pins]
        wadj = g.adj[p.w] if p.w is not None else frozenset()
        # cover[ci][side] = set of free blocks coverable; soft[ci][side] =
        # those coverable while avoiding N(w).
        self.cover: list[list[set[int]]] = []
        self.soft: list[list[set[int]]] = []
        for ci, c in enumerate(comps):
            cov = [set(), set()]
            soft = [set(), set()]
            for side_idx, side in enumerate((c.side_a, c.side_b)):
                for v in side:
                    if v in p.forbidden:
                        continue
                    b = g.block_of[v]
                    if b in pins:
                        continue
                    cov[side_idx].add(b)
                    if v not in wadj:
                        soft[side_idx].add(b)
            self.cover.append(cov)
            self.soft.append(soft)

    def best(self, need_size: int | None, deg_cap: int | None) -> tuple[int, int] | None:
        p = self.p
        base_size = len(self.pins)
        base_deg = 0
        if p.w is not None:
            base_deg = sum(1 for v in self.pins.values() if v in p.g.adj[p.w])
        relevant = [
            ci
            for ci in range(len(self.comps))
            if self.cover[ci][0] or self.cover[ci][1]
        ]
        free: list[int] = []
        fixed: list[tuple[int, int]] = []
        for ci in relevant:
            if ci in self.pinned_comp_side:
                fixed.append((ci, self.pinned_comp_side[ci]))
            else:
                free.append(ci)
        # Blocks covered (hard) and coverable-avoiding-w (soft) per decision.
        self.best_pair: tuple[int, int] | None = None
        need = need_size
        cap = deg_cap

        def finish(cov: set[int], soft: set[int]) -> bool:
            size = base_size + len(cov)
            deg = base_deg + len(cov - soft)
            pair = (size, deg)
            if self.best_pair is None or (-pair[0], pair[1]) < (
                -self.best_pair[0],
                self.best_pair[1],
            ):
                self.best_pair = pair
            return (
                need is not None
                and size >= need
                and (cap is None or deg <= cap)
            )

        # pot[i] = union of blocks coverable by free components after i,
        # for an admissible ceiling at each depth.
        pot: list[set[int]] = []
        acc: set[int] = set()
        for ci in reversed(free):
            acc = acc | self.cover[ci][0] | self.cover[ci][1]
            pot.append(acc)
        pot.reverse()
        pot.append(set())  # depth == len(free)

        def dfs(idx: int, cov: set[int], soft: set[int]) -> bool:
            p.ticker.tick()
            if need is not None and base_size + len(cov | pot[idx]) < need:
                return False
            if idx == len(free):
                return finish(cov, soft)
            ci = free[idx]
            for side in (0, 1):
                if dfs(idx + 1, cov | self.cover[ci][side], soft | self.soft[ci][side]):
                    return True
            return False

        cov0: set[int] = set()
        soft0: set[int] = set()
        for ci, side in fixed:
            cov0 |= self.cover[ci][side]
            soft0 |= self.soft[ci][side]
        dfs(0, cov0, soft0)
        return self.best_pair


def max_partial_it(
    g: PartitionedGraph,
    forced: Transversal | Mapping[int, int] | None = None,
    forbidden_vertices: Iterable[int] | None = None,
    minimize_degree_of: int | None = None,
    budget: SearchBudget | None = None,
) -> Transversal:
    """Maximum-cardinality partial IT extending `forced`, avoiding
    `forbidden_vertices`, then minimizing the number of picked neighbors of
    `minimize_degree_of`; ties broken to the lexicographically smallest
    assignment.  Raises InvalidConstraint on inconsistent constraints and
    BudgetExceededError when the budget runs out.
    """
    budget = budget or SearchBudget()
    forbidden = frozenset(forbidden_vertices or ())
    for v in forbidden:
        if not (0 <= v < g.n):
            raise InvalidConstraint(f"forbidden vertex {v} out of range")
    w = minimize_degree_of
    if w is not None and not (0 <= w < g.n):
        raise InvalidConstraint(f"degree vertex {w} out of range")
    pins = _normalize_forced(g, forced, forbidden)
    ticker = _Ticker(budget)
    prob = _PartialProblem(g, forbidden, w, ticker)
    comps = components(g)
    cb = all(c.is_complete_bipartite for c in comps)

    def make(pin_map: dict[int, int]):
        if cb:
            return _CBMax(prob, comps, pin_map)
        return _GenericMax(prob, pin_map)

    try:
        best = make(pins).best(None, None)
        assert best is not None
        size = best[0]
        deg_target: int | None = None
        if w is not None:
            for t in range(0, g.r + 1):
                probe = make(pins).best(size, t)
                if probe is not None and probe[0] >= size and probe[1] <= t:
                    deg_target = t
                    break
        # lexicographic extraction: fix blocks ascending, smallest vertex
        # first, keeping (size, deg_target) reachable.
        chosen = dict(pins)
        for b in range(g.r):
            if b in chosen:
                continue
            for v in sorted(prob.allowed[b]):
                trial = dict(chosen)
                trial[b] = v
                try:
                    probe = make(trial).best(size, deg_target)
                except InvalidConstraint:
                    continue
                if probe is not None and probe[0] >= size and (
                    deg_target is None or probe[1] <= deg_target
                ):
                    chosen = trial
                    break
        if len(chosen) != size:
            raise AssertionError("lexicographic extraction lost the optimum")
        return Transversal.of(chosen)
    except _OutOfBudget:
        raise BudgetExceededError(ticker.nodes, "max_partial_it budget exceeded")
