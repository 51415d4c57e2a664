"""Replayable certificates that a partitioned graph has no independent
transversal.

A certificate is a straight-line program: a small ``Base`` graph whose no-IT
property is checked exhaustively, followed by steps that each preserve the
no-IT property for a structural reason:

* ``Join`` — disjoint union with a small payload graph in which one block of
  the union is dissolved and its vertices are distributed into blocks on the
  opposite side.  If neither side has an IT, neither does the result: an IT
  of the result would induce a transversal of both sides, since the vertex
  chosen in each enlarged block either belongs to that block's own side or
  covers the dissolved block of the other side.  The payload itself is a
  base case and is checked exhaustively.
* ``EdgeDelete`` — remove one cross-block edge uv and connect every vertex
  of a third block V_k to u or v.  An IT of the result either avoids both u
  and v (so it is an IT of the original minus uv, hence of the original) or
  contains one of them, say u; the vertex chosen in V_k is now adjacent to
  u, a contradiction.  Hence no IT is created.
* ``AddEdges`` — supergraphs have fewer independent sets, so adding edges
  cannot create an IT.
* ``DeleteVertices`` — an IT of an induced subgraph on the restricted
  partition is an IT of the original graph, so deleting vertices (keeping
  every block nonempty) cannot create one.
* ``BlowUp`` — replace each vertex by m independent copies and each edge by
  K_{m,m}.  Projecting an IT of the blow-up onto original vertices yields an
  IT of the original graph, so no IT is created.

Verifying a certificate therefore proves that the final replayed graph has
no IT, at the cost of exhaustive search only on the small base pieces.

Indexing convention for ``Join``: with the current state occupying block
slots ``0..r_state-1`` and the payload occupying ``r_state..r_state+r_p-1``
(payload vertex ids offset by the state's vertex count), ``s`` names the
dissolved slot on either side and ``dist`` maps each vertex of that block
(by its id in the combined graph) to a slot on the opposite side.  ``s``
defaults to the payload's last block.  The resulting block order is the
combined order with slot ``s`` removed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import (
    BaseBudgetExceeded,
    BaseHasIT,
    BudgetExceededError,
    InvalidInput,
    MalformedCertificate,
    StepPreconditionFailed,
)
from .graph import (
    PartitionedGraph,
    canonical_bytes,
    from_json_dict,
    relabel_vertices,
    to_json_dict,
)
from .transversal import ITStatus, SearchBudget, find_it

CERT_VERSION = 1

#: Node budget for each exhaustive base-case check.  Base pieces are small
#: by design; a certificate whose base check exceeds this is rejected (not
#: trusted).
DEFAULT_BASE_MAX_NODES = 2_000_000


# == step types =============================================================


@dataclass(frozen=True)
class Base:
    """Initial graph; its no-IT property is checked by exhaustive search."""

    graph: PartitionedGraph


@dataclass(frozen=True)
class Join:
    """Disjoint union with `added`, dissolving combined block slot `s` into
    opposite-side slots per `dist` (see module docstring for indexing)."""

    added: PartitionedGraph
    s: int | None  # None = last payload block
    dist: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dist", dict(self.dist))


@dataclass(frozen=True)
class EdgeDelete:
    """Delete cross-block edge uv, connect every vertex of block k to u or v
    via the replacement edges F."""

    u: int
    v: int
    k: int
    F: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "F", frozenset((min(x, y), max(x, y)) for (x, y) in self.F)
        )


@dataclass(frozen=True)
class AddEdges:
    extra: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "extra", frozenset((min(x, y), max(x, y)) for (x, y) in self.extra)
        )


@dataclass(frozen=True)
class DeleteVertices:
    doomed: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "doomed", frozenset(self.doomed))


@dataclass(frozen=True)
class BlowUp:
    m: int


CertStep = Union[Base, Join, EdgeDelete, AddEdges, DeleteVertices, BlowUp]


@dataclass(frozen=True)
class Certificate:
    """An ordered no-IT construction: one Base step followed by transforms.

    ``relabeling``, when present, maps each vertex id of the replayed graph
    to a vertex id of some reference graph (used by decomposition to record
    how the replay's labels line up with the graph it was derived from).
    """

    steps: tuple[CertStep, ...]
    relabeling: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.relabeling is not None:
            object.__setattr__(self, "relabeling", tuple(self.relabeling))


# == JSON serialization =====================================================
#
# Graphs embedded in certificates keep their in-memory block order: slot
# indices in Join steps refer to that order, so reordering blocks (as the
# canonical graph-file encoder does) would corrupt distributions.


def _step_to_json(step: CertStep) -> dict:
    if isinstance(step, Base):
        return {"type": "base", "graph": to_json_dict(step.graph, canonical_blocks=False)}
    if isinstance(step, Join):
        d: dict = {
            "type": "join",
            "added": to_json_dict(step.added, canonical_blocks=False),
            "dist": {str(v): b for v, b in sorted(step.dist.items())},
        }
        if step.s is not None:
            d["s"] = step.s
        return d
    if isinstance(step, EdgeDelete):
        return {
            "type": "edge_delete",
            "u": step.u,
            "v": step.v,
            "k": step.k,
            "F": [list(e) for e in sorted(step.F)],
        }
    if isinstance(step, AddEdges):
        return {"type": "add_edges", "extra": [list(e) for e in sorted(step.extra)]}
    if isinstance(step, DeleteVertices):
        return {"type": "delete_vertices", "doomed": sorted(step.doomed)}
    if isinstance(step, BlowUp):
        return {"type": "blow_up", "m": step.m}
    raise MalformedCertificate(f"unknown step object {step!r}")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise MalformedCertificate(msg)


def _step_from_json(d: object, index: int) -> CertStep:
    _require(isinstance(d, dict), f"step {index}: not an object")
    assert isinstance(d, dict)
    kind = d.get("type")
    try:
        if kind == "base":
            return Base(from_json_dict(d["graph"]))
        if kind == "join":
            dist_raw = d["dist"]
            _require(isinstance(dist_raw, dict), f"step {index}: dist not an object")
            dist = {int(v): int(b) for v, b in dist_raw.items()}
            s = d.get("s")
            return Join(from_json_dict(d["added"]), None if s is None else int(s), dist)
        if kind == "edge_delete":
            F = frozenset((int(x), int(y)) for x, y in d["F"])
            return EdgeDelete(int(d["u"]), int(d["v"]), int(d["k"]), F)
        if kind == "add_edges":
            return AddEdges(frozenset((int(x), int(y)) for x, y in d["extra"]))
        if kind == "delete_vertices":
            return DeleteVertices(frozenset(int(v) for v in d["doomed"]))
        if kind == "blow_up":
            return BlowUp(int(d["m"]))
    except MalformedCertificate:
        raise
    except InvalidInput as exc:
        raise MalformedCertificate(f"step {index}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCertificate(f"step {index}: {exc!r}") from exc
    raise MalformedCertificate(f"step {index}: unknown step type {kind!r}")


def cert_to_json_dict(cert: Certificate) -> dict:
    out: dict = {
        "version": CERT_VERSION,
        "steps": [_step_to_json(s) for s in cert.steps],
    }
    if cert.relabeling is not None:
        out["relabeling"] = list(cert.relabeling)
    return out


def cert_from_json_dict(d: object) -> Certificate:
    _require(isinstance(d, dict), "certificate JSON is not an object")
    assert isinstance(d, dict)
    _require(d.get("version") == CERT_VERSION, "unsupported certificate version")
    steps_raw = d.get("steps")
    _require(isinstance(steps_raw, list) and len(steps_raw) > 0, "empty step list")
    steps = tuple(_step_from_json(s, i) for i, s in enumerate(steps_raw))
    relab = d.get("relabeling")
    if relab is not None:
        _require(
            isinstance(relab, list) and all(isinstance(x, int) for x in relab),
            "relabeling must be a list of integers",
        )
        relab = tuple(relab)
    return Certificate(steps, relab)


def cert_canonical_bytes(cert: Certificate) -> bytes:
    return (
        json.dumps(cert_to_json_dict(cert), sort_keys=True, separators=(",", ":"))
        + "\n"
    ).encode("ascii")


def save_certificate(cert: Certificate, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(cert_canonical_bytes(cert))


def load_certificate(path: str) -> Certificate:
    with open(path, "rb") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedCertificate(f"invalid JSON: {exc}") from exc
    return cert_from_json_dict(data)


# == structural replay ======================================================


def _apply_step(g: PartitionedGraph | None, step: CertStep, index: int) -> PartitionedGraph:
    # Imported here: construct depends on the step types above, so importing
    # it at module load would be circular.
    from . import construct

    if isinstance(step, Base):
        if index != 0:
            raise MalformedCertificate(f"step {index}: Base allowed only at step 0")
        return step.graph
    if g is None:
        raise MalformedCertificate("step 0 must be a Base step")
    try:
        if isinstance(step, Join):
            s = step.s if step.s is not None else g.r + step.added.r - 1
            return construct.union_join(g, step.added, s, step.dist)
        if isinstance(step, EdgeDelete):
            plan = construct.EdgeDeletePlan(step.u, step.v, step.k, step.F)
            return construct.edge_delete(g, plan)
        if isinstance(step, AddEdges):
            return construct.add_edges(g, step.extra)
        if isinstance(step, DeleteVertices):
            return construct.delete_vertices(g, step.doomed)[0]
        if isinstance(step, BlowUp):
            return construct.blow_up(g, step.m)
    except InvalidInput as exc:
        raise StepPreconditionFailed(index, str(exc)) from exc
    raise MalformedCertificate(f"step {index}: unknown step type")


def replay_certificate(cert: Certificate) -> PartitionedGraph:
    """Replay the construction, enforcing structural preconditions but
    skipping the exhaustive base-case searches."""
    g: PartitionedGraph | None = None
    for i, step in enumerate(cert.steps):
        g = _apply_step(g, step, i)
    assert g is not None
    return g


def _check_base_piece(
    piece: PartitionedGraph, index: int, budget: SearchBudget
) -> int:
    res = find_it(piece, budget)
    if res.status is ITStatus.FOUND:
        raise BaseHasIT(
            f"step {index}: base piece has an independent transversal "
            f"{sorted(res.transversal.as_dict().items()) if res.transversal else ''}"
        )
    if res.status is ITStatus.BUDGET:
        raise BaseBudgetExceeded(
            f"step {index}: base check exceeded {budget.max_nodes} nodes"
        )
    return res.nodes


def verify_certificate(
    cert: Certificate, base_budget: SearchBudget | None = None
) -> tuple[PartitionedGraph, list[dict]]:
    """Replay and fully check a certificate.

    Every Base graph and every Join payload is verified to have no IT by
    exhaustive search under `base_budget`; every structural step
    precondition is enforced.  On success the final graph is guaranteed to
    have no independent transversal.  Returns the graph and a per-step
    report.  Raises BaseHasIT, BaseBudgetExceeded, StepPreconditionFailed,
    or MalformedCertificate.
    """
    budget = base_budget or SearchBudget(max_nodes=DEFAULT_BASE_MAX_NODES)
    if not cert.steps or not isinstance(cert.steps[0], Base):
        raise MalformedCertificate("certificate must start with a Base step")
    g: PartitionedGraph | None = None
    report: list[dict] = []
    for i, step in enumerate(cert.steps):
        entry: dict = {"step": i, "type": type(step).__name__.lower()}
        if isinstance(step, Base):
            entry["base_nodes"] = _check_base_piece(step.graph, i, budget)
        elif isinstance(step, Join):
            entry["base_nodes"] = _check_base_piece(step.added, i, budget)
        g = _apply_step(g, step, i)
        entry["n"] = g.n
        entry["r"] = g.r
        report.append(entry)
    assert g is not None
    return g, report


def cross_validate(
    cert: Certificate,
    budget: SearchBudget | None = None,
    base_budget: SearchBudget | None = None,
) -> dict:
    """Verify the certificate, then independently search the final graph for
    an IT.  Agreement means the search proved none exists.  A returned
    transversal would demonstrate a fault in the step checker itself.
    Raises BudgetExceededError if the search cannot finish.
    """
    g, report = verify_certificate(cert, base_budget)
    res = find_it(g, budget)
    if res.status is ITStatus.BUDGET:
        raise BudgetExceededError(res.nodes, "cross-validation search exceeded budget")
    out: dict = {
        "agrees": res.status is ITStatus.NONE,
        "n": g.n,
        "r": g.r,
        "search_nodes": res.nodes,
        "steps": report,
    }
    if res.status is ITStatus.FOUND and res.transversal is not None:
        out["transversal"] = res.transversal.to_json_list()
    return out


def replays_to(cert: Certificate, g: PartitionedGraph) -> bool:
    """True iff the certificate replays to `g`: after applying the
    recorded relabeling (if any), the canonical bytes — vertex ids, edges,
    block contents, with block order normalized — must match exactly."""
    final = replay_certificate(cert)
    if cert.relabeling is not None:
        final = relabel_vertices(final, cert.relabeling)
    return canonical_bytes(final) == canonical_bytes(g)
