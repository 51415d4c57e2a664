"""Certificates: replay semantics, full verification, serialization, the
recorded-relabeling convention, and loud failure on corrupted inputs."""

from __future__ import annotations

import json

import pytest

from noit.certify import (
    AddEdges,
    Base,
    BlowUp,
    Certificate,
    DeleteVertices,
    EdgeDelete,
    Join,
    cert_canonical_bytes,
    cert_from_json_dict,
    cert_to_json_dict,
    cross_validate,
    load_certificate,
    replay_certificate,
    replays_to,
    save_certificate,
    verify_certificate,
)
from noit.construct import (
    gen_ahhs_cx,
    gen_complete_bipartite,
    gen_cycle_partition,
    gen_szabo_tardos,
    gen_three_cycles,
)
from noit.errors import (
    BaseBudgetExceeded,
    BaseHasIT,
    MalformedCertificate,
    StepPreconditionFailed,
)
from noit.graph import PartitionedGraph, canonical_bytes, relabel_vertices
from noit.transversal import ITStatus, SearchBudget, find_it


def k11() -> PartitionedGraph:
    return PartitionedGraph.build(2, [(0, 1)], [[0], [1]])


# == replay semantics ========================================================


def test_join_step_union_indexing_and_none_convention() -> None:
    explicit = Certificate((Base(k11()), Join(added=k11(), s=3, dist={3: 0})))
    implicit = Certificate((Base(k11()), Join(added=k11(), s=None, dist={3: 0})))
    g1, g2 = replay_certificate(explicit), replay_certificate(implicit)
    assert canonical_bytes(g1) == canonical_bytes(g2)
    assert g1.n == 4 and g1.r == 3
    assert [sorted(b) for b in g1.blocks] == [[0, 3], [1], [2]]


def test_replay_determinism() -> None:
    _, cert = gen_cycle_partition(3)
    assert canonical_bytes(replay_certificate(cert)) == canonical_bytes(
        replay_certificate(cert)
    )


def test_all_step_types_replay() -> None:
    cert = Certificate(
        (
            Base(k11()),
            Join(added=k11(), s=None, dist={3: 0}),
            AddEdges(frozenset({(0, 2)})),
            EdgeDelete(u=0, v=2, k=1, F=frozenset({(1, 2)})),
            DeleteVertices(frozenset({3})),
            BlowUp(2),
        )
    )
    g = replay_certificate(cert)
    assert g.n == 6 and g.r == 3


# == verification ============================================================


def test_verify_generated_certificates() -> None:
    for g, cert in (gen_szabo_tardos(2), gen_three_cycles(4, 4, 4)):
        final, report = verify_certificate(cert)
        assert canonical_bytes(final) == canonical_bytes(replay_certificate(cert))
        assert replays_to(cert, g)
        assert len(report) == len(cert.steps)
        assert report[0]["type"] == "base" and report[0]["base_nodes"] > 0
        assert report[-1]["n"] == g.n and report[-1]["r"] == g.r


def test_verify_rejects_base_with_transversal() -> None:
    cert = Certificate((Base(PartitionedGraph.build(2, [], [[0], [1]])),))
    with pytest.raises(BaseHasIT):
        verify_certificate(cert)


def test_verify_rejects_join_payload_with_transversal() -> None:
    cert = Certificate(
        (
            Base(k11()),
            Join(added=PartitionedGraph.build(2, [], [[0], [1]]), s=None, dist={3: 0}),
        )
    )
    with pytest.raises(BaseHasIT):
        verify_certificate(cert)


def test_verify_requires_leading_base() -> None:
    cert = Certificate((Join(added=k11(), s=None, dist={3: 0}),))
    with pytest.raises(MalformedCertificate):
        verify_certificate(cert)
    with pytest.raises(MalformedCertificate):
        replay_certificate(cert)


def test_step_precondition_failures_carry_the_index() -> None:
    bad_dist = Certificate((Base(k11()), Join(added=k11(), s=3, dist={3: 2})))
    with pytest.raises(StepPreconditionFailed) as info:
        verify_certificate(bad_dist)
    assert info.value.step_index == 1

    absent_edge = Certificate(
        (
            Base(k11()),
            Join(added=k11(), s=None, dist={3: 0}),
            EdgeDelete(u=0, v=2, k=1, F=frozenset({(1, 2)})),
        )
    )
    with pytest.raises(StepPreconditionFailed) as info:
        replay_certificate(absent_edge)
    assert info.value.step_index == 2


def test_base_budget_exhaustion_is_loud() -> None:
    _, cert = gen_szabo_tardos(2)
    with pytest.raises(BaseBudgetExceeded):
        verify_certificate(cert, SearchBudget(max_nodes=1))


def test_end_to_end_soundness_on_small_replays() -> None:
    """Certificates that verify really do name no-IT graphs: confirmed by
    exhaustive search on every replayed graph small enough to afford it."""
    certs = [
        gen_szabo_tardos(1)[1],
        gen_szabo_tardos(2)[1],
        gen_cycle_partition(1)[1],
        gen_cycle_partition(3)[1],
        gen_three_cycles(4, 4, 4)[1],
        gen_ahhs_cx(2)[1],
    ]
    for cert in certs:
        g, _ = verify_certificate(cert)
        assert g.n <= 30
        assert find_it(g).status is ITStatus.NONE


def test_cross_validate_agreement() -> None:
    g, cert = gen_szabo_tardos(2)
    out = cross_validate(cert)
    assert out["agrees"] is True
    assert out["n"] == g.n and out["r"] == g.r
    assert out["search_nodes"] > 0
    assert len(out["steps"]) == len(cert.steps)
    assert "transversal" not in out


# == relabeling ==============================================================


def test_relabeling_changes_replay_target() -> None:
    g, cert = gen_szabo_tardos(2)
    perm = list(reversed(range(g.n)))
    relabeled = Certificate(cert.steps, relabeling=tuple(perm))
    assert replays_to(relabeled, relabel_vertices(g, perm))
    assert not replays_to(relabeled, g)
    assert replays_to(cert, g)


# == serialization ===========================================================


def test_json_roundtrip_preserves_everything() -> None:
    for _, cert in (gen_cycle_partition(2), gen_szabo_tardos(2)):
        again = cert_from_json_dict(cert_to_json_dict(cert))
        assert cert_canonical_bytes(again) == cert_canonical_bytes(cert)
        assert canonical_bytes(replay_certificate(again)) == canonical_bytes(
            replay_certificate(cert)
        )
    with_relab = Certificate(cert.steps, relabeling=tuple(range(replay_certificate(cert).n)))
    again = cert_from_json_dict(cert_to_json_dict(with_relab))
    assert again.relabeling == with_relab.relabeling


def test_file_roundtrip(tmp_path) -> None:
    _, cert = gen_three_cycles(4, 4, 4)
    path = tmp_path / "cert.json"
    save_certificate(cert, str(path))
    assert cert_canonical_bytes(load_certificate(str(path))) == cert_canonical_bytes(cert)


def test_malformed_json_is_rejected(tmp_path) -> None:
    with pytest.raises(MalformedCertificate):
        cert_from_json_dict([])
    with pytest.raises(MalformedCertificate):
        cert_from_json_dict({"version": 99, "steps": []})
    with pytest.raises(MalformedCertificate):
        cert_from_json_dict({"version": 1, "steps": []})
    d = cert_to_json_dict(gen_szabo_tardos(1)[1])
    d["relabeling"] = ["a"]
    with pytest.raises(MalformedCertificate):
        cert_from_json_dict(d)
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(MalformedCertificate):
        load_certificate(str(path))


# == fault injection =========================================================


def corrupt_first_join(cert: Certificate, mutate) -> Certificate:
    steps = list(cert.steps)
    for i, step in enumerate(steps):
        if isinstance(step, Join):
            steps[i] = mutate(step)
            return Certificate(tuple(steps))
    raise AssertionError("certificate has no Join step")


def test_corrupted_certificates_never_pass_silently() -> None:
    g, cert = gen_szabo_tardos(2)

    def reroute(step: Join) -> Join:
        d = dict(step.dist)
        v = min(d)
        d[v] = (d[v] + 1) % 2 if d[v] < 2 else 0
        return Join(step.added, step.s, d)

    def drop_entry(step: Join) -> Join:
        d = dict(step.dist)
        d.pop(min(d))
        return Join(step.added, step.s, d)

    for mutate in (reroute, drop_entry):
        bad = corrupt_first_join(cert, mutate)
        try:
            final, _ = verify_certificate(bad)
        except (StepPreconditionFailed, MalformedCertificate):
            continue  # loud rejection
        assert not replays_to(bad, g)  # or a visibly different graph
        assert canonical_bytes(final) != canonical_bytes(g)
