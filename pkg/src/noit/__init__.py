"""noit — constructions, certificates, and searches for vertex-partitioned
graphs with no independent transversal.

An *independent transversal* (IT) of a graph with a partition of its
vertices into blocks is an independent set picking exactly one vertex per
block.  This package builds the known extremal graphs that have no IT,
verifies that property both by exhaustive search and by replayable
certificates of no-IT-preserving construction steps, and decomposes
qualifying graphs (disjoint unions of complete bipartite graphs with r−1
components, block-minimal) back into such certificates.
"""

from .errors import (
    BadLength,
    BaseBudgetExceeded,
    BaseHasIT,
    BudgetExceededError,
    CertificateError,
    ConditionFails,
    EdgeAbsent,
    EmptiesBlock,
    InvalidConstraint,
    InvalidDistribution,
    InvalidGraph,
    InvalidInput,
    InvalidPlan,
    InvalidTransversal,
    InvariantViolated,
    LoopEdge,
    MalformedCertificate,
    NoitError,
    NotCoverGraph,
    NotDivisible,
    NotFound,
    NotPowerOfTwo,
    PreconditionFailed,
    SeedHasIT,
    StepPreconditionFailed,
)
from .graph import (
    BlockGraph,
    Component,
    GraphStats,
    PartitionedGraph,
    block_graph,
    canonical_bytes,
    colorful_components,
    complement_connected,
    components,
    from_json_dict,
    graph_stats,
    induced,
    is_cb_union,
    is_star_free,
    load_graph,
    relabel_vertices,
    same_canonical_graph,
    save_graph,
    to_json_dict,
    with_canonical_blocks,
)
from .transversal import (
    ITStatus,
    SearchBudget,
    SearchResult,
    Transversal,
    count_its,
    find_it,
    is_block_minimal,
    max_partial_it,
)
from .certify import (
    AddEdges,
    Base,
    BlowUp,
    Certificate,
    DeleteVertices,
    EdgeDelete,
    Join,
    cert_from_json_dict,
    cert_to_json_dict,
    cross_validate,
    load_certificate,
    replay_certificate,
    replays_to,
    save_certificate,
    verify_certificate,
)
from .construct import (
    Distribution,
    EdgeDeletePlan,
    StarFreeReport,
    add_edges,
    blow_up,
    check_block_sum_condition,
    delete_vertices,
    edge_delete,
    gen_ahhs_cx,
    gen_complete_bipartite,
    gen_cycle_partition,
    gen_general_szabo_tardos,
    gen_join_power,
    gen_list_coloring_cx,
    gen_locally_sparse,
    gen_multipartite_base,
    gen_star_free_cx,
    gen_szabo_tardos,
    gen_three_cycles,
    gen_yuster,
    join,
    union_join,
)
from .decompose import (
    FeasiblePair,
    IMCWitness,
    build_imc,
    check_abc,
    decompose_to_certificate,
    find_side_in_block,
    find_two_block_component,
    scan_side_in_block,
)
from .listcover import (
    ListInstance,
    blockwise_isomorphic,
    check_list_cover_conditions,
    cover_graph,
    instance_from_json_dict,
    instance_to_json_dict,
    it_to_coloring,
    load_instance,
    max_color_degree,
    recover_instance,
    save_instance,
)

__version__ = "0.1.0"
