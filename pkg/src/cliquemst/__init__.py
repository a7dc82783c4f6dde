"""Congested-clique round simulation with deterministic MST sparsification."""

from .engine import (
    CapacityViolation,
    CongestedClique,
    LoadProfile,
    MessageWord,
    PhaseCounters,
    RoundLimitExceeded,
    RoutingMode,
    RunMetrics,
    WordTag,
    charged_round_cost,
    load_profile,
)
from .graph import (
    Edge,
    Forest,
    Graph,
    GraphFormatError,
    components,
    edge,
    edge_key,
    gen_graph,
    kruskal_forest,
    msf_oracle,
    prim_msf,
    read_graph,
    write_graph,
)
from .sparsify import (
    AmplifyResult,
    CertificateError,
    IterationStats,
    MstResult,
    PartitionScheme,
    SparsifyResult,
    SparsityCert,
    SparsityViolation,
    amplify,
    ceil_pow,
    check_sparse,
    coarsen,
    initial_partition,
    label_index,
    label_node,
    mst,
    mst_iteration_count,
    scheme_for,
    slack_for,
    sparse_edge_bound,
    sparsify,
)

__version__ = "0.1.0"
