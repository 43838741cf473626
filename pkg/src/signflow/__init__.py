"""Constructive (2k+1, k)-flows on highly connected signed multigraphs."""

from .analysis import (
    UnbalanceReport,
    classify_unbalance,
    edge_connectivity,
    improving_cut_switch,
    min_cut,
    min_negative_switch,
    theorem_applies,
    verify_claim1,
)
from .balanced import BalancedCirculation, build_balanced_circulation, segment_account, theta, verify_balanced
from .core import (
    NEGATIVE,
    POSITIVE,
    BiOrientation,
    Circulation,
    Edge,
    SignedGraph,
    boundary,
    switch,
    switch_circulation,
    switch_orientation,
)
from .decompose import ClosedWalk, TreePacking, euler_circuit, pack_trees, parity_subgraph_in_tree
from .errors import (
    BalanceError,
    CertificateMismatch,
    GraphError,
    HypothesisError,
    InvariantViolation,
    NotEulerianError,
    NotZBoundaryError,
    OrientationInfeasibleError,
    PackingInfeasibleError,
    ParseError,
    RepairStuckError,
    ScaleBoundError,
    SearchBudgetError,
    SignflowError,
    StageError,
)
from .oracle import FlowNumberResult, circular_flow_number, exists_pq_flow, switch_class_invariance_check, verify_pq_flow
from .orient import (
    BoundaryTarget,
    OrientationCertificate,
    find_beta_orientation,
    modulo_orientation,
    normalise_then_orient,
    signed_beta_orientation,
    special_flow,
)
from .pipeline import FlowCertificate, RepairState, combine, construct_flow, reachable_set, repair_step

__version__ = "0.1.0"
