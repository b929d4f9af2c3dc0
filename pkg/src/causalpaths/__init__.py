"""Causal path analysis for temporal contact networks.

Provides parsing of time-stamped contact data, extraction of causal
(time-respecting) paths under a waiting-time bound, higher-order Markov
model order selection, and accessibility / causal-fidelity analysis,
plus a CLI producing machine-readable reports and figures.
"""

from .accessibility import (
    AccessibilityResult,
    BooleanMatrix,
    connectivity_thresholds,
    static_accessibility,
    temporal_unfold,
)
from .errors import (
    CausalPathsError,
    InternalInvariantError,
    ParseError,
    PathExplosionError,
    ValidationError,
)
from .ingest import (
    ContactEvent,
    GapStatistics,
    TemporalNetwork,
    edge_activity,
    expand_interval,
    gap_statistics,
    load_contacts,
    normalize_time,
    parse_contacts,
    write_contacts,
)
from .markov import (
    KOrderModel,
    KOrderNetwork,
    MultiOrderModel,
    OrderSelection,
    chi_squared_sf,
    degrees_of_freedom,
    fit_order,
    korder_network,
    multilayer_log_likelihood,
    select_optimal_order,
)
from .paths import (
    CausalDag,
    CausalPathEnsemble,
    DirectedLinkInstance,
    SweepResult,
    build_causal_dag,
    delta_sweep,
    extract_maximal_paths,
    length_distribution,
    read_ensemble,
    subpath_counts,
    write_ensemble,
)

__version__ = "0.1.0"

__all__ = [
    "AccessibilityResult",
    "BooleanMatrix",
    "CausalDag",
    "CausalPathEnsemble",
    "CausalPathsError",
    "ContactEvent",
    "DirectedLinkInstance",
    "GapStatistics",
    "InternalInvariantError",
    "KOrderModel",
    "KOrderNetwork",
    "MultiOrderModel",
    "OrderSelection",
    "ParseError",
    "PathExplosionError",
    "SweepResult",
    "TemporalNetwork",
    "ValidationError",
    "build_causal_dag",
    "chi_squared_sf",
    "connectivity_thresholds",
    "degrees_of_freedom",
    "delta_sweep",
    "edge_activity",
    "expand_interval",
    "extract_maximal_paths",
    "fit_order",
    "gap_statistics",
    "korder_network",
    "length_distribution",
    "load_contacts",
    "multilayer_log_likelihood",
    "normalize_time",
    "parse_contacts",
    "read_ensemble",
    "select_optimal_order",
    "static_accessibility",
    "subpath_counts",
    "temporal_unfold",
    "write_contacts",
    "write_ensemble",
]
