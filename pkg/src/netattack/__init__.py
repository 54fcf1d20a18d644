"""netattack: attack and failure simulations on scale-free networks.

Build or load a graph, point an attack strategy at it, and read off the
robustness curve: giant-cluster fraction S and average in-cluster path
length d as functions of the removed fraction f, plus the crash point
where the network falls apart.
"""

from ._version import __version__
from .graph import ClusterReport, Graph, build_graph
from .generators import (
    BaParams,
    degree_histogram,
    generate_ba,
    load_edge_list,
    write_edge_list,
)
from .attacks import (
    AttackTrace,
    ProtectedRule,
    SnapshotCadence,
    StrategySpec,
    build_protected_set,
    run_attack,
)
from .metrics import (
    CrashCriterion,
    CurvePoint,
    MetricsRow,
    crash_threshold,
    curve_export,
    snapshot,
    write_curve_csv,
)
from .experiment import (
    CadencePolicy,
    ConfigError,
    ExperimentConfig,
    materialize_graph,
    run_experiment,
    run_trials,
    write_trace_csv,
)

__all__ = [
    "__version__",
    "Graph",
    "ClusterReport",
    "build_graph",
    "BaParams",
    "generate_ba",
    "load_edge_list",
    "write_edge_list",
    "degree_histogram",
    "ProtectedRule",
    "StrategySpec",
    "SnapshotCadence",
    "AttackTrace",
    "build_protected_set",
    "run_attack",
    "CrashCriterion",
    "MetricsRow",
    "CurvePoint",
    "snapshot",
    "crash_threshold",
    "curve_export",
    "write_curve_csv",
    "CadencePolicy",
    "ConfigError",
    "ExperimentConfig",
    "materialize_graph",
    "run_experiment",
    "run_trials",
    "write_trace_csv",
]
