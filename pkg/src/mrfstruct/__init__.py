"""Markov-network structure learning from samples.

The central routine is :func:`gs_mple`, a greedy grow/shrink search over
edge sets scored by conditional mutual information, with plug-in and
mixed k-NN estimators behind a common interface. Baseline learners,
synthetic generators with known graphs, and a threshold-sweep harness for
ROC evaluation round out the package.
"""

from .core import (
    Column,
    ColumnKind,
    Dataset,
    EdgeSet,
    GroundTruth,
    SelfLoopError,
    continuous_dataset,
    discrete_dataset,
)
from .estimators import (
    CachedEstimator,
    EstimatorConfig,
    EstimatorMismatchError,
    cmi,
    cmi_sets,
    mi,
    mi_knn_mixed,
    mi_plugin,
)
from .evaluation import (
    CellResult,
    CurvePoint,
    RecoveryMetrics,
    SweepError,
    SweepResult,
    recovery,
    roc_sweep,
    write_sweep,
)
from .io import (
    read_dataset_csv,
    read_edges,
    write_dataset_csv,
    write_edges,
    write_trace,
)
from .kernels import backend_name
from .learners import (
    LEARNERS,
    LearnerConfig,
    NumericError,
    TraceStep,
    chow_liu,
    grow_score,
    gs_mple,
    gsmn,
    iamb,
    learn,
    objective_j,
    shrink_score,
)
from .synthgen import (
    GENERATORS,
    GeneratorSpec,
    gen_gaussian,
    gen_hmm_continuous,
    gen_hmm_discrete,
    gen_ising,
    generate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "Column",
    "ColumnKind",
    "Dataset",
    "EdgeSet",
    "GroundTruth",
    "SelfLoopError",
    "continuous_dataset",
    "discrete_dataset",
    "read_dataset_csv",
    "write_dataset_csv",
    "read_edges",
    "write_edges",
    "write_trace",
    "CachedEstimator",
    "EstimatorConfig",
    "EstimatorMismatchError",
    "mi",
    "mi_plugin",
    "mi_knn_mixed",
    "cmi",
    "cmi_sets",
    "LearnerConfig",
    "TraceStep",
    "NumericError",
    "gs_mple",
    "iamb",
    "gsmn",
    "chow_liu",
    "learn",
    "LEARNERS",
    "grow_score",
    "shrink_score",
    "objective_j",
    "GeneratorSpec",
    "generate",
    "GENERATORS",
    "gen_ising",
    "gen_hmm_discrete",
    "gen_gaussian",
    "gen_hmm_continuous",
    "RecoveryMetrics",
    "recovery",
    "CellResult",
    "CurvePoint",
    "SweepResult",
    "SweepError",
    "roc_sweep",
    "write_sweep",
]
