"""Fuzzy-AHP weighting and TOPSIS ranking for heterogeneous network selection,
with a history attribute that damps ping-pong handoffs."""

from .exceptions import (
    ConfigError,
    ConsistencyGateFailure,
    DiagonalViolation,
    MatrixValidationError,
    NetSelectError,
    RangeViolation,
    ReciprocityViolation,
    ValidationError,
)
from .fahp import FuzzyAHPWeighter, SaatyGrade, consistency_ratio, derive_weights, scale_value, validate_matrix
from .selector import (
    CriteriaHierarchy,
    HistoryState,
    Mode,
    NetworkSelector,
    NetworkSnapshot,
    TrafficClass,
    build_decision_matrix,
    compose_weights,
    select,
    update_history,
)
from .simulator import SimulationConfig, compare_algorithms, count_handoffs, run_simulation, run_trial
from .topsis import CriterionSpec, DecisionMatrix, Direction, TOPSISRanker, rank

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConsistencyGateFailure", "CriteriaHierarchy", "CriterionSpec", "DecisionMatrix",
    "DiagonalViolation", "Direction", "FuzzyAHPWeighter", "HistoryState", "MatrixValidationError", "Mode",
    "NetSelectError", "NetworkSelector", "NetworkSnapshot", "RangeViolation", "ReciprocityViolation",
    "SaatyGrade", "SimulationConfig", "TOPSISRanker", "TrafficClass", "ValidationError",
    "build_decision_matrix", "compare_algorithms", "compose_weights", "consistency_ratio", "count_handoffs",
    "derive_weights", "rank", "run_simulation", "run_trial", "scale_value", "select", "update_history",
    "validate_matrix",
]
