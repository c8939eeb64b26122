"""Network selection: FAHP hierarchy composition, decision matrix assembly,
TOPSIS-based choice and the history feedback attribute.

Two modes exist. ``TOPSIS1`` ranks networks on six measured attributes.
``TOPSIS2`` adds a seventh, history, which carries each network's closeness
score from the previous decision point (1.0 before the first one).
"""

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import DimensionMismatch, MissingNetwork
from .fahp import check_consistency, derive_weights, validate_matrix
from .topsis import CriterionSpec, DecisionMatrix, Direction, rank

LEVEL1_CRITERIA = ("QoS", "Security", "Cost", "History")
LEVEL2_CRITERIA = ("AB", "D", "J", "L")
ATTRIBUTES = ("CB", "S", "AB", "D", "J", "L")
DIRECTIONS = {
    "CB": Direction.COST,
    "S": Direction.BENEFIT,
    "AB": Direction.BENEFIT,
    "D": Direction.COST,
    "J": Direction.COST,
    "L": Direction.COST,
    "H": Direction.BENEFIT,
}


class TrafficClass(Enum):
    BACKGROUND = "background"
    CONVERSATIONAL = "conversational"
    INTERACTIVE = "interactive"
    STREAMING = "streaming"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown traffic class {value!r}; expected one of {[c.value for c in cls]}") from None


class Mode(Enum):
    TOPSIS1 = "topsis1"
    TOPSIS2 = "topsis2"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown algorithm {value!r}; expected topsis1 or topsis2") from None

    @property
    def criteria(self):
        return ATTRIBUTES + ("H",) if self is Mode.TOPSIS2 else ATTRIBUTES

    @property
    def level1_size(self):
        return 4 if self is Mode.TOPSIS2 else 3


@dataclass(frozen=True)
class CriteriaHierarchy:
    """Level-1 matrix over (QoS, Security, Cost[, History]) and level-2 over (AB, D, J, L).

    ``history_weight`` overrides the composed level-1 weights in TOPSIS2
    mode: History gets exactly that weight and QoS/Security/Cost share the
    rest in proportion to the weights of the leading 3x3 block. A value of
    0 makes TOPSIS2 decide exactly like TOPSIS1 on the same base matrix.
    """

    level1: object
    level2_qos: object
    mode: Mode = Mode.TOPSIS2
    history_weight: float = None

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        object.__setattr__(self, "level1", validate_matrix(self.level1))
        object.__setattr__(self, "level2_qos", validate_matrix(self.level2_qos))
        if self.level1.n != self.mode.level1_size:
            raise DimensionMismatch(
                f"level-1 matrix is {self.level1.n}x{self.level1.n}, {self.mode.value} needs {self.mode.level1_size}"
            )
        if self.level2_qos.n != len(LEVEL2_CRITERIA):
            raise DimensionMismatch(f"level-2 QoS matrix must be 4x4, got {self.level2_qos.n}x{self.level2_qos.n}")
        if self.history_weight is not None and not 0.0 <= self.history_weight <= 1.0:
            raise ValueError(f"history_weight {self.history_weight} outside [0, 1]")

    @property
    def criteria(self):
        return self.mode.criteria


def level1_weights(h):
    w1, _ = check_consistency(h.level1, name="level1")
    if h.mode is Mode.TOPSIS2 and h.history_weight is not None:
        base = derive_weights(h.level1.entries[:3, :3])
        w1 = np.append((1.0 - h.history_weight) * base, h.history_weight)
    return w1


def compose_weights(h):
    """Global weights over ``h.criteria``: (CB, S, AB, D, J, L[, H]).

    QoS sub-criteria get ``W(QoS) * W(sub)``; Security, Cost and History pass
    their level-1 weight through.

    Raises
    ------
    ConsistencyGateFailure
        Either matrix has a consistency ratio of 0.1 or more.
    """
    w1 = level1_weights(h)
    w2, _ = check_consistency(h.level2_qos, name="level2_qos")
    qos, security, cost = w1[0], w1[1], w1[2]
    weights = [cost, security, *(qos * w2)]
    if h.mode is Mode.TOPSIS2:
        weights.append(w1[3])
    return dict(zip(h.criteria, (float(x) for x in weights)))


@dataclass(frozen=True)
class NetworkSnapshot:
    network: str
    cb: float
    s: float
    ab: float
    d: float
    j: float
    l: float  # noqa: E741

    def __post_init__(self):
        for name in ("cb", "s", "ab", "d", "j", "l"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{self.network}: attribute {name} = {value!r} must be finite and nonnegative")

    def values(self):
        return (self.cb, self.s, self.ab, self.d, self.j, self.l)


@dataclass(frozen=True)
class HistoryState:
    """Per-network history values, read-only."""

    values: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        vals = {str(k): float(v) for k, v in dict(self.values).items()}
        for net, v in vals.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"history value for {net} = {v} outside [0, 1]")
        object.__setattr__(self, "values", MappingProxyType(vals))

    @classmethod
    def initial(cls, networks):
        return cls({net: 1.0 for net in networks})

    def __getitem__(self, network):
        return self.values[network]

    def as_dict(self):
        return dict(self.values)

    def __eq__(self, other):
        if not isinstance(other, HistoryState):
            return NotImplemented
        return dict(self.values) == dict(other.values)

    def __hash__(self):
        return hash(tuple(sorted(self.values.items())))


def update_history(scores):
    """Every candidate network's history becomes its own latest closeness score."""
    return HistoryState(dict(scores))


@dataclass(frozen=True)
class SelectionDecision:
    chosen: str
    scores: dict
    handoff: bool
    updated_history: HistoryState
    matrix: object = field(repr=False, compare=False, default=None)
    ranking: object = field(repr=False, compare=False, default=None)


def build_decision_matrix(snapshots, hist, h, weights=None):
    """Assemble the TOPSIS decision matrix for one decision point.

    Rows follow the order of ``snapshots``. TOPSIS2 appends the history
    column, which must cover exactly the snapshot networks; TOPSIS1 never
    reads ``hist``.
    """
    snapshots = list(snapshots)
    if len(snapshots) < 2:
        raise ValueError("network selection needs at least two candidate networks")
    networks = [s.network for s in snapshots]
    if len(set(networks)) != len(networks):
        raise ValueError(f"duplicate network identifiers in {networks}")
    if weights is None:
        weights = compose_weights(h)
    rows = [list(s.values()) for s in snapshots]
    if h.mode is Mode.TOPSIS2:
        if hist is None:
            hist = HistoryState.initial(networks)
        if set(hist.values) != set(networks):
            missing = sorted(set(networks) ^ set(hist.values))
            raise MissingNetwork(f"history and snapshot networks differ on {missing}")
        for row, net in zip(rows, networks):
            row.append(hist[net])
    criteria = [CriterionSpec(name, DIRECTIONS[name], weights[name]) for name in h.criteria]
    return DecisionMatrix(networks, criteria, np.array(rows, dtype=float))


def select(snapshots, hist, h, current=None, weights=None):
    """Rank the candidates and pick the best network.

    On a tie for the top score the current network is kept when it is among
    the tied candidates, otherwise the first listed one wins.
    """
    d = build_decision_matrix(snapshots, hist, h, weights)
    if current is not None and current not in d.alternatives:
        raise MissingNetwork(f"current network {current!r} is not among the candidates {list(d.alternatives)}")
    prefer = d.alternatives.index(current) if current is not None else None
    result = rank(d, prefer=prefer)
    chosen = result.best
    scores = result.scores()
    return SelectionDecision(
        chosen=chosen,
        scores=scores,
        handoff=current is not None and chosen != current,
        updated_history=update_history(scores),
        matrix=d,
        ranking=result,
    )


def snapshots_from_array(X, networks):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(ATTRIBUTES) or X.shape[0] != len(networks):
        raise DimensionMismatch(f"expected a {len(networks)}x{len(ATTRIBUTES)} attribute matrix, got {X.shape}")
    return [NetworkSnapshot(net, *row) for net, row in zip(networks, X.tolist())]


class NetworkSelector(BaseEstimator):
    """Stateful selector over a fixed set of networks.

    Rows of ``X`` are networks in ``networks`` order and columns are the
    measured attributes (CB, S, AB, D, J, L). ``fit`` composes the weights
    and resets history; ``partial_fit`` takes one decision and feeds the
    scores back into the history.

    Parameters
    ----------
    level1, level2_qos : array-like
        Fuzzy pairwise matrices, see :class:`CriteriaHierarchy`.
    networks : sequence of str
    mode : {"topsis1", "topsis2"}, default="topsis2"
    history_weight : float or None, default=None
    """

    def __init__(self, level1, level2_qos, networks, mode="topsis2", history_weight=None):
        self.level1 = level1
        self.level2_qos = level2_qos
        self.networks = networks
        self.mode = mode
        self.history_weight = history_weight

    def fit(self, X=None, y=None):
        self.hierarchy_ = CriteriaHierarchy(self.level1, self.level2_qos, self.mode, self.history_weight)
        self.weights_ = compose_weights(self.hierarchy_)
        self.history_ = HistoryState.initial(self.networks)
        self.current_ = None
        self.n_handoffs_ = 0
        self.n_features_in_ = len(ATTRIBUTES)
        return self

    def _decide(self, X):
        check_is_fitted(self, "weights_")
        snaps = snapshots_from_array(X, list(self.networks))
        return select(snaps, self.history_, self.hierarchy_, self.current_, self.weights_)

    def decision_function(self, X):
        """Closeness score of every network under the current history."""
        decision = self._decide(X)
        return np.array([decision.scores[n] for n in self.networks])

    def predict(self, X):
        return self._decide(X).chosen

    def partial_fit(self, X, y=None):
        if not hasattr(self, "weights_"):
            self.fit()
        decision = self._decide(X)
        self.n_handoffs_ += int(decision.handoff)
        self.current_ = decision.chosen
        self.history_ = decision.updated_history
        self.last_decision_ = decision
        return self
