"""Seeded Monte Carlo comparison of TOPSIS1 and TOPSIS2 handoff behaviour.

Each trial walks through a fixed number of decision points. At every point
one snapshot per network is drawn uniformly from its attribute ranges and
both algorithms decide on that same snapshot set, each carrying its own
current network and history. Trial ``k`` draws from a private generator
seeded with :func:`substream_seed`, so results do not depend on how trials
are scheduled.
"""

import hashlib
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import EmptySequence, MissingAlgorithm, UnknownNetwork, ValidationError
from .selector import HistoryState, Mode, NetworkSnapshot, TrafficClass, compose_weights, select

# Published reference handoff rates, (TOPSIS1, TOPSIS2) per class.
REFERENCE_RATES = {
    TrafficClass.BACKGROUND: (0.50, 0.30),
    TrafficClass.CONVERSATIONAL: (0.60, 0.40),
    TrafficClass.INTERACTIVE: (0.70, 0.40),
    TrafficClass.STREAMING: (0.40, 0.20),
}


@dataclass(frozen=True)
class NetworkRange:
    network: str
    cb: float
    s: float
    ab: tuple
    d: tuple
    j: tuple
    l: tuple  # noqa: E741
    h_initial: float = 1.0

    def __post_init__(self):
        for name in ("ab", "d", "j", "l"):
            lo, hi = (float(x) for x in getattr(self, name))
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo < 0 or hi < lo:
                raise ValidationError(f"interval [{lo}, {hi}] must satisfy 0 <= lo <= hi", path=f"{self.network}.{name}")
            object.__setattr__(self, name, (lo, hi))
        for name in ("cb", "s"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0:
                raise ValidationError(f"value {value} must be finite and nonnegative", path=f"{self.network}.{name}")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.h_initial <= 1.0:
            raise ValidationError(f"initial history {self.h_initial} outside [0, 1]", path=f"{self.network}.h")

    def to_dict(self):
        return {"cb": self.cb, "s": self.s, "ab": list(self.ab), "d": list(self.d),
                "j": list(self.j), "l": list(self.l), "h": self.h_initial}


@dataclass(frozen=True)
class AttributeRanges:
    networks: tuple

    def __post_init__(self):
        object.__setattr__(self, "networks", tuple(self.networks))
        names = self.names
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate network names {names}", path="networks")

    @property
    def names(self):
        return tuple(n.network for n in self.networks)

    def __getitem__(self, network):
        for n in self.networks:
            if n.network == network:
                return n
        raise UnknownNetwork(f"no attribute ranges for network {network!r}")

    def initial_history(self):
        return HistoryState({n.network: n.h_initial for n in self.networks})

    def to_dict(self):
        return {n.network: n.to_dict() for n in self.networks}


DEFAULT_RANGES = AttributeRanges((
    NetworkRange("UMTS", cb=60, s=70, ab=(0.1, 2), d=(25, 50), j=(5, 10), l=(20, 80)),
    NetworkRange("WLAN", cb=10, s=50, ab=(1, 11), d=(100, 150), j=(10, 20), l=(20, 80)),
    NetworkRange("WIMAX", cb=40, s=60, ab=(1, 60), d=(60, 100), j=(3, 10), l=(20, 80)),
))


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed to reproduce one simulation run.

    ``hierarchies`` maps each requested :class:`Mode` to its
    :class:`~netselect.selector.CriteriaHierarchy`.
    """

    traffic_class: TrafficClass
    hierarchies: dict
    trials: int = 1000
    decision_points: int = 10
    master_seed: int = 0
    algorithms: tuple = (Mode.TOPSIS1, Mode.TOPSIS2)
    ranges: AttributeRanges = DEFAULT_RANGES
    keep_selections: bool = False

    def __post_init__(self):
        object.__setattr__(self, "traffic_class", TrafficClass.parse(self.traffic_class))
        object.__setattr__(self, "algorithms", tuple(Mode.parse(a) for a in self.algorithms))
        if not self.algorithms:
            raise ValidationError("at least one algorithm is required", path="algorithms")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValidationError("duplicate algorithms", path="algorithms")
        if self.decision_points < 2:
            raise ValidationError("decision_points must be at least 2", path="decision_points")
        if self.trials < 1:
            raise ValidationError("trials must be at least 1", path="trials")
        if not 0 <= self.master_seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer", path="seed")
        hierarchies = {Mode.parse(k): v for k, v in dict(self.hierarchies).items()}
        for alg in self.algorithms:
            if alg not in hierarchies:
                raise ValidationError(f"no hierarchy for {alg.value}", path="hierarchies")
            if hierarchies[alg].mode is not alg:
                raise ValidationError(f"hierarchy registered under {alg.value} is in {hierarchies[alg].mode.value} mode",
                                      path="hierarchies")
        object.__setattr__(self, "hierarchies", hierarchies)

    def to_dict(self):
        return {
            "traffic_class": self.traffic_class.value,
            "trials": self.trials,
            "decision_points": self.decision_points,
            "seed": self.master_seed,
            "algorithms": [a.value for a in self.algorithms],
            "networks": self.ranges.to_dict(),
            "hierarchies": {
                a.value: {
                    "level1": self.hierarchies[a].level1.entries.tolist(),
                    "level2_qos": self.hierarchies[a].level2_qos.entries.tolist(),
                    "history_weight": self.hierarchies[a].history_weight,
                }
                for a in self.algorithms
            },
        }


def substream_seed(master_seed, trial_index):
    """Stable 64-bit seed for one trial: BLAKE2b-64 over the little-endian pair."""
    digest = hashlib.blake2b(struct.pack("<QQ", master_seed, trial_index), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def trial_stream(master_seed, trial_index):
    return np.random.Generator(np.random.PCG64(substream_seed(master_seed, trial_index)))


def sample_snapshot(stream, ranges, network):
    """Draw AB, D, J, L uniformly (in that order); CB and S are fixed."""
    r = ranges[network]
    ab, d, j, l = (float(stream.uniform(lo, hi)) for lo, hi in (r.ab, r.d, r.j, r.l))  # noqa: E741
    return NetworkSnapshot(network, r.cb, r.s, ab, d, j, l)


def count_handoffs(selections):
    selections = list(selections)
    if not selections:
        raise EmptySequence("cannot count handoffs in an empty selection sequence")
    return sum(1 for prev, cur in zip(selections, selections[1:]) if cur != prev)


@dataclass(frozen=True)
class TrialTrace:
    trial_index: int
    selections: dict
    scores: dict
    history_columns: dict
    handoff_counts: dict


def run_trial(config, trial_index):
    stream = trial_stream(config.master_seed, trial_index)
    weights = {alg: compose_weights(config.hierarchies[alg]) for alg in config.algorithms}
    current = {alg: None for alg in config.algorithms}
    history = {alg: config.ranges.initial_history() for alg in config.algorithms}
    selections = {alg: [] for alg in config.algorithms}
    scores = {alg: [] for alg in config.algorithms}
    h_cols = {alg: [] for alg in config.algorithms}
    for _ in range(config.decision_points):
        snapshots = [sample_snapshot(stream, config.ranges, net) for net in config.ranges.names]
        for alg in config.algorithms:
            decision = select(snapshots, history[alg], config.hierarchies[alg], current[alg], weights[alg])
            current[alg] = decision.chosen
            history[alg] = decision.updated_history
            selections[alg].append(decision.chosen)
            scores[alg].append(decision.scores)
            if alg is Mode.TOPSIS2:
                h_cols[alg].append(tuple(decision.matrix.entries[:, -1].tolist()))
    return TrialTrace(
        trial_index=trial_index,
        selections={a: tuple(s) for a, s in selections.items()},
        scores={a: tuple(s) for a, s in scores.items()},
        history_columns={a: tuple(c) for a, c in h_cols.items() if c},
        handoff_counts={a: count_handoffs(s) for a, s in selections.items()},
    )


@dataclass(frozen=True)
class AlgorithmStats:
    counts: tuple
    mean: float
    rate: float
    min: int
    max: int
    std: float
    selections: tuple = None

    @classmethod
    def from_counts(cls, counts, decision_points, selections=None):
        arr = np.asarray(counts, dtype=float)
        mean = float(arr.sum() / len(arr))
        return cls(
            counts=tuple(int(c) for c in counts),
            mean=mean,
            rate=mean / (decision_points - 1),
            min=int(arr.min()),
            max=int(arr.max()),
            std=float(np.sqrt(np.sum((arr - mean) ** 2) / len(arr))),
            selections=selections,
        )

    def to_dict(self):
        out = {"mean_handoffs": self.mean, "handoff_rate": self.rate, "min": self.min,
               "max": self.max, "std": self.std, "counts": list(self.counts)}
        if self.selections is not None:
            out["selections"] = [list(s) for s in self.selections]
        return out

    @classmethod
    def from_dict(cls, data):
        selections = data.get("selections")
        return cls(
            counts=tuple(data["counts"]),
            mean=data["mean_handoffs"],
            rate=data["handoff_rate"],
            min=data["min"],
            max=data["max"],
            std=data["std"],
            selections=None if selections is None else tuple(tuple(s) for s in selections),
        )


@dataclass(frozen=True)
class SimulationReport:
    traffic_class: TrafficClass
    seed: int
    decision_points: int
    stats: dict
    config: dict = field(compare=True)

    def to_dict(self):
        return {
            "traffic_class": self.traffic_class.value,
            "seed": self.seed,
            "decision_points": self.decision_points,
            "algorithms": {a.value: s.to_dict() for a, s in self.stats.items()},
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            traffic_class=TrafficClass.parse(data["traffic_class"]),
            seed=data["seed"],
            decision_points=data["decision_points"],
            stats={Mode.parse(a): AlgorithmStats.from_dict(s) for a, s in data["algorithms"].items()},
            config=data["config"],
        )


def _run_chunk(args):
    config, indices = args
    return [run_trial(config, i) for i in indices]


def run_trials(config, workers=1):
    """All trial traces, in trial-index order."""
    indices = list(range(config.trials))
    if workers <= 1 or config.trials < 2:
        return [run_trial(config, i) for i in indices]
    chunks = [indices[k::workers] for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = [t for chunk in pool.map(_run_chunk, [(config, c) for c in chunks]) for t in chunk]
    return sorted(results, key=lambda t: t.trial_index)


def run_simulation(config, workers=1):
    traces = run_trials(config, workers)
    stats = {}
    for alg in config.algorithms:
        selections = tuple(t.selections[alg] for t in traces) if config.keep_selections else None
        stats[alg] = AlgorithmStats.from_counts(
            [t.handoff_counts[alg] for t in traces], config.decision_points, selections
        )
    return SimulationReport(
        traffic_class=config.traffic_class,
        seed=config.master_seed,
        decision_points=config.decision_points,
        stats=stats,
        config=config.to_dict(),
    )


@dataclass(frozen=True)
class Comparison:
    traffic_class: TrafficClass
    topsis1_rate: float
    topsis2_rate: float
    topsis1_mean: float
    topsis2_mean: float
    reference_rates: tuple

    @property
    def reduction_points(self):
        return 100.0 * (self.topsis1_rate - self.topsis2_rate)

    def to_dict(self):
        return {
            "traffic_class": self.traffic_class.value,
            "topsis1_rate": self.topsis1_rate,
            "topsis2_rate": self.topsis2_rate,
            "topsis1_mean_handoffs": self.topsis1_mean,
            "topsis2_mean_handoffs": self.topsis2_mean,
            "reduction_points": self.reduction_points,
            "reference_rates": list(self.reference_rates),
        }


def compare_algorithms(report):
    missing = [a.value for a in (Mode.TOPSIS1, Mode.TOPSIS2) if a not in report.stats]
    if missing:
        raise MissingAlgorithm(f"report lacks results for {', '.join(missing)}")
    s1, s2 = report.stats[Mode.TOPSIS1], report.stats[Mode.TOPSIS2]
    return Comparison(
        traffic_class=report.traffic_class,
        topsis1_rate=s1.rate,
        topsis2_rate=s2.rate,
        topsis1_mean=s1.mean,
        topsis2_mean=s2.mean,
        reference_rates=REFERENCE_RATES[report.traffic_class],
    )
