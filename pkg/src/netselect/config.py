"""Loading and validating the YAML/JSON configuration file.

See ``data/default_config.yaml`` for the annotated schema. Every error
carries the dotted path of the offending field.
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .exceptions import MatrixValidationError, ParseError, ValidationError
from .fahp import check_consistency, preference_value, validate_matrix
from .selector import LEVEL1_CRITERIA, CriteriaHierarchy, HistoryState, Mode, NetworkSnapshot, TrafficClass
from .simulator import AttributeRanges, NetworkRange, SimulationConfig
from .topsis import CriterionSpec, DecisionMatrix

DEFAULT_CONFIG = "default_config.yaml"
SIMULATION_DEFAULTS = {"trials": 1000, "decision_points": 10, "seed": 0, "algorithms": ["topsis1", "topsis2"]}


@dataclass(frozen=True)
class ClassHierarchy:
    """Per-traffic-class preferences from which both modes' hierarchies are built."""

    level1: np.ndarray
    level2: np.ndarray
    history: tuple
    history_weight: float = None

    def level1_matrix(self, mode):
        if mode is Mode.TOPSIS1:
            return self.level1
        out = np.full((4, 4), 0.5)
        out[:3, :3] = self.level1
        for k, value in enumerate(self.history):
            out[3, k] = value
            out[k, 3] = 1.0 - value
        return out

    def hierarchy(self, mode, history_weight=None):
        mode = Mode.parse(mode)
        hw = self.history_weight if history_weight is None else history_weight
        return CriteriaHierarchy(
            self.level1_matrix(mode), self.level2, mode, hw if mode is Mode.TOPSIS2 else None
        )


@dataclass(frozen=True)
class AppConfig:
    ranges: AttributeRanges
    classes: dict
    simulation: dict = field(default_factory=lambda: dict(SIMULATION_DEFAULTS))
    rank: dict = None
    source: str = None

    def hierarchies(self, traffic_class, algorithms=(Mode.TOPSIS1, Mode.TOPSIS2)):
        cls = self.classes[TrafficClass.parse(traffic_class)]
        return {Mode.parse(a): cls.hierarchy(Mode.parse(a)) for a in algorithms}

    def simulation_config(self, traffic_class, **overrides):
        opts = {**self.simulation, **{k: v for k, v in overrides.items() if v is not None}}
        algorithms = tuple(Mode.parse(a) for a in opts["algorithms"])
        keep = bool(opts.get("keep_selections", False))
        return SimulationConfig(
            traffic_class=TrafficClass.parse(traffic_class),
            hierarchies=self.hierarchies(traffic_class, algorithms),
            trials=int(opts["trials"]),
            decision_points=int(opts["decision_points"]),
            master_seed=int(opts["seed"]),
            algorithms=algorithms,
            ranges=self.ranges,
            keep_selections=keep,
        )


def _require_mapping(value, path):
    if not isinstance(value, dict):
        raise ValidationError(f"expected a mapping, got {type(value).__name__}", path=path)
    return value


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"expected a number, got {value!r}", path=path)
    if not np.isfinite(value):
        raise ValidationError("must be finite", path=path)
    return float(value)


def _cell(value, path):
    try:
        return preference_value(value)
    except ValueError as exc:
        raise ValidationError(str(exc), path=path) from None


def parse_matrix(raw, n, path):
    """Accept a full n x n array or its upper triangle; return a validated array."""
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise ValidationError("matrix must be a list of rows", path=path)
    lengths = [len(r) for r in raw]
    if lengths == [n] * n:
        arr = np.array([[_cell(c, f"{path}[{i}][{j}]") for j, c in enumerate(row)] for i, row in enumerate(raw)])
    elif lengths == list(range(n - 1, 0, -1)):
        arr = np.full((n, n), 0.5)
        for i, row in enumerate(raw):
            for k, c in enumerate(row):
                j = i + 1 + k
                arr[i, j] = _cell(c, f"{path}[{i}][{k}]")
                arr[j, i] = 1.0 - arr[i, j]
    else:
        raise ValidationError(
            f"expected a full {n}x{n} matrix or an upper triangle with row lengths {list(range(n - 1, 0, -1))}, "
            f"got row lengths {lengths}",
            path=path,
        )
    try:
        return validate_matrix(arr).entries
    except MatrixValidationError as exc:
        raise ValidationError(f"fuzzy reciprocal constraints violated (r_ii = 0.5, r_ij + r_ji = 1): {exc}",
                              path=path) from None


def parse_class(raw, path):
    raw = _require_mapping(raw, path)
    unknown = set(raw) - {"level1", "level2", "history", "history_weight"}
    if unknown:
        raise ValidationError(f"unknown keys {sorted(unknown)}", path=path)
    for key in ("level1", "level2"):
        if key not in raw:
            raise ValidationError("missing", path=f"{path}.{key}")
    level1 = parse_matrix(raw["level1"], 3, f"{path}.level1")
    level2 = parse_matrix(raw["level2"], 4, f"{path}.level2")
    hist_raw = raw.get("history", ["Important", "Important", "Important"])
    if not isinstance(hist_raw, list) or len(hist_raw) != 3:
        raise ValidationError(f"expected 3 entries (History vs {', '.join(LEVEL1_CRITERIA[:3])})",
                              path=f"{path}.history")
    history = tuple(_cell(c, f"{path}.history[{k}]") for k, c in enumerate(hist_raw))
    for k, v in enumerate(history):
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"value {v} outside [0, 1]", path=f"{path}.history[{k}]")
    hw = raw.get("history_weight")
    if hw is not None:
        hw = _number(hw, f"{path}.history_weight")
        if not 0.0 <= hw <= 1.0:
            raise ValidationError("must lie in [0, 1]", path=f"{path}.history_weight")
    cls = ClassHierarchy(level1, level2, history, hw)
    check_consistency(level1, f"{path}.level1")
    check_consistency(cls.level1_matrix(Mode.TOPSIS2), f"{path}.level1+history")
    check_consistency(level2, f"{path}.level2")
    return cls


def _interval(value, path):
    if not isinstance(value, list) or len(value) != 2:
        raise ValidationError("expected [lo, hi]", path=path)
    lo, hi = (_number(v, path) for v in value)
    if lo < 0 or hi < lo:
        raise ValidationError(f"interval [{lo:g}, {hi:g}] must satisfy 0 <= lo <= hi", path=path)
    return lo, hi


def parse_networks(raw, path="networks"):
    raw = _require_mapping(raw, path)
    if len(raw) < 2:
        raise ValidationError("at least two networks are required", path=path)
    out = []
    for name, spec in raw.items():
        p = f"{path}.{name}"
        spec = _require_mapping(spec, p)
        for key in ("cb", "s", "ab", "d", "j", "l"):
            if key not in spec:
                raise ValidationError("missing", path=f"{p}.{key}")
        cb, s = _number(spec["cb"], f"{p}.cb"), _number(spec["s"], f"{p}.s")
        if cb < 0 or s < 0:
            raise ValidationError("cb and s must be nonnegative", path=p)
        h = _number(spec.get("h", 1.0), f"{p}.h")
        if not 0.0 <= h <= 1.0:
            raise ValidationError("must lie in [0, 1]", path=f"{p}.h")
        out.append(NetworkRange(
            str(name), cb=cb, s=s,
            ab=_interval(spec["ab"], f"{p}.ab"), d=_interval(spec["d"], f"{p}.d"),
            j=_interval(spec["j"], f"{p}.j"), l=_interval(spec["l"], f"{p}.l"), h_initial=h,
        ))
    return AttributeRanges(out)


def parse_simulation(raw, path="simulation"):
    raw = _require_mapping(raw or {}, path)
    unknown = set(raw) - set(SIMULATION_DEFAULTS) - {"keep_selections"}
    if unknown:
        raise ValidationError(f"unknown keys {sorted(unknown)}", path=path)
    out = {**SIMULATION_DEFAULTS, **raw}
    for key in ("trials", "decision_points", "seed"):
        if isinstance(out[key], bool) or not isinstance(out[key], int):
            raise ValidationError("expected an integer", path=f"{path}.{key}")
    if out["trials"] < 1:
        raise ValidationError("must be at least 1", path=f"{path}.trials")
    if out["decision_points"] < 2:
        raise ValidationError("must be at least 2", path=f"{path}.decision_points")
    if not 0 <= out["seed"] < 2**64:
        raise ValidationError("must be an unsigned 64-bit integer", path=f"{path}.seed")
    try:
        out["algorithms"] = [Mode.parse(a).value for a in out["algorithms"]]
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc), path=f"{path}.algorithms") from None
    return out


def parse_config_data(data, source=None):
    data = _require_mapping(data, "<root>")
    unknown = set(data) - {"networks", "classes", "simulation", "rank"}
    if unknown:
        raise ValidationError(f"unknown top-level keys {sorted(unknown)}")
    if "networks" not in data:
        raise ValidationError("missing", path="networks")
    ranges = parse_networks(data["networks"])
    classes_raw = _require_mapping(data.get("classes"), "classes")
    classes = {}
    for name, raw in classes_raw.items():
        try:
            tc = TrafficClass.parse(name)
        except ValueError as exc:
            raise ValidationError(str(exc), path=f"classes.{name}") from None
        classes[tc] = parse_class(raw, f"classes.{tc.value}")
    rank = data.get("rank")
    if rank is not None:
        _require_mapping(rank, "rank")
    return AppConfig(ranges, classes, parse_simulation(data.get("simulation")), rank, source)


def load_yaml(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"cannot parse config {path}: {exc}") from None


def parse_config(path=None):
    """Load, validate and return an :class:`AppConfig`; ``None`` loads the shipped default."""
    if path is None:
        ref = resources.files("netselect") / "data" / DEFAULT_CONFIG
        with resources.as_file(ref) as p:
            return parse_config_data(load_yaml(p), source=str(p))
    return parse_config_data(load_yaml(path), source=str(path))


def parse_rank_input(cfg, traffic_class=None, algorithm=None):
    """Build the ranking task from the ``rank`` section.

    Two shapes are accepted: network ``snapshots`` (ranked with the class
    hierarchy and optional history/current network), or a free-form decision
    matrix with explicit ``criteria`` and ``alternatives``.
    Returns ``("snapshots", snapshots, history, hierarchy, current)`` or
    ``("matrix", DecisionMatrix)``.
    """
    raw = cfg.rank
    if raw is None:
        raise ValidationError("the rank command needs a 'rank' section", path="rank")
    if "criteria" in raw:
        return ("matrix", _parse_decision_matrix(raw))
    if "snapshots" not in raw:
        raise ValidationError("needs either 'snapshots' or 'criteria' + 'alternatives'", path="rank")
    try:
        tc = TrafficClass.parse(traffic_class or raw.get("class", "conversational"))
        mode = Mode.parse(algorithm or raw.get("algorithm", "topsis2"))
    except ValueError as exc:
        raise ValidationError(str(exc), path="rank") from None
    if tc not in cfg.classes:
        raise ValidationError(f"class {tc.value} is not configured", path="classes")
    snaps_raw = _require_mapping(raw["snapshots"], "rank.snapshots")
    snapshots = []
    for name, spec in snaps_raw.items():
        p = f"rank.snapshots.{name}"
        spec = _require_mapping(spec, p)
        vals = []
        for key in ("cb", "s", "ab", "d", "j", "l"):
            if key not in spec:
                raise ValidationError("missing", path=f"{p}.{key}")
            v = _number(spec[key], f"{p}.{key}")
            if v < 0:
                raise ValidationError("must be nonnegative", path=f"{p}.{key}")
            vals.append(v)
        snapshots.append(NetworkSnapshot(str(name), *vals))
    history = None
    if mode is Mode.TOPSIS2:
        hist_raw = raw.get("history") or {s.network: 1.0 for s in snapshots}
        hist_raw = _require_mapping(hist_raw, "rank.history")
        try:
            history = HistoryState({k: _number(v, f"rank.history.{k}") for k, v in hist_raw.items()})
        except ValueError as exc:
            raise ValidationError(str(exc), path="rank.history") from None
    current = raw.get("current")
    return ("snapshots", snapshots, history, cfg.classes[tc].hierarchy(mode), current)


def _parse_decision_matrix(raw):
    crit_raw = raw["criteria"]
    if not isinstance(crit_raw, list) or not crit_raw:
        raise ValidationError("expected a non-empty list", path="rank.criteria")
    criteria = []
    for k, c in enumerate(crit_raw):
        p = f"rank.criteria[{k}]"
        c = _require_mapping(c, p)
        try:
            criteria.append(CriterionSpec(str(c["name"]), c.get("direction", "benefit"),
                                          _number(c["weight"], f"{p}.weight")))
        except KeyError as exc:
            raise ValidationError(f"missing {exc.args[0]}", path=p) from None
        except ValueError as exc:
            raise ValidationError(str(exc), path=p) from None
    alts = _require_mapping(raw.get("alternatives"), "rank.alternatives")
    rows = []
    for name, row in alts.items():
        if not isinstance(row, list) or len(row) != len(criteria):
            raise ValidationError(f"expected {len(criteria)} ratings", path=f"rank.alternatives.{name}")
        rows.append([_number(v, f"rank.alternatives.{name}") for v in row])
    try:
        return DecisionMatrix(list(map(str, alts)), criteria, np.array(rows, dtype=float))
    except ValueError as exc:
        raise ValidationError(str(exc), path="rank") from None
