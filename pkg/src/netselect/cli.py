"""Command-line entry point.

    netselect weights  [--class C] [--config FILE] [--format F] [--out PATH]
    netselect rank     [--class C] [--algorithms A] [--config FILE] ...
    netselect simulate [--class C|all] [--trials N] [--points N] [--seed S]
                       [--algorithms topsis1,topsis2] [--workers N] ...

Exit status: 0 on success, 2 for configuration errors, 3 for runtime errors.
"""

import argparse
import csv
import io
import json
import sys

from .config import parse_config, parse_rank_input
from .exceptions import ConfigError, ConsistencyGateFailure, MatrixValidationError, NetSelectError
from .fahp import check_consistency
from .report import emit_report
from .selector import Mode, TrafficClass, compose_weights, select
from .simulator import run_simulation
from .topsis import rank

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _classes(value, cfg):
    if value in (None, "all"):
        return [c for c in TrafficClass if c in cfg.classes]
    try:
        tc = TrafficClass.parse(value)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if tc not in cfg.classes:
        raise ConfigError(f"class {tc.value} is not configured")
    return [tc]


def _algorithms(value):
    if value is None:
        return None
    try:
        return [Mode.parse(a).value for a in value.split(",") if a.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_weights(args, cfg):
    algorithms = _algorithms(args.algorithms) or ["topsis1", "topsis2"]
    rows = []
    for tc in _classes(args.traffic_class, cfg):
        for alg in algorithms:
            h = cfg.classes[tc].hierarchy(alg)
            weights = compose_weights(h)
            _, cr1 = check_consistency(h.level1, "level1")
            _, cr2 = check_consistency(h.level2_qos, "level2")
            rows.append({"traffic_class": tc.value, "algorithm": Mode.parse(alg).value,
                         "weights": weights, "cr_level1": cr1.cr, "cr_level2": cr2.cr})
    if args.format == "json":
        text = json.dumps({"weights": rows}, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["traffic_class", "algorithm", "criterion", "weight"])
        for row in rows:
            for name, value in row["weights"].items():
                w.writerow([row["traffic_class"], row["algorithm"], name, repr(value)])
        text = buf.getvalue()
    else:
        lines = []
        for row in rows:
            ws = "  ".join(f"{k}={v:.4f}" for k, v in row["weights"].items())
            lines.append(f"{row['traffic_class']:<15} {row['algorithm']:<8} {ws}  "
                         f"(sum {sum(row['weights'].values()):.6f}, CR {row['cr_level1']:.3f}/{row['cr_level2']:.3f})")
        text = "\n".join(lines) + "\n"
    _write(text, args.out)


def cmd_rank(args, cfg):
    algs = _algorithms(args.algorithms)
    task = parse_rank_input(cfg, args.traffic_class, algs[0] if algs else None)
    if task[0] == "matrix":
        result = rank(task[1])
        payload = {"alternatives": list(result.alternatives), "closeness": result.closeness.tolist(),
                   "order": [result.alternatives[i] for i in result.order], "best": result.best}
    else:
        _, snapshots, history, hierarchy, current = task
        decision = select(snapshots, history, hierarchy, current)
        res = decision.ranking
        payload = {"algorithm": hierarchy.mode.value, "alternatives": list(res.alternatives),
                   "closeness": res.closeness.tolist(), "order": [res.alternatives[i] for i in res.order],
                   "best": decision.chosen, "handoff": decision.handoff,
                   "updated_history": decision.updated_history.as_dict()}
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["position", "alternative", "closeness"])
        scores = dict(zip(payload["alternatives"], payload["closeness"]))
        for pos, alt in enumerate(payload["order"], 1):
            w.writerow([pos, alt, repr(scores[alt])])
        text = buf.getvalue()
    else:
        scores = dict(zip(payload["alternatives"], payload["closeness"]))
        lines = [f"{pos}. {alt:<12} C* = {scores[alt]:.6f}" for pos, alt in enumerate(payload["order"], 1)]
        lines.append(f"selected: {payload['best']}")
        if "handoff" in payload:
            lines.append(f"handoff: {'yes' if payload['handoff'] else 'no'}")
        text = "\n".join(lines) + "\n"
    _write(text, args.out)


def cmd_simulate(args, cfg):
    reports = []
    for tc in _classes(args.traffic_class, cfg):
        sim = cfg.simulation_config(
            tc, trials=args.trials, decision_points=args.points, seed=args.seed,
            algorithms=_algorithms(args.algorithms), keep_selections=args.traces or None,
        )
        reports.append(run_simulation(sim, workers=args.workers))
    text = emit_report(reports, args.format)
    _write(text, args.out)


COMMANDS = {"weights": cmd_weights, "rank": cmd_rank, "simulate": cmd_simulate}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML/JSON config file (default: the shipped configuration)")
    common.add_argument("--class", dest="traffic_class",
                        help="traffic class: background, conversational, interactive, streaming or all")
    common.add_argument("--algorithms", help="comma-separated subset of topsis1,topsis2")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="netselect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("weights", parents=[common], help="print composed criterion weights per class")
    sub.add_parser("rank", parents=[common], help="rank the snapshot set from the config's rank section")
    sim = sub.add_parser("simulate", parents=[common], help="run the Monte Carlo handoff comparison")
    sim.add_argument("--trials", type=int)
    sim.add_argument("--points", type=int, help="decision points per trial")
    sim.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    sim.add_argument("--workers", type=int, default=1, help="worker processes for trials")
    sim.add_argument("--traces", action="store_true", help="include per-trial selection sequences")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = parse_config(args.config)
    except (ConfigError, ConsistencyGateFailure, MatrixValidationError) as exc:
        print(f"netselect: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        COMMANDS[args.command](args, cfg)
    except (ConfigError, ConsistencyGateFailure, MatrixValidationError) as exc:
        print(f"netselect: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NetSelectError, ValueError, OSError) as exc:
        print(f"netselect: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
