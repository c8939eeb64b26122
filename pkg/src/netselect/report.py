"""Serialization of simulation reports to JSON, CSV and plain text."""

import csv
import io
import json

from .exceptions import MissingAlgorithm
from .selector import Mode
from .simulator import REFERENCE_RATES, SimulationReport, compare_algorithms

FORMAT_TAG = "netselect-report"
FORMAT_VERSION = 1


def reports_to_json(reports):
    payload = {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "reports": [r.to_dict() for r in reports],
        "comparisons": [c.to_dict() for c in _comparisons(reports)],
    }
    return json.dumps(payload, indent=2) + "\n"


def read_reports(path):
    with open(path) as fh:
        data = json.load(fh)
    if data.get("format") != FORMAT_TAG:
        raise ValueError(f"{path} is not a netselect report")
    return [SimulationReport.from_dict(r) for r in data["reports"]]


def _comparisons(reports):
    out = []
    for r in reports:
        try:
            out.append(compare_algorithms(r))
        except MissingAlgorithm:
            pass
    return out


def reports_to_csv(reports):
    """Per-trial rows, a blank line, then one summary row per (class, algorithm)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["traffic_class", "trial", "algorithm", "handoff_count"])
    for r in reports:
        for alg, stats in r.stats.items():
            for trial, count in enumerate(stats.counts):
                w.writerow([r.traffic_class.value, trial, alg.value, count])
    w.writerow([])
    w.writerow(["traffic_class", "algorithm", "seed", "trials", "decision_points",
                "mean_handoffs", "handoff_rate", "min", "max", "std", "reference_rate"])
    for r in reports:
        for alg, stats in r.stats.items():
            ref = REFERENCE_RATES[r.traffic_class][0 if alg is Mode.TOPSIS1 else 1]
            w.writerow([r.traffic_class.value, alg.value, r.seed, len(stats.counts), r.decision_points,
                        repr(stats.mean), repr(stats.rate), stats.min, stats.max, repr(stats.std), ref])
    return buf.getvalue()


def _pct(x):
    return f"{100 * x:.1f}%"


def reports_to_text(reports):
    if not reports:
        return "no results\n"
    first = reports[0]
    trials = len(next(iter(first.stats.values())).counts)
    lines = [
        f"Handoff rates: {trials} trials x {first.decision_points} decision points, seed {first.seed}",
        "(rate = mean handoffs / possible transitions)",
        "",
        f"{'class':<16}{'TOPSIS-1':>10}{'TOPSIS-2':>10}{'reduction':>12}{'ref T-1':>11}{'ref T-2':>11}",
    ]
    for r in reports:
        rates = {alg: r.stats[alg].rate if alg in r.stats else None for alg in (Mode.TOPSIS1, Mode.TOPSIS2)}
        ref = REFERENCE_RATES[r.traffic_class]
        cells = [_pct(v) if v is not None else "-" for v in rates.values()]
        if None not in rates.values():
            red = f"{compare_algorithms(r).reduction_points:.1f} pts"
        else:
            red = "-"
        lines.append(f"{r.traffic_class.value:<16}{cells[0]:>10}{cells[1]:>10}{red:>12}"
                     f"{_pct(ref[0]):>11}{_pct(ref[1]):>11}")
    lines.append("")
    for r in reports:
        for alg, s in r.stats.items():
            lines.append(f"{r.traffic_class.value}/{alg.value}: mean {s.mean:.3f} handoffs "
                         f"(min {s.min}, max {s.max}, std {s.std:.3f})")
    return "\n".join(lines) + "\n"


RENDERERS = {"json": reports_to_json, "csv": reports_to_csv, "text": reports_to_text}


def render(reports, fmt):
    return RENDERERS[fmt](list(reports))


def emit_report(reports, fmt="text", path=None, stream=None):
    """Render ``reports`` and write them to ``path`` (or ``stream``)."""
    if isinstance(reports, SimulationReport):
        reports = [reports]
    text = render(reports, fmt)
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    elif stream is not None:
        stream.write(text)
    return text
