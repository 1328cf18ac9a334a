"""Simulation reports: JSON, delimited tables, and rendered figures.

``compare`` runs the same trace and workload under several configs and
reports one metrics row per config plus deltas against the first (baseline)
config, in machine-readable (JSON, CSV) and human-readable (text table,
PNG figures) forms.
"""

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .engine import Metrics, RunResult, SimConfig, run  # noqa: E402
from .trace import ContactEvent, Workload  # noqa: E402


def _json_number(value: float):
    # JSON has no inf; the report uses a string marker for unlimited values.
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def metrics_dict(metrics: Metrics) -> dict:
    return {
        "delivery_ratio": metrics.delivery_ratio,
        "latencies": list(metrics.latencies),
        "overhead": metrics.overhead,
        "created": metrics.created,
        "delivered": metrics.delivered,
        "transmissions": metrics.transmissions,
    }


def report_dict(result: RunResult, config: SimConfig) -> dict:
    report = {
        "routing": config.routing.value,
        "seed": config.seed,
        "horizon": config.horizon,
        "ttl_seconds": config.ttl_seconds,
        "default_bandwidth": _json_number(config.default_bandwidth),
    }
    report.update(metrics_dict(result.metrics))
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_report(result: RunResult, config: SimConfig, path) -> None:
    Path(path).write_text(dump_report(report_dict(result, config)), encoding="utf-8")


@dataclass(frozen=True)
class CompareReport:
    configs: tuple[SimConfig, ...]
    results: tuple[RunResult, ...]

    def rows(self) -> list[dict]:
        rows = []
        baseline = self.results[0].metrics
        for config, result in zip(self.configs, self.results):
            row = report_dict(result, config)
            row["delta_delivery_ratio"] = result.metrics.delivery_ratio - baseline.delivery_ratio
            row["delta_overhead"] = result.metrics.overhead - baseline.overhead
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {"baseline": self.configs[0].routing.value, "rows": self.rows()}


def compare(
    trace: list[ContactEvent], workload: Workload, configs: list[SimConfig]
) -> CompareReport:
    """Run every config against the same inputs; needs at least two configs."""
    if len(configs) < 2:
        raise ValueError("compare needs at least two configs")
    results = tuple(run(trace, workload, config) for config in configs)
    return CompareReport(configs=tuple(configs), results=results)


_TABLE_FIELDS = [
    ("routing", "routing"),
    ("delivery_ratio", "delivery"),
    ("delivered", "delivered"),
    ("created", "created"),
    ("overhead", "overhead"),
    ("median_latency_s", "median latency (s)"),
    ("delta_delivery_ratio", "d(delivery)"),
]


def _median(values) -> float | None:
    values = sorted(values)
    if not values:
        return None
    mid = len(values) // 2
    if len(values) % 2:
        return values[mid]
    return (values[mid - 1] + values[mid]) / 2


def _table_rows(report: CompareReport) -> list[dict]:
    rows = []
    for row, result in zip(report.rows(), report.results):
        row = dict(row)
        row["median_latency_s"] = _median(result.metrics.latencies)
        rows.append(row)
    return rows


def format_table(report: CompareReport) -> str:
    """Fixed-width, human-readable comparison table."""
    rows = _table_rows(report)
    headers = [label for _, label in _TABLE_FIELDS]
    cells = []
    for row in rows:
        line = []
        for key, _ in _TABLE_FIELDS:
            value = row.get(key)
            if isinstance(value, float):
                line.append(f"{value:.4f}")
            elif value is None:
                line.append("-")
            else:
                line.append(str(value))
        cells.append(line)
    widths = [max(len(headers[i]), *(len(line[i]) for line in cells)) for i in range(len(headers))]
    out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    out.append("  ".join("-" * w for w in widths))
    for line in cells:
        out.append("  ".join(c.ljust(w) for c, w in zip(line, widths)))
    return "\n".join(out) + "\n"


def compare_csv(report: CompareReport) -> str:
    rows = _table_rows(report)
    fields = [key for key, _ in _TABLE_FIELDS] + ["transmissions", "seed", "horizon"]
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return out.getvalue()


def render_figures(report: CompareReport, out_dir) -> list[Path]:
    """Render comparison figures as PNG files; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    labels = [config.routing.value for config in report.configs]
    written = []

    fig, ax = plt.subplots(figsize=(5, 3.2))
    ratios = [r.metrics.delivery_ratio for r in report.results]
    ax.bar(labels, ratios, color="#4878a8")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("delivery ratio")
    ax.set_title("Delivery ratio by routing")
    for i, v in enumerate(ratios):
        ax.text(i, v + 0.02, f"{v:.2f}", ha="center", fontsize=9)
    path = out_dir / "delivery_ratio.png"
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 3.2))
    any_latency = False
    for label, result in zip(labels, report.results):
        lat = sorted(result.metrics.latencies)
        if not lat:
            continue
        any_latency = True
        fractions = [(i + 1) / len(lat) for i in range(len(lat))]
        ax.step(lat, fractions, where="post", label=label)
    ax.set_xlabel("latency (s)")
    ax.set_ylabel("fraction of delivered messages")
    ax.set_title("Delivery latency CDF")
    if any_latency:
        ax.legend()
    path = out_dir / "latency_cdf.png"
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 3.2))
    overheads = [r.metrics.overhead for r in report.results]
    ax.bar(labels, overheads, color="#a86048")
    ax.set_ylabel("transmissions per delivery")
    ax.set_title("Protocol overhead")
    path = out_dir / "overhead.png"
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    return written
