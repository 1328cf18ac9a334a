"""Deterministic contact-trace simulator for the store-and-forward protocol."""

from .trace import (
    ContactEvent,
    Message,
    Workload,
    generate_trace,
    load_trace_csv,
    load_workload_csv,
    parse_trace_csv,
    parse_workload_csv,
    trace_to_csv,
    workload_to_csv,
)
from .engine import Metrics, RunResult, SimConfig, run
from .report import CompareReport, compare, format_table, render_figures, report_dict

__all__ = [
    "CompareReport",
    "ContactEvent",
    "Message",
    "Metrics",
    "RunResult",
    "SimConfig",
    "Workload",
    "compare",
    "format_table",
    "generate_trace",
    "load_trace_csv",
    "load_workload_csv",
    "parse_trace_csv",
    "parse_workload_csv",
    "render_figures",
    "report_dict",
    "run",
    "trace_to_csv",
    "workload_to_csv",
]
