"""Simulator: replay semantics, determinism, generation, reports, CLI."""

import json
import math
import random
import subprocess
import sys
from pathlib import Path

import pytest

from ruralcare.errors import MalformedTrace, MalformedWorkload
from ruralcare.sim import (
    ContactEvent,
    Message,
    SimConfig,
    Workload,
    compare,
    format_table,
    generate_trace,
    load_trace_csv,
    parse_trace_csv,
    parse_workload_csv,
    render_figures,
    report_dict,
    run,
    trace_to_csv,
    workload_to_csv,
)
from ruralcare.sim.report import compare_csv, dump_report
from ruralcare.sync import ExchangeMode, Priority

from oracles import earliest_delivery_time

EPIDEMIC = ExchangeMode.EPIDEMIC
DIRECT = ExchangeMode.DIRECT


def relay_trace():
    return [
        ContactEvent(10.0, "P", "R", 5.0, math.inf),
        ContactEvent(20.0, "C", "R", 5.0, math.inf),
    ]


def one_message():
    return Workload((Message(0.0, "P", "C"),))


def test_two_hop_relay_delivers_under_epidemic_only():
    result = run(relay_trace(), one_message(), SimConfig(routing=EPIDEMIC, horizon=100))
    assert result.metrics.delivery_ratio == 1.0
    assert result.metrics.latencies == (20.0,)
    direct = run(relay_trace(), one_message(), SimConfig(routing=DIRECT, horizon=100))
    assert direct.metrics.delivery_ratio == 0.0
    assert direct.metrics.latencies == ()


def test_empty_trace_delivers_nothing():
    result = run([], one_message(), SimConfig(routing=EPIDEMIC, horizon=100))
    assert result.metrics.delivery_ratio == 0.0
    assert result.metrics.created == 1


def test_single_hop_equivalence():
    trace = [ContactEvent(5.0, "P", "C", 10.0, math.inf)]
    for routing in (EPIDEMIC, DIRECT):
        result = run(trace, one_message(), SimConfig(routing=routing, horizon=50))
        assert result.metrics.delivery_ratio == 1.0
        assert result.metrics.latencies == (5.0,)


def test_unsorted_trace_rejected():
    trace = [ContactEvent(10.0, "a", "b", 1.0), ContactEvent(5.0, "a", "b", 1.0)]
    with pytest.raises(MalformedTrace):
        run(trace, one_message(), SimConfig(horizon=20))


def test_horizon_cuts_late_deliveries():
    result = run(relay_trace(), one_message(), SimConfig(routing=EPIDEMIC, horizon=15))
    assert result.metrics.delivery_ratio == 0.0


def test_message_expires_when_ttl_elapses():
    config = SimConfig(routing=EPIDEMIC, horizon=100, ttl_seconds=5)
    result = run(relay_trace(), one_message(), config)
    assert result.metrics.delivery_ratio == 0.0


def test_budget_limits_transfers_per_contact():
    trace = [ContactEvent(10.0, "a", "b", 1.0, 1.0)]  # budget: one bundle
    workload = Workload((
        Message(0.0, "a", "b", Priority.ROUTINE),
        Message(1.0, "a", "b", Priority.ELEVATED),
    ))
    result = run(trace, workload, SimConfig(routing=EPIDEMIC, horizon=50))
    assert result.metrics.delivered == 1
    assert result.message_latency["msg-00001"] == 9.0  # the elevated one crossed
    assert result.message_latency["msg-00000"] is None


def test_run_is_deterministic():
    trace = generate_trace(n_nodes=6, horizon=2000, contact_rate=0.01, seed=9)
    workload = Workload(tuple(
        Message(float(i * 7), f"n{i % 6:02d}", f"n{(i + 1) % 6:02d}") for i in range(5)
    ))
    config = SimConfig(routing=EPIDEMIC, horizon=2000)
    first = run(trace, workload, config)
    second = run(trace, workload, config)
    assert first == second
    assert dump_report(report_dict(first, config)) == dump_report(report_dict(second, config))


# ---------------------------------------------------------------------------
# trace generation
# ---------------------------------------------------------------------------

def test_generate_trace_deterministic_for_seed():
    a = generate_trace(4, 1000, 0.05, seed=123)
    b = generate_trace(4, 1000, 0.05, seed=123)
    assert a == b
    c = generate_trace(4, 1000, 0.05, seed=124)
    assert a != c


def test_generate_trace_rate_scaling():
    sparse = generate_trace(4, 10000, 0.0001, seed=1)
    dense = generate_trace(4, 10000, 0.05, seed=1)
    assert len(sparse) <= 3
    assert len(dense) > len(sparse)


def test_generate_trace_two_nodes_single_pair():
    trace = generate_trace(2, 5000, 0.01, seed=5)
    assert trace
    assert {(e.node_a, e.node_b) for e in trace} == {("n00", "n01")}


def test_generated_trace_is_sorted_and_valid():
    trace = generate_trace(8, 5000, 0.02, seed=77)
    assert all(a.time <= b.time for a, b in zip(trace, trace[1:]))
    run(trace, Workload(()), SimConfig(horizon=5000))  # validates


# ---------------------------------------------------------------------------
# oracle spot-checks (full acceptance sweep lives in test_acceptance)
# ---------------------------------------------------------------------------

def test_epidemic_agrees_with_reachability_oracle_spot():
    rng = random.Random(31)
    for _ in range(20):
        trace = generate_trace(n_nodes=rng.randint(2, 6), horizon=1000,
                               contact_rate=0.02, seed=rng.randrange(10**6))
        nodes = sorted({e.node_a for e in trace} | {e.node_b for e in trace})
        if len(nodes) < 2:
            continue
        origin, dest = rng.sample(nodes, 2)
        created = rng.uniform(0, 500)
        workload = Workload((Message(created, origin, dest),))
        config = SimConfig(routing=EPIDEMIC, horizon=1000, ttl_seconds=10**9)
        result = run(trace, workload, config)
        expected = earliest_delivery_time(trace, origin, dest, created)
        delivered = result.metrics.delivery_ratio == 1.0
        assert delivered == (expected is not None)
        if delivered:
            assert result.metrics.latencies[0] == pytest.approx(expected - created)


# ---------------------------------------------------------------------------
# CSV round trips
# ---------------------------------------------------------------------------

def test_trace_csv_round_trip():
    trace = [
        ContactEvent(1.5, "a", "b", 30.0, 2.0),
        ContactEvent(9.0, "b", "c", 60.0, math.inf),
        ContactEvent(12.0, "a", "c", 60.0, None),
    ]
    assert parse_trace_csv(trace_to_csv(trace)) == trace


def test_workload_csv_round_trip():
    workload = Workload((
        Message(0.0, "a", "b", Priority.ROUTINE),
        Message(3.5, "b", "c", Priority.ELEVATED),
    ))
    assert parse_workload_csv(workload_to_csv(workload)) == workload


def test_trace_csv_rejects_bad_rows():
    with pytest.raises(MalformedTrace):
        parse_trace_csv("time,node_a,node_b,duration,bandwidth\n5,a,a,10,inf\n")
    with pytest.raises(MalformedTrace):
        parse_trace_csv("time,node_a,node_b\n5,a,b\n")
    with pytest.raises(MalformedTrace):
        parse_trace_csv("time,node_a,node_b,duration,bandwidth\nx,a,b,10,inf\n")


def test_workload_csv_rejects_bad_rows():
    with pytest.raises(MalformedWorkload):
        parse_workload_csv("time,origin,destination,priority\n0,a,a,routine\n")
    with pytest.raises(MalformedWorkload):
        parse_workload_csv("time,origin,destination,priority\n0,a,b,asap\n")


# ---------------------------------------------------------------------------
# compare and reports
# ---------------------------------------------------------------------------

def test_compare_epidemic_vs_direct_on_relay():
    report = compare(relay_trace(), one_message(), [
        SimConfig(routing=EPIDEMIC, horizon=100),
        SimConfig(routing=DIRECT, horizon=100),
    ])
    rows = report.rows()
    assert rows[0]["delivery_ratio"] == 1.0
    assert rows[1]["delivery_ratio"] == 0.0
    assert rows[1]["delta_delivery_ratio"] == -1.0
    table = format_table(report)
    assert "epidemic" in table and "direct" in table
    csv_text = compare_csv(report)
    assert csv_text.splitlines()[0].startswith("routing,")


def test_compare_identical_configs_identical_rows():
    config = SimConfig(routing=EPIDEMIC, horizon=100)
    report = compare(relay_trace(), one_message(), [config, config])
    rows = report.rows()
    assert rows[0] == rows[1]


def test_compare_needs_two_configs():
    with pytest.raises(ValueError):
        compare(relay_trace(), one_message(), [SimConfig(horizon=10)])


def test_render_figures_writes_pngs(tmp_path):
    report = compare(relay_trace(), one_message(), [
        SimConfig(routing=EPIDEMIC, horizon=100),
        SimConfig(routing=DIRECT, horizon=100),
    ])
    written = render_figures(report, tmp_path)
    names = {p.name for p in written}
    assert names == {"delivery_ratio.png", "latency_cdf.png", "overhead.png"}
    for path in written:
        assert path.exists() and path.stat().st_size > 500


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def write_inputs(tmp_path: Path):
    trace_file = tmp_path / "trace.csv"
    workload_file = tmp_path / "workload.csv"
    trace_file.write_text(trace_to_csv(relay_trace()), encoding="utf-8")
    workload_file.write_text(workload_to_csv(one_message()), encoding="utf-8")
    return trace_file, workload_file


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "ruralcare.sim.cli", *args],
        capture_output=True, text=True, check=False,
    )


def test_cli_run_writes_report(tmp_path):
    trace_file, workload_file = write_inputs(tmp_path)
    out = tmp_path / "report.json"
    proc = run_cli("run", "--trace", str(trace_file), "--workload", str(workload_file),
                   "--routing", "epidemic", "--seed", "3", "--horizon", "100",
                   "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    report = json.loads(out.read_text())
    assert report["delivery_ratio"] == 1.0
    assert report["routing"] == "epidemic"


def test_cli_gen_round_trips(tmp_path):
    out = tmp_path / "trace.csv"
    proc = run_cli("gen", "--nodes", "4", "--rate", "0.01", "--seed", "7",
                   "--horizon", "2000", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    trace = load_trace_csv(out)
    assert trace == generate_trace(4, 2000, 0.01, seed=7)


def test_cli_compare_writes_tables_and_figures(tmp_path):
    trace_file, workload_file = write_inputs(tmp_path)
    out_dir = tmp_path / "cmp"
    proc = run_cli("compare", "--trace", str(trace_file), "--workload", str(workload_file),
                   "--seed", "0", "--horizon", "100", "--out", str(out_dir))
    assert proc.returncode == 0, proc.stderr
    assert (out_dir / "compare.json").exists()
    assert (out_dir / "compare.csv").exists()
    assert (out_dir / "figures" / "delivery_ratio.png").exists()
    payload = json.loads((out_dir / "compare.json").read_text())
    assert payload["baseline"] == "epidemic"
    assert "routing" in proc.stdout
