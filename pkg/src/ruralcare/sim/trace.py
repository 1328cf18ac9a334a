"""Contact traces and message workloads, with their CSV forms.

Trace CSV columns: ``time,node_a,node_b,duration,bandwidth`` (bandwidth in
bundles/second; ``inf`` or an empty cell means unlimited). Workload CSV
columns: ``time,origin,destination,priority``. Times are seconds from the
start of the simulated epoch. Plain CSV keeps real-world mobility datasets
easy to convert in.
"""

import csv
import io
import math
import random
from dataclasses import dataclass, field

from ..errors import MalformedTrace, MalformedWorkload
from ..sync import PayloadKind, Priority

TRACE_COLUMNS = ["time", "node_a", "node_b", "duration", "bandwidth"]
WORKLOAD_COLUMNS = ["time", "origin", "destination", "priority"]


@dataclass(frozen=True)
class ContactEvent:
    """Two nodes within range of each other for ``duration`` seconds.

    ``bandwidth`` is bundles/second; ``None`` defers to the run config's
    default, ``inf`` means unlimited.
    """

    time: float
    node_a: str
    node_b: str
    duration: float
    bandwidth: float | None = None

    def validate(self) -> None:
        if self.time < 0:
            raise MalformedTrace(f"contact at t={self.time}: time must be >= 0")
        if self.duration <= 0:
            raise MalformedTrace(f"contact at t={self.time}: duration must be > 0")
        if not self.node_a or not self.node_b or self.node_a == self.node_b:
            raise MalformedTrace(
                f"contact at t={self.time}: needs two distinct non-empty node ids"
            )
        if self.bandwidth is not None and (math.isnan(self.bandwidth) or self.bandwidth < 0):
            raise MalformedTrace(f"contact at t={self.time}: bad bandwidth")


@dataclass(frozen=True)
class Message:
    """One workload entry: a record created at ``time`` on ``origin``."""

    time: float
    origin: str
    destination: str
    priority: Priority = Priority.ROUTINE
    payload_kind: PayloadKind = PayloadKind.RESPONSE_SET

    def validate(self) -> None:
        if self.time < 0:
            raise MalformedWorkload(f"message at t={self.time}: time must be >= 0")
        if not self.origin or not self.destination or self.origin == self.destination:
            raise MalformedWorkload(
                f"message at t={self.time}: origin and destination must differ"
            )


@dataclass(frozen=True)
class Workload:
    messages: tuple[Message, ...] = field(default=())

    def validate(self) -> None:
        for message in self.messages:
            message.validate()

    def node_ids(self) -> set[str]:
        ids = set()
        for m in self.messages:
            ids.add(m.origin)
            ids.add(m.destination)
        return ids


def validate_trace(trace: list[ContactEvent]) -> None:
    """Reject unsorted or invalid traces."""
    for event in trace:
        event.validate()
    for earlier, later in zip(trace, trace[1:]):
        if later.time < earlier.time:
            raise MalformedTrace(
                f"trace not sorted by time: {later.time} after {earlier.time}"
            )


def _parse_float(cell: str, what: str, line: int, err) -> float:
    try:
        return float(cell.strip())
    except ValueError:
        raise err(f"line {line}: {what} is not a number: {cell!r}") from None


def _parse_bandwidth(cell: str, line: int) -> float | None:
    if cell.strip() == "":
        return None  # defer to the run config's default
    return _parse_float(cell, "bandwidth", line, MalformedTrace)


def parse_trace_csv(text: str) -> list[ContactEvent]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        return []
    if [c.strip() for c in rows[0]] != TRACE_COLUMNS:
        raise MalformedTrace(f"trace header must be {','.join(TRACE_COLUMNS)}")
    events = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(TRACE_COLUMNS):
            raise MalformedTrace(f"line {lineno}: expected {len(TRACE_COLUMNS)} columns")
        events.append(
            ContactEvent(
                time=_parse_float(row[0], "time", lineno, MalformedTrace),
                node_a=row[1].strip(),
                node_b=row[2].strip(),
                duration=_parse_float(row[3], "duration", lineno, MalformedTrace),
                bandwidth=_parse_bandwidth(row[4], lineno),
            )
        )
    validate_trace(events)
    return events


def parse_workload_csv(text: str) -> Workload:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        return Workload(())
    if [c.strip() for c in rows[0]] != WORKLOAD_COLUMNS:
        raise MalformedWorkload(f"workload header must be {','.join(WORKLOAD_COLUMNS)}")
    messages = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(WORKLOAD_COLUMNS):
            raise MalformedWorkload(f"line {lineno}: expected {len(WORKLOAD_COLUMNS)} columns")
        try:
            priority = Priority(row[3].strip())
        except ValueError:
            raise MalformedWorkload(f"line {lineno}: unknown priority {row[3]!r}") from None
        messages.append(
            Message(
                time=_parse_float(row[0], "time", lineno, MalformedWorkload),
                origin=row[1].strip(),
                destination=row[2].strip(),
                priority=priority,
            )
        )
    workload = Workload(tuple(messages))
    workload.validate()
    return workload


def load_trace_csv(path) -> list[ContactEvent]:
    with open(path, encoding="utf-8") as handle:
        return parse_trace_csv(handle.read())


def load_workload_csv(path) -> Workload:
    with open(path, encoding="utf-8") as handle:
        return parse_workload_csv(handle.read())


def _format_number(value: float) -> str:
    if math.isinf(value):
        return "inf"
    if value == int(value):
        return str(int(value))
    return repr(value)


def trace_to_csv(trace: list[ContactEvent]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for e in trace:
        writer.writerow(
            [_format_number(e.time), e.node_a, e.node_b, _format_number(e.duration),
             "" if e.bandwidth is None else _format_number(e.bandwidth)]
        )
    return out.getvalue()


def workload_to_csv(workload: Workload) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(WORKLOAD_COLUMNS)
    for m in workload.messages:
        writer.writerow([_format_number(m.time), m.origin, m.destination, m.priority.value])
    return out.getvalue()


def generate_trace(
    n_nodes: int,
    horizon: float,
    contact_rate: float,
    seed: int,
    duration: float = 60.0,
    bandwidth: float = math.inf,
) -> list[ContactEvent]:
    """Random pairwise contacts with exponential inter-contact gaps.

    ``contact_rate`` is the expected number of contacts per second across the
    whole population. Deterministic for a fixed seed; output sorted by time.
    """
    if n_nodes < 2:
        raise ValueError("need at least two nodes")
    if contact_rate <= 0:
        raise ValueError("contact_rate must be positive")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    rng = random.Random(seed)
    node_ids = [f"n{i:02d}" for i in range(n_nodes)]
    events = []
    t = 0.0
    while True:
        t += rng.expovariate(contact_rate)
        if t >= horizon:
            break
        a, b = rng.sample(node_ids, 2)
        if a > b:
            a, b = b, a
        events.append(
            ContactEvent(time=t, node_a=a, node_b=b, duration=duration, bandwidth=bandwidth)
        )
    return events
