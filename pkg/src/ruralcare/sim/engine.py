"""Discrete-event replay of a contact trace against a message workload.

Contacts are the only events besides message creation; each contact invokes
one pairwise exchange with the contact's ``bandwidth * duration`` budget.
Everything is deterministic: simultaneous contacts are ordered by
``(time, node_a, node_b)``, message creations at a given instant precede
contacts at that instant, and no wall clock or RNG is consulted, so the same
inputs always produce bit-identical results.
"""

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from ..sync import DEFAULT_TTL_SECONDS, ExchangeMode, NodeStore, exchange
from .trace import ContactEvent, Workload, validate_trace

# Fixed epoch anchoring simulated seconds to bundle timestamps.
SIM_EPOCH = datetime(2020, 1, 1, tzinfo=timezone.utc)


def sim_time(seconds: float) -> datetime:
    return SIM_EPOCH + timedelta(seconds=seconds)


@dataclass(frozen=True)
class SimConfig:
    routing: ExchangeMode = ExchangeMode.EPIDEMIC
    seed: int = 0
    horizon: float = 86400.0
    ttl_seconds: int = DEFAULT_TTL_SECONDS
    default_bandwidth: float = math.inf  # used when a trace row leaves it blank

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.ttl_seconds <= 0:
            raise ValueError("ttl_seconds must be positive")

    @property
    def label(self) -> str:
        return self.routing.value


@dataclass(frozen=True)
class Metrics:
    """Figure of merit is the delivery ratio; overhead is transmissions per delivery."""

    delivery_ratio: float
    latencies: tuple[float, ...]
    overhead: float
    created: int
    delivered: int
    transmissions: int


@dataclass(frozen=True)
class RunResult:
    metrics: Metrics
    message_latency: dict[str, float | None]  # bundle id -> latency, None if undelivered
    events: tuple[dict, ...] = field(default=())


def message_bundle_id(index: int) -> str:
    return f"msg-{index:05d}"


def run(trace: list[ContactEvent], workload: Workload, config: SimConfig) -> RunResult:
    """Replay the trace, measuring what the workload's messages experienced."""
    validate_trace(trace)
    workload.validate()

    node_ids = {e.node_a for e in trace} | {e.node_b for e in trace} | workload.node_ids()
    stores = {nid: NodeStore(nid) for nid in sorted(node_ids)}

    # (time, phase, tiebreak...): creations precede contacts at the same instant.
    agenda: list[tuple] = []
    for index, message in enumerate(workload.messages):
        agenda.append((message.time, 0, message_bundle_id(index), index))
    for order, contact in enumerate(trace):
        agenda.append((contact.time, 1, contact.node_a, contact.node_b, order))

    events: list[dict] = []
    created_ids: dict[str, float] = {}
    delivery_time: dict[str, float] = {}
    transmissions = 0

    for entry in sorted(agenda):
        t = entry[0]
        if t > config.horizon:
            break
        if entry[1] == 0:
            index = entry[3]
            message = workload.messages[index]
            bid = message_bundle_id(index)
            stores[message.origin].create_bundle(
                destination=message.destination,
                payload_kind=message.payload_kind,
                payload=f"workload message {index}".encode(),
                created_at=sim_time(t),
                ttl_seconds=config.ttl_seconds,
                priority=message.priority,
                bundle_id=bid,
            )
            created_ids[bid] = t
            events.append({"t": t, "event": "create", "bundle": bid,
                           "origin": message.origin, "destination": message.destination})
        else:
            contact = trace[entry[4]]
            bandwidth = contact.bandwidth
            if bandwidth is None:
                bandwidth = config.default_bandwidth
            log = exchange(
                stores[contact.node_a],
                stores[contact.node_b],
                now=sim_time(t),
                contact_duration=contact.duration,
                bandwidth=bandwidth,
                mode=config.routing,
            )
            for record in log:
                transmissions += 1
                events.append({"t": t, "event": "transfer", "bundle": record.bundle_id,
                               "from": record.sender, "to": record.receiver,
                               "applied": record.applied, "delivered": record.delivered})
                if record.delivered and record.bundle_id in created_ids:
                    delivery_time.setdefault(record.bundle_id, t)

    message_latency: dict[str, float | None] = {}
    latencies: list[float] = []
    for index in range(len(workload.messages)):
        bid = message_bundle_id(index)
        if bid in delivery_time and bid in created_ids:
            latency = delivery_time[bid] - created_ids[bid]
            message_latency[bid] = latency
            latencies.append(latency)
        elif bid in created_ids:
            message_latency[bid] = None

    created = len(created_ids)
    delivered = len(latencies)
    metrics = Metrics(
        delivery_ratio=(delivered / created) if created else 0.0,
        latencies=tuple(latencies),
        overhead=transmissions / max(1, delivered),
        created=created,
        delivered=delivered,
        transmissions=transmissions,
    )
    return RunResult(metrics=metrics, message_latency=message_latency, events=tuple(events))
