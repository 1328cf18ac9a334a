"""Per-device bundle store and the pairwise exchange protocol.

Replication is epidemic: at contact, two nodes swap summary vectors and each
sends the bundles the other lacks, elevated priority first, then oldest
first, until the contact's transfer budget runs out. Receiving a bundle
addressed to you marks it delivered and emits a broadcast ack so relays can
eventually garbage-collect their copies. Direct mode restricts transfers to
bundles addressed to the receiving node (no relaying), which is the baseline
the simulator compares against.

A store is mutated by at most one exchange session at a time; sessions on
distinct stores are safe to run concurrently.
"""

from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
from uuid import uuid4

from ..timeutil import ensure_utc
from .bundle import (
    BROADCAST,
    DEFAULT_PAYLOAD_CAP,
    Bundle,
    PayloadKind,
    Priority,
    make_bundle,
)

ACK_ID_PREFIX = "ack-"


class ExchangeMode(str, Enum):
    EPIDEMIC = "epidemic"
    DIRECT = "direct"


@dataclass(frozen=True)
class SummaryVector:
    """The unexpired bundle ids a node holds, offered to a peer at contact."""

    node_id: str
    bundle_ids: frozenset[str]


@dataclass(frozen=True)
class ReceiveResult:
    accepted: bool  # stored into held
    duplicate: bool
    delivered: bool  # this node was the destination and it was new
    ack: Bundle | None = None


@dataclass(frozen=True)
class TransferRecord:
    at: datetime
    sender: str
    receiver: str
    bundle_id: str
    applied: bool
    delivered: bool
    ack_id: str | None = None


class NodeStore:
    """Bundle storage and logical clock for one device."""

    def __init__(self, node_id: str, payload_cap: int = DEFAULT_PAYLOAD_CAP):
        if not node_id or node_id == BROADCAST:
            raise ValueError("node_id must be a concrete identifier")
        self.node_id = node_id
        self.payload_cap = payload_cap
        self.held: dict[str, Bundle] = {}
        self.delivered: set[str] = set()
        self.lamport_clock = 0

    def tick(self) -> int:
        self.lamport_clock += 1
        return self.lamport_clock

    def observe_clock(self, received: int) -> int:
        # Lamport receive rule: never decreases, always advances past the sender.
        self.lamport_clock = max(self.lamport_clock, received) + 1
        return self.lamport_clock

    def create_bundle(
        self,
        destination: str,
        payload_kind: PayloadKind,
        payload: bytes,
        created_at: datetime,
        ttl_seconds: int,
        priority: Priority = Priority.ROUTINE,
        bundle_id: str | None = None,
    ) -> Bundle:
        """Originate a bundle on this node and store it for forwarding."""
        if destination == self.node_id:
            raise ValueError("bundle destination cannot be its own origin")
        if bundle_id is None:
            bundle_id = uuid4().hex
        if bundle_id in self.held:
            raise ValueError(f"bundle id {bundle_id!r} already held")
        bundle = make_bundle(
            bundle_id=bundle_id,
            origin=self.node_id,
            destination=destination,
            payload_kind=payload_kind,
            payload=payload,
            created_at=ensure_utc(created_at),
            lamport=self.tick(),
            ttl_seconds=ttl_seconds,
            priority=priority,
            payload_cap=self.payload_cap,
        )
        self.held[bundle.bundle_id] = bundle
        return bundle

    def summary_vector(self, now: datetime) -> SummaryVector:
        now = ensure_utc(now)
        ids = frozenset(bid for bid, b in self.held.items() if not b.is_expired(now))
        return SummaryVector(node_id=self.node_id, bundle_ids=ids)

    def receive(self, bundle: Bundle, now: datetime) -> ReceiveResult:
        """Apply one incoming bundle; idempotent on duplicates.

        The stored copy's hop count is one above the sender's. Acks teach
        this node which bundle ids reached their destination.
        """
        now = ensure_utc(now)
        if bundle.is_expired(now):
            return ReceiveResult(accepted=False, duplicate=False, delivered=False)
        if bundle.bundle_id in self.held or bundle.bundle_id in self.delivered:
            return ReceiveResult(accepted=False, duplicate=True, delivered=False)

        self.observe_clock(bundle.lamport)
        copy = replace(bundle, hop_count=bundle.hop_count + 1)
        self.held[copy.bundle_id] = copy

        if copy.payload_kind is PayloadKind.ACK:
            try:
                self.delivered.add(copy.payload.decode("utf-8"))
            except UnicodeDecodeError:
                pass  # unintelligible ack still propagates

        ack = None
        delivered = copy.destination == self.node_id
        if delivered:
            self.delivered.add(copy.bundle_id)
            ack = self._emit_ack(copy, now)
        return ReceiveResult(accepted=True, duplicate=False, delivered=delivered, ack=ack)

    def _emit_ack(self, delivered_bundle: Bundle, now: datetime) -> Bundle:
        ack_id = ACK_ID_PREFIX + delivered_bundle.bundle_id
        if ack_id in self.held:
            return self.held[ack_id]
        return self.create_bundle(
            destination=BROADCAST,
            payload_kind=PayloadKind.ACK,
            payload=delivered_bundle.bundle_id.encode("utf-8"),
            created_at=now,
            ttl_seconds=delivered_bundle.ttl_seconds,
            priority=Priority.ROUTINE,
            bundle_id=ack_id,
        )

    def purge_expired(self, now: datetime) -> list[str]:
        now = ensure_utc(now)
        dead = [bid for bid, b in self.held.items() if b.is_expired(now)]
        for bid in dead:
            del self.held[bid]
        return dead

    def gc(self, now: datetime) -> list[str]:
        """Drop expired bundles and held copies already acknowledged as delivered."""
        purged = self.purge_expired(now)
        acked = [bid for bid in self.held if bid in self.delivered]
        for bid in acked:
            del self.held[bid]
        return purged + acked

    def unexpired_ids(self, now: datetime) -> frozenset[str]:
        return self.summary_vector(now).bundle_ids


def exchange(
    a: NodeStore,
    b: NodeStore,
    now: datetime,
    contact_duration: float,
    bandwidth: float,
    mode: ExchangeMode = ExchangeMode.EPIDEMIC,
) -> list[TransferRecord]:
    """One contact between two nodes: swap summaries, then transfer.

    The transfer budget is ``bandwidth * contact_duration`` whole bundles,
    shared across both directions. Candidates are ordered elevated-first,
    then oldest-created, with the bundle id as the final tie-break, so a
    contact is fully deterministic. Expired bundles are purged, never sent.
    Partial transfer on budget exhaustion is normal, not an error.
    """
    now = ensure_utc(now)
    if a.node_id == b.node_id:
        raise ValueError("exchange requires two distinct nodes")
    if contact_duration <= 0:
        raise ValueError("contact_duration must be positive")
    if bandwidth < 0:
        raise ValueError("bandwidth must be non-negative")

    a.purge_expired(now)
    b.purge_expired(now)
    budget = bandwidth * contact_duration

    candidates = _candidates(a, b, now, mode) + _candidates(b, a, now, mode)
    candidates.sort(key=_transfer_order)

    log: list[TransferRecord] = []
    for bundle, sender, receiver in candidates:
        if budget < 1:
            break
        budget -= 1
        result = receiver.receive(bundle, now)
        log.append(
            TransferRecord(
                at=now,
                sender=sender.node_id,
                receiver=receiver.node_id,
                bundle_id=bundle.bundle_id,
                applied=result.accepted,
                delivered=result.delivered,
                ack_id=result.ack.bundle_id if result.ack else None,
            )
        )
    return log


def _candidates(
    sender: NodeStore, receiver: NodeStore, now: datetime, mode: ExchangeMode
) -> list[tuple[Bundle, NodeStore, NodeStore]]:
    peer_has = receiver.summary_vector(now).bundle_ids
    picks = []
    for bid, bundle in sender.held.items():
        if bid in peer_has:
            continue
        if mode is ExchangeMode.DIRECT and bundle.destination != receiver.node_id:
            continue
        picks.append((bundle, sender, receiver))
    return picks


def _transfer_order(candidate) -> tuple:
    bundle, sender, _ = candidate
    elevated_first = 0 if bundle.priority is Priority.ELEVATED else 1
    return (elevated_first, bundle.created_at, bundle.bundle_id, sender.node_id)
