"""Deterministic conflict resolution for replicated records.

Versions are totally ordered by (lamport, origin node id bytes), so any set
of replicas converges on the same winner regardless of arrival order.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class RecordVersion:
    record_id: str
    lamport: int
    origin: str

    @property
    def order_key(self) -> tuple[int, bytes]:
        return (self.lamport, self.origin.encode("utf-8"))


def resolve_conflict(
    existing: RecordVersion,
    incoming: RecordVersion,
    existing_payload,
    incoming_payload,
):
    """Pick the winning (payload, version) pair under the total order.

    Commutative: swapping the argument order yields the same winner. Identical
    versions keep the existing record (no-op).
    """
    if existing.record_id != incoming.record_id:
        raise ValueError(
            f"versions describe different records: "
            f"{existing.record_id!r} vs {incoming.record_id!r}"
        )
    if incoming.order_key > existing.order_key:
        return incoming_payload, incoming
    return existing_payload, existing
