"""Store-and-forward replication between intermittently connected devices."""

from .bundle import (
    BROADCAST,
    DEFAULT_PAYLOAD_CAP,
    DEFAULT_TTL_SECONDS,
    Bundle,
    PayloadKind,
    Priority,
    decode_bundle,
    decode_bundles,
    encode_bundle,
)
from .store import ExchangeMode, NodeStore, ReceiveResult, SummaryVector, TransferRecord, exchange
from .conflict import RecordVersion, resolve_conflict

__all__ = [
    "BROADCAST",
    "DEFAULT_PAYLOAD_CAP",
    "DEFAULT_TTL_SECONDS",
    "Bundle",
    "ExchangeMode",
    "NodeStore",
    "PayloadKind",
    "Priority",
    "ReceiveResult",
    "RecordVersion",
    "SummaryVector",
    "TransferRecord",
    "decode_bundle",
    "decode_bundles",
    "encode_bundle",
    "exchange",
    "resolve_conflict",
]
