"""The replication unit and its wire encoding.

A bundle is immutable once created; relays only ever change the hop count on
the copy they store. Expiry is ``created_at + ttl < now``: an expired bundle
is never transmitted.

Wire format (version 1), so independent implementations interoperate::

    frame   := len:u32 body          # len = byte length of body
    body    := magic:"RB" ver:u8=1
               id:str origin:str destination:str
               kind:u8 priority:u8
               created_ms:u64 lamport:u64 ttl_s:u64 hop:u32
               payload_len:u32 payload:bytes
    str     := len:u16 utf8-bytes

All integers are big-endian and unsigned. ``kind`` is 0 response_set,
1 observation, 2 ack; ``priority`` is 0 routine, 1 elevated. The broadcast
destination is the single character ``*``. ``created_ms`` is milliseconds
since the Unix epoch (timestamps are quantized to that resolution). A
reference frame lives at ``fixtures/bundle_reference.hex``.
"""

import struct
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum

from ..errors import MalformedBundle, PayloadTooLarge
from ..timeutil import ensure_utc, from_ms, to_ms

BROADCAST = "*"
DEFAULT_TTL_SECONDS = 14 * 86400
DEFAULT_PAYLOAD_CAP = 1 << 20  # 1 MiB; screening records are a few KiB at most

_MAGIC = b"RB"
_VERSION = 1
_MAX_ID_BYTES = 0xFFFF


class PayloadKind(str, Enum):
    RESPONSE_SET = "response_set"
    OBSERVATION = "observation"
    ACK = "ack"


class Priority(str, Enum):
    ROUTINE = "routine"
    ELEVATED = "elevated"


_KIND_CODES = {PayloadKind.RESPONSE_SET: 0, PayloadKind.OBSERVATION: 1, PayloadKind.ACK: 2}
_KIND_FROM_CODE = {v: k for k, v in _KIND_CODES.items()}
_PRIORITY_CODES = {Priority.ROUTINE: 0, Priority.ELEVATED: 1}
_PRIORITY_FROM_CODE = {v: k for k, v in _PRIORITY_CODES.items()}


@dataclass(frozen=True)
class Bundle:
    bundle_id: str
    origin: str
    destination: str  # node id, or BROADCAST
    payload_kind: PayloadKind
    payload: bytes
    created_at: datetime
    lamport: int
    ttl_seconds: int
    priority: Priority = Priority.ROUTINE
    hop_count: int = 0

    @property
    def expires_at(self) -> datetime:
        return self.created_at + timedelta(seconds=self.ttl_seconds)

    def is_expired(self, now: datetime) -> bool:
        return self.expires_at < ensure_utc(now)


def make_bundle(
    bundle_id: str,
    origin: str,
    destination: str,
    payload_kind: PayloadKind,
    payload: bytes,
    created_at: datetime,
    lamport: int,
    ttl_seconds: int,
    priority: Priority = Priority.ROUTINE,
    hop_count: int = 0,
    payload_cap: int = DEFAULT_PAYLOAD_CAP,
) -> Bundle:
    """Construct a bundle, enforcing field invariants and the payload cap."""
    if not bundle_id:
        raise ValueError("bundle_id must be non-empty")
    if not origin or origin == BROADCAST:
        raise ValueError("origin must be a concrete node id")
    if not destination:
        raise ValueError("destination must be a node id or broadcast")
    if not payload:
        raise ValueError("payload must be non-empty")
    if len(payload) > payload_cap:
        raise PayloadTooLarge(f"payload of {len(payload)} bytes exceeds cap {payload_cap}")
    if ttl_seconds <= 0:
        raise ValueError("ttl_seconds must be positive")
    if hop_count < 0:
        raise ValueError("hop_count must be non-negative")
    # Quantize to wire resolution so encode/decode round-trips exactly.
    created_at = from_ms(to_ms(created_at))
    return Bundle(
        bundle_id=bundle_id,
        origin=origin,
        destination=destination,
        payload_kind=payload_kind,
        payload=payload,
        created_at=created_at,
        lamport=lamport,
        ttl_seconds=ttl_seconds,
        priority=priority,
        hop_count=hop_count,
    )


def _pack_str(value: str) -> bytes:
    raw = value.encode("utf-8")
    if len(raw) > _MAX_ID_BYTES:
        raise ValueError("identifier too long for wire format")
    return struct.pack(">H", len(raw)) + raw


def encode_bundle(bundle: Bundle) -> bytes:
    """Serialize one bundle to a length-prefixed wire frame."""
    body = bytearray()
    body += _MAGIC
    body += struct.pack(">B", _VERSION)
    body += _pack_str(bundle.bundle_id)
    body += _pack_str(bundle.origin)
    body += _pack_str(bundle.destination)
    body += struct.pack(
        ">BBQQQI",
        _KIND_CODES[bundle.payload_kind],
        _PRIORITY_CODES[bundle.priority],
        to_ms(bundle.created_at),
        bundle.lamport,
        bundle.ttl_seconds,
        bundle.hop_count,
    )
    body += struct.pack(">I", len(bundle.payload))
    body += bundle.payload
    return struct.pack(">I", len(body)) + bytes(body)


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise MalformedBundle("truncated bundle frame")
        chunk = self.buf[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack(">Q", self.take(8))[0]

    def string(self) -> str:
        raw = self.take(self.u16())
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedBundle("identifier is not valid UTF-8") from exc


def decode_bundle(frame: bytes) -> Bundle:
    """Decode exactly one frame; raises MalformedBundle on any defect."""
    bundle, consumed = _decode_prefix(frame)
    if consumed != len(frame):
        raise MalformedBundle(f"{len(frame) - consumed} trailing bytes after frame")
    return bundle


def decode_bundles(stream: bytes) -> list[Bundle]:
    """Decode a concatenation of frames, in order."""
    bundles = []
    pos = 0
    while pos < len(stream):
        bundle, consumed = _decode_prefix(stream[pos:])
        bundles.append(bundle)
        pos += consumed
    return bundles


def _decode_prefix(buf: bytes) -> tuple[Bundle, int]:
    if len(buf) < 4:
        raise MalformedBundle("frame shorter than its length prefix")
    (body_len,) = struct.unpack(">I", buf[:4])
    if len(buf) < 4 + body_len:
        raise MalformedBundle("frame body shorter than declared length")
    reader = _Reader(buf[4 : 4 + body_len])
    if reader.take(2) != _MAGIC:
        raise MalformedBundle("bad magic")
    version = reader.u8()
    if version != _VERSION:
        raise MalformedBundle(f"unsupported wire version {version}")
    bundle_id = reader.string()
    origin = reader.string()
    destination = reader.string()
    kind_code = reader.u8()
    priority_code = reader.u8()
    created_ms = reader.u64()
    lamport = reader.u64()
    ttl_seconds = reader.u64()
    hop_count = reader.u32()
    payload = bytes(reader.take(reader.u32()))
    if reader.pos != body_len:
        raise MalformedBundle("frame body longer than its fields")
    if kind_code not in _KIND_FROM_CODE:
        raise MalformedBundle(f"unknown payload kind code {kind_code}")
    if priority_code not in _PRIORITY_FROM_CODE:
        raise MalformedBundle(f"unknown priority code {priority_code}")
    if not bundle_id or not origin or not destination or not payload or ttl_seconds == 0:
        raise MalformedBundle("frame violates bundle invariants")
    bundle = Bundle(
        bundle_id=bundle_id,
        origin=origin,
        destination=destination,
        payload_kind=_KIND_FROM_CODE[kind_code],
        payload=payload,
        created_at=from_ms(created_ms),
        lamport=lamport,
        ttl_seconds=ttl_seconds,
        priority=_PRIORITY_FROM_CODE[priority_code],
        hop_count=hop_count,
    )
    return bundle, 4 + body_len
