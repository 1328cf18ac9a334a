"""Append-only event log with embedded audit records.

Each line is one JSON event: a gap-free sequence number, timestamp, event
kind, the audit fields for the operation that produced it, and the
operation's raw payload. Replaying the log from empty rebuilds the entire
queryable state, audit trail included; every audited operation appends
exactly one event, so a truncation at any line boundary is a state some
legal operation prefix could have produced.
"""

import json
import os
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from ..timeutil import parse_timestamp, to_iso


class AuditAction:
    READ = "read"
    WRITE = "write"
    CONSENT_CHANGE = "consent_change"
    LOGIN = "login"


class AuditOutcome:
    ALLOWED = "allowed"
    DENIED = "denied"


@dataclass(frozen=True)
class AuditEntry:
    seq: int
    at: datetime
    actor: str
    action: str
    target: str
    outcome: str

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "at": to_iso(self.at),
            "actor": self.actor,
            "action": self.action,
            "target": self.target,
            "outcome": self.outcome,
        }


def audit_from_event(event: dict) -> AuditEntry:
    return AuditEntry(
        seq=event["seq"],
        at=parse_timestamp(event["at"]),
        actor=event["actor"],
        action=event["action"],
        target=event["target"],
        outcome=event["outcome"],
    )


class EventLog:
    """Gap-free append-only JSON-lines log, optionally backed by a file."""

    def __init__(self, path: Path | None = None, fsync: bool = True):
        self.path = Path(path) if path is not None else None
        self.fsync = fsync
        self._events: list[dict] = []
        self._handle = None
        if self.path is not None:
            self._events = self._read_existing(self.path)
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = open(self.path, "a", encoding="utf-8")

    @staticmethod
    def _read_existing(path: Path) -> list[dict]:
        if not path.exists():
            return []
        events: list[dict] = []
        lines = path.read_text(encoding="utf-8").splitlines()
        for index, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError:
                if index == len(lines) - 1:
                    break  # torn final line from a crash mid-append; drop it
                raise ValueError(f"corrupt event log: undecodable line {index + 1}")
            events.append(event)
        for expected, event in enumerate(events, start=1):
            if event.get("seq") != expected:
                raise ValueError(
                    f"corrupt event log: expected seq {expected}, found {event.get('seq')}"
                )
        return events

    @property
    def last_seq(self) -> int:
        return self._events[-1]["seq"] if self._events else 0

    def append(self, event: dict) -> dict:
        event = dict(event)
        event["seq"] = self.last_seq + 1
        self._events.append(event)
        if self._handle is not None:
            self._handle.write(json.dumps(event, sort_keys=True) + "\n")
            self._handle.flush()
            if self.fsync:
                os.fsync(self._handle.fileno())
        return event

    def events(self) -> list[dict]:
        return list(self._events)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None
