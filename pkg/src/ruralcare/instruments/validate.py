"""Response validation against an instrument definition.

Pure and deterministic: the same instrument and response always produce the
same verdict, and nothing is mutated.
"""

from dataclasses import dataclass

from ..errors import VersionMismatch
from .model import EntryMode, Instrument, Item, ItemKind, ResponseSet


@dataclass(frozen=True)
class Violation:
    item_id: str | None
    reason: str


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[Violation, ...] = ()


def validate_response(instrument: Instrument, response: ResponseSet) -> ValidationResult:
    """Check every response invariant; returns ok or the list of violations.

    Paper-mode responses need an attachment instead of answers; any answers
    they do carry are still checked for conformance.
    """
    if response.instrument_id != instrument.id:
        raise ValueError(
            f"response references instrument {response.instrument_id!r}, "
            f"not {instrument.id!r}"
        )
    if response.instrument_version != instrument.version:
        raise VersionMismatch(
            f"response pins version {response.instrument_version}, "
            f"instrument is version {instrument.version}"
        )

    items = instrument.items_by_id()
    violations: list[Violation] = []

    for item_id, value in response.answers.items():
        item = items.get(item_id)
        if item is None:
            violations.append(Violation(item_id, "unknown item"))
            continue
        reason = _check_value(item, value)
        if reason:
            violations.append(Violation(item_id, reason))

    if response.entry_mode is EntryMode.PAPER:
        if not response.attachment:
            violations.append(Violation(None, "paper mode requires an attachment"))
    else:
        for item_id, item in items.items():
            if item.required and item_id not in response.answers:
                violations.append(Violation(item_id, "missing required item"))

    return ValidationResult(ok=not violations, violations=tuple(violations))


def _check_value(item: Item, value) -> str | None:
    if item.kind is ItemKind.SCALE:
        if isinstance(value, bool) or not isinstance(value, int):
            return "scale answer must be an integer"
        if not (item.min_value <= value <= item.max_value):
            return f"out of range [{item.min_value}, {item.max_value}]"
    elif item.kind is ItemKind.BOOLEAN:
        if not isinstance(value, bool):
            return "boolean answer must be true or false"
    elif item.kind is ItemKind.FREE_TEXT:
        if not isinstance(value, str):
            return "free text answer must be a string"
    return None
