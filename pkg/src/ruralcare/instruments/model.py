"""Domain types for screening instruments and patient responses."""

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from ..timeutil import parse_timestamp, to_iso

AnswerValue = int | bool | str


class ItemKind(str, Enum):
    SCALE = "scale"
    BOOLEAN = "boolean"
    FREE_TEXT = "free_text"


class EntryMode(str, Enum):
    """How the patient navigated the instrument while answering."""

    ADVANCED = "advanced"
    STANDARD = "standard"
    CHECKLIST = "checklist"
    PAPER = "paper"

    @property
    def scorable(self) -> bool:
        # Paper submissions are photo attachments; there is nothing to score.
        return self is not EntryMode.PAPER


@dataclass(frozen=True)
class Item:
    id: str
    kind: ItemKind
    label: str
    required: bool = False
    min_value: int | None = None  # scale items only
    max_value: int | None = None


@dataclass(frozen=True)
class Section:
    """One card of the instrument, navigated as a unit by the client."""

    id: str
    title: str
    items: tuple[Item, ...]


@dataclass(frozen=True)
class Instrument:
    id: str
    version: int
    title: str
    sections: tuple[Section, ...]

    def items_by_id(self) -> dict[str, Item]:
        return {item.id: item for sec in self.sections for item in sec.items}

    def section_of(self, item_id: str) -> Section | None:
        for sec in self.sections:
            if any(item.id == item_id for item in sec.items):
                return sec
        return None


@dataclass(frozen=True)
class ResponseSet:
    """A patient's validated answers to one instrument version.

    ``attachment`` carries an opaque image reference for paper-mode
    submissions and is required in that mode; answers may then be empty.
    """

    id: str
    instrument_id: str
    instrument_version: int
    subject_id: str
    answers: dict[str, AnswerValue]
    completed_at: datetime
    entry_mode: EntryMode
    attachment: str | None = None


@dataclass(frozen=True)
class DistressSummary:
    """Screening outcome: thermometer score, per-section problem counts, flag."""

    thermometer_score: int
    flagged: bool
    problem_counts: dict[str, int]
    total_problems: int


@dataclass(frozen=True)
class SusResponse:
    """Raw per-item usability ratings, ten items each rated 1-5."""

    items: tuple[int, ...] = field(default=())


def response_to_dict(response: ResponseSet) -> dict:
    data = {
        "id": response.id,
        "instrument_id": response.instrument_id,
        "instrument_version": response.instrument_version,
        "subject_id": response.subject_id,
        "answers": dict(response.answers),
        "completed_at": to_iso(response.completed_at),
        "entry_mode": response.entry_mode.value,
    }
    if response.attachment is not None:
        data["attachment"] = response.attachment
    return data


def response_from_dict(data: dict) -> ResponseSet:
    try:
        return ResponseSet(
            id=str(data["id"]),
            instrument_id=str(data["instrument_id"]),
            instrument_version=int(data["instrument_version"]),
            subject_id=str(data["subject_id"]),
            answers=dict(data.get("answers") or {}),
            completed_at=parse_timestamp(data["completed_at"]),
            entry_mode=EntryMode(data["entry_mode"]),
            attachment=data.get("attachment"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed response record: {exc}") from exc
