"""Screening instruments: definitions, response validation, and scoring."""

from .model import (
    AnswerValue,
    DistressSummary,
    EntryMode,
    Instrument,
    Item,
    ItemKind,
    ResponseSet,
    Section,
    SusResponse,
    response_from_dict,
    response_to_dict,
)
from .io import (
    builtin_instrument,
    builtin_instrument_text,
    load_instrument,
    parse_instrument,
    serialize_instrument,
)
from .validate import ValidationResult, Violation, validate_response
from .scoring import DEFAULT_DISTRESS_THRESHOLD, compute_distress_summary, score_sus

__all__ = [
    "AnswerValue",
    "DistressSummary",
    "EntryMode",
    "Instrument",
    "Item",
    "ItemKind",
    "ResponseSet",
    "Section",
    "SusResponse",
    "ValidationResult",
    "Violation",
    "DEFAULT_DISTRESS_THRESHOLD",
    "builtin_instrument",
    "builtin_instrument_text",
    "compute_distress_summary",
    "load_instrument",
    "parse_instrument",
    "response_from_dict",
    "response_to_dict",
    "score_sus",
    "serialize_instrument",
    "validate_response",
]
