"""Scoring: distress summaries and usability-scale scores."""

from ..errors import InvalidLength, NotScorable, OutOfRange
from .model import DistressSummary, EntryMode, Instrument, ItemKind, ResponseSet, SusResponse

# Screening flag threshold on the 0-10 thermometer; configurable per deployment.
DEFAULT_DISTRESS_THRESHOLD = 4


def compute_distress_summary(
    instrument: Instrument,
    response: ResponseSet,
    threshold: int = DEFAULT_DISTRESS_THRESHOLD,
) -> DistressSummary:
    """Summarize a validated response: thermometer score, problem counts, flag.

    The thermometer score is the answer to the instrument's scale item;
    problem counts tally boolean-true answers per section. The flag is set
    when the score is at or above ``threshold``. Navigation mode never
    affects the result, but paper submissions (image only) are not scorable.
    """
    if response.entry_mode is EntryMode.PAPER:
        raise NotScorable("paper-mode responses are stored as images and never auto-scored")

    thermometer_score: int | None = None
    problem_counts: dict[str, int] = {}
    for section in instrument.sections:
        booleans = [item for item in section.items if item.kind is ItemKind.BOOLEAN]
        if booleans:
            problem_counts[section.id] = sum(
                1 for item in booleans if response.answers.get(item.id) is True
            )
        if thermometer_score is None:
            for item in section.items:
                if item.kind is ItemKind.SCALE and item.id in response.answers:
                    thermometer_score = int(response.answers[item.id])
                    break

    if thermometer_score is None:
        raise NotScorable("response has no answered scale item")

    return DistressSummary(
        thermometer_score=thermometer_score,
        flagged=thermometer_score >= threshold,
        problem_counts=problem_counts,
        total_problems=sum(problem_counts.values()),
    )


def score_sus(response: SusResponse) -> float:
    """Standard usability-scale score in [0, 100].

    Odd-position items (1st, 3rd, ...) contribute ``value - 1``; even-position
    items contribute ``5 - value``; the sum is multiplied by 2.5.
    """
    items = response.items
    if len(items) != 10:
        raise InvalidLength(f"expected 10 items, got {len(items)}")
    total = 0
    for index, value in enumerate(items):
        if isinstance(value, bool) or not isinstance(value, int):
            raise OutOfRange(f"item {index + 1} must be an integer in [1, 5]")
        if not 1 <= value <= 5:
            raise OutOfRange(f"item {index + 1} value {value} outside [1, 5]")
        if index % 2 == 0:  # 1st, 3rd, ... (1-indexed odd)
            total += value - 1
        else:
            total += 5 - value
    return total * 2.5
