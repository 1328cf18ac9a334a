"""Screening cadence: when the next screening is due and how adherent a patient is.

All arithmetic is day-denominated on UTC timestamps; windows are
``interval_days`` wide, anchored at enrollment. A completion anywhere inside
a window satisfies that window.
"""

from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum

from .errors import InvalidTimeline
from .timeutil import ensure_utc

DEFAULT_INTERVAL_DAYS = 42  # clinic baseline: screening roughly every six weeks
DEFAULT_GRACE_DAYS = 7


@dataclass(frozen=True)
class CadencePolicy:
    interval_days: int = DEFAULT_INTERVAL_DAYS
    grace_days: int = DEFAULT_GRACE_DAYS

    def __post_init__(self):
        if self.interval_days < 1:
            raise ValueError("interval_days must be >= 1")
        if self.grace_days < 0:
            raise ValueError("grace_days must be >= 0")

    @property
    def interval(self) -> timedelta:
        return timedelta(days=self.interval_days)

    @property
    def grace(self) -> timedelta:
        return timedelta(days=self.grace_days)


class ScreeningState(str, Enum):
    UPCOMING = "upcoming"
    DUE = "due"
    OVERDUE = "overdue"


@dataclass(frozen=True)
class ScreeningStatus:
    state: ScreeningState
    due_at: datetime
    reference: str | None = None  # id of the last completed response, if any


@dataclass(frozen=True)
class AdherenceRecord:
    windows_elapsed: int
    windows_completed: int

    def __post_init__(self):
        if self.windows_completed > self.windows_elapsed:
            raise ValueError("windows_completed cannot exceed windows_elapsed")


def next_due(
    last_completed_at: datetime | None,
    enrolled_at: datetime,
    policy: CadencePolicy,
) -> datetime:
    """Next screening due date: last completion plus the interval.

    With no completion on record the baseline screening is due immediately,
    at enrollment.
    """
    enrolled_at = ensure_utc(enrolled_at)
    if last_completed_at is None:
        return enrolled_at
    last_completed_at = ensure_utc(last_completed_at)
    if last_completed_at < enrolled_at:
        raise InvalidTimeline("completion precedes enrollment")
    return last_completed_at + policy.interval


def status(
    now: datetime,
    due_at: datetime,
    policy: CadencePolicy,
    reference: str | None = None,
) -> ScreeningStatus:
    """Classify ``now`` against a due date: upcoming, due, or overdue.

    The three states partition the timeline: upcoming before ``due_at``,
    due through the grace window, overdue after it.
    """
    now = ensure_utc(now)
    due_at = ensure_utc(due_at)
    if now < due_at:
        state = ScreeningState.UPCOMING
    elif now <= due_at + policy.grace:
        state = ScreeningState.DUE
    else:
        state = ScreeningState.OVERDUE
    return ScreeningStatus(state=state, due_at=due_at, reference=reference)


def adherence(
    history: list[datetime],
    enrolled_at: datetime,
    now: datetime,
    policy: CadencePolicy,
) -> AdherenceRecord:
    """Count whole screening windows elapsed and how many contain a completion.

    ``history`` must be sorted ascending. Window ``k`` spans
    ``[enrolled + k*interval, enrolled + (k+1)*interval)``; only fully elapsed
    windows are counted.
    """
    enrolled_at = ensure_utc(enrolled_at)
    now = ensure_utc(now)
    if now < enrolled_at:
        raise InvalidTimeline("now precedes enrollment")
    stamps = [ensure_utc(ts) for ts in history]
    if any(a > b for a, b in zip(stamps, stamps[1:])):
        raise InvalidTimeline("history must be sorted ascending")
    if stamps and stamps[0] < enrolled_at:
        raise InvalidTimeline("completion precedes enrollment")

    interval_s = policy.interval.total_seconds()
    elapsed = int((now - enrolled_at).total_seconds() // interval_s)
    completed_windows = set()
    for ts in stamps:
        k = int((ts - enrolled_at).total_seconds() // interval_s)
        if 0 <= k < elapsed:
            completed_windows.add(k)
    return AdherenceRecord(windows_elapsed=elapsed, windows_completed=len(completed_windows))
