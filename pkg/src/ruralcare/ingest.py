"""Consent-gated intake of sensor observations.

Consent is per data type with default-deny: a type never explicitly granted
is rejected. Revocation is non-retroactive; previously stored observations
stay queryable because clinical history must not silently vanish.
"""

from dataclasses import dataclass, field
from datetime import datetime, timedelta

from .errors import ClockSkew, ConsentDenied
from .timeutil import ensure_utc, parse_timestamp, to_iso

DEFAULT_MAX_FUTURE_SKEW = timedelta(minutes=5)


class ConsentDecision:
    GRANTED = "granted"
    DENIED = "denied"
    ALL = (GRANTED, DENIED)


@dataclass(frozen=True)
class Observation:
    """One reading from a sensor or health app: open-vocabulary data_type."""

    id: str
    subject_id: str
    data_type: str
    value: float
    unit: str
    observed_at: datetime
    source: str

    def validate(self) -> None:
        if not self.id or not self.subject_id or not self.data_type:
            raise ValueError("observation needs id, subject_id, and data_type")
        if not self.unit:
            raise ValueError("unit must be non-empty")


@dataclass(frozen=True)
class ConsentSettings:
    subject_id: str
    grants: dict[str, str] = field(default_factory=dict)
    updated_at: datetime | None = None

    def allows(self, data_type: str) -> bool:
        # Absent entries are denied: nothing flows without an explicit grant.
        return self.grants.get(data_type) == ConsentDecision.GRANTED


def set_consent(
    settings: ConsentSettings, data_type: str, decision: str, now: datetime
) -> ConsentSettings:
    """Return updated settings; audit logging is wired in by the service."""
    if decision not in ConsentDecision.ALL:
        raise ValueError(f"decision must be one of {ConsentDecision.ALL}, got {decision!r}")
    if not data_type:
        raise ValueError("data_type must be non-empty")
    grants = dict(settings.grants)
    grants[data_type] = decision
    return ConsentSettings(subject_id=settings.subject_id, grants=grants,
                           updated_at=ensure_utc(now))


class ObservationStore:
    """Append-only observation storage for any number of subjects."""

    def __init__(self, max_future_skew: timedelta = DEFAULT_MAX_FUTURE_SKEW):
        self.max_future_skew = max_future_skew
        self._by_id: dict[str, Observation] = {}
        self._by_subject: dict[str, list[Observation]] = {}

    def record(self, obs: Observation, consent: ConsentSettings, now: datetime) -> Observation:
        """Store iff consent grants the data type; idempotent by observation id."""
        obs.validate()
        now = ensure_utc(now)
        if ensure_utc(obs.observed_at) > now + self.max_future_skew:
            raise ClockSkew(
                f"observation {obs.id} timestamped {to_iso(obs.observed_at)}, "
                f"beyond allowed skew"
            )
        if not consent.allows(obs.data_type):
            raise ConsentDenied(f"no grant for data type {obs.data_type!r}")
        if obs.id in self._by_id:
            return self._by_id[obs.id]
        self._by_id[obs.id] = obs
        self._by_subject.setdefault(obs.subject_id, []).append(obs)
        return obs

    def query(
        self,
        subject_id: str,
        data_type: str | None = None,
        start: datetime | None = None,
        end: datetime | None = None,
    ) -> list[Observation]:
        """Matching observations sorted by observed_at ascending (id tie-break)."""
        rows = self._by_subject.get(subject_id, [])
        picked = []
        for obs in rows:
            if data_type is not None and obs.data_type != data_type:
                continue
            if start is not None and obs.observed_at < ensure_utc(start):
                continue
            if end is not None and obs.observed_at > ensure_utc(end):
                continue
            picked.append(obs)
        return sorted(picked, key=lambda o: (o.observed_at, o.id))

    def all_observations(self) -> list[Observation]:
        return sorted(self._by_id.values(), key=lambda o: (o.observed_at, o.id))

    def __len__(self) -> int:
        return len(self._by_id)


def observation_to_dict(obs: Observation) -> dict:
    return {
        "id": obs.id,
        "subject_id": obs.subject_id,
        "data_type": obs.data_type,
        "value": obs.value,
        "unit": obs.unit,
        "observed_at": to_iso(obs.observed_at),
        "source": obs.source,
    }


def observation_from_dict(data: dict) -> Observation:
    try:
        return Observation(
            id=str(data["id"]),
            subject_id=str(data["subject_id"]),
            data_type=str(data["data_type"]),
            value=float(data["value"]),
            unit=str(data["unit"]),
            observed_at=parse_timestamp(data["observed_at"]),
            source=str(data.get("source", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed observation record: {exc}") from exc
