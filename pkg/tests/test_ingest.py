"""Consent gating and observation storage."""

from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, strategies as st

from ruralcare.errors import ClockSkew, ConsentDenied
from ruralcare.ingest import (
    ConsentDecision,
    ConsentSettings,
    Observation,
    ObservationStore,
    observation_from_dict,
    observation_to_dict,
    set_consent,
)

UTC = timezone.utc
NOW = datetime(2021, 7, 1, 9, 0, tzinfo=UTC)


def obs(oid="o1", data_type="heart_rate", at=NOW, subject="pat-1", value=72.0, unit="bpm"):
    return Observation(id=oid, subject_id=subject, data_type=data_type, value=value,
                       unit=unit, observed_at=at, source="sensor-77")


def granted(*types, subject="pat-1"):
    settings = ConsentSettings(subject_id=subject)
    for data_type in types:
        settings = set_consent(settings, data_type, ConsentDecision.GRANTED, now=NOW)
    return settings


def test_grant_then_record_then_query():
    store = ObservationStore()
    store.record(obs(), granted("heart_rate"), now=NOW)
    rows = store.query("pat-1", "heart_rate")
    assert [o.id for o in rows] == ["o1"]


def test_default_deny_without_grant_entry():
    store = ObservationStore()
    with pytest.raises(ConsentDenied):
        store.record(obs(), ConsentSettings(subject_id="pat-1"), now=NOW)


def test_explicit_deny_rejects():
    settings = set_consent(granted("heart_rate"), "heart_rate",
                           ConsentDecision.DENIED, now=NOW)
    store = ObservationStore()
    with pytest.raises(ConsentDenied):
        store.record(obs(), settings, now=NOW)


def test_revocation_is_non_retroactive():
    store = ObservationStore()
    settings = granted("heart_rate")
    store.record(obs("o1"), settings, now=NOW)
    after_store = [o.id for o in store.query("pat-1")]
    settings = set_consent(settings, "heart_rate", ConsentDecision.DENIED, now=NOW)
    with pytest.raises(ConsentDenied):
        store.record(obs("o2"), settings, now=NOW)
    assert [o.id for o in store.query("pat-1")] == after_store == ["o1"]


def test_decision_outside_enum_rejected():
    with pytest.raises(ValueError):
        set_consent(ConsentSettings(subject_id="s"), "heart_rate", "maybe", now=NOW)


def test_future_observation_beyond_skew_rejected():
    store = ObservationStore()
    too_late = obs(at=NOW + timedelta(days=365))
    with pytest.raises(ClockSkew):
        store.record(too_late, granted("heart_rate"), now=NOW)
    barely = obs(at=NOW + timedelta(minutes=4))
    store.record(barely, granted("heart_rate"), now=NOW)  # within default skew


def test_record_is_idempotent_by_id():
    store = ObservationStore()
    settings = granted("heart_rate")
    store.record(obs("o1"), settings, now=NOW)
    store.record(obs("o1"), settings, now=NOW)
    assert len(store) == 1


def test_query_filters_and_ordering():
    store = ObservationStore()
    settings = granted("heart_rate", "spo2")
    times = [NOW - timedelta(hours=h) for h in (1, 5, 3)]
    for i, at in enumerate(times):
        store.record(obs(f"o{i}", at=at), settings, now=NOW)
    store.record(obs("other", data_type="spo2", at=NOW, value=97.0, unit="%"),
                 settings, now=NOW)

    ranged = store.query("pat-1", "heart_rate", start=NOW - timedelta(hours=10),
                         end=NOW - timedelta(hours=2))
    assert [o.id for o in ranged] == ["o1", "o2"]  # hours -5 and -3, in time order
    ordered = store.query("pat-1", "heart_rate")
    assert [o.observed_at for o in ordered] == sorted(o.observed_at for o in ordered)
    assert store.query("pat-1", "heart_rate", start=NOW + timedelta(hours=1)) == []
    assert store.query("nobody") == []


def test_empty_unit_rejected():
    with pytest.raises(ValueError):
        obs(unit="").validate()


def test_observation_dict_round_trip():
    original = obs()
    assert observation_from_dict(observation_to_dict(original)) == original


@given(st.lists(st.from_regex(r"[a-z][a-z0-9_]{0,15}", fullmatch=True),
                min_size=1, max_size=8, unique=True))
def test_default_deny_over_random_type_labels(labels):
    store = ObservationStore()
    settings = ConsentSettings(subject_id="pat-1")
    for index, label in enumerate(labels):
        with pytest.raises(ConsentDenied):
            store.record(obs(f"o{index}", data_type=label), settings, now=NOW)
    assert len(store) == 0
