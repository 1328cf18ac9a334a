"""Service node: auth, submissions, bundles, audit, event-sourcing."""

import json
import random
from datetime import timedelta

import pytest

from ruralcare.errors import (
    AuthFailure,
    DuplicateSubmission,
    UnknownSubject,
    ValidationFailure,
)
from ruralcare.instruments import EntryMode
from ruralcare.scheduling import ScreeningState
from ruralcare.service.events import AuditOutcome
from ruralcare.sync import NodeStore, PayloadKind, Priority, decode_bundle, encode_bundle

from helpers import (
    FakeClock,
    T0,
    drive_random_operations,
    make_dt_response,
    make_service,
    register_patient,
    response_payload,
)


# ---------------------------------------------------------------------------
# accounts and login
# ---------------------------------------------------------------------------

def test_login_round_trip_and_audit():
    service = make_service()
    token = register_patient(service)
    assert service._actor(token).user_id == "pat-1"
    entries = service.audit_trail()
    assert [e.action for e in entries] == ["write", "login"]
    assert all(e.outcome == "allowed" for e in entries)


def test_login_bad_password_denied_and_audited():
    service = make_service()
    service.create_user("pat-1", "pw", "patient")
    with pytest.raises(AuthFailure):
        service.login("pat-1", "nope")
    assert service.audit_trail()[-1].outcome == AuditOutcome.DENIED


def test_duplicate_user_rejected():
    service = make_service()
    service.create_user("u", "pw", "other")
    with pytest.raises(ValueError):
        service.create_user("u", "pw", "other")


def test_patient_linkage_forced_to_self():
    service = make_service()
    account = service.create_user("pat-9", "pw", "patient", linked_subjects=["someone-else"])
    assert account.linked_subjects == frozenset({"pat-9"})


# ---------------------------------------------------------------------------
# submit_response
# ---------------------------------------------------------------------------

def test_submit_response_accepts_and_audits_once():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    before = len(service.audit_trail())
    response = make_dt_response(score=7, problems=("pain",), completed_at=clock.now)
    accepted = service.submit_response(token, response)
    assert accepted == response.id
    entries = service.audit_trail()
    assert len(entries) == before + 1
    assert entries[-1].action == "write" and entries[-1].target == "pat-1"
    rows = service.get_screenings(token, "pat-1")
    assert len(rows) == 1
    assert rows[0]["distress"]["thermometer_score"] == 7
    assert rows[0]["distress"]["flagged"] is True


def test_duplicate_submission_rejected_without_state_change():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    response = make_dt_response(completed_at=clock.now)
    service.submit_response(token, response)
    with pytest.raises(DuplicateSubmission):
        service.submit_response(token, response)
    # the rejection appended an audit event, but no screening state changed
    snapshot = service.state_snapshot()
    assert len(snapshot["screenings"]["pat-1"]) == 1


def test_caregiver_cannot_submit_for_patient():
    clock = FakeClock()
    service = make_service(clock=clock)
    register_patient(service)
    service.create_user("care-1", "pw", "caregiver", linked_subjects=["pat-1"])
    caregiver_token = service.login("care-1", "pw")
    with pytest.raises(AuthFailure):
        service.submit_response(caregiver_token, make_dt_response(completed_at=clock.now))
    assert service.audit_trail()[-1].outcome == AuditOutcome.DENIED


def test_invalid_response_reports_violations():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    with pytest.raises(ValidationFailure) as err:
        service.submit_response(token, make_dt_response(score=11, completed_at=clock.now))
    assert any("out of range" in v.reason for v in err.value.violations)


def test_paper_mode_response_stored_without_summary():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    response = make_dt_response(mode=EntryMode.PAPER, attachment="photo-1",
                                completed_at=clock.now)
    service.submit_response(token, response)
    rows = service.get_screenings(token, "pat-1")
    assert rows[0]["distress"] is None
    assert rows[0]["response"]["has_attachment"] is True


# ---------------------------------------------------------------------------
# bundles
# ---------------------------------------------------------------------------

def patient_frame(clock, response=None, mule_id="phone-1", destination="service"):
    mule = NodeStore(mule_id)
    response = response or make_dt_response(completed_at=clock.now)
    bundle = mule.create_bundle(
        destination=destination,
        payload_kind=PayloadKind.RESPONSE_SET,
        payload=response_payload(response),
        created_at=clock.now,
        ttl_seconds=14 * 86400,
        priority=Priority.ELEVATED,
    )
    return encode_bundle(bundle), bundle, response


def test_bundle_with_valid_response_delivered_and_acked():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    frame, bundle, response = patient_frame(clock)
    result = service.receive_bundles(token, [frame])
    assert result["statuses"][0]["status"] == "accepted"
    assert result["statuses"][0]["response_id"] == response.id
    acks = [decode_bundle(bytes.fromhex(a)) for a in result["acks"]]
    assert [a.bundle_id for a in acks] == [f"ack-{bundle.bundle_id}"]
    assert service.get_screenings(token, "pat-1")


def test_replayed_bundle_acked_without_state_change():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    frame, bundle, _ = patient_frame(clock)
    service.receive_bundles(token, [frame])
    result = service.receive_bundles(token, [frame])
    assert result["statuses"][0]["status"] == "duplicate"
    assert result["acks"]  # ack re-sent for the replayed bundle
    snapshot = service.state_snapshot()
    assert len(snapshot["screenings"]["pat-1"]) == 1


def test_expired_bundle_rejected():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    mule = NodeStore("phone-1")
    bundle = mule.create_bundle("service", PayloadKind.RESPONSE_SET,
                                response_payload(make_dt_response(completed_at=clock.now)),
                                clock.now, ttl_seconds=60)
    frame = encode_bundle(bundle)
    clock.advance(timedelta(hours=1))
    result = service.receive_bundles(token, [frame])
    assert result["statuses"][0] == {"bundle_id": bundle.bundle_id,
                                     "status": "expired", "error": "Expired"}


def test_malformed_frame_reported_per_bundle():
    service = make_service()
    token = register_patient(service)
    result = service.receive_bundles(token, [b"\x00\x00\x00\x02XX"])
    assert result["statuses"][0]["status"] == "malformed"
    assert result["statuses"][0]["error"] == "MalformedBundle"


def test_bundle_not_for_service_is_relayed_and_held():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    frame, bundle, _ = patient_frame(clock, destination="other-clinic")
    result = service.receive_bundles(token, [frame])
    assert result["statuses"][0]["status"] == "relayed"
    assert result["acks"] == []
    assert bundle.bundle_id in service.state_snapshot()["node"]["held"]


def test_observation_bundle_respects_consent():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    obs_record = {
        "id": "obs-1", "subject_id": "pat-1", "data_type": "heart_rate",
        "value": 72.0, "unit": "bpm",
        "observed_at": clock.now.isoformat(), "source": "cuff-9",
    }
    mule = NodeStore("phone-2")

    def obs_frame(record):
        bundle = mule.create_bundle("service", PayloadKind.OBSERVATION,
                                    json.dumps(record).encode(), clock.now, 86400)
        return encode_bundle(bundle)

    denied = service.receive_bundles(token, [obs_frame(obs_record)])
    assert denied["statuses"][0]["status"] == "rejected"
    assert denied["statuses"][0]["error"] == "ConsentDenied"

    service.set_consent(token, "pat-1", "heart_rate", "granted")
    stored = service.receive_bundles(token, [obs_frame({**obs_record, "id": "obs-2"})])
    assert stored["statuses"][0]["status"] == "stored"
    rows = service.query_observations(token, "pat-1", "heart_rate")
    assert [r["id"] for r in rows] == ["obs-2"]


# ---------------------------------------------------------------------------
# reads and authorization
# ---------------------------------------------------------------------------

def test_provider_reads_linked_patient_only():
    clock = FakeClock()
    service = make_service(clock=clock)
    token = register_patient(service)
    service.submit_response(token, make_dt_response(completed_at=clock.now))
    service.create_user("prov-1", "pw", "provider", linked_subjects=["pat-1"])
    provider = service.login("prov-1", "pw")
    rows = service.get_screenings(provider, "pat-1")
    assert len(rows) == 1

    service.create_user("pat-2", "pw", "patient")
    other = service.login("pat-2", "pw")
    with pytest.raises(AuthFailure):
        service.get_screenings(other, "pat-1")
    assert service.audit_trail()[-1].outcome == AuditOutcome.DENIED
    with pytest.raises(AuthFailure):
        service.get_screenings(provider, "pat-2")  # provider not linked to pat-2


def test_empty_history_reads_as_empty_list():
    service = make_service()
    token = register_patient(service)
    assert service.get_screenings(token, "pat-1") == []
    assert service.query_observations(token, "pat-1") == []


def test_get_due_lifecycle():
    clock = FakeClock(T0)
    service = make_service(clock=clock)
    token = register_patient(service)  # enrolled at T0

    fresh = service.get_due(token, "pat-1", now=clock.now)
    assert fresh.state is ScreeningState.DUE
    assert fresh.due_at == T0
    assert fresh.reference is None

    clock.advance(timedelta(days=1))
    service.submit_response(token, make_dt_response(completed_at=clock.now))
    soon = service.get_due(token, "pat-1", now=clock.now + timedelta(days=1))
    assert soon.state is ScreeningState.UPCOMING

    # completed 50 days ago with interval 42 and grace 7: 50 > 49, overdue
    overdue = service.get_due(token, "pat-1", now=clock.now + timedelta(days=50))
    assert overdue.state is ScreeningState.OVERDUE
    assert overdue.reference is not None


def test_get_due_unknown_subject():
    service = make_service()
    service.create_user("prov-1", "pw", "provider", linked_subjects=["ghost"])
    provider = service.login("prov-1", "pw")
    with pytest.raises(UnknownSubject):
        service.get_due(provider, "ghost")


# ---------------------------------------------------------------------------
# usability scores
# ---------------------------------------------------------------------------

def test_sus_scored_and_stored_with_role():
    service = make_service()
    token = register_patient(service)
    score = service.submit_sus(token, [3] * 10, "digital_dt")
    assert score == 50.0
    results = service.state_snapshot()["sus_results"]
    assert results[0]["role"] == "patient"
    assert results[0]["tool_label"] == "digital_dt"


def test_sus_validation_failure():
    service = make_service()
    token = register_patient(service)
    with pytest.raises(ValidationFailure):
        service.submit_sus(token, [3] * 9, "digital_dt")


def test_repeated_sus_submissions_both_stored():
    service = make_service()
    token = register_patient(service)
    service.submit_sus(token, [3] * 10, "paper_dt")
    service.submit_sus(token, [4] * 10, "paper_dt")
    assert len(service.state_snapshot()["sus_results"]) == 2


# ---------------------------------------------------------------------------
# audit log
# ---------------------------------------------------------------------------

def test_audit_read_requires_provider_and_counts_prior_actions():
    service = make_service()
    token = register_patient(service)
    service.submit_sus(token, [3] * 10, "x")
    service.create_user("prov-1", "pw", "provider")
    provider = service.login("prov-1", "pw")
    n_before = len(service.audit_trail())
    entries = service.read_audit(provider)
    assert len(entries) == n_before
    assert [e["seq"] for e in entries] == list(range(1, n_before + 1))
    with pytest.raises(AuthFailure):
        service.read_audit(token)


def test_audit_empty_range():
    service = make_service()
    service.create_user("prov-1", "pw", "provider")
    provider = service.login("prov-1", "pw")
    assert service.read_audit(provider, start_seq=100, end_seq=5) == []


def test_every_audited_operation_appends_exactly_one_entry():
    clock = FakeClock()
    rng = random.Random(2024)
    service = make_service(clock=clock)
    performed = drive_random_operations(service, clock, rng, n_ops=120)
    assert len(service.audit_trail()) == performed
    seqs = [entry.seq for entry in service.audit_trail()]
    assert seqs == list(range(1, performed + 1))


# ---------------------------------------------------------------------------
# event sourcing: replay, persistence, snapshots, crash consistency
# ---------------------------------------------------------------------------

def test_replay_reproduces_live_state(tmp_path):
    clock = FakeClock()
    rng = random.Random(7)
    service = make_service(tmp_path, clock=clock)
    drive_random_operations(service, clock, rng, n_ops=150)
    live = service.state_digest()
    service.close()

    replayed = make_service(tmp_path, clock=clock)
    assert replayed.state_digest() == live
    replayed.close()


def test_snapshot_plus_tail_replay(tmp_path):
    clock = FakeClock()
    service = make_service(tmp_path, clock=clock)
    token = register_patient(service)
    service.submit_response(token, make_dt_response(completed_at=clock.now))
    service.write_snapshot()
    service.submit_sus(token, [2] * 10, "digital_dt")
    live = service.state_digest()
    service.close()

    reopened = make_service(tmp_path, clock=clock)
    assert reopened.state_digest() == live
    reopened.close()


def test_crash_consistency_prefixes(tmp_path):
    clock = FakeClock()
    rng = random.Random(13)
    service = make_service(tmp_path / "live", clock=clock)
    digests = []
    drive_random_operations(service, clock, rng, n_ops=25)
    log_lines = (tmp_path / "live" / "events.jsonl").read_text().splitlines()
    service.close()

    # replay each prefix and record its digest
    for k in range(len(log_lines) + 1):
        prefix_dir = tmp_path / f"prefix-{k}"
        prefix_dir.mkdir()
        (prefix_dir / "events.jsonl").write_text(
            "".join(line + "\n" for line in log_lines[:k]), encoding="utf-8")
        node = make_service(prefix_dir, clock=clock)
        assert node.last_seq() == k
        digests.append(node.state_digest())
        node.close()

    # each prefix state equals the state one more event evolves from:
    # digests must be distinct in seq and reproducible
    again = make_service(tmp_path / "prefix-5", clock=clock)
    assert again.state_digest() == digests[5]
    again.close()


def test_torn_final_line_is_ignored_on_startup(tmp_path):
    clock = FakeClock()
    service = make_service(tmp_path, clock=clock)
    register_patient(service)
    service.close()
    log = tmp_path / "events.jsonl"
    text = log.read_text()
    log.write_text(text + '{"seq": 99, "truncated', encoding="utf-8")
    reopened = make_service(tmp_path, clock=clock)
    assert reopened.last_seq() == 2
    reopened.close()
