"""Shared test fixtures and builders."""

import itertools
import json
from datetime import datetime, timezone

from ruralcare.instruments import EntryMode, ResponseSet, builtin_instrument, response_to_dict
from ruralcare.service import HealthService, ServiceConfig

UTC = timezone.utc
T0 = datetime(2021, 3, 1, 12, 0, tzinfo=UTC)

_counter = itertools.count(1)


def dt_instrument():
    return builtin_instrument("dt")


def make_dt_response(
    score=5,
    problems=(),
    mode=EntryMode.STANDARD,
    subject_id="pat-1",
    response_id=None,
    completed_at=T0,
    attachment=None,
    extra_answers=None,
):
    """A valid screening response; ``problems`` lists boolean item ids set True."""
    answers = {}
    if mode is not EntryMode.PAPER:
        answers["distress_level"] = score
        for item_id in problems:
            answers[item_id] = True
    if extra_answers:
        answers.update(extra_answers)
    return ResponseSet(
        id=response_id or f"resp-{next(_counter):05d}",
        instrument_id="distress-thermometer",
        instrument_version=1,
        subject_id=subject_id,
        answers=answers,
        completed_at=completed_at,
        entry_mode=mode,
        attachment=attachment,
    )


def response_payload(response) -> bytes:
    return json.dumps(response_to_dict(response), sort_keys=True).encode("utf-8")


class FakeClock:
    """Injectable, manually advanced clock."""

    def __init__(self, start=T0):
        self.now = start

    def __call__(self):
        return self.now

    def advance(self, delta):
        self.now = self.now + delta
        return self.now


def make_service(tmp_path=None, clock=None, **config_overrides):
    """In-memory service by default; pass tmp_path for a persistent one."""
    overrides = {"pbkdf2_iterations": 500}
    overrides.update(config_overrides)
    if tmp_path is not None:
        overrides.setdefault("data_dir", str(tmp_path))
        config = ServiceConfig(**overrides)
        return HealthService(config, clock=clock, persistent=True, fsync=False)
    config = ServiceConfig(**overrides)
    return HealthService(config, clock=clock, persistent=False)


def register_patient(service, user_id="pat-1", password="pw"):
    service.create_user(user_id, password, "patient")
    return service.login(user_id, password)


def drive_random_operations(service, clock, rng, n_ops):
    """Exercise every audited service operation with randomized arguments.

    Returns the number of operations performed; every one of them must have
    produced exactly one audit entry, whether it succeeded, was rejected, or
    was denied.
    """
    from datetime import timedelta

    from ruralcare.errors import RuralCareError
    from ruralcare.sync import NodeStore, PayloadKind, Priority, encode_bundle

    tokens = {}
    subjects = []
    mule = NodeStore("mule-1")
    sent_frames = []
    performed = 0

    def new_patient():
        nonlocal performed
        user_id = f"pat-{len(subjects):04d}"
        service.create_user(user_id, "pw", "patient")
        performed += 1  # create_user is audited
        tokens[user_id] = service.login(user_id, "pw")
        performed += 1  # so is login
        subjects.append(user_id)

    new_patient()
    service.create_user("prov-0", "pw", "provider", linked_subjects=subjects)
    performed += 1
    tokens["prov-0"] = service.login("prov-0", "pw")
    performed += 1

    def any_token():
        pick = rng.random()
        if pick < 0.1:
            return "bogus-token"
        return tokens[rng.choice(list(tokens))]

    def fresh_response(subject_id):
        return make_dt_response(
            score=rng.randint(0, 10),
            problems=("pain",) if rng.random() < 0.5 else (),
            subject_id=subject_id,
            completed_at=clock.now,
        )

    while performed < n_ops:
        clock.advance(timedelta(minutes=rng.randint(1, 300)))
        op = rng.randrange(10)
        try:
            if op == 0 and len(subjects) < 12:
                new_patient()
                continue
            if op == 1:
                # login, sometimes with a wrong password
                user = rng.choice(subjects)
                if rng.random() < 0.3:
                    service.login(user, "wrong")
                else:
                    tokens[user] = service.login(user, "pw")
            elif op == 2:
                subject = rng.choice(subjects)
                response = fresh_response(subject)
                token = tokens[subject] if rng.random() < 0.8 else any_token()
                service.submit_response(token, response)
                if rng.random() < 0.3:
                    performed += 1
                    service.submit_response(token, response)  # duplicate path
            elif op == 3:
                subject = rng.choice(subjects)
                bundle = mule.create_bundle(
                    destination="service" if rng.random() < 0.8 else "elsewhere",
                    payload_kind=PayloadKind.RESPONSE_SET,
                    payload=response_payload(fresh_response(subject)),
                    created_at=clock.now,
                    ttl_seconds=14 * 86400,
                    priority=Priority.ROUTINE,
                )
                frame = encode_bundle(bundle)
                sent_frames.append(frame)
                batch = [frame]
                if sent_frames and rng.random() < 0.4:
                    batch.append(rng.choice(sent_frames))  # replay path
                service.receive_bundles(any_token(), batch)
            elif op == 4:
                service.get_screenings(any_token(), rng.choice(subjects))
            elif op == 5:
                service.get_due(any_token(), rng.choice(subjects), now=clock.now)
            elif op == 6:
                service.query_observations(any_token(), rng.choice(subjects))
            elif op == 7:
                subject = rng.choice(subjects)
                decision = rng.choice(["granted", "denied"])
                service.set_consent(tokens[subject] if rng.random() < 0.8 else any_token(),
                                    subject, rng.choice(["heart_rate", "spo2"]), decision)
            elif op == 8:
                items = [rng.randint(1, 5) for _ in range(rng.choice([10, 10, 10, 9]))]
                service.submit_sus(any_token(), items, rng.choice(["paper_dt", "digital_dt"]))
            else:
                service.read_audit(any_token(),
                                   start_seq=rng.choice([None, 1, 5]),
                                   end_seq=rng.choice([None, 10, 10_000]))
        except RuralCareError:
            pass  # rejected and denied calls are audited all the same
        performed += 1
    return performed
