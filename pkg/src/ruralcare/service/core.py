"""The clinic-side node: authenticated operations over event-sourced state.

Every operation that reads or writes subject data appends exactly one event
to the append-only log; the audit record is embedded in that event, so the
audit trail is gap-free by construction and replaying the log from empty
reproduces the full queryable state (screenings, observations, consent,
usability scores, sync-node contents, and the audit trail itself).

Replay determinism assumes a stable deployment configuration (instrument
definitions, distress threshold, cadence policy), which is the usual
event-sourcing caveat: the fold is parameterized by config.

Concurrency: a process-wide lock serializes event appends; reads run under
the same lock and therefore always see a state no older than the last
completed append.
"""

import hashlib
import json
import threading
from datetime import datetime, timedelta
from pathlib import Path

from ..errors import (
    AuthFailure,
    ClockSkew,
    ConsentDenied,
    DuplicateSubmission,
    InvalidLength,
    MalformedBundle,
    NotScorable,
    OutOfRange,
    UnknownSubject,
    ValidationFailure,
    VersionMismatch,
)
from ..ingest import (
    ConsentDecision,
    ConsentSettings,
    ObservationStore,
    observation_from_dict,
    observation_to_dict,
    set_consent as apply_consent,
)
from ..instruments import (
    Instrument,
    ResponseSet,
    SusResponse,
    builtin_instrument,
    compute_distress_summary,
    load_instrument,
    response_from_dict,
    response_to_dict,
    score_sus,
    validate_response,
)
from ..scheduling import ScreeningStatus, next_due, status as screening_status
from ..sync import decode_bundle, encode_bundle, NodeStore, PayloadKind
from ..sync.store import ACK_ID_PREFIX
from ..timeutil import ensure_utc, parse_timestamp, to_iso, utc_now
from .accounts import Role, UserAccount, hash_password, mint_token, verify_password
from .config import ServiceConfig
from .events import AuditAction, AuditOutcome, EventLog, audit_from_event

EVENTS_FILENAME = "events.jsonl"
ANONYMOUS = "anonymous"


class ServiceState:
    """Everything replaying the event log reconstructs."""

    def __init__(self, config: ServiceConfig):
        self.users: dict[str, UserAccount] = {}
        self.credentials: dict[str, dict] = {}
        self.screenings: dict[str, list[dict]] = {}
        self.response_ids: set[str] = set()
        self.consents: dict[str, ConsentSettings] = {}
        self.observations = ObservationStore(
            max_future_skew=timedelta(seconds=config.max_future_skew_s)
        )
        self.sus_results: list[dict] = []
        self.node = NodeStore(config.node_id, payload_cap=config.payload_cap)
        self.audit: list = []


class HealthService:
    """Service facade; one instance per data directory."""

    def __init__(
        self,
        config: ServiceConfig | None = None,
        clock=None,
        persistent: bool = True,
        fsync: bool = True,
    ):
        self.config = config or ServiceConfig()
        self._clock = clock or utc_now
        self._lock = threading.RLock()
        self._tokens: dict[str, str] = {}
        self._instruments = self._load_instruments()
        self._state = ServiceState(self.config)

        if persistent:
            data_dir = self.config.data_path()
            data_dir.mkdir(parents=True, exist_ok=True)
            snapshot_seq = self._load_latest_snapshot(data_dir)
            self._log = EventLog(data_dir / EVENTS_FILENAME, fsync=fsync)
            for event in self._log.events():
                if event["seq"] > snapshot_seq:
                    self._apply(event)
        else:
            self._log = EventLog(None)

    def _load_instruments(self) -> dict[str, Instrument]:
        registry = {}
        for name in ("dt", "sus"):
            instrument = builtin_instrument(name)
            registry[instrument.id] = instrument
        for path in self.config.instrument_files:
            instrument = load_instrument(Path(path).read_text(encoding="utf-8"))
            registry[instrument.id] = instrument
        return registry

    def instrument(self, instrument_id: str) -> Instrument | None:
        return self._instruments.get(instrument_id)

    def _now(self) -> datetime:
        return ensure_utc(self._clock())

    # ------------------------------------------------------------------
    # event plumbing
    # ------------------------------------------------------------------

    def _record(self, kind: str, actor: str, action: str, target: str,
                outcome: str, data: dict):
        """Append one audited event and fold it into state; returns apply effects."""
        event = {
            "at": to_iso(self._now()),
            "kind": kind,
            "actor": actor,
            "action": action,
            "target": target,
            "outcome": outcome,
            "data": data,
        }
        event = self._log.append(event)
        effects = self._apply(event)
        self._maybe_autosnapshot()
        return effects

    def _apply(self, event: dict):
        """Pure fold of one event into state; used for live ops and replay."""
        self._state.audit.append(audit_from_event(event))
        if event["outcome"] != AuditOutcome.ALLOWED:
            return None
        kind = event["kind"]
        data = event.get("data", {})
        at = parse_timestamp(event["at"])
        if kind == "user_created":
            return self._apply_user_created(data)
        if kind == "response_accepted":
            return self._store_screening(data["response"])
        if kind == "consent_changed":
            return self._apply_consent_changed(data, at)
        if kind == "sus_scored":
            self._state.sus_results.append(dict(data))
            return None
        if kind == "bundles_received":
            return self._apply_bundles(data.get("frames", []), at)
        # login, *_rejected, *_read: audit-only events
        return None

    def _apply_user_created(self, data: dict) -> UserAccount:
        account = UserAccount(
            user_id=data["user_id"],
            role=Role(data["role"]),
            linked_subjects=frozenset(data.get("linked_subjects", [])),
            enrolled_at=parse_timestamp(data["enrolled_at"]) if data.get("enrolled_at") else None,
        )
        self._state.users[account.user_id] = account
        self._state.credentials[account.user_id] = dict(data["credentials"])
        return account

    def _apply_consent_changed(self, data: dict, at: datetime) -> ConsentSettings:
        subject_id = data["subject_id"]
        current = self._state.consents.get(subject_id, ConsentSettings(subject_id=subject_id))
        updated = apply_consent(current, data["data_type"], data["decision"], now=at)
        self._state.consents[subject_id] = updated
        return updated

    def _store_screening(self, response_data: dict) -> dict | None:
        """Insert an accepted response; returns its distress summary dict, if scorable."""
        response = response_from_dict(response_data)
        summary = None
        if (
            response.entry_mode.scorable
            and response.instrument_id == self.config.distress_instrument_id
        ):
            instrument = self._instruments[response.instrument_id]
            try:
                summary_obj = compute_distress_summary(
                    instrument, response, self.config.distress_threshold
                )
                summary = {
                    "thermometer_score": summary_obj.thermometer_score,
                    "flagged": summary_obj.flagged,
                    "problem_counts": dict(summary_obj.problem_counts),
                    "total_problems": summary_obj.total_problems,
                }
            except NotScorable:
                summary = None
        row = {"response": dict(response_data), "summary": summary}
        rows = self._state.screenings.setdefault(response.subject_id, [])
        rows.append(row)
        rows.sort(key=lambda r: (r["response"]["completed_at"], r["response"]["id"]))
        self._state.response_ids.add(response.id)
        return summary

    # ------------------------------------------------------------------
    # authentication and authorization
    # ------------------------------------------------------------------

    def _actor(self, token: str | None) -> UserAccount | None:
        user_id = self._tokens.get(token or "")
        if user_id is None:
            return None
        return self._state.users.get(user_id)

    def _require_actor(self, token, kind: str, action: str, target: str) -> UserAccount:
        actor = self._actor(token)
        if actor is None:
            self._record(kind, ANONYMOUS, action, target, AuditOutcome.DENIED,
                         {"error": "AuthFailure"})
            raise AuthFailure("invalid or expired token")
        return actor

    def _deny(self, kind: str, actor: UserAccount, action: str, target: str, why: str):
        self._record(kind, actor.user_id, action, target, AuditOutcome.DENIED, {"error": why})
        raise AuthFailure(why)

    # ------------------------------------------------------------------
    # administration (no token; used by the CLI, not exposed over HTTP)
    # ------------------------------------------------------------------

    def create_user(
        self,
        user_id: str,
        password: str,
        role: str | Role,
        linked_subjects=(),
        actor: str = "system",
    ) -> UserAccount:
        with self._lock:
            if not user_id:
                raise ValueError("user_id must be non-empty")
            if user_id in self._state.users:
                raise ValueError(f"user {user_id!r} already exists")
            role = Role(role)
            if role is Role.PATIENT:
                linked = [user_id]
                enrolled_at = to_iso(self._now())
            else:
                linked = sorted(set(linked_subjects))
                enrolled_at = None
            data = {
                "user_id": user_id,
                "role": role.value,
                "linked_subjects": linked,
                "enrolled_at": enrolled_at,
                "credentials": hash_password(password, self.config.pbkdf2_iterations),
            }
            return self._record("user_created", actor, AuditAction.WRITE, user_id,
                                AuditOutcome.ALLOWED, data)

    # ------------------------------------------------------------------
    # API operations
    # ------------------------------------------------------------------

    def login(self, user_id: str, password: str) -> str:
        with self._lock:
            stored = self._state.credentials.get(user_id)
            if stored is None or not verify_password(stored, password):
                self._record("login", user_id or ANONYMOUS, AuditAction.LOGIN, user_id,
                             AuditOutcome.DENIED, {"error": "AuthFailure"})
                raise AuthFailure("unknown user or wrong password")
            self._record("login", user_id, AuditAction.LOGIN, user_id,
                         AuditOutcome.ALLOWED, {"user_id": user_id})
            token = mint_token()
            self._tokens[token] = user_id
            return token

    def submit_response(self, token: str | None, response: ResponseSet | dict) -> str:
        """Accept one screening response from its own patient."""
        with self._lock:
            parse_error = None
            if isinstance(response, dict):
                try:
                    response = response_from_dict(response)
                except ValueError as exc:
                    response = None
                    parse_error = str(exc)
            if response is None:
                parse_error = parse_error or "missing response body"
                actor = self._require_actor(token, "response_rejected",
                                            AuditAction.WRITE, "response")
                self._record("response_rejected", actor.user_id, AuditAction.WRITE, "response",
                             AuditOutcome.ALLOWED, {"error": "ValidationFailure",
                                                    "detail": parse_error})
                raise ValidationFailure(parse_error)

            target = response.subject_id
            actor = self._require_actor(token, "response_rejected", AuditAction.WRITE, target)
            if actor.role is not Role.PATIENT or response.subject_id != actor.user_id:
                self._deny("response_rejected", actor, AuditAction.WRITE, target,
                           "patients may submit only their own responses")

            data = {"response": response_to_dict(response)}
            try:
                self._validate_response_record(response)
                if response.id in self._state.response_ids:
                    raise DuplicateSubmission(f"response {response.id} already accepted")
            except (ValidationFailure, DuplicateSubmission) as exc:
                data["error"] = exc.code
                data["detail"] = str(exc)
                if isinstance(exc, ValidationFailure):
                    data["violations"] = [
                        {"item_id": v.item_id, "reason": v.reason} for v in exc.violations
                    ]
                self._record("response_rejected", actor.user_id, AuditAction.WRITE,
                             target, AuditOutcome.ALLOWED, data)
                raise
            self._record("response_accepted", actor.user_id, AuditAction.WRITE, target,
                         AuditOutcome.ALLOWED, data)
            return response.id

    def _validate_response_record(self, response: ResponseSet) -> None:
        instrument = self._instruments.get(response.instrument_id)
        if instrument is None:
            raise ValidationFailure(f"unknown instrument {response.instrument_id!r}")
        if response.subject_id not in self._state.users:
            raise ValidationFailure(f"unknown subject {response.subject_id!r}")
        try:
            verdict = validate_response(instrument, response)
        except VersionMismatch as exc:
            raise ValidationFailure(str(exc)) from exc
        if not verdict.ok:
            summary = "; ".join(f"{v.item_id}: {v.reason}" for v in verdict.violations)
            raise ValidationFailure(f"response failed validation: {summary}",
                                    violations=verdict.violations)

    def receive_bundles(self, token: str | None, frames: list[bytes]) -> dict:
        """Apply incoming wire frames; returns per-bundle statuses and ack frames."""
        with self._lock:
            target = f"bundles[{len(frames)}]"
            actor = self._require_actor(token, "bundles_received", AuditAction.WRITE, target)
            frames_hex = [f.hex() if isinstance(f, (bytes, bytearray)) else str(f)
                          for f in frames]
            effects = self._record("bundles_received", actor.user_id, AuditAction.WRITE,
                                   target, AuditOutcome.ALLOWED, {"frames": frames_hex})
            return effects

    def _apply_bundles(self, frames_hex: list[str], at: datetime) -> dict:
        statuses: list[dict] = []
        acks: list[str] = []
        for frame_hex in frames_hex:
            status = self._apply_one_bundle(frame_hex, at)
            statuses.append(status)
            bundle_id = status.get("bundle_id")
            if bundle_id and bundle_id in self._state.node.delivered:
                ack = self._state.node.held.get(ACK_ID_PREFIX + bundle_id)
                if ack is not None:
                    ack_hex = encode_bundle(ack).hex()
                    if ack_hex not in acks:
                        acks.append(ack_hex)
        return {"statuses": statuses, "acks": acks}

    def _apply_one_bundle(self, frame_hex: str, at: datetime) -> dict:
        try:
            frame = bytes.fromhex(frame_hex)
        except ValueError:
            return {"bundle_id": None, "status": "malformed", "error": "MalformedBundle",
                    "detail": "frame is not valid hex"}
        try:
            bundle = decode_bundle(frame)
        except MalformedBundle as exc:
            return {"bundle_id": None, "status": "malformed", "error": "MalformedBundle",
                    "detail": str(exc)}
        if bundle.is_expired(at):
            return {"bundle_id": bundle.bundle_id, "status": "expired", "error": "Expired"}

        result = self._state.node.receive(bundle, at)
        if result.duplicate:
            return {"bundle_id": bundle.bundle_id, "status": "duplicate"}
        if not result.delivered:
            return {"bundle_id": bundle.bundle_id, "status": "relayed"}
        return self._deliver_payload(bundle, at)

    def _deliver_payload(self, bundle, at: datetime) -> dict:
        base = {"bundle_id": bundle.bundle_id}
        if bundle.payload_kind is PayloadKind.RESPONSE_SET:
            try:
                record = json.loads(bundle.payload.decode("utf-8"))
                response = response_from_dict(record)
                self._validate_response_record(response)
                if response.id in self._state.response_ids:
                    raise DuplicateSubmission(f"response {response.id} already accepted")
            except DuplicateSubmission as exc:
                return {**base, "status": "rejected", "error": exc.code, "detail": str(exc)}
            except ValidationFailure as exc:
                return {**base, "status": "rejected", "error": exc.code, "detail": str(exc)}
            except (ValueError, UnicodeDecodeError) as exc:
                return {**base, "status": "rejected", "error": "ValidationFailure",
                        "detail": str(exc)}
            self._store_screening(response_to_dict(response))
            return {**base, "status": "accepted", "response_id": response.id}
        if bundle.payload_kind is PayloadKind.OBSERVATION:
            try:
                record = json.loads(bundle.payload.decode("utf-8"))
                obs = observation_from_dict(record)
                consent = self._state.consents.get(
                    obs.subject_id, ConsentSettings(subject_id=obs.subject_id)
                )
                self._state.observations.record(obs, consent, now=at)
            except (ConsentDenied, ClockSkew) as exc:
                return {**base, "status": "rejected", "error": exc.code, "detail": str(exc)}
            except (ValueError, UnicodeDecodeError) as exc:
                return {**base, "status": "rejected", "error": "ValidationFailure",
                        "detail": str(exc)}
            return {**base, "status": "stored", "observation_id": record.get("id")}
        return {**base, "status": "applied"}

    def get_screenings(self, token: str | None, subject_id: str,
                       start: datetime | None = None, end: datetime | None = None) -> list[dict]:
        with self._lock:
            actor = self._require_actor(token, "screenings_read", AuditAction.READ, subject_id)
            if not actor.may_read(subject_id):
                self._deny("screenings_read", actor, AuditAction.READ, subject_id,
                           "subject not linked to this account")
            rows = []
            for row in self._state.screenings.get(subject_id, []):
                completed_at = parse_timestamp(row["response"]["completed_at"])
                if start is not None and completed_at < ensure_utc(start):
                    continue
                if end is not None and completed_at > ensure_utc(end):
                    continue
                rows.append({"response": _response_summary(row["response"]),
                             "distress": row["summary"]})
            self._record("screenings_read", actor.user_id, AuditAction.READ, subject_id,
                         AuditOutcome.ALLOWED, {"subject_id": subject_id})
            return rows

    def get_due(self, token: str | None, subject_id: str,
                now: datetime | None = None) -> ScreeningStatus:
        with self._lock:
            actor = self._require_actor(token, "due_read", AuditAction.READ, subject_id)
            if not actor.may_read(subject_id):
                self._deny("due_read", actor, AuditAction.READ, subject_id,
                           "subject not linked to this account")
            subject = self._state.users.get(subject_id)
            if subject is None or subject.enrolled_at is None:
                self._record("due_read", actor.user_id, AuditAction.READ, subject_id,
                             AuditOutcome.ALLOWED, {"error": "UnknownSubject"})
                raise UnknownSubject(f"no enrolled patient {subject_id!r}")
            rows = self._state.screenings.get(subject_id, [])
            last_completed = None
            reference = None
            if rows:
                last = rows[-1]["response"]
                last_completed = parse_timestamp(last["completed_at"])
                reference = last["id"]
            due_at = next_due(last_completed, subject.enrolled_at, self.config.cadence)
            moment = ensure_utc(now) if now is not None else self._now()
            result = screening_status(moment, due_at, self.config.cadence, reference=reference)
            self._record("due_read", actor.user_id, AuditAction.READ, subject_id,
                         AuditOutcome.ALLOWED, {"subject_id": subject_id})
            return result

    def query_observations(self, token: str | None, subject_id: str,
                           data_type: str | None = None,
                           start: datetime | None = None,
                           end: datetime | None = None) -> list[dict]:
        with self._lock:
            actor = self._require_actor(token, "observations_read", AuditAction.READ, subject_id)
            if not actor.may_read(subject_id):
                self._deny("observations_read", actor, AuditAction.READ, subject_id,
                           "subject not linked to this account")
            rows = self._state.observations.query(subject_id, data_type, start, end)
            self._record("observations_read", actor.user_id, AuditAction.READ, subject_id,
                         AuditOutcome.ALLOWED, {"subject_id": subject_id})
            return [observation_to_dict(obs) for obs in rows]

    def set_consent(self, token: str | None, subject_id: str,
                    data_type: str, decision: str) -> dict:
        with self._lock:
            actor = self._require_actor(token, "consent_changed",
                                        AuditAction.CONSENT_CHANGE, subject_id)
            if actor.role is not Role.PATIENT or subject_id != actor.user_id:
                self._deny("consent_changed", actor, AuditAction.CONSENT_CHANGE, subject_id,
                           "consent may be changed only by the subject")
            problem: Exception | None = None
            if subject_id not in self._state.users:
                problem = UnknownSubject(f"unknown subject {subject_id!r}")
            elif decision not in ConsentDecision.ALL:
                problem = ValidationFailure(
                    f"decision must be one of {ConsentDecision.ALL}, got {decision!r}")
            elif not data_type:
                problem = ValidationFailure("data_type must be non-empty")
            if problem is not None:
                self._record("consent_rejected", actor.user_id, AuditAction.CONSENT_CHANGE,
                             subject_id, AuditOutcome.ALLOWED,
                             {"error": problem.code, "detail": str(problem)})
                raise problem
            updated = self._record(
                "consent_changed", actor.user_id, AuditAction.CONSENT_CHANGE, subject_id,
                AuditOutcome.ALLOWED,
                {"subject_id": subject_id, "data_type": data_type, "decision": decision},
            )
            return {"subject_id": updated.subject_id, "grants": dict(updated.grants),
                    "updated_at": to_iso(updated.updated_at)}

    def submit_sus(self, token: str | None, items: list[int], tool_label: str) -> float:
        with self._lock:
            actor = self._require_actor(token, "sus_rejected", AuditAction.WRITE,
                                        tool_label or "sus")
            try:
                score = score_sus(SusResponse(items=tuple(items)))
            except (InvalidLength, OutOfRange) as exc:
                self._record("sus_rejected", actor.user_id, AuditAction.WRITE,
                             tool_label or "sus", AuditOutcome.ALLOWED,
                             {"error": "ValidationFailure", "detail": str(exc)})
                raise ValidationFailure(str(exc)) from exc
            self._record("sus_scored", actor.user_id, AuditAction.WRITE,
                         tool_label or "sus", AuditOutcome.ALLOWED,
                         {"user_id": actor.user_id, "role": actor.role.value,
                          "tool_label": tool_label, "items": list(items), "score": score})
            return score

    def read_audit(self, token: str | None, start_seq: int | None = None,
                   end_seq: int | None = None) -> list[dict]:
        with self._lock:
            actor = self._require_actor(token, "audit_read", AuditAction.READ, "audit")
            if actor.role is not Role.PROVIDER:
                self._deny("audit_read", actor, AuditAction.READ, "audit",
                           "audit log is provider-readable only")
            entries = [
                entry.to_dict()
                for entry in self._state.audit
                if (start_seq is None or entry.seq >= start_seq)
                and (end_seq is None or entry.seq <= end_seq)
            ]
            self._record("audit_read", actor.user_id, AuditAction.READ, "audit",
                         AuditOutcome.ALLOWED, {"start_seq": start_seq, "end_seq": end_seq})
            return entries

    # ------------------------------------------------------------------
    # snapshots, digests, and introspection
    # ------------------------------------------------------------------

    def audit_trail(self) -> list:
        """Direct, unaudited view for administration and tests."""
        with self._lock:
            return list(self._state.audit)

    def last_seq(self) -> int:
        return self._log.last_seq

    def state_snapshot(self) -> dict:
        """Canonical JSON-ready dump of all event-sourced state."""
        with self._lock:
            state = self._state
            return {
                "users": {
                    uid: {
                        "role": account.role.value,
                        "linked_subjects": sorted(account.linked_subjects),
                        "enrolled_at": to_iso(account.enrolled_at)
                        if account.enrolled_at else None,
                        "credentials": state.credentials[uid],
                    }
                    for uid, account in sorted(state.users.items())
                },
                "screenings": {
                    subject: [dict(row) for row in rows]
                    for subject, rows in sorted(state.screenings.items())
                },
                "consents": {
                    subject: {
                        "grants": dict(sorted(settings.grants.items())),
                        "updated_at": to_iso(settings.updated_at)
                        if settings.updated_at else None,
                    }
                    for subject, settings in sorted(state.consents.items())
                },
                "observations": [
                    observation_to_dict(obs) for obs in state.observations.all_observations()
                ],
                "sus_results": [dict(row) for row in state.sus_results],
                "node": {
                    "node_id": state.node.node_id,
                    "lamport_clock": state.node.lamport_clock,
                    "delivered": sorted(state.node.delivered),
                    "held": {
                        bid: encode_bundle(bundle).hex()
                        for bid, bundle in sorted(state.node.held.items())
                    },
                },
                "audit": [entry.to_dict() for entry in state.audit],
                "last_seq": self._log.last_seq,
            }

    def state_digest(self) -> str:
        payload = json.dumps(self.state_snapshot(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()

    def write_snapshot(self) -> Path:
        """Persist current state so startup can skip already-folded events."""
        with self._lock:
            if self._log.path is None:
                raise RuntimeError("snapshots need a persistent data directory")
            seq = self._log.last_seq
            path = self._log.path.parent / f"snapshot-{seq:08d}.json"
            path.write_text(
                json.dumps({"seq": seq, "state": self.state_snapshot()}, sort_keys=True),
                encoding="utf-8",
            )
            return path

    def _maybe_autosnapshot(self) -> None:
        every = self.config.snapshot_every
        if every > 0 and self._log.path is not None and self._log.last_seq % every == 0:
            self.write_snapshot()

    def _load_latest_snapshot(self, data_dir: Path) -> int:
        candidates = sorted(data_dir.glob("snapshot-*.json"))
        if not candidates:
            return 0
        payload = json.loads(candidates[-1].read_text(encoding="utf-8"))
        self._restore_state(payload["state"])
        return int(payload["seq"])

    def _restore_state(self, dump: dict) -> None:
        state = ServiceState(self.config)
        for uid, info in dump.get("users", {}).items():
            state.users[uid] = UserAccount(
                user_id=uid,
                role=Role(info["role"]),
                linked_subjects=frozenset(info["linked_subjects"]),
                enrolled_at=parse_timestamp(info["enrolled_at"])
                if info.get("enrolled_at") else None,
            )
            state.credentials[uid] = dict(info["credentials"])
        for subject, rows in dump.get("screenings", {}).items():
            state.screenings[subject] = [dict(row) for row in rows]
            for row in rows:
                state.response_ids.add(row["response"]["id"])
        for subject, info in dump.get("consents", {}).items():
            state.consents[subject] = ConsentSettings(
                subject_id=subject,
                grants=dict(info["grants"]),
                updated_at=parse_timestamp(info["updated_at"])
                if info.get("updated_at") else None,
            )
        for record in dump.get("observations", []):
            obs = observation_from_dict(record)
            state.observations._by_id[obs.id] = obs
            state.observations._by_subject.setdefault(obs.subject_id, []).append(obs)
        state.sus_results = [dict(row) for row in dump.get("sus_results", [])]
        node_info = dump.get("node", {})
        state.node.lamport_clock = node_info.get("lamport_clock", 0)
        state.node.delivered = set(node_info.get("delivered", []))
        for bid, frame_hex in node_info.get("held", {}).items():
            state.node.held[bid] = decode_bundle(bytes.fromhex(frame_hex))
        state.audit = [audit_from_event(entry) for entry in dump.get("audit", [])]
        self._state = state

    def close(self) -> None:
        self._log.close()


def _response_summary(response_data: dict) -> dict:
    return {
        "id": response_data["id"],
        "instrument_id": response_data["instrument_id"],
        "instrument_version": response_data["instrument_version"],
        "subject_id": response_data["subject_id"],
        "completed_at": response_data["completed_at"],
        "entry_mode": response_data["entry_mode"],
        "has_attachment": bool(response_data.get("attachment")),
    }
