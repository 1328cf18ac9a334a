"""HTTP adapter: a thin FastAPI layer over :class:`HealthService`.

Endpoints mirror the core operations one-to-one; request and response bodies
are plain JSON mirroring the domain types. Errors carry machine-readable
codes (the domain error class names) in ``{"error": {"code", "detail"}}``.
"""

from fastapi import FastAPI, Header, Request
from fastapi.responses import JSONResponse

from ..errors import (
    AuthFailure,
    ClockSkew,
    ConsentDenied,
    DuplicateSubmission,
    Expired,
    InvalidTimeline,
    MalformedBundle,
    NotScorable,
    ParseError,
    PayloadTooLarge,
    RuralCareError,
    SchemaError,
    UnknownSubject,
    ValidationFailure,
    VersionMismatch,
)
from ..timeutil import parse_timestamp, to_iso
from .core import HealthService

_STATUS_BY_ERROR = {
    AuthFailure: 403,
    ValidationFailure: 422,
    DuplicateSubmission: 409,
    VersionMismatch: 409,
    ParseError: 400,
    SchemaError: 400,
    MalformedBundle: 400,
    Expired: 410,
    PayloadTooLarge: 413,
    UnknownSubject: 404,
    NotScorable: 422,
    ConsentDenied: 403,
    ClockSkew: 422,
    InvalidTimeline: 422,
}


def _status_for(exc: RuralCareError) -> int:
    for cls, status in _STATUS_BY_ERROR.items():
        if isinstance(exc, cls):
            return status
    return 400


def _bearer_token(authorization: str | None) -> str | None:
    if authorization and authorization.lower().startswith("bearer "):
        return authorization[7:].strip()
    return None


def _maybe_time(value: str | None):
    return parse_timestamp(value) if value else None


def create_app(service: HealthService) -> FastAPI:
    app = FastAPI(title="ruralcare service", version="0.1.0")

    @app.exception_handler(RuralCareError)
    async def domain_error(_request: Request, exc: RuralCareError):
        body = {"error": {"code": exc.code, "detail": str(exc)}}
        if isinstance(exc, ValidationFailure) and exc.violations:
            body["error"]["violations"] = [
                {"item_id": v.item_id, "reason": v.reason} for v in exc.violations
            ]
        return JSONResponse(status_code=_status_for(exc), content=body)

    @app.post("/login")
    async def login(body: dict):
        token = service.login(str(body.get("user_id", "")), str(body.get("password", "")))
        return {"token": token}

    @app.post("/responses")
    async def submit_response(body: dict, authorization: str | None = Header(default=None)):
        accepted_id = service.submit_response(_bearer_token(authorization), body)
        return {"id": accepted_id}

    @app.post("/bundles")
    async def receive_bundles(body: dict, authorization: str | None = Header(default=None)):
        frames = body.get("frames", [])
        if not isinstance(frames, list):
            raise MalformedBundle("body must carry a 'frames' list of hex strings")
        return service.receive_bundles(_bearer_token(authorization), frames)

    @app.get("/subjects/{subject_id}/screenings")
    async def get_screenings(
        subject_id: str,
        start: str | None = None,
        end: str | None = None,
        authorization: str | None = Header(default=None),
    ):
        rows = service.get_screenings(
            _bearer_token(authorization), subject_id, _maybe_time(start), _maybe_time(end)
        )
        return {"screenings": rows}

    @app.get("/subjects/{subject_id}/due")
    async def get_due(
        subject_id: str,
        now: str | None = None,
        authorization: str | None = Header(default=None),
    ):
        status = service.get_due(_bearer_token(authorization), subject_id, _maybe_time(now))
        return {
            "state": status.state.value,
            "due_at": to_iso(status.due_at),
            "reference": status.reference,
        }

    @app.get("/subjects/{subject_id}/observations")
    async def get_observations(
        subject_id: str,
        data_type: str | None = None,
        start: str | None = None,
        end: str | None = None,
        authorization: str | None = Header(default=None),
    ):
        rows = service.query_observations(
            _bearer_token(authorization), subject_id, data_type,
            _maybe_time(start), _maybe_time(end),
        )
        return {"observations": rows}

    @app.post("/consent")
    async def set_consent(body: dict, authorization: str | None = Header(default=None)):
        return service.set_consent(
            _bearer_token(authorization),
            str(body.get("subject_id", "")),
            str(body.get("data_type", "")),
            str(body.get("decision", "")),
        )

    @app.post("/sus")
    async def submit_sus(body: dict, authorization: str | None = Header(default=None)):
        items = body.get("items", [])
        if not isinstance(items, list):
            raise ValidationFailure("body must carry an 'items' list")
        score = service.submit_sus(
            _bearer_token(authorization), items, str(body.get("tool_label", ""))
        )
        return {"score": score}

    @app.get("/audit")
    async def read_audit(
        start_seq: int | None = None,
        end_seq: int | None = None,
        authorization: str | None = Header(default=None),
    ):
        entries = service.read_audit(_bearer_token(authorization), start_seq, end_seq)
        return {"entries": entries}

    return app
