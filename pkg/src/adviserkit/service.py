"""Local session service for interactive guided execution.

Plain request/response over a local socket, one JSON document per message,
served by the stdlib threading HTTP server. There is no push channel: clients
poll after each move, which is enough for a strictly turn-based game. All
rationals cross the wire as {num, den} pairs, errors as {code, message,
detail}. Sessions live in memory; each one carries its own lock so concurrent
requests against the same session serialize while distinct sessions stay
independent.

Endpoints:
    POST /sessions                {"fixture": name | "document": text, "cap": n}
    GET  /fixtures
    GET  /sessions/{id}
    GET  /sessions/{id}/graph     (Graphviz text with current-state overlay)
    POST /sessions/{id}/moves     {"input": label}
    POST /sessions/{id}/auto-step
    POST /sessions/{id}/reset
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass
from fractions import Fraction
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .arena import ADVERSARY, Arena, enabled_inputs, validate
from .fixtures import FIXTURE_NAMES, fixture
from .formats import DocumentError, export_dot, parse_arena
from .guided import (
    HALTED_NO,
    Session,
    SessionError,
    StepEvent,
    advice,
    adversary_step,
    protagonist_step,
    start,
)
from .safety import NoGoodAdviserError, compute_losing
from .search import DEFAULT_CANDIDATE_CAP, SolveBundle, synthesize

DEFAULT_PORT = 8600
PORT_ENV_VAR = "ADVISER_PORT"


class ServiceError(Exception):
    """Carries an HTTP status plus the structured error body."""

    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.detail = detail

    def body(self) -> dict:
        return {"code": self.code, "message": str(self), "detail": self.detail}


@dataclass
class SessionHandle:
    session_id: str
    created_at: float
    session: Session
    lock: threading.Lock


def _rational(value: Fraction | None):
    if value is None:
        return None
    return {"num": value.numerator, "den": value.denominator}


def _event_json(event: StepEvent) -> dict:
    return {
        "actor": event.actor,
        "input": event.input,
        "from": event.from_state,
        "to": event.to_state,
        "outcome": event.outcome,
        "new_adviser_index": event.new_adviser_index,
    }


def _bundle_summary(bundle: SolveBundle) -> dict:
    lambdas = [_rational(record.limitation) for record in bundle.candidates]
    best = bundle.best
    return {
        "generated": len(bundle.candidates),
        "good": sum(1 for record in bundle.candidates if record.good),
        "truncated": bundle.truncated,
        "lambdas": lambdas,
        "best_index": bundle.best_index,
        "best_lambda": _rational(best.limitation),
    }


class AdviceService:
    """Owns the session table; the HTTP handler delegates everything here."""

    def __init__(self) -> None:
        self._sessions: dict[str, SessionHandle] = {}
        self._table_lock = threading.Lock()

    # -- session management -------------------------------------------------

    def create_session(self, payload: dict) -> dict:
        arena = self._load_arena(payload)
        cap = payload.get("cap", DEFAULT_CANDIDATE_CAP)
        if not isinstance(cap, int) or cap <= 0:
            raise ServiceError(400, "bad_request", "cap must be a positive integer")
        try:
            bundle = synthesize(arena, cap)
        except NoGoodAdviserError as exc:
            raise ServiceError(
                409, "no_good_adviser", str(exc),
                detail="the adversary can force the play into an unsafe state "
                       "from the initial state, so no forbidden-set choice helps")
        session = start(bundle)
        handle = SessionHandle(
            session_id=uuid.uuid4().hex,
            created_at=time.time(),
            session=session,
            lock=threading.Lock(),
        )
        with self._table_lock:
            self._sessions[handle.session_id] = handle
        return {"session_id": handle.session_id, "summary": _bundle_summary(bundle)}

    def _load_arena(self, payload: dict) -> Arena:
        name = payload.get("fixture")
        document = payload.get("document")
        if (name is None) == (document is None):
            raise ServiceError(400, "bad_request",
                               "provide exactly one of 'fixture' or 'document'")
        if name is not None:
            try:
                return fixture(name)
            except KeyError:
                raise ServiceError(404, "unknown_fixture",
                                   f"unknown fixture {name!r}",
                                   detail=list(FIXTURE_NAMES))
        try:
            arena = parse_arena(document)
        except DocumentError as exc:
            raise ServiceError(400, "bad_document", str(exc))
        problems = [f for f in validate(arena) if f.kind == "error"]
        if problems:
            raise ServiceError(400, "invalid_arena", problems[0].message,
                               detail=[f.message for f in problems])
        return arena

    def _handle(self, session_id: str) -> SessionHandle:
        with self._table_lock:
            handle = self._sessions.get(session_id)
        if handle is None:
            raise ServiceError(404, "unknown_session",
                               f"no session with id {session_id!r}")
        return handle

    # -- endpoint bodies ----------------------------------------------------

    def list_fixtures(self) -> dict:
        return {"fixtures": list(FIXTURE_NAMES)}

    def get_state(self, session_id: str) -> dict:
        handle = self._handle(session_id)
        with handle.lock:
            return self._snapshot(handle.session)

    def _snapshot(self, session: Session) -> dict:
        arena = session.arena
        state = session.current_state
        owner = arena.owner(state)
        record = session.adviser_record
        packet = None
        if owner == ADVERSARY and session.halted == HALTED_NO:
            raw = advice(session)
            packet = {
                "state": raw.state,
                "hard": sorted(raw.hard),
                "soft": sorted(raw.soft),
                "allowed": sorted(raw.allowed),
            }
        average = session.average()
        return {
            "state": state,
            "owner": owner,
            "halted": session.halted,
            "advice": packet,
            "adviser": {
                "index": session.current_adviser,
                "lambda": _rational(record.limitation),
                "nominal": session.current_adviser == 0,
            },
            "forbidden": {sid: sorted(inputs)
                          for sid, inputs in sorted(record.adviser.items())},
            "average": None if average is None else {"num": average[0], "den": average[1]},
            "rounds": session.rounds,
            "running_sum": session.running_sum,
            "history": [_event_json(event) for event in session.history],
        }

    def post_move(self, session_id: str, payload: dict) -> dict:
        handle = self._handle(session_id)
        label = payload.get("input")
        if not isinstance(label, str):
            raise ServiceError(400, "bad_request", "body must carry an 'input' label")
        with handle.lock:
            session = handle.session
            try:
                event = adversary_step(session, label)
            except SessionError as exc:
                enabled = sorted(enabled_inputs(session.arena, session.current_state))
                raise ServiceError(409, "bad_move", str(exc), detail={"enabled": enabled})
            return {"event": _event_json(event), "session": self._snapshot(session)}

    def auto_step(self, session_id: str) -> dict:
        handle = self._handle(session_id)
        with handle.lock:
            session = handle.session
            try:
                event = protagonist_step(session)
            except SessionError as exc:
                raise ServiceError(409, "wrong_turn", str(exc))
            return {"event": _event_json(event), "session": self._snapshot(session)}

    def reset(self, session_id: str) -> dict:
        handle = self._handle(session_id)
        with handle.lock:
            handle.session = start(handle.session.bundle)
            return {"session": self._snapshot(handle.session)}

    def get_graph(self, session_id: str) -> str:
        handle = self._handle(session_id)
        with handle.lock:
            session = handle.session
            record = session.adviser_record
            losing = compute_losing(session.arena).final
            return export_dot(
                session.arena,
                adviser=record.adviser,
                losing=losing,
                strategy=session.current_strategy,
                current=session.current_state,
            )


class _Handler(BaseHTTPRequestHandler):
    service: AdviceService  # injected by make_server

    protocol_version = "HTTP/1.1"

    # -- plumbing ------------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default; tests spawn servers
        pass

    def _send(self, status: int, body: str, content_type: str = "application/json") -> None:
        payload = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type + "; charset=utf-8")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, body: dict) -> None:
        self._send(status, json.dumps(body, ensure_ascii=False))

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            parsed = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ServiceError(400, "bad_request", f"body is not valid JSON: {exc}")
        if not isinstance(parsed, dict):
            raise ServiceError(400, "bad_request", "body must be a JSON object")
        return parsed

    def _dispatch(self, method: str) -> None:
        try:
            self._route(method)
        except ServiceError as exc:
            self._send_json(exc.status, exc.body())
        except Exception as exc:  # pragma: no cover - last-resort guard
            self._send_json(500, {"code": "internal", "message": str(exc), "detail": None})

    # -- routing -------------------------------------------------------------

    def _route(self, method: str) -> None:
        parts = [p for p in self.path.split("?")[0].split("/") if p]
        service = self.service
        if method == "OPTIONS":
            self._send(204, "")
            return
        if parts == ["fixtures"] and method == "GET":
            self._send_json(200, service.list_fixtures())
            return
        if parts == ["sessions"] and method == "POST":
            self._send_json(201, service.create_session(self._read_json()))
            return
        if len(parts) >= 2 and parts[0] == "sessions":
            session_id = parts[1]
            rest = parts[2:]
            if not rest and method == "GET":
                self._send_json(200, service.get_state(session_id))
                return
            if rest == ["graph"] and method == "GET":
                self._send(200, service.get_graph(session_id), content_type="text/plain")
                return
            if rest == ["moves"] and method == "POST":
                self._send_json(200, service.post_move(session_id, self._read_json()))
                return
            if rest == ["auto-step"] and method == "POST":
                self._send_json(200, service.auto_step(session_id))
                return
            if rest == ["reset"] and method == "POST":
                self._send_json(200, service.reset(session_id))
                return
        raise ServiceError(404, "not_found", f"no route for {method} {self.path}")

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_POST(self) -> None:
        self._dispatch("POST")

    def do_OPTIONS(self) -> None:
        self._dispatch("OPTIONS")


def make_server(host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Bound but not yet serving; port 0 picks a free one (server_address[1])."""
    service = AdviceService()
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve(host: str, port: int) -> None:
    server = make_server(host, port)
    actual = server.server_address[1]
    print(f"advice service listening on http://{host}:{actual}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
