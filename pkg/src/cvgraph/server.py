"""HTTP session service over the measurement engine.

Sessions live in process memory.  Each holds one interactive Session;
requests against the same session are serialized by a per-session lock, so
concurrent clients see a consistent history.  JSON in, JSON out, plus a DOT
text route and optional static file serving for a bundled UI.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from fractions import Fraction
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .bases import MeasurementBasis
from .engine import Session
from .errors import EngineError, SchemaError
from .graph import parse_graph, to_dot
from .outcomes import OutcomeExpr, parse_outcome
from .rationals import parse_rational


class SessionStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._sessions: dict[str, tuple[threading.Lock, Session]] = {}
        self._counter = 0

    def create(self, session: Session) -> str:
        with self._lock:
            self._counter += 1
            sid = str(self._counter)
            self._sessions[sid] = (threading.Lock(), session)
            return sid

    def get(self, sid: str) -> tuple[threading.Lock, Session] | None:
        with self._lock:
            return self._sessions.get(sid)


def _parse_outcome_field(value: object) -> OutcomeExpr:
    if isinstance(value, str):
        return parse_outcome(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return OutcomeExpr(Fraction(value))
    raise SchemaError(f"outcome must be a string or integer, got {value!r}")


def _parse_rational_field(value: object, name: str) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise SchemaError(f"{name} must be a rational string or integer, got {value!r}")


def _require(body: dict, key: str) -> object:
    if key not in body:
        raise SchemaError(f"missing field {key!r}")
    return body[key]


class _Handler(BaseHTTPRequestHandler):
    store: SessionStore
    static_dir: Path | None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, status: int, payload: object) -> None:
        data = json.dumps(payload, sort_keys=True).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _send_text(self, status: int, text: str, ctype: str = "text/plain") -> None:
        data = text.encode()
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"request body is not valid JSON: {exc}")
        if not isinstance(body, dict):
            raise SchemaError("request body must be a JSON object")
        return body

    def _locked_session(self, sid: str):
        entry = self.store.get(sid)
        if entry is None:
            self._send_json(404, {"error": f"unknown session {sid!r}"})
            return None
        return entry

    def do_POST(self) -> None:
        try:
            self._route_post()
        except EngineError as exc:
            self._send_json(400, {"error": str(exc)})

    def do_GET(self) -> None:
        try:
            self._route_get()
        except EngineError as exc:
            self._send_json(400, {"error": str(exc)})

    def _route_post(self) -> None:
        parts = [p for p in self.path.split("?")[0].split("/") if p]
        if parts == ["api", "session"]:
            body = self._read_body()
            graph = parse_graph(_require(body, "graph"))
            sid = self.store.create(Session(graph))
            self._send_json(200, {"id": sid})
            return
        if len(parts) == 4 and parts[:2] == ["api", "session"]:
            sid, verb = parts[2], parts[3]
            entry = self._locked_session(sid)
            if entry is None:
                return
            lock, session = entry
            body = self._read_body()
            with lock:
                if verb == "measure":
                    vertex = str(_require(body, "vertex"))
                    basis = MeasurementBasis.from_json(_require(body, "basis"))
                    outcome = None
                    if body.get("outcome") is not None:
                        outcome = _parse_outcome_field(body["outcome"])
                    b0 = body.get("b0")
                    session.measure(
                        vertex, basis, outcome, b0=str(b0) if b0 is not None else None
                    )
                elif verb == "lc":
                    vertex = str(_require(body, "vertex"))
                    delta = _parse_rational_field(_require(body, "delta"), "delta")
                    session.local_complement(vertex, delta)
                elif verb == "undo":
                    session.undo()
                else:
                    self._send_json(404, {"error": f"unknown route {self.path!r}"})
                    return
                self._send_json(200, session.state_json())
            return
        self._send_json(404, {"error": f"unknown route {self.path!r}"})

    def _route_get(self) -> None:
        path = self.path.split("?")[0]
        parts = [p for p in path.split("/") if p]
        if len(parts) >= 2 and parts[:2] == ["api", "session"]:
            if len(parts) == 3:
                entry = self._locked_session(parts[2])
                if entry is None:
                    return
                lock, session = entry
                with lock:
                    self._send_json(200, session.state_json())
                return
            if len(parts) == 4 and parts[3] == "dot":
                entry = self._locked_session(parts[2])
                if entry is None:
                    return
                lock, session = entry
                with lock:
                    self._send_text(200, to_dot(session.graph))
                return
            self._send_json(404, {"error": f"unknown route {self.path!r}"})
            return
        self._serve_static(path)

    def _serve_static(self, path: str) -> None:
        if self.static_dir is None:
            self._send_json(404, {"error": f"unknown route {path!r}"})
            return
        rel = path.lstrip("/") or "index.html"
        base = self.static_dir.resolve()
        candidate = (base / rel).resolve()
        if not candidate.is_relative_to(base) or not candidate.is_file():
            self._send_json(404, {"error": f"no such file {path!r}"})
            return
        ctype = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        data = candidate.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(
    port: int, static_dir: str | None = None, host: str = "127.0.0.1"
) -> ThreadingHTTPServer:
    """Build (but do not start) the server; port 0 picks a free port."""
    handler = type(
        "BoundHandler",
        (_Handler,),
        {
            "store": SessionStore(),
            "static_dir": Path(static_dir) if static_dir else None,
        },
    )
    return ThreadingHTTPServer((host, port), handler)


def run_server(port: int, static_dir: str | None = None, host: str = "0.0.0.0") -> None:
    server = make_server(port, static_dir, host)
    try:
        server.serve_forever()
    finally:
        server.server_close()
