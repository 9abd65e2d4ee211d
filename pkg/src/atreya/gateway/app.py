"""FastAPI gateway: session API, websocket channel, attachment downloads.

Startup validates the transport credential and probes the data service;
until that succeeds the gateway refuses to open sessions (503). Sessions
are served concurrently; within one session the dialog manager serializes
event handling, and outbound messages carry gapless per-session sequence
numbers.
"""

from __future__ import annotations

import json
import logging
import threading
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Response, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.concurrency import run_in_threadpool

from ..config import AtreyaConfig
from ..dialog import Phase, SessionEndedError, SessionLimitError
from ..presenter import Reply, ReplyKind
from ..runtime import CredentialError, Runtime, build_runtime
from . import schemas

logger = logging.getLogger(__name__)

WS_CODE_UNKNOWN_SESSION = 4404
WS_CODE_SESSION_ENDED = 4410


class SessionCreated(BaseModel):
    session_id: str


class HealthStatus(BaseModel):
    status: str
    mode: str
    detail: str | None = None


class GatewayState:
    def __init__(self, runtime: Runtime):
        self.runtime = runtime
        self.ready = False
        self.failure: str | None = None
        self.files: dict[tuple[str, str], tuple[str, bytes]] = {}
        self.outbound_seq: dict[str, int] = {}
        self.inbound_seq: dict[str, int] = {}
        self._lock = threading.Lock()

    def startup_check(self) -> None:
        try:
            self.runtime.credential_check()
            self.ready = True
            self.failure = None
        except CredentialError as exc:
            self.ready = False
            self.failure = str(exc)
            logger.error("startup credential check failed: %s", exc)

    def next_outbound_seq(self, session_id: str) -> int:
        with self._lock:
            value = self.outbound_seq.get(session_id, 0) + 1
            self.outbound_seq[session_id] = value
            return value

    def check_inbound_seq(self, session_id: str, seq: int | None) -> None:
        with self._lock:
            last = self.inbound_seq.get(session_id, 0)
            if seq is None:
                self.inbound_seq[session_id] = last + 1
                return
            if seq <= last:
                raise schemas.MalformedMessage(
                    f"inbound seq must increase (got {seq}, last was {last})"
                )
            self.inbound_seq[session_id] = seq

    def store_file(self, session_id: str, reply: Reply) -> str:
        self.files[(session_id, reply.file_name)] = (reply.file_media_type, reply.file_bytes)
        return f"/api/sessions/{session_id}/files/{reply.file_name}"


def create_app(config: AtreyaConfig | None = None, runtime: Runtime | None = None) -> FastAPI:
    config = config or AtreyaConfig()
    runtime = runtime or build_runtime(config)
    state = GatewayState(runtime)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        await run_in_threadpool(state.startup_check)
        yield

    app = FastAPI(title="Atreya", lifespan=lifespan)
    app.state.gateway = state

    @app.get("/api/health", response_model=HealthStatus)
    def health() -> HealthStatus:
        return HealthStatus(
            status="ok" if state.ready else "unavailable",
            mode=config.mode,
            detail=state.failure,
        )

    @app.post("/api/sessions", response_model=SessionCreated, status_code=201)
    def open_session():
        if not state.ready:
            return JSONResponse(
                status_code=503,
                content={"detail": f"gateway not ready: {state.failure}"},
            )
        try:
            session = runtime.manager.create_session()
        except SessionLimitError as exc:
            return JSONResponse(
                status_code=429,
                content={"detail": str(exc)},
                headers={"Retry-After": "30"},
            )
        return SessionCreated(session_id=session.session_id)

    @app.get("/api/sessions/{session_id}/files/{name}")
    def download_file(session_id: str, name: str):
        entry = state.files.get((session_id, name))
        if entry is None:
            return JSONResponse(status_code=404, content={"detail": "no such attachment"})
        media_type, data = entry
        return Response(
            content=data,
            media_type=media_type,
            headers={"Content-Disposition": f'attachment; filename="{name}"'},
        )

    @app.websocket("/ws/sessions/{session_id}")
    async def exchange(websocket: WebSocket, session_id: str):
        await websocket.accept()
        session = runtime.manager.get_session(session_id)
        if session is None:
            await websocket.close(code=WS_CODE_UNKNOWN_SESSION, reason="unknown session")
            return
        if session.phase is Phase.ENDED:
            await websocket.close(code=WS_CODE_SESSION_ENDED, reason="session ended")
            return

        async def send_reply(reply: Reply) -> None:
            download_path = None
            if reply.kind is ReplyKind.FILE_ATTACHMENT:
                download_path = state.store_file(session_id, reply)
            message = schemas.OutboundMessage(
                session_id=session_id,
                seq=state.next_outbound_seq(session_id),
                payload=schemas.reply_to_payload(reply, download_path),
            )
            await websocket.send_text(schemas.wire_line(message))

        async def send_error(text: str) -> None:
            message = schemas.OutboundMessage(
                session_id=session_id,
                seq=state.next_outbound_seq(session_id),
                payload=schemas.TextPayload(text=text, error=True),
            )
            await websocket.send_text(schemas.wire_line(message))

        while True:
            try:
                raw = await websocket.receive_text()
            except WebSocketDisconnect:
                return
            try:
                data = json.loads(raw)
                inbound = schemas.parse_inbound(data)
                state.check_inbound_seq(session_id, inbound.seq)
                event = schemas.to_event(inbound)
            except (json.JSONDecodeError, schemas.MalformedMessage, ValueError) as exc:
                await send_error(f"malformed message: {exc}")
                continue
            try:
                replies = await run_in_threadpool(
                    runtime.manager.handle_event, session_id, event
                )
            except SessionEndedError:
                await websocket.close(code=WS_CODE_SESSION_ENDED, reason="session ended")
                return
            for reply in replies:
                await send_reply(reply)
            if session.phase is Phase.ENDED:
                await websocket.close(code=1000, reason="session ended")
                return

    frontend_dir = config.frontend_dir
    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app
