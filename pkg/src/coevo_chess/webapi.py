"""Versioned JSON-over-HTTP surface for the game service.

Endpoints (all under /v1, bound to localhost by serve()):
  POST /v1/sessions            {"human": "white"|"black", "config": {...}?}
  GET  /v1/sessions
  GET  /v1/sessions/{id}/state
  POST /v1/sessions/{id}/move  {"move": "e2e4"}
  POST /v1/sessions/{id}/resign
  GET  /v1/sessions/{id}/log

Errors come back as {"error": {"kind", "message"}} with 400 for bad
input, 404 for unknown sessions and 409 for out-of-turn moves.
"""

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .board import IllegalMoveError, ParseError
from .engine import EngineConfig
from .service import SessionManager, WrongTurn, parse_color

__all__ = ["build_app", "serve"]


def _error(status: int, kind: str, message: str) -> JSONResponse:
    return JSONResponse({"error": {"kind": kind, "message": message}},
                        status_code=status)


def build_app(manager: SessionManager) -> FastAPI:
    app = FastAPI(title="coevo-chess service", docs_url=None, redoc_url=None)
    # the browser UI is served from its own dev origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.post("/v1/sessions")
    async def create_session(request: Request):
        body = await request.json() if await request.body() else {}
        try:
            human = parse_color(body.get("human", "white"))
            config = (EngineConfig(**body["config"])
                      if body.get("config") else None)
        except (ValueError, TypeError) as exc:
            return _error(400, "bad_request", str(exc))
        session = manager.create_session(config=config, human_color=human)
        return session.snapshot()

    @app.get("/v1/sessions")
    async def list_sessions():
        return {"v": 1, "sessions": manager.list_sessions()}

    @app.get("/v1/sessions/{sid}/state")
    async def get_state(sid: str):
        try:
            return manager.get(sid).snapshot()
        except KeyError:
            return _error(404, "unknown_session", sid)

    @app.post("/v1/sessions/{sid}/move")
    async def post_move(sid: str, request: Request):
        try:
            session = manager.get(sid)
        except KeyError:
            return _error(404, "unknown_session", sid)
        body = await request.json()
        text = body.get("move", "")
        try:
            session.submit_human_move(text)
        except ParseError as exc:
            return _error(400, "parse_error", str(exc))
        except IllegalMoveError as exc:
            return _error(400, "illegal_move", str(exc))
        except WrongTurn as exc:
            return _error(409, "wrong_turn", str(exc))
        return session.snapshot()

    @app.post("/v1/sessions/{sid}/resign")
    async def post_resign(sid: str):
        try:
            session = manager.get(sid)
        except KeyError:
            return _error(404, "unknown_session", sid)
        try:
            session.resign()
        except WrongTurn as exc:
            return _error(409, "wrong_turn", str(exc))
        return session.snapshot()

    @app.get("/v1/sessions/{sid}/log")
    async def get_log(sid: str):
        try:
            return {"v": 1, "session": sid, "log": manager.get_log(sid)}
        except KeyError:
            return _error(404, "unknown_session", sid)

    return app


def serve(manager: SessionManager, host: str = "127.0.0.1", port: int = 8000):
    import uvicorn

    uvicorn.run(build_app(manager), host=host, port=port, log_level="warning")
