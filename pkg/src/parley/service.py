"""HTTP turn service.

Endpoints:
  POST /turn                     one turn, full JSON reply
  POST /turn/stream              NDJSON chunks: ground partial, then final
  GET  /conversation/{id}/trace  per-turn TurnTrace documents
  GET  /health                   liveness plus pack versions
  POST /conversation/{id}/reset  fresh state for an id

The streaming variant emits the ground as an early partial; the request
and reply bodies are the documented wire format for the web client.
"""

from __future__ import annotations

import json
import queue
import threading
import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import Engine

_STREAM_DONE = object()


class TurnRequest(BaseModel):
    conversation_id: Optional[str] = None
    user_text: str
    trace: bool = False


class TurnReply(BaseModel):
    conversation_id: str
    response: str
    ssml: Optional[str] = None
    ground: Optional[str] = None
    trace: Optional[dict] = None


def create_app(engine: Engine, static_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="parley", version="0.1.0")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "pack": engine.pack_meta}

    @app.post("/turn", response_model=TurnReply)
    def turn(request: TurnRequest) -> TurnReply:
        conversation_id = request.conversation_id or uuid.uuid4().hex
        response, trace = engine.take_turn(conversation_id, request.user_text)
        return TurnReply(
            conversation_id=conversation_id,
            response=response.final_text,
            ssml=response.ssml,
            ground=response.ground,
            trace=trace.to_dict() if request.trace else None,
        )

    @app.post("/turn/stream")
    def turn_stream(request: TurnRequest) -> StreamingResponse:
        conversation_id = request.conversation_id or uuid.uuid4().hex
        chunks: "queue.Queue[object]" = queue.Queue()

        def on_ground(ground: str) -> None:
            chunks.put({"type": "ground", "conversation_id": conversation_id, "text": ground})

        def work() -> None:
            try:
                response, trace = engine.take_turn(
                    conversation_id, request.user_text, on_ground=on_ground
                )
                chunks.put(
                    {
                        "type": "final",
                        "conversation_id": conversation_id,
                        "response": response.final_text,
                        "ssml": response.ssml,
                        "ground": response.ground,
                        "trace": trace.to_dict() if request.trace else None,
                    }
                )
            except Exception as exc:  # keep the stream well-formed
                chunks.put({"type": "error", "conversation_id": conversation_id, "message": str(exc)})
            finally:
                chunks.put(_STREAM_DONE)

        threading.Thread(target=work, daemon=True).start()

        def generate():
            while True:
                item = chunks.get()
                if item is _STREAM_DONE:
                    break
                yield json.dumps(item) + "\n"

        return StreamingResponse(generate(), media_type="application/x-ndjson")

    @app.get("/conversation/{conversation_id}/trace")
    def conversation_trace(conversation_id: str) -> dict:
        turns = engine.conversation_trace(conversation_id)
        if not turns:
            raise HTTPException(status_code=404, detail=f"no trace for {conversation_id!r}")
        return {"conversation_id": conversation_id, "turns": turns}

    @app.post("/conversation/{conversation_id}/reset")
    def reset(conversation_id: str) -> dict:
        engine.reset_conversation(conversation_id)
        return {"conversation_id": conversation_id, "status": "reset"}

    if static_dir is not None and Path(static_dir).exists():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app


def serve(engine: Engine, host: str, port: int, static_dir: Optional[Path] = None) -> None:
    import uvicorn

    engine.start_news_polling()
    app = create_app(engine, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
