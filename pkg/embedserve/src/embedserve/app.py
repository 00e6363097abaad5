"""The HTTP service.

Wire contract:
    POST /embed  {"texts": [...]}  ->  {"embeddings": [[...]], "dim": N, "model": "..."}
    GET  /health                   ->  {"status": "ok", "model": "...", "dim": N}

Both endpoints answer 503 until the model has loaded. The service is
stateless between requests; inference is serialized behind a lock so
backends need not be thread-safe.
"""

from __future__ import annotations

import os
import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, Request
from pydantic import BaseModel

from embedserve.backends import EmbeddingBackend, build_backend

DEFAULT_BATCH_CAP = 64
DEFAULT_MAX_CHARS = 8192
MODEL_ENV = "EMBED_MODEL_NAME"
TOKEN_ENV = "EMBEDSERVE_TOKEN"


class EmbedRequest(BaseModel):
    texts: list[str]


def create_app(
    model_name: str | None = None,
    batch_cap: int = DEFAULT_BATCH_CAP,
    max_chars: int = DEFAULT_MAX_CHARS,
    auth_token: str | None = None,
) -> FastAPI:
    if model_name is None:
        model_name = os.environ.get(MODEL_ENV, "hash")
    if auth_token is None:
        auth_token = os.environ.get(TOKEN_ENV, "")
    if batch_cap < 1:
        raise ValueError("batch_cap must be >= 1")
    if max_chars < 1:
        raise ValueError("max_chars must be >= 1")

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.backend = build_backend(model_name)
        yield
        app.state.backend = None

    app = FastAPI(title="embedserve", lifespan=lifespan)
    app.state.backend = None
    app.state.encode_lock = threading.Lock()

    def loaded_backend() -> EmbeddingBackend:
        backend = app.state.backend
        if backend is None:
            raise HTTPException(status_code=503, detail="model is still loading")
        return backend

    def check_auth(request: Request) -> None:
        if not auth_token:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {auth_token}":
            raise HTTPException(status_code=401, detail="missing or wrong bearer token")

    @app.get("/health")
    def health(request: Request) -> dict:
        check_auth(request)
        backend = loaded_backend()
        return {"status": "ok", "model": backend.name, "dim": backend.dim}

    @app.post("/embed")
    def embed(body: EmbedRequest, request: Request) -> dict:
        check_auth(request)
        backend = loaded_backend()
        texts = body.texts
        if not 1 <= len(texts) <= batch_cap:
            raise HTTPException(
                status_code=400,
                detail=f"batch must hold between 1 and {batch_cap} texts, got {len(texts)}",
            )
        for index, text in enumerate(texts):
            if not text:
                raise HTTPException(status_code=400, detail=f"text {index} is empty")
            if len(text) > max_chars:
                raise HTTPException(
                    status_code=400,
                    detail=f"text {index} exceeds {max_chars} characters",
                )
        with app.state.encode_lock:
            vectors = backend.encode(texts)
        return {
            "embeddings": [[float(x) for x in row] for row in vectors],
            "dim": backend.dim,
            "model": backend.name,
        }

    return app
