"""Deterministic offline providers for tests and --mock runs."""

from __future__ import annotations

import hashlib
import math
import random
import threading
from typing import Callable, Mapping, Sequence

from csforge.providers.base import ChatRequest, ChatResponse, estimate_tokens


def prompt_key(system_prompt: str, user_prompt: str) -> str:
    """Stable key for a prompt pair, usable in canned-response maps."""
    digest = hashlib.sha256()
    digest.update(system_prompt.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(user_prompt.encode("utf-8"))
    return digest.hexdigest()


def _respond(request: ChatRequest, text: str) -> ChatResponse:
    return ChatResponse(
        text=text,
        prompt_tokens=estimate_tokens(request.system_prompt + request.user_prompt),
        completion_tokens=estimate_tokens(text),
    )


class MockChatProvider:
    """Canned-response chat provider; referentially transparent.

    Lookup order: exact prompt-hash key, then substring keys against the
    user prompt (insertion order), then the responder callable, then the
    default text. A canned miss never raises.
    """

    def __init__(
        self,
        canned: Mapping[str, str] | None = None,
        default: str = "OK",
        responder: Callable[[ChatRequest], str | None] | None = None,
    ):
        self._canned = dict(canned or {})
        self._default = default
        self._responder = responder

    def complete(self, request: ChatRequest) -> ChatResponse:
        key = prompt_key(request.system_prompt, request.user_prompt)
        if key in self._canned:
            return _respond(request, self._canned[key])
        for needle, text in self._canned.items():
            if needle in request.user_prompt:
                return _respond(request, text)
        if self._responder is not None:
            text = self._responder(request)
            if text is not None:
                return _respond(request, text)
        return _respond(request, self._default)


class ScriptedChatProvider:
    """Plays per-key response queues; the last entry repeats once drained.

    Keys are substrings matched against the user prompt, so independent
    agents (whose prompts differ) consume independent queues regardless
    of call order. Thread-safe.
    """

    def __init__(self, script: Mapping[str, Sequence[str]], default: str = "OK"):
        self._queues = {k: list(v) for k, v in script.items()}
        if any(not q for q in self._queues.values()):
            raise ValueError("every script queue needs at least one response")
        self._default = default
        self._lock = threading.Lock()

    def complete(self, request: ChatRequest) -> ChatResponse:
        with self._lock:
            for needle, queue in self._queues.items():
                if needle in request.user_prompt:
                    text = queue.pop(0) if len(queue) > 1 else queue[0]
                    return _respond(request, text)
            return _respond(request, self._default)


class MockEmbeddingProvider:
    """Hash-seeded deterministic unit vectors: same text, same vector."""

    def __init__(self, seed: int = 0, dim: int = 32):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self._seed = seed
        self._dim = dim

    def _vector(self, text: str) -> list[float]:
        digest = hashlib.sha256(f"{self._seed}:{text}".encode("utf-8")).digest()
        rng = random.Random(digest)
        values = [rng.gauss(0.0, 1.0) for _ in range(self._dim)]
        norm = math.sqrt(sum(x * x for x in values))
        return [x / norm for x in values]

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        if not texts:
            raise ValueError("texts must be non-empty")
        for t in texts:
            if not t:
                raise ValueError("every text must be non-empty")
        return [self._vector(t) for t in texts]
