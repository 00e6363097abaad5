"""HTTP clients: OpenAI-style chat completions and the /embed contract."""

from __future__ import annotations

import time
from typing import Callable, Sequence

import requests

from csforge.providers.base import (
    AuthFailureError,
    ChatRequest,
    ChatResponse,
    MalformedResponseError,
    ProviderConfig,
    ProviderTimeoutError,
    RateLimitedError,
    ServerError,
    call_with_retries,
    estimate_tokens,
)
from csforge.semantic import DimMismatchError


def _raise_for_status(status: int, body: str) -> None:
    if status in (401, 403):
        raise AuthFailureError(f"HTTP {status}: {body[:200]}")
    if status == 429:
        raise RateLimitedError(f"HTTP 429: {body[:200]}")
    if status >= 500:
        raise ServerError(f"HTTP {status}: {body[:200]}")
    if status >= 400:
        raise MalformedResponseError(f"HTTP {status}: {body[:200]}")


class _HttpProviderBase:
    def __init__(
        self,
        config: ProviderConfig,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if not config.endpoint:
            raise ValueError("endpoint is required (set it in config or the environment)")
        self._config = config
        self._session = session or requests.Session()
        self._sleep = sleep

    def _post(self, payload: dict) -> dict:
        headers = {"Content-Type": "application/json"}
        if self._config.auth_token:
            headers["Authorization"] = f"Bearer {self._config.auth_token}"
        try:
            response = self._session.post(
                self._config.endpoint,
                json=payload,
                headers=headers,
                timeout=self._config.timeout,
            )
        except requests.Timeout as exc:
            raise ProviderTimeoutError(str(exc)) from exc
        except requests.ConnectionError as exc:
            # Unreachable endpoints behave like timeouts for retry purposes.
            raise ProviderTimeoutError(str(exc)) from exc
        _raise_for_status(response.status_code, response.text)
        try:
            return response.json()
        except ValueError as exc:
            raise MalformedResponseError(f"non-JSON response: {response.text[:200]}") from exc


class HttpChatProvider(_HttpProviderBase):
    """OpenAI-style chat completion client with bounded retries."""

    def complete(self, request: ChatRequest) -> ChatResponse:
        payload = {
            "model": self._config.model_name,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_prompt},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }

        def attempt() -> ChatResponse:
            data = self._post(payload)
            try:
                text = data["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError) as exc:
                raise MalformedResponseError(f"unexpected chat payload: {data}") from exc
            if not isinstance(text, str):
                raise MalformedResponseError("message content is not text")
            usage = data.get("usage") or {}
            prompt_tokens = usage.get("prompt_tokens")
            completion_tokens = usage.get("completion_tokens")
            if prompt_tokens is None:
                prompt_tokens = estimate_tokens(request.system_prompt + request.user_prompt)
            if completion_tokens is None:
                completion_tokens = estimate_tokens(text)
            return ChatResponse(text, int(prompt_tokens), int(completion_tokens))

        return call_with_retries(attempt, self._config.max_retries, sleep=self._sleep)


class HttpEmbeddingProvider(_HttpProviderBase):
    """Client for the sidecar wire contract:

    POST /embed  {"texts": [...]}  ->  {"embeddings": [[...]], "dim": N, "model": "..."}
    """

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        if not texts:
            raise ValueError("texts must be non-empty")
        for t in texts:
            if not t:
                raise ValueError("every text must be non-empty")
        payload = {"texts": list(texts)}

        def attempt() -> list[list[float]]:
            data = self._post(payload)
            embeddings = data.get("embeddings")
            if not isinstance(embeddings, list) or len(embeddings) != len(texts):
                raise MalformedResponseError(
                    f"expected {len(texts)} embeddings, got {type(embeddings).__name__}"
                )
            dim = data.get("dim") or (len(embeddings[0]) if embeddings else 0)
            vectors = []
            for row in embeddings:
                if not isinstance(row, list) or len(row) != dim:
                    raise DimMismatchError(f"ragged embedding row (expected dim {dim})")
                vectors.append([float(x) for x in row])
            return vectors

        return call_with_retries(attempt, self._config.max_retries, sleep=self._sleep)
