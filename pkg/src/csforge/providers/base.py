"""Provider request/response types, errors, and the retry policy."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence, TypeVar

CHAT_ENDPOINT_ENV = "CSFORGE_CHAT_ENDPOINT"
EMBED_ENDPOINT_ENV = "CSFORGE_EMBED_ENDPOINT"
API_KEY_ENV = "CSFORGE_API_KEY"


class ProviderError(Exception):
    """Base class for backend failures."""


class TransientProviderError(ProviderError):
    """Failures worth retrying: timeouts, rate limits, 5xx."""


class ProviderTimeoutError(TransientProviderError):
    pass


class RateLimitedError(TransientProviderError):
    pass


class ServerError(TransientProviderError):
    pass


class AuthFailureError(ProviderError):
    pass


class MalformedResponseError(ProviderError):
    pass


def estimate_tokens(text: str) -> int:
    """Character-count/4 token estimate, rounded up.

    Used when a provider omits usage fields and for the context budget;
    it is a safety cap, not billing-grade accounting.
    """
    return math.ceil(len(text) / 4)


@dataclass(frozen=True, slots=True)
class ChatRequest:
    system_prompt: str
    user_prompt: str
    temperature: float = 0.7
    max_tokens: int = 1024

    def __post_init__(self) -> None:
        if not self.system_prompt or not self.user_prompt:
            raise ValueError("prompts must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")


@dataclass(frozen=True, slots=True)
class ChatResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int

    def __post_init__(self) -> None:
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be >= 0")


@dataclass(frozen=True, slots=True)
class ProviderConfig:
    endpoint: str
    auth_token: str = ""
    model_name: str = "default"
    timeout: float = 30.0
    max_retries: int = 2

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


def chat_config_from_env(**overrides) -> ProviderConfig:
    return ProviderConfig(
        endpoint=overrides.pop("endpoint", None) or os.environ.get(CHAT_ENDPOINT_ENV, ""),
        auth_token=overrides.pop("auth_token", None) or os.environ.get(API_KEY_ENV, ""),
        **overrides,
    )


def embed_config_from_env(**overrides) -> ProviderConfig:
    return ProviderConfig(
        endpoint=overrides.pop("endpoint", None) or os.environ.get(EMBED_ENDPOINT_ENV, ""),
        auth_token=overrides.pop("auth_token", None) or os.environ.get(API_KEY_ENV, ""),
        **overrides,
    )


class ChatProvider(Protocol):
    def complete(self, request: ChatRequest) -> ChatResponse: ...


class EmbeddingProvider(Protocol):
    def embed(self, texts: Sequence[str]) -> list[list[float]]: ...


T = TypeVar("T")


def call_with_retries(
    attempt: Callable[[], T],
    max_retries: int,
    base_delay: float = 0.5,
    sleep: Callable[[float], None] = time.sleep,
) -> T:
    """Run attempt with exponential backoff on transient errors only.

    Auth failures and malformed responses are never retried; they will
    not get better on their own.
    """
    tries = max_retries + 1
    for i in range(tries):
        try:
            return attempt()
        except TransientProviderError:
            if i == tries - 1:
                raise
            sleep(base_delay * (2**i))
    raise AssertionError("unreachable")
