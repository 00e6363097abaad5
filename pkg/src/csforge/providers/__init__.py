"""Chat and embedding backends with deterministic mocks."""

from csforge.providers.base import (
    AuthFailureError,
    ChatProvider,
    ChatRequest,
    ChatResponse,
    EmbeddingProvider,
    MalformedResponseError,
    ProviderConfig,
    ProviderError,
    ProviderTimeoutError,
    RateLimitedError,
    estimate_tokens,
)
from csforge.providers.http import HttpChatProvider, HttpEmbeddingProvider
from csforge.providers.mock import (
    MockChatProvider,
    MockEmbeddingProvider,
    ScriptedChatProvider,
)

__all__ = [
    "AuthFailureError",
    "ChatProvider",
    "ChatRequest",
    "ChatResponse",
    "EmbeddingProvider",
    "HttpChatProvider",
    "HttpEmbeddingProvider",
    "MalformedResponseError",
    "MockChatProvider",
    "MockEmbeddingProvider",
    "ProviderConfig",
    "ProviderError",
    "ProviderTimeoutError",
    "RateLimitedError",
    "ScriptedChatProvider",
    "estimate_tokens",
]
