"""Sentence-embedding HTTP sidecar."""

from embedserve.app import create_app
from embedserve.backends import (
    EmbeddingBackend,
    HashBackend,
    SentenceTransformerBackend,
    build_backend,
)

__all__ = [
    "EmbeddingBackend",
    "HashBackend",
    "SentenceTransformerBackend",
    "build_backend",
    "create_app",
]
