"""Embedding backends.

Two implementations of one interface: a deterministic hash-seeded
backend that needs no model weights (the default, and what the tests
run against), and a sentence-transformers wrapper for real multilingual
encoders. Every backend returns L2-normalized rows.
"""

from __future__ import annotations

import hashlib
import unicodedata
from typing import Protocol, Sequence

import numpy as np

HASH_PREFIX = "hash"
DEFAULT_HASH_DIM = 256
DEFAULT_ST_MODEL = "sentence-transformers/LaBSE"


class EmbeddingBackend(Protocol):
    name: str
    dim: int

    def encode(self, texts: Sequence[str]) -> np.ndarray: ...


class HashBackend:
    """Deterministic pseudo-embeddings seeded from a text digest.

    Same text, same vector, across processes and platforms. Carries no
    semantics; it exists so the service (and anything scoring through
    it) runs offline.
    """

    def __init__(self, dim: int = DEFAULT_HASH_DIM):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self.dim = dim
        self.name = f"hash-v1-{dim}d"

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        rows = np.empty((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            canonical = unicodedata.normalize("NFC", text)
            digest = hashlib.sha256(canonical.encode("utf-8")).digest()
            seed = int.from_bytes(digest[:8], "big")
            rng = np.random.Generator(np.random.PCG64(seed))
            rows[i] = rng.standard_normal(self.dim)
        norms = np.linalg.norm(rows, axis=1, keepdims=True)
        return rows / norms


class SentenceTransformerBackend:
    """Wraps a sentence-transformers model; imported lazily so the
    package installs and serves without torch downloads."""

    def __init__(self, model_name: str = DEFAULT_ST_MODEL):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise RuntimeError(
                "sentence-transformers is not installed; "
                "pip install embedserve[ml] or use the hash backend"
            ) from exc
        self.name = model_name
        self._model = SentenceTransformer(model_name)
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        vectors = self._model.encode(
            list(texts), convert_to_numpy=True, normalize_embeddings=True
        )
        return np.asarray(vectors, dtype=np.float64)


def build_backend(model_name: str) -> EmbeddingBackend:
    """"hash" or "hash:<dim>" selects the offline backend; anything
    else is treated as a sentence-transformers model name."""
    if model_name == HASH_PREFIX:
        return HashBackend()
    if model_name.startswith(HASH_PREFIX + ":"):
        return HashBackend(dim=int(model_name.split(":", 1)[1]))
    return SentenceTransformerBackend(model_name)
