"""Cosine-based semantic error between sentence embeddings."""

from __future__ import annotations

import math
from typing import Sequence


class DimMismatchError(ValueError):
    """Vectors (or an embedding batch) disagree on dimensionality."""


class ZeroVectorError(ValueError):
    """Cosine similarity is undefined for a zero vector."""


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise DimMismatchError(f"dims {len(a)} vs {len(b)}")
    dot = 0.0
    norm_a = 0.0
    norm_b = 0.0
    for x, y in zip(a, b):
        dot += x * y
        norm_a += x * x
        norm_b += y * y
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVectorError("zero vector has no direction")
    return dot / math.sqrt(norm_a * norm_b)


def semantic_error(
    hyp_vec: Sequence[float],
    ref_vec: Sequence[float],
    clamp_similarity: bool = True,
) -> float:
    """1 - cosine similarity.

    Clamping (the default) pins the similarity to [0, 1] first so the
    error stays rate-like; negative similarities are rare for sentence
    encoders but would otherwise push the error past 1.
    """
    sim = cosine(hyp_vec, ref_vec)
    if clamp_similarity:
        sim = min(1.0, max(0.0, sim))
    return 1.0 - sim
