"""Levenshtein distance and the WER/CER rates built on it."""

from __future__ import annotations

from typing import Sequence


class EmptyReferenceError(ValueError):
    """Error rates are undefined against an empty reference."""


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Unit-cost edit distance between two sequences, two-row iterative."""
    if len(a) < len(b):
        a, b = b, a
    # b is now the shorter sequence; previous holds the row for a[:i].
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        current = [i]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1])
            else:
                current.append(1 + min(previous[j - 1], previous[j], current[-1]))
        previous = current
    return previous[-1]


def wer(hypothesis: Sequence[str], reference: Sequence[str]) -> float:
    """Word error rate: token edit distance over reference length.

    Not capped at 1: a long hypothesis against a short reference can
    exceed it.
    """
    if len(reference) == 0:
        raise EmptyReferenceError("reference has no tokens")
    return levenshtein(tuple(hypothesis), tuple(reference)) / len(reference)


def _chars(text: str, strip_whitespace: bool) -> tuple[str, ...]:
    if strip_whitespace:
        return tuple(ch for ch in text if not ch.isspace())
    return tuple(text)


def cer(hypothesis: str, reference: str, strip_whitespace: bool = True) -> float:
    """Character error rate; whitespace is excluded by default so that
    segmentation conventions do not count as errors."""
    ref_chars = _chars(reference, strip_whitespace)
    if not ref_chars:
        raise EmptyReferenceError("reference has no scoreable characters")
    hyp_chars = _chars(hypothesis, strip_whitespace)
    return levenshtein(hyp_chars, ref_chars) / len(ref_chars)
