"""Semantic-aware error rate.

SAER blends an embedding-based semantic error with the form error of
the matrix language's metric space: character-based for scripts where
word boundaries are unreliable, word-based otherwise.

    saer = (1 - alpha) * sem_error + alpha * form_error
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from csforge.edit_distance import EmptyReferenceError, cer, wer
from csforge.languages import Language, ScriptClass, script_class_of
from csforge.semantic import semantic_error
from csforge.tagging import AllUnknownError, LexiconSet, matrix_language, tag_sentence
from csforge.tokenization import tokenize


class EmbeddingProvider(Protocol):
    def embed(self, texts: Sequence[str]) -> list[list[float]]: ...


@dataclass(frozen=True, slots=True)
class SaerConfig:
    alpha: float = 0.5
    clamp_similarity: bool = True
    cer_strips_whitespace: bool = True
    casefold_wer: bool = False
    form_metric_overrides: dict[Language, ScriptClass] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


@dataclass(frozen=True, slots=True)
class ErrorBreakdown:
    wer: float
    cer: float
    sem_error: float
    form_error_used: float
    form_metric: ScriptClass
    saer: float
    matrix_language: Language

    def __post_init__(self) -> None:
        expected = self.wer if self.form_metric is ScriptClass.FORM_WER else self.cer
        if abs(self.form_error_used - expected) > 1e-12:
            raise ValueError("form_error_used must equal the selected metric's value")


def combine_errors(sem_error: float, form_error: float, alpha: float) -> float:
    """The SAER convex combination; exposed for arithmetic checks."""
    return (1.0 - alpha) * sem_error + alpha * form_error


def _wer_tokens(text: str, casefold: bool) -> list[str]:
    if casefold:
        text = unicodedata.normalize("NFC", text).casefold()
    return text.split()


def reference_matrix_language(
    reference: str,
    ref_language_pair: tuple[Language, Language],
    lexicons: LexiconSet | None = None,
) -> Language:
    """Matrix language of the reference; the declared matrix is the
    fallback when no token resolves (digits-only utterances and such)."""
    sentence = tag_sentence(
        tokenize(reference, ref_language_pair[0]),
        pair=ref_language_pair,
        lexicons=lexicons,
    )
    try:
        return matrix_language(sentence)
    except AllUnknownError:
        return ref_language_pair[0]


def saer(
    hypothesis: str,
    reference: str,
    ref_language_pair: tuple[Language, Language],
    embeddings: EmbeddingProvider,
    config: SaerConfig | None = None,
    lexicons: LexiconSet | None = None,
) -> ErrorBreakdown:
    """Score one hypothesis against its reference.

    The matrix language of the reference picks the form metric (WER or
    CER, overridable per language); the embedding provider supplies the
    vectors for the semantic term.
    """
    config = config or SaerConfig()
    if not reference.strip():
        raise EmptyReferenceError("reference is empty")

    matrix = reference_matrix_language(reference, ref_language_pair, lexicons)
    metric = script_class_of(matrix, config.form_metric_overrides)

    wer_value = wer(
        _wer_tokens(hypothesis, config.casefold_wer),
        _wer_tokens(reference, config.casefold_wer),
    )
    cer_value = cer(hypothesis, reference, strip_whitespace=config.cer_strips_whitespace)
    hyp_vec, ref_vec = embeddings.embed([hypothesis, reference])
    sem = semantic_error(hyp_vec, ref_vec, config.clamp_similarity)

    form = wer_value if metric is ScriptClass.FORM_WER else cer_value
    return ErrorBreakdown(
        wer=wer_value,
        cer=cer_value,
        sem_error=sem,
        form_error_used=form,
        form_metric=metric,
        saer=combine_errors(sem, form, config.alpha),
        matrix_language=matrix,
    )


@dataclass(frozen=True, slots=True)
class ScoredPair:
    """One batch row: a breakdown on success, an error note otherwise."""

    pair_id: str
    breakdown: ErrorBreakdown | None
    error: str | None = None


@dataclass(frozen=True, slots=True)
class BatchMeans:
    wer: float
    cer: float
    sem: float  # reported as similarity: 1 - mean semantic error
    saer: float
    scored: int
    flagged: int


def batch_score(
    pairs: Sequence[tuple[str, str, str, tuple[Language, Language]]],
    embeddings: EmbeddingProvider,
    config: SaerConfig | None = None,
    lexicons: LexiconSet | None = None,
) -> tuple[list[ScoredPair], BatchMeans]:
    """Score (id, hypothesis, reference, language_pair) rows.

    Per-row failures become flagged rows; the batch itself never aborts.
    """
    if not pairs:
        raise ValueError("batch is empty")
    rows: list[ScoredPair] = []
    for pair_id, hypothesis, reference, language_pair in pairs:
        try:
            breakdown = saer(hypothesis, reference, language_pair, embeddings, config, lexicons)
            rows.append(ScoredPair(pair_id, breakdown))
        except Exception as exc:  # noqa: BLE001 - flagged, not fatal
            rows.append(ScoredPair(pair_id, None, error=f"{type(exc).__name__}: {exc}"))
    scored = [r.breakdown for r in rows if r.breakdown is not None]
    if scored:
        count = len(scored)
        means = BatchMeans(
            wer=sum(b.wer for b in scored) / count,
            cer=sum(b.cer for b in scored) / count,
            sem=1.0 - sum(b.sem_error for b in scored) / count,
            saer=sum(b.saer for b in scored) / count,
            scored=count,
            flagged=len(rows) - count,
        )
    else:
        means = BatchMeans(0.0, 0.0, 0.0, 0.0, scored=0, flagged=len(rows))
    return rows, means
