"""The four evaluators.

Three are LLM reviews (fluency, naturalness, socio-cultural fit); the
switching ratio is measurable, so it is computed locally instead of
asking a model to do arithmetic.
"""

from __future__ import annotations

import re

from csforge.pipeline.cost import CostCollector
from csforge.pipeline.params import CandidateSample
from csforge.pipeline.prompts import EVALUATOR_SYSTEM, load_prompt
from csforge.providers.base import ChatProvider, ChatRequest

DEFAULT_TOLERANCE_WINDOW = 0.25

RETRY_SUFFIX = "\n\nReply with only one integer between 0 and 10."

# A standalone 0-10 number, integer or decimal, not part of a larger
# or negative one.
_SCORE_RE = re.compile(r"(?<![\d.-])(10|\d)(\.\d+)?(?!\d)")


def parse_score(text: str) -> float | None:
    match = _SCORE_RE.search(text)
    if not match:
        return None
    value = float(match.group(1) + (match.group(2) or ""))
    return value if 0.0 <= value <= 10.0 else None


def ratio_score(observed: float, target: float, window: float = DEFAULT_TOLERANCE_WINDOW) -> float:
    """10 at the target, falling linearly to 0 at one window away."""
    if window <= 0:
        raise ValueError("tolerance window must be positive")
    return 10.0 * max(0.0, 1.0 - abs(observed - target) / window)


def observed_embedded_ratio(candidate: CandidateSample) -> float:
    """Fraction of embedded-language tokens among pair-language tokens."""
    pair = candidate.params.language_pair
    counts = {pair[0]: 0, pair[1]: 0}
    for sentence in candidate.sentences:
        for token in sentence.tokens:
            if token.language in counts:
                counts[token.language] += 1
    total = counts[pair[0]] + counts[pair[1]]
    if total == 0:
        return 0.0
    return counts[pair[1]] / total


def evaluate_ratio(candidate: CandidateSample) -> tuple[float, str, str | None]:
    params = candidate.params
    observed = observed_embedded_ratio(candidate)
    score = ratio_score(observed, params.target_ratio, params.tolerance)
    rationale = (
        f"observed {params.embedded_language} ratio {observed:.3f} "
        f"against target {params.target_ratio:.2f} (window {params.tolerance:.2f})"
    )
    return score, rationale, None


def _evaluator_prompt(name: str, candidate: CandidateSample) -> str:
    params = candidate.params
    fields = {
        "candidate": candidate.text,
        "matrix_language": str(params.matrix_language),
        "embedded_language": str(params.embedded_language),
    }
    if name == "socio_cultural":
        fields["persona"] = params.persona.describe()
    return load_prompt(name).substitute(fields)


def evaluate_with_chat(
    name: str,
    candidate: CandidateSample,
    chat: ChatProvider,
    collector: CostCollector,
) -> tuple[float, str, str | None]:
    """Ask for a 0-10 score; one re-ask, then 0 with a parse-failure flag."""
    user_prompt = _evaluator_prompt(name, candidate)
    response = chat.complete(ChatRequest(EVALUATOR_SYSTEM, user_prompt))
    collector.add(name, response)
    score = parse_score(response.text)
    if score is None:
        response = chat.complete(ChatRequest(EVALUATOR_SYSTEM, user_prompt + RETRY_SUFFIX))
        collector.add(name, response)
        score = parse_score(response.text)
        if score is None:
            return 0.0, response.text.strip(), f"{name}:score-parse-failure"
    return score, response.text.strip(), None


def evaluate_one(
    name: str,
    candidate: CandidateSample,
    chat: ChatProvider,
    collector: CostCollector,
) -> tuple[float, str, str | None]:
    if name == "ratio":
        return evaluate_ratio(candidate)
    return evaluate_with_chat(name, candidate, chat, collector)
