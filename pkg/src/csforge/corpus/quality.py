"""Quality-score rubric and aggregation.

Seven dimensions with fixed caps; the overall score is the plain sum of
whatever dimensions are present. Audio quality is optional: raters
working from text alone (LLM mode) skip it, capping the total at 90
instead of 100.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

MAX_WITH_AUDIO = 100.0
MAX_WITHOUT_AUDIO = 90.0

_CAPS = {
    "linguistic_richness": 20.0,
    "language_racial_diversity": 20.0,
    "realism": 20.0,
    "switching_naturalness": 10.0,
    "contextual_coherence": 10.0,
    "grammatical_accuracy": 10.0,
    "audio_quality": 10.0,
}


class CapExceededError(ValueError):
    def __init__(self, dimension: str, value: float, cap: float):
        self.dimension = dimension
        super().__init__(f"{dimension} score {value} outside [0, {cap}]")


@dataclass(frozen=True, slots=True)
class QualityScores:
    linguistic_richness: float
    language_racial_diversity: float
    realism: float
    switching_naturalness: float
    contextual_coherence: float
    grammatical_accuracy: float
    audio_quality: float | None = None

    def __post_init__(self) -> None:
        for name, cap in _CAPS.items():
            value = getattr(self, name)
            if value is None:
                continue
            if not 0.0 <= value <= cap:
                raise CapExceededError(name, value, cap)

    @property
    def llm_mode(self) -> bool:
        """True when no audio dimension was rated (text-only review)."""
        return self.audio_quality is None

    @property
    def overall(self) -> float:
        return aggregate_quality(self)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                out[f.name] = value
        out["overall"] = self.overall
        return out


def aggregate_quality(scores: QualityScores) -> float:
    """Sum of the present dimensions; 100-point scale, 90 without audio."""
    total = 0.0
    for name in _CAPS:
        value = getattr(scores, name)
        if value is not None:
            total += value
    return total
