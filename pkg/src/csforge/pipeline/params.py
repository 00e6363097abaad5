"""Domain types for the generate-evaluate-refine pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from csforge.classify import SwitchType
from csforge.languages import Language
from csforge.tokenization import TaggedSentence

EVALUATOR_NAMES = ("fluency", "naturalness", "ratio", "socio_cultural")


@dataclass(frozen=True, slots=True)
class SpeakerProfile:
    age_band: str = ""
    gender: str = ""
    education: str = ""
    ethnicity: str = ""
    first_language: Language = Language.ENGLISH
    second_language: Language = Language.SPANISH

    def __post_init__(self) -> None:
        if self.first_language is self.second_language:
            raise ValueError("speaker languages must differ")

    def describe(self) -> str:
        parts = []
        if self.age_band:
            parts.append(f"age {self.age_band}")
        if self.gender:
            parts.append(self.gender)
        if self.education:
            parts.append(self.education)
        if self.ethnicity:
            parts.append(self.ethnicity)
        parts.append(f"{self.first_language} native, fluent in {self.second_language}")
        return ", ".join(parts)


@dataclass(frozen=True, slots=True)
class GenerationParams:
    topic: str
    language_pair: tuple[Language, Language]
    subtopic: str = ""
    persona: SpeakerProfile = field(default_factory=SpeakerProfile)
    target_ratio: float = 0.5
    tolerance: float = 0.25
    cs_type: SwitchType = SwitchType.INTRA_SENTENTIAL
    tense: str = ""
    person: str = ""
    register: str = ""
    turns: int = 1

    def __post_init__(self) -> None:
        if not self.topic:
            raise ValueError("topic must be non-empty")
        if len(self.language_pair) != 2 or self.language_pair[0] is self.language_pair[1]:
            raise ValueError("language_pair must be two distinct languages")
        for lang in self.language_pair:
            if lang is Language.UNKNOWN:
                raise ValueError("language_pair members must be known languages")
        if not 0.0 < self.target_ratio < 1.0:
            raise ValueError("target_ratio must lie in (0, 1)")
        if not 0.0 < self.tolerance < 0.5:
            raise ValueError("tolerance must lie in (0, 0.5)")
        if self.turns < 1:
            raise ValueError("turns must be >= 1")

    @property
    def matrix_language(self) -> Language:
        return self.language_pair[0]

    @property
    def embedded_language(self) -> Language:
        return self.language_pair[1]


@dataclass(frozen=True, slots=True)
class EvaluationScores:
    fluency: float
    naturalness: float
    ratio_score: float
    socio_cultural: float
    rationales: Mapping[str, str] = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in EVALUATOR_NAMES:
            value = getattr(self, self.field_for(name))
            if not 0.0 <= value <= 10.0:
                raise ValueError(f"{name} score {value} outside [0, 10]")

    @staticmethod
    def field_for(evaluator: str) -> str:
        return "ratio_score" if evaluator == "ratio" else evaluator

    def as_vector(self) -> tuple[float, float, float, float]:
        return (self.fluency, self.naturalness, self.ratio_score, self.socio_cultural)

    def as_dict(self) -> dict:
        out = {name: getattr(self, self.field_for(name)) for name in EVALUATOR_NAMES}
        if self.flags:
            out["flags"] = list(self.flags)
        return out


@dataclass(frozen=True, slots=True)
class Verdict:
    s_final: float
    accepted: bool
    iterations_used: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.s_final <= 10.0:
            raise ValueError("s_final must lie in [0, 10]")
        if self.iterations_used < 0:
            raise ValueError("iterations_used must be >= 0")


@dataclass(frozen=True, slots=True)
class AgentCost:
    prompt_tokens: int = 0
    completion_tokens: int = 0
    prompt_cost: float = 0.0
    completion_cost: float = 0.0

    @property
    def total_cost(self) -> float:
        return self.prompt_cost + self.completion_cost


@dataclass(frozen=True)
class CostEntry:
    per_agent: Mapping[str, AgentCost] = field(default_factory=dict)

    @property
    def prompt_tokens(self) -> int:
        return sum(a.prompt_tokens for a in self.per_agent.values())

    @property
    def completion_tokens(self) -> int:
        return sum(a.completion_tokens for a in self.per_agent.values())

    @property
    def prompt_cost(self) -> float:
        return sum(a.prompt_cost for a in self.per_agent.values())

    @property
    def completion_cost(self) -> float:
        return sum(a.completion_cost for a in self.per_agent.values())

    @property
    def total_cost(self) -> float:
        return self.prompt_cost + self.completion_cost


@dataclass(frozen=True)
class PipelineConfig:
    tau: float = 8.0
    max_refinements: int = 3
    evaluator_weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    input_price_per_million: float = 5.0
    output_price_per_million: float = 20.0
    context_budget: int = 4096

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau <= 10.0:
            raise ValueError("tau must lie in [0, 10]")
        if self.max_refinements < 0:
            raise ValueError("max_refinements must be >= 0")
        if len(self.evaluator_weights) != 4:
            raise ValueError("four evaluator weights required")
        if any(w < 0 for w in self.evaluator_weights):
            raise ValueError("evaluator weights must be non-negative")
        if abs(sum(self.evaluator_weights) - 1.0) > 1e-9:
            raise ValueError("evaluator weights must sum to 1")
        if self.input_price_per_million < 0 or self.output_price_per_million < 0:
            raise ValueError("prices must be non-negative")
        if self.context_budget <= 0:
            raise ValueError("context_budget must be positive")


@dataclass(frozen=True)
class CandidateSample:
    sentences: tuple[TaggedSentence, ...]
    params: GenerationParams
    scores: EvaluationScores | None = None
    verdict: Verdict | None = None
    context_blocks_used: tuple[str, ...] = ()
    cost: CostEntry | None = None
    created_at: float = 0.0
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.sentences:
            raise ValueError("candidate needs at least one sentence")
        if self.verdict is not None and self.verdict.accepted and self.scores is None:
            raise ValueError("accepted candidates must carry scores")

    @property
    def text(self) -> str:
        return "\n".join(s.source for s in self.sentences)


def summarize(scores: EvaluationScores, config: PipelineConfig) -> float:
    """Weighted mean of the four evaluator scores."""
    vector = scores.as_vector()
    return sum(w * s for w, s in zip(config.evaluator_weights, vector))
