"""Generate-evaluate-refine pipeline."""

from csforge.pipeline.config import ConfigError, ToolkitConfig, load_config
from csforge.pipeline.cost import CostCollector, record_cost
from csforge.pipeline.evaluators import (
    evaluate_with_chat,
    observed_embedded_ratio,
    parse_score,
    ratio_score,
)
from csforge.pipeline.generation import (
    UnparsableResponseError,
    check_alignment_constraints,
    generate_candidate,
    parse_generation_reply,
    refine_candidate,
)
from csforge.pipeline.params import (
    EVALUATOR_NAMES,
    AgentCost,
    CandidateSample,
    CostEntry,
    EvaluationScores,
    GenerationParams,
    PipelineConfig,
    SpeakerProfile,
    Verdict,
    summarize,
)
from csforge.pipeline.runner import evaluate_candidate, run_pipeline

__all__ = [
    "AgentCost",
    "CandidateSample",
    "ConfigError",
    "CostCollector",
    "CostEntry",
    "EVALUATOR_NAMES",
    "EvaluationScores",
    "GenerationParams",
    "PipelineConfig",
    "SpeakerProfile",
    "ToolkitConfig",
    "UnparsableResponseError",
    "Verdict",
    "check_alignment_constraints",
    "evaluate_candidate",
    "evaluate_with_chat",
    "generate_candidate",
    "load_config",
    "observed_embedded_ratio",
    "parse_generation_reply",
    "parse_score",
    "ratio_score",
    "record_cost",
    "refine_candidate",
    "run_pipeline",
    "summarize",
]
