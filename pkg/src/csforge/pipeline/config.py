"""Declarative run configuration.

One YAML file drives a whole run: pipeline thresholds and weights,
scoring options, provider endpoints, and the tool-registry reference.
Every value has a default, so an empty (or absent) file is valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from csforge.languages import parse_form_metric_overrides
from csforge.pipeline.params import EVALUATOR_NAMES, PipelineConfig
from csforge.saer import SaerConfig


class ConfigError(ValueError):
    """Unusable config file: bad YAML, bad types, or bad values."""


@dataclass(frozen=True)
class ToolkitConfig:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    saer: SaerConfig = field(default_factory=SaerConfig)
    chat_endpoint: str = ""
    embed_endpoint: str = ""
    model_name: str = "default"
    tools_path: str = ""


def _weights_from(value) -> tuple[float, float, float, float]:
    if isinstance(value, dict):
        missing = [name for name in EVALUATOR_NAMES if name not in value]
        if missing:
            raise ConfigError(f"evaluator_weights missing {missing}")
        value = [value[name] for name in EVALUATOR_NAMES]
    if not isinstance(value, (list, tuple)) or len(value) != 4:
        raise ConfigError("evaluator_weights must be four numbers or a name map")
    try:
        return tuple(float(w) for w in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad evaluator weight: {exc}") from exc


def load_config(path: str | Path | None = None) -> ToolkitConfig:
    """Load a config file; None means all defaults."""
    if path is None:
        return ToolkitConfig()
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
    if data is None:
        return ToolkitConfig()
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")

    pipeline_section = data.get("pipeline", {})
    if not isinstance(pipeline_section, dict):
        raise ConfigError("pipeline section must be a mapping")
    prices = pipeline_section.get("prices", {})
    if not isinstance(prices, dict):
        raise ConfigError("prices section must be a mapping")
    kwargs = {}
    if "tau" in pipeline_section:
        kwargs["tau"] = float(pipeline_section["tau"])
    if "max_refinements" in pipeline_section:
        kwargs["max_refinements"] = int(pipeline_section["max_refinements"])
    if "evaluator_weights" in pipeline_section:
        kwargs["evaluator_weights"] = _weights_from(pipeline_section["evaluator_weights"])
    if "input_per_million" in prices:
        kwargs["input_price_per_million"] = float(prices["input_per_million"])
    if "output_per_million" in prices:
        kwargs["output_price_per_million"] = float(prices["output_per_million"])
    if "context_budget" in pipeline_section:
        kwargs["context_budget"] = int(pipeline_section["context_budget"])

    scoring = data.get("scoring", {})
    if not isinstance(scoring, dict):
        raise ConfigError("scoring section must be a mapping")
    saer_kwargs = {}
    if "alpha" in scoring:
        saer_kwargs["alpha"] = float(scoring["alpha"])
    if "clamp_similarity" in scoring:
        saer_kwargs["clamp_similarity"] = bool(scoring["clamp_similarity"])
    if "cer_strips_whitespace" in scoring:
        saer_kwargs["cer_strips_whitespace"] = bool(scoring["cer_strips_whitespace"])
    if "casefold_wer" in scoring:
        saer_kwargs["casefold_wer"] = bool(scoring["casefold_wer"])
    overrides = scoring.get("form_metric", {})
    if overrides:
        if not isinstance(overrides, dict):
            raise ConfigError("form_metric must map language to wer|cer")
        try:
            saer_kwargs["form_metric_overrides"] = parse_form_metric_overrides(overrides)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    providers = data.get("providers", {})
    if not isinstance(providers, dict):
        raise ConfigError("providers section must be a mapping")

    try:
        return ToolkitConfig(
            pipeline=PipelineConfig(**kwargs),
            saer=SaerConfig(**saer_kwargs),
            chat_endpoint=str(providers.get("chat_endpoint", "")),
            embed_endpoint=str(providers.get("embed_endpoint", "")),
            model_name=str(providers.get("model", "default")),
            tools_path=str(data.get("tools", "")),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
