"""The generate -> evaluate -> summarize -> refine loop.

One pipeline run produces one candidate sample, refined at most
max_refinements times. Evaluators are independent and may run
concurrently; their results are assembled in a fixed order so execution
order can never change a verdict.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Sequence

from csforge.pipeline.cost import CostCollector
from csforge.pipeline.evaluators import evaluate_one
from csforge.pipeline.generation import generate_candidate, refine_candidate
from csforge.pipeline.params import (
    EVALUATOR_NAMES,
    CandidateSample,
    EvaluationScores,
    GenerationParams,
    PipelineConfig,
    Verdict,
    summarize,
)
from csforge.providers.base import ChatProvider
from csforge.tools.context import fetch_context
from csforge.tools.registry import ToolRegistry
from csforge.tools.utility import UtilityStats, update_utility

Sink = Callable[[CandidateSample], None]


def evaluate_candidate(
    candidate: CandidateSample,
    chat: ChatProvider,
    collector: CostCollector,
    order: Sequence[str] | None = None,
    parallel: bool = True,
) -> EvaluationScores:
    """Run all four evaluators; `order` affects execution, not results."""
    names = tuple(order) if order is not None else EVALUATOR_NAMES
    if sorted(names) != sorted(EVALUATOR_NAMES):
        raise ValueError(f"order must be a permutation of {EVALUATOR_NAMES}")

    results: dict[str, tuple[float, str, str | None]] = {}
    if parallel:
        with ThreadPoolExecutor(max_workers=len(names)) as pool:
            futures = [(name, pool.submit(evaluate_one, name, candidate, chat, collector)) for name in names]
            for name, future in futures:
                results[name] = future.result()
    else:
        for name in names:
            results[name] = evaluate_one(name, candidate, chat, collector)

    values: dict[str, float] = {}
    rationales: dict[str, str] = {}
    flags: list[str] = []
    for name in EVALUATOR_NAMES:
        score, rationale, flag = results[name]
        values[EvaluationScores.field_for(name)] = score
        rationales[name] = rationale
        if flag:
            flags.append(flag)
    return EvaluationScores(rationales=rationales, flags=tuple(flags), **values)


def run_pipeline(
    params: GenerationParams,
    config: PipelineConfig,
    chat: ChatProvider,
    registry: ToolRegistry | None = None,
    utility: UtilityStats | None = None,
    fetcher=None,
    rng: random.Random | None = None,
    evaluator_order: Sequence[str] | None = None,
    parallel_evaluators: bool = True,
    collector: CostCollector | None = None,
    accept_sink: Sink | None = None,
    quarantine_sink: Sink | None = None,
) -> CandidateSample:
    """Run one full generation loop and return the final candidate.

    Provider errors propagate; a caller-supplied collector then still
    holds the cost of everything that ran before the failure.
    """
    if collector is None:
        collector = CostCollector(config)
    context = []
    if registry is not None and len(registry) > 0:
        context = fetch_context(
            params.topic,
            registry,
            budget=config.context_budget,
            stats=utility,
            rng=rng,
            fetcher=fetcher,
        )

    candidate = generate_candidate(params, context, chat, collector=collector)
    best: tuple[float, CandidateSample] | None = None
    for round_index in range(config.max_refinements + 1):
        scores = evaluate_candidate(
            candidate, chat, collector, order=evaluator_order, parallel=parallel_evaluators
        )
        s_final = summarize(scores, config)
        scored = replace(candidate, scores=scores)
        if s_final >= config.tau:
            final = replace(
                scored,
                verdict=Verdict(s_final, True, round_index),
                cost=collector.entry(),
            )
            _finish(final, utility, accept_sink, quarantine_sink)
            return final
        if best is None or s_final > best[0]:
            best = (s_final, scored)
        if round_index == config.max_refinements:
            break
        candidate = refine_candidate(scored, chat, collector, config)

    s_best, sample = best
    final = replace(
        sample,
        verdict=Verdict(s_best, False, config.max_refinements),
        cost=collector.entry(),
    )
    _finish(final, utility, accept_sink, quarantine_sink)
    return final


def _finish(
    final: CandidateSample,
    utility: UtilityStats | None,
    accept_sink: Sink | None,
    quarantine_sink: Sink | None,
) -> None:
    if utility is not None and final.context_blocks_used:
        update_utility(utility, list(final.context_blocks_used), final.verdict.accepted)
    sink = accept_sink if final.verdict.accepted else quarantine_sink
    if sink is not None:
        sink(final)
