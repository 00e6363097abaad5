"""Candidate generation and refinement.

The generation agent gets one prompt and one corrective re-ask when its
reply does not parse. When the reply carries a word alignment, the
claimed switch span is checked against the switching constraints; a
violating candidate is regenerated once, then passed through flagged so
the evaluators (and the audit trail) still see it.
"""

from __future__ import annotations

import json
import time
from typing import Sequence

from csforge.alignment import AlignedPair, AlignmentLink, permissible_boundaries
from csforge.morphology import violates_free_morpheme
from csforge.pipeline.cost import CostCollector
from csforge.pipeline.params import (
    EVALUATOR_NAMES,
    CandidateSample,
    EvaluationScores,
    GenerationParams,
    PipelineConfig,
)
from csforge.pipeline.prompts import GENERATION_SYSTEM, load_prompt
from csforge.providers.base import ChatProvider, ChatRequest
from csforge.tagging import tag_sentence
from csforge.tokenization import TaggedSentence, sentence_from_surfaces, tokenize
from csforge.tools.context import ContextBlock

RETRY_SUFFIX = (
    "\n\nYour previous reply did not parse. "
    'Reply with valid JSON only: {"text": "..."} or {"turns": [...]}.'
)
CONSTRAINT_SUFFIX = (
    "\n\nThe previous attempt switched languages at a disallowed point "
    "(crossing alignment or broken morpheme). Produce a corrected sample."
)


class UnparsableResponseError(ValueError):
    """The model failed to produce a usable candidate twice in a row."""


def _strip_fences(text: str) -> str:
    t = text.strip()
    if not t.startswith("```"):
        return t
    lines = t.splitlines()
    lines = lines[1:]
    if lines and lines[-1].strip().startswith("```"):
        lines = lines[:-1]
    return "\n".join(lines).strip()


def parse_generation_reply(text: str) -> tuple[list[str], dict | None] | None:
    """Extract (turns, alignment) from a reply; None when unusable.

    JSON-looking replies must actually be JSON objects with `text` or
    `turns`. Anything else is taken verbatim, one turn per line.
    """
    t = _strip_fences(text)
    if t.startswith("{"):
        try:
            data = json.loads(t)
        except json.JSONDecodeError:
            return None
        if not isinstance(data, dict):
            return None
        alignment = data.get("alignment")
        if alignment is not None and not isinstance(alignment, dict):
            return None
        if "turns" in data:
            turns = data["turns"]
            if (
                not isinstance(turns, list)
                or not turns
                or not all(isinstance(x, str) and x.strip() for x in turns)
            ):
                return None
            return [x.strip() for x in turns], alignment
        value = data.get("text")
        if not isinstance(value, str) or not value.strip():
            return None
        return [value.strip()], alignment
    if not t:
        return None
    return [line.strip() for line in t.splitlines() if line.strip()], None


def check_alignment_constraints(alignment: dict) -> bool | None:
    """True = span permitted, False = violation, None = unusable payload.

    Only a claimed span can violate anything: an alignment without one
    asserts no switch points.
    """
    try:
        l1_tokens = [str(x) for x in alignment["l1_tokens"]]
        l2_tokens = [str(x) for x in alignment["l2_tokens"]]
        links = frozenset(
            AlignmentLink(int(i), int(j)) for i, j in alignment["links"]
        )
        l1 = sentence_from_surfaces(l1_tokens)
        l2 = sentence_from_surfaces(l2_tokens)
        linked_l2 = {link.l2_index for link in links}
        null_l2 = frozenset(j for j in range(len(l2_tokens)) if j not in linked_l2)
        pair = AlignedPair(l1, l2, links, null_l2)
    except (KeyError, TypeError, ValueError):
        return None
    span = alignment.get("span")
    if not span:
        return True
    try:
        start, end = int(span[0]), int(span[1])
    except (TypeError, ValueError, IndexError):
        return None
    points = {p.boundary: p for p in permissible_boundaries(pair)}
    for k in (start, end):
        if k not in points:
            return False
        if violates_free_morpheme(pair, points[k]):
            return False
    return True


def _tag_turns(turns: Sequence[str], params: GenerationParams) -> tuple[TaggedSentence, ...]:
    out = []
    for turn in turns:
        sentence = tokenize(turn)
        out.append(tag_sentence(sentence, pair=params.language_pair))
    return tuple(out)


def _complete_parsed(
    chat: ChatProvider,
    agent: str,
    user_prompt: str,
    collector: CostCollector,
) -> tuple[list[str], dict | None]:
    """One ask plus one corrective re-ask; raises when both fail."""
    response = chat.complete(ChatRequest(GENERATION_SYSTEM, user_prompt))
    collector.add(agent, response)
    parsed = parse_generation_reply(response.text)
    if parsed is None:
        response = chat.complete(ChatRequest(GENERATION_SYSTEM, user_prompt + RETRY_SUFFIX))
        collector.add(agent, response)
        parsed = parse_generation_reply(response.text)
    if parsed is None:
        raise UnparsableResponseError(f"{agent} reply unusable after one re-ask")
    return parsed


def _generate_checked(
    chat: ChatProvider,
    agent: str,
    user_prompt: str,
    collector: CostCollector,
) -> tuple[list[str], dict | None, tuple[str, ...]]:
    """Parse a candidate and enforce switch constraints with one retry."""
    turns, alignment = _complete_parsed(chat, agent, user_prompt, collector)
    if alignment is None or check_alignment_constraints(alignment) is not False:
        return turns, alignment, ()
    retry_turns, retry_alignment = _complete_parsed(
        chat, agent, user_prompt + CONSTRAINT_SUFFIX, collector
    )
    flags: tuple[str, ...] = ()
    if retry_alignment is not None and check_alignment_constraints(retry_alignment) is False:
        flags = ("constraint-violation",)
    return retry_turns, retry_alignment, flags


def _style_line(params: GenerationParams) -> str:
    parts = [p for p in (params.tense, params.person, params.register) if p]
    return ", ".join(parts) if parts else "conversational"


def _context_section(context: Sequence[ContextBlock]) -> str:
    if not context:
        return ""
    lines = [f"- ({block.tool_name}) {block.text}" for block in context]
    return "Background notes:\n" + "\n".join(lines) + "\n"


def generation_prompt(params: GenerationParams, context: Sequence[ContextBlock]) -> str:
    template = load_prompt("generation")
    return template.substitute(
        cs_type=str(params.cs_type),
        matrix_language=str(params.matrix_language),
        embedded_language=str(params.embedded_language),
        persona=params.persona.describe(),
        topic=params.topic,
        subtopic_line=f"\nSubtopic: {params.subtopic}" if params.subtopic else "",
        style=_style_line(params),
        turns=params.turns,
        target_pct=round(params.target_ratio * 100),
        tolerance_pct=round(params.tolerance * 100),
        context_section=_context_section(context),
    )


def generate_candidate(
    params: GenerationParams,
    context: Sequence[ContextBlock],
    chat: ChatProvider,
    collector: CostCollector | None = None,
) -> CandidateSample:
    """Produce an unscored candidate; cost is attached by the caller."""
    collector = collector if collector is not None else CostCollector()
    user_prompt = generation_prompt(params, context)
    turns, _, flags = _generate_checked(chat, "generation", user_prompt, collector)
    return CandidateSample(
        sentences=_tag_turns(turns, params),
        params=params,
        context_blocks_used=tuple(block.tool_name for block in context),
        created_at=time.time(),
        flags=flags,
    )


def refine_candidate(
    candidate: CandidateSample,
    chat: ChatProvider,
    collector: CostCollector,
    config: PipelineConfig,
) -> CandidateSample:
    """Rewrite a scored candidate using the evaluators' rationales."""
    scores = candidate.scores
    if scores is None:
        raise ValueError("refinement needs a scored candidate")
    params = candidate.params
    failing = [
        name
        for name in EVALUATOR_NAMES
        if getattr(scores, EvaluationScores.field_for(name)) < config.tau
    ]
    rationale_lines = []
    for name in EVALUATOR_NAMES:
        value = getattr(scores, EvaluationScores.field_for(name))
        rationale = scores.rationales.get(name, "")
        rationale_lines.append(f"- {name}: {value:g}/10. {rationale}".rstrip())
    template = load_prompt("refinement")
    user_prompt = template.substitute(
        candidate=candidate.text,
        rationales="\n".join(rationale_lines),
        failing=", ".join(failing) if failing else "overall balance",
        matrix_language=str(params.matrix_language),
        embedded_language=str(params.embedded_language),
        target_pct=round(params.target_ratio * 100),
    )
    turns, _, flags = _generate_checked(chat, "refiner", user_prompt, collector)
    return CandidateSample(
        sentences=_tag_turns(turns, params),
        params=params,
        context_blocks_used=candidate.context_blocks_used,
        created_at=candidate.created_at,
        flags=flags,
    )
