"""Cost accounting for chat usage, priced per million tokens."""

from __future__ import annotations

import threading
from typing import Iterable

from csforge.pipeline.params import AgentCost, CostEntry, PipelineConfig
from csforge.providers.base import ChatResponse


def record_cost(
    events: Iterable[tuple[str, ChatResponse]],
    config: PipelineConfig,
) -> CostEntry:
    """Aggregate (agent, response) events into per-agent and total costs."""
    prompt_tokens: dict[str, int] = {}
    completion_tokens: dict[str, int] = {}
    for agent, response in events:
        prompt_tokens[agent] = prompt_tokens.get(agent, 0) + response.prompt_tokens
        completion_tokens[agent] = completion_tokens.get(agent, 0) + response.completion_tokens
    per_agent = {}
    for agent in sorted(prompt_tokens):
        p, c = prompt_tokens[agent], completion_tokens[agent]
        per_agent[agent] = AgentCost(
            prompt_tokens=p,
            completion_tokens=c,
            prompt_cost=p * config.input_price_per_million / 1_000_000,
            completion_cost=c * config.output_price_per_million / 1_000_000,
        )
    return CostEntry(per_agent=per_agent)


class CostCollector:
    """Accumulates chat responses per agent; safe under concurrent adds."""

    def __init__(self, config: PipelineConfig | None = None):
        self.config = config or PipelineConfig()
        self._events: list[tuple[str, ChatResponse]] = []
        self._lock = threading.Lock()

    def add(self, agent: str, response: ChatResponse) -> None:
        with self._lock:
            self._events.append((agent, response))

    def events(self) -> list[tuple[str, ChatResponse]]:
        with self._lock:
            return list(self._events)

    def entry(self) -> CostEntry:
        return record_cost(self.events(), self.config)
