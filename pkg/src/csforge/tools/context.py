"""Context fetching under a token budget.

Every registered tool is queried concurrently; failures contribute
nothing and never fail the run. When the combined snippets exceed the
budget, tools are drawn without replacement with probability
proportional to their utility rate (plus smoothing), whole blocks are
kept while they fit, and a block is truncated only when it is the first
pick and alone exceeds the budget (so the result is never empty when
some tool returned text).
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import requests

from csforge.providers.base import estimate_tokens
from csforge.tools.registry import ToolRegistry, ToolSpec
from csforge.tools.utility import SMOOTHING_EPSILON, UtilityStats

DEFAULT_TOKEN_BUDGET = 4096

# A fetcher returns the parsed snippet text, or None for any failure.
Fetcher = Callable[[ToolSpec, str], "str | None"]


@dataclass(frozen=True, slots=True)
class ContextBlock:
    tool_name: str
    text: str
    estimated_tokens: int
    fetched_at: float

    def __post_init__(self) -> None:
        if self.text and self.estimated_tokens < 1:
            raise ValueError("non-empty text must estimate at least 1 token")


def _walk_path(data, path: str):
    node = data
    for part in path.split("."):
        if isinstance(node, dict):
            if part not in node:
                return None
            node = node[part]
        elif isinstance(node, list):
            try:
                node = node[int(part)]
            except (ValueError, IndexError):
                return None
        else:
            return None
    return node


def parse_snippet(payload, parse_paths: tuple[str, ...]) -> str:
    """Extract and join the configured fields; whole payload if none set."""
    if not parse_paths:
        return payload if isinstance(payload, str) else str(payload)
    parts = []
    for path in parse_paths:
        value = _walk_path(payload, path)
        if value is None:
            continue
        if isinstance(value, (list, tuple)):
            parts.extend(str(v) for v in value)
        else:
            parts.append(str(value))
    return "\n".join(p for p in parts if p)


def http_fetch(spec: ToolSpec, topic: str, session: requests.Session | None = None) -> str | None:
    """Default fetcher; any failure (HTTP error, timeout, empty) -> None."""
    url = spec.url_template.replace("{topic}", requests.utils.quote(topic))
    headers = {}
    token = os.environ.get(spec.auth_env, "") if spec.auth_env else ""
    if token:
        headers["Authorization"] = f"Bearer {token}"
    try:
        http = session or requests
        if spec.method.upper() == "POST":
            response = http.post(url, headers=headers, timeout=spec.timeout)
        else:
            response = http.get(url, headers=headers, timeout=spec.timeout)
        if response.status_code != 200:
            return None
        try:
            payload = response.json()
        except ValueError:
            payload = response.text
        snippet = parse_snippet(payload, spec.parse_paths)
        return snippet or None
    except requests.RequestException:
        return None


def _truncate_to_budget(block: ContextBlock, budget: int) -> ContextBlock:
    # estimate_tokens is ceil(chars/4), so budget*4 chars estimates to <= budget.
    text = block.text[: budget * 4]
    return ContextBlock(block.tool_name, text, estimate_tokens(text), block.fetched_at)


def _weighted_order(
    blocks: list[ContextBlock], stats: UtilityStats, rng: random.Random
) -> list[ContextBlock]:
    """Sample without replacement, probability proportional to rate + eps."""
    remaining = list(blocks)
    weights = [stats.rate(b.tool_name) + SMOOTHING_EPSILON for b in remaining]
    order = []
    while remaining:
        total = sum(weights)
        pick = rng.random() * total
        cumulative = 0.0
        index = len(remaining) - 1
        for i, w in enumerate(weights):
            cumulative += w
            if pick < cumulative:
                index = i
                break
        order.append(remaining.pop(index))
        weights.pop(index)
    return order


def fetch_context(
    topic: str,
    registry: ToolRegistry,
    budget: int = DEFAULT_TOKEN_BUDGET,
    stats: UtilityStats | None = None,
    rng: random.Random | None = None,
    fetcher: Fetcher | None = None,
) -> list[ContextBlock]:
    """Query every tool and assemble blocks totalling <= budget tokens."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    stats = stats or UtilityStats()
    rng = rng or random.Random()
    fetch = fetcher or http_fetch

    def guarded(spec: ToolSpec) -> str | None:
        try:
            return fetch(spec, topic)
        except Exception:
            return None

    specs = registry.list_tools()
    blocks: list[ContextBlock] = []
    if specs:
        with ThreadPoolExecutor(max_workers=min(8, len(specs))) as pool:
            results = list(pool.map(guarded, specs))
        now = time.time()
        for spec, text in zip(specs, results):
            if text:
                blocks.append(ContextBlock(spec.name, text, estimate_tokens(text), now))

    total = sum(b.estimated_tokens for b in blocks)
    if total <= budget:
        return blocks

    chosen: list[ContextBlock] = []
    used = 0
    for block in _weighted_order(blocks, stats, rng):
        if used + block.estimated_tokens <= budget:
            chosen.append(block)
            used += block.estimated_tokens
        elif not chosen:
            trimmed = _truncate_to_budget(block, budget)
            if trimmed.text:
                chosen.append(trimmed)
                used += trimmed.estimated_tokens
            break
    return chosen
