"""Per-tool usefulness tracking.

Each tool keeps an exponentially weighted acceptance rate: how often
samples built with its context cleared the acceptance threshold. The
rate drives sampling when the token budget forces a choice.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

DEFAULT_RATE = 0.5
DEFAULT_BETA = 0.1
SMOOTHING_EPSILON = 0.05


class UtilityStats:
    """Thread-safe store of per-tool EMA acceptance rates."""

    def __init__(self, beta: float = DEFAULT_BETA):
        if not 0.0 < beta <= 1.0:
            raise ValueError("beta must lie in (0, 1]")
        self.beta = beta
        self._rates: dict[str, float] = {}
        self._samples: dict[str, int] = {}
        self._lock = threading.Lock()

    def rate(self, tool_name: str) -> float:
        with self._lock:
            return self._rates.get(tool_name, DEFAULT_RATE)

    def samples(self, tool_name: str) -> int:
        with self._lock:
            return self._samples.get(tool_name, 0)

    def set_rate(self, tool_name: str, rate: float) -> None:
        if not 0.0 <= rate <= 1.0:
            raise ValueError("rate must lie in [0, 1]")
        with self._lock:
            self._rates[tool_name] = rate

    def record(self, tool_names: list[str], accepted: bool) -> None:
        outcome = 1.0 if accepted else 0.0
        with self._lock:
            for name in tool_names:
                prior = self._rates.get(name, DEFAULT_RATE)
                self._rates[name] = (1.0 - self.beta) * prior + self.beta * outcome
                self._samples[name] = self._samples.get(name, 0) + 1

    def snapshot(self) -> dict[str, float]:
        with self._lock:
            return dict(self._rates)

    def save(self, path: str | Path) -> None:
        with self._lock:
            payload = {"beta": self.beta, "rates": dict(self._rates), "samples": dict(self._samples)}
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "UtilityStats":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        stats = cls(beta=payload.get("beta", DEFAULT_BETA))
        stats._rates = {str(k): float(v) for k, v in payload.get("rates", {}).items()}
        stats._samples = {str(k): int(v) for k, v in payload.get("samples", {}).items()}
        return stats


def update_utility(stats: UtilityStats, tool_names_used: list[str], accepted: bool) -> UtilityStats:
    """EMA update for every tool used by the sample; unused tools keep
    their rate."""
    stats.record(tool_names_used, accepted)
    return stats
