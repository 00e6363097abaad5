"""Declarative tool registration.

A tool is a named HTTP JSON source: a URL template with a {topic}
placeholder, an env-var reference for its credential, and parse paths
selecting which response fields become context text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

TOPIC_PLACEHOLDER = "{topic}"


class InvalidSpecError(ValueError):
    """The spec cannot work: missing placeholder, empty name, bad method."""


@dataclass(frozen=True, slots=True)
class ToolSpec:
    name: str
    url_template: str
    auth_env: str = ""
    method: str = "GET"
    parse_paths: tuple[str, ...] = field(default_factory=tuple)
    timeout: float = 5.0

    def __post_init__(self) -> None:
        if not self.name:
            raise InvalidSpecError("tool name must be non-empty")
        if TOPIC_PLACEHOLDER not in self.url_template:
            raise InvalidSpecError(f"query template must contain {TOPIC_PLACEHOLDER}")
        if self.method.upper() not in ("GET", "POST"):
            raise InvalidSpecError(f"unsupported method {self.method!r}")


class ToolRegistry:
    """Ordered name -> spec map; re-registering a name hot-swaps it."""

    def __init__(self) -> None:
        self._specs: dict[str, ToolSpec] = {}

    def register(self, spec: ToolSpec) -> None:
        self._specs[spec.name] = spec

    def remove(self, name: str) -> None:
        self._specs.pop(name, None)

    def get(self, name: str) -> ToolSpec | None:
        return self._specs.get(name)

    def list_tools(self) -> list[ToolSpec]:
        return list(self._specs.values())

    def __len__(self) -> int:
        return len(self._specs)

    def __contains__(self, name: str) -> bool:
        return name in self._specs


def register_tool(spec: ToolSpec, registry: ToolRegistry) -> ToolRegistry:
    registry.register(spec)
    return registry


def load_registry(path: str | Path) -> ToolRegistry:
    """Registry file: a YAML list of {name, url_template, ...} entries."""
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise InvalidSpecError(f"registry file is not valid YAML: {exc}") from exc
    registry = ToolRegistry()
    if data is None:
        return registry
    if not isinstance(data, list):
        raise InvalidSpecError("registry file must hold a list of tool entries")
    for entry in data:
        if not isinstance(entry, dict):
            raise InvalidSpecError("each registry entry must be a mapping")
        registry.register(
            ToolSpec(
                name=entry.get("name", ""),
                url_template=entry.get("url_template", ""),
                auth_env=entry.get("auth_env", ""),
                method=entry.get("method", "GET"),
                parse_paths=tuple(entry.get("parse_paths", ())),
                timeout=float(entry.get("timeout", 5.0)),
            )
        )
    return registry


def save_registry(registry: ToolRegistry, path: str | Path) -> None:
    entries = []
    for spec in registry.list_tools():
        entries.append(
            {
                "name": spec.name,
                "url_template": spec.url_template,
                "auth_env": spec.auth_env,
                "method": spec.method,
                "parse_paths": list(spec.parse_paths),
                "timeout": spec.timeout,
            }
        )
    Path(path).write_text(yaml.safe_dump(entries, sort_keys=False), encoding="utf-8")
