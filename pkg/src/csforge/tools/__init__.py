"""MCP-style context enrichment: tool registry, fetching, budgeting."""

from csforge.tools.context import ContextBlock, fetch_context
from csforge.tools.registry import InvalidSpecError, ToolRegistry, ToolSpec, register_tool
from csforge.tools.utility import UtilityStats, update_utility

__all__ = [
    "ContextBlock",
    "InvalidSpecError",
    "ToolRegistry",
    "ToolSpec",
    "UtilityStats",
    "fetch_context",
    "register_tool",
    "update_utility",
]
