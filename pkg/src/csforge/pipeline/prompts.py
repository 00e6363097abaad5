"""Prompt templates, one file per agent role.

Templates use string.Template ($name placeholders) so literal JSON
braces in the instructions never collide with substitution.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from string import Template

PROMPT_NAMES = ("generation", "refinement", "fluency", "naturalness", "socio_cultural")

GENERATION_SYSTEM = (
    "You write bilingual code-switched speech samples for corpus construction. "
    "Follow the format instructions exactly."
)
EVALUATOR_SYSTEM = (
    "You review code-switched speech samples. "
    "Reply with a single integer score from 0 to 10."
)


def load_prompt(name: str, directory: str | Path | None = None) -> Template:
    """Load a template by role name, from a directory or the built-ins."""
    if name not in PROMPT_NAMES:
        raise ValueError(f"unknown prompt {name!r}")
    if directory is not None:
        text = (Path(directory) / f"{name}.txt").read_text(encoding="utf-8")
    else:
        ref = resources.files("csforge").joinpath(f"pipeline/prompts/{name}.txt")
        text = ref.read_text(encoding="utf-8")
    return Template(text)
