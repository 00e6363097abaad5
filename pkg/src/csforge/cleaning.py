"""Hypothesis cleaning: ASR boilerplate prefixes, emoji, stray spacing."""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

# Pictographic blocks some ASR models sprinkle into transcripts. Kept
# narrow: joiners and variation selectors used by real scripts stay.
_EMOJI_RANGES = (
    (0x1F000, 0x1FAFF),
    (0x2600, 0x27BF),
    (0x2B00, 0x2BFF),
    (0xFE0E, 0xFE0F),
)

_WHITESPACE_RUN = re.compile(r"\s+")


def _is_emoji(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


def load_cleaning_patterns(path: str | Path | None = None) -> list[re.Pattern]:
    """One regex per line, '#' comments; matched case-insensitively at
    the start of the hypothesis."""
    if path is None:
        ref = resources.files("csforge").joinpath("data/cleaning/default.txt")
        text = ref.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    patterns = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            patterns.append(re.compile(line, re.IGNORECASE))
    return patterns


def clean_hypothesis(raw: str, patterns: list[re.Pattern] | None = None) -> str:
    """Strip leading boilerplate, drop emoji, collapse whitespace.

    Prefix patterns are applied repeatedly until none matches, so
    stacked boilerplate ("The audio states: The speaker said: ...")
    comes off in one call and the function is idempotent.
    """
    if patterns is None:
        patterns = load_cleaning_patterns()
    # Normalize before prefix matching: an emoji or doubled space inside
    # the boilerplate must not hide it from the patterns (that would
    # also break idempotence).
    text = "".join(ch for ch in raw if not _is_emoji(ch))
    text = _WHITESPACE_RUN.sub(" ", text).strip()
    changed = True
    while changed:
        changed = False
        for pattern in patterns:
            m = pattern.match(text)
            if m and m.end() > 0:
                text = text[m.end() :].lstrip()
                changed = True
    return text.strip()
