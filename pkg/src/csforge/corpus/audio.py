"""Audio file naming: ``<context>_<turn>.<ext>``.

Names index recordings back into conversations: 0_1.wav is the first
turn of conversation 0. Validation parses components explicitly so
errors can name the part that failed.
"""

from __future__ import annotations

AUDIO_EXTENSIONS = frozenset({"mp3", "wav", "m4a", "flac"})


class MalformedNameError(ValueError):
    """An audio name that does not parse; `component` says which part."""

    def __init__(self, component: str, name: str):
        self.component = component
        self.name = name
        super().__init__(f"bad audio name {name!r}: invalid {component}")


def _is_index(part: str) -> bool:
    # isdecimal, not isdigit: superscripts count as digits but not as
    # decimal numbers, and int() rejects them
    return bool(part) and part.isdecimal()


def validate_audio_name(name: str) -> tuple[int, int]:
    """Return (context_index, turn_index) or raise MalformedNameError."""
    stem, dot, ext = name.rpartition(".")
    if not dot or ext not in AUDIO_EXTENSIONS:
        raise MalformedNameError("extension", name)
    context_part, sep, turn_part = stem.partition("_")
    if not sep:
        raise MalformedNameError("separator", name)
    if not _is_index(context_part):
        raise MalformedNameError("context", name)
    if not _is_index(turn_part):
        raise MalformedNameError("turn", name)
    return int(context_part), int(turn_part)


def is_valid_audio_name(name: str) -> bool:
    try:
        validate_audio_name(name)
    except MalformedNameError:
        return False
    return True
