"""Unicode script detection over code-point ranges.

Range tables cover only what token tagging needs; anything else falls
through to OTHER and is resolved by context or lexicon lookup.
"""

from __future__ import annotations

from enum import Enum


class Script(str, Enum):
    HAN = "han"
    KANA = "kana"
    HANGUL = "hangul"
    ARABIC = "arabic"
    DEVANAGARI = "devanagari"
    CYRILLIC = "cyrillic"
    LATIN = "latin"
    DIGIT = "digit"
    OTHER = "other"


# CJK Unified Ideographs plus extensions and compatibility block.
_HAN_RANGES = (
    (0x3400, 0x4DBF),
    (0x4E00, 0x9FFF),
    (0xF900, 0xFAFF),
    (0x20000, 0x2A6DF),
    (0x2A700, 0x2EBEF),
)

# Hiragana, Katakana, Katakana Phonetic Extensions, halfwidth Katakana.
_KANA_RANGES = (
    (0x3040, 0x309F),
    (0x30A0, 0x30FF),
    (0x31F0, 0x31FF),
    (0xFF66, 0xFF9D),
)

# Hangul Jamo, Compatibility Jamo, Syllables.
_HANGUL_RANGES = (
    (0x1100, 0x11FF),
    (0x3130, 0x318F),
    (0xA960, 0xA97F),
    (0xAC00, 0xD7FF),
)

# Arabic, Arabic Supplement, Presentation Forms A/B.
_ARABIC_RANGES = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x08A0, 0x08FF),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)

_DEVANAGARI_RANGES = (
    (0x0900, 0x097F),
    (0xA8E0, 0xA8FF),
)

_CYRILLIC_RANGES = (
    (0x0400, 0x04FF),
    (0x0500, 0x052F),
    (0x1C80, 0x1C8F),
)

# Basic Latin letters, Latin-1 letters, Extended-A/B, Extended Additional.
_LATIN_RANGES = (
    (0x0041, 0x005A),
    (0x0061, 0x007A),
    (0x00C0, 0x00FF),
    (0x0100, 0x024F),
    (0x1E00, 0x1EFF),
)

_SCRIPT_RANGES: tuple[tuple[Script, tuple[tuple[int, int], ...]], ...] = (
    (Script.HAN, _HAN_RANGES),
    (Script.KANA, _KANA_RANGES),
    (Script.HANGUL, _HANGUL_RANGES),
    (Script.ARABIC, _ARABIC_RANGES),
    (Script.DEVANAGARI, _DEVANAGARI_RANGES),
    (Script.CYRILLIC, _CYRILLIC_RANGES),
    (Script.LATIN, _LATIN_RANGES),
)


def char_script(ch: str) -> Script:
    """Classify a single character by its code point."""
    if ch.isdigit():
        return Script.DIGIT
    cp = ord(ch)
    # Latin-1 multiplication/division signs sit inside the 0xC0-0xFF letter span.
    if cp in (0x00D7, 0x00F7):
        return Script.OTHER
    for script, ranges in _SCRIPT_RANGES:
        for lo, hi in ranges:
            if lo <= cp <= hi:
                return script
    return Script.OTHER


def dominant_script(text: str) -> Script:
    """Most frequent non-OTHER, non-DIGIT script in text; OTHER if none.

    Ties go to the script seen earliest, which keeps the result stable
    for mixed tokens like romaji-annotated Kana.
    """
    counts: dict[Script, int] = {}
    first_seen: dict[Script, int] = {}
    for i, ch in enumerate(text):
        script = char_script(ch)
        if script in (Script.OTHER, Script.DIGIT):
            continue
        counts[script] = counts.get(script, 0) + 1
        first_seen.setdefault(script, i)
    if not counts:
        return Script.OTHER
    best = max(counts, key=lambda s: (counts[s], -first_seen[s]))
    return best


def is_cjk_char(ch: str) -> bool:
    """True for characters tokenized one code point at a time (Han/Kana)."""
    return char_script(ch) in (Script.HAN, Script.KANA)
