"""Tokenization into language-taggable units.

Space-delimited scripts split on whitespace with edge punctuation
separated; Han and Kana code points each become their own token while
embedded Latin runs stay whole. Tokenization is lossless: every token
records its code-point span into the source string.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from csforge.languages import Language
from csforge.scripts import is_cjk_char

# Punctuation that ends a sentence; a token consisting of (or ending in)
# one of these marks a sentence boundary after itself.
SENTENCE_FINAL = ".!?。！？…"

# Apostrophes and hyphens stay attached to a word edge when the inner
# neighbor is a letter ("pa'", "-ning", "don't"); everything else splits.
_EDGE_KEEP = {"'", "’", "-"}


@dataclass(frozen=True, slots=True)
class Token:
    """One tokenization unit with its span into the source text."""

    surface: str
    language: Language
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.end <= self.start:
            raise ValueError("token span must be non-empty")
        if len(self.surface) != self.end - self.start:
            raise ValueError("surface length must match span")

    def with_language(self, language: Language) -> "Token":
        return Token(self.surface, language, self.start, self.end)


@dataclass(frozen=True, slots=True)
class TaggedSentence:
    """An utterance with its token sequence and sentence-end boundaries.

    sentence_boundaries holds token indices k meaning "a sentence ends
    before token k"; values lie in [1, token_count].
    """

    source: str
    tokens: tuple[Token, ...]
    sentence_boundaries: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        prev_end = 0
        for tok in self.tokens:
            if tok.start < prev_end:
                raise ValueError("token spans must be non-overlapping and increasing")
            if tok.end > len(self.source):
                raise ValueError("token span exceeds source bounds")
            if self.source[tok.start : tok.end] != tok.surface:
                raise ValueError("token surface must equal its source slice")
            prev_end = tok.end
        n = len(self.tokens)
        for b in self.sentence_boundaries:
            if not 1 <= b <= n:
                raise ValueError("sentence boundary out of range")

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(tok.surface for tok in self.tokens)

    def languages(self) -> tuple[Language, ...]:
        return tuple(tok.language for tok in self.tokens)

    def retagged(self, languages: list[Language]) -> "TaggedSentence":
        if len(languages) != len(self.tokens):
            raise ValueError("one language per token required")
        toks = tuple(t.with_language(lang) for t, lang in zip(self.tokens, languages))
        return TaggedSentence(self.source, toks, self.sentence_boundaries)


def _is_word_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _split_edges(run: str, start: int) -> list[tuple[str, int, int]]:
    """Split leading/trailing punctuation off a whitespace-delimited run.

    Apostrophes and hyphens survive at an edge when their inner neighbor
    is a letter, so elisions and stranded affixes stay in one piece.
    """
    lo, hi = 0, len(run)
    pieces_head: list[tuple[str, int, int]] = []
    pieces_tail: list[tuple[str, int, int]] = []
    while lo < hi and _is_word_punct(run[lo]):
        if run[lo] in _EDGE_KEEP and lo + 1 < hi and run[lo + 1].isalpha():
            break
        pieces_head.append((run[lo], start + lo, start + lo + 1))
        lo += 1
    while hi > lo and _is_word_punct(run[hi - 1]):
        if run[hi - 1] in _EDGE_KEEP and hi - 1 > lo and run[hi - 2].isalpha():
            break
        pieces_tail.append((run[hi - 1], start + hi - 1, start + hi))
        hi -= 1
    core = [(run[lo:hi], start + lo, start + hi)] if hi > lo else []
    return pieces_head + core + list(reversed(pieces_tail))


def tokenize(text: str, primary_language: Language = Language.UNKNOWN) -> TaggedSentence:
    """Tokenize text; tokens carry primary_language as a provisional tag.

    Language resolution happens in a separate tagging pass; this stage
    only decides unit boundaries and sentence ends.
    """
    raw: list[tuple[str, int, int]] = []
    run_start = -1
    for i, ch in enumerate(text):
        if ch.isspace():
            if run_start >= 0:
                raw.extend(_split_edges(text[run_start:i], run_start))
                run_start = -1
        elif is_cjk_char(ch):
            if run_start >= 0:
                raw.extend(_split_edges(text[run_start:i], run_start))
                run_start = -1
            raw.append((ch, i, i + 1))
        else:
            if run_start < 0:
                run_start = i
    if run_start >= 0:
        raw.extend(_split_edges(text[run_start:], run_start))

    tokens = tuple(Token(s, primary_language, a, b) for s, a, b in raw)
    boundaries = detect_sentence_boundaries([t.surface for t in tokens])
    return TaggedSentence(text, tokens, boundaries)


def detect_sentence_boundaries(surfaces: list[str]) -> tuple[int, ...]:
    """Token indices after which a sentence ends, per final punctuation."""
    out: list[int] = []
    for i, s in enumerate(surfaces):
        if s and s[-1] in SENTENCE_FINAL:
            out.append(i + 1)
    return tuple(out)


def sentence_from_surfaces(
    surfaces: list[str],
    languages: list[Language] | None = None,
    default_language: Language = Language.UNKNOWN,
) -> TaggedSentence:
    """Build a TaggedSentence from pre-segmented units (alignment chunks).

    Surfaces are joined with detokenize; each unit keeps its identity as
    one token even when it contains internal spaces.
    """
    if languages is None:
        languages = [default_language] * len(surfaces)
    if len(languages) != len(surfaces):
        raise ValueError("one language per surface required")
    source = detokenize(surfaces)
    tokens: list[Token] = []
    pos = 0
    for surf, lang in zip(surfaces, languages):
        start = source.index(surf, pos)
        tokens.append(Token(surf, lang, start, start + len(surf)))
        pos = start + len(surf)
    return TaggedSentence(source, tuple(tokens), detect_sentence_boundaries(list(surfaces)))


def _no_space_between(prev: str, nxt: str) -> bool:
    if not prev or not nxt:
        return True
    if len(nxt) == 1 and _is_word_punct(nxt) and nxt not in ("¿", "¡", "("):
        return True
    if prev in ("¿", "¡", "("):
        return True
    # Consecutive CJK units join without spaces.
    if is_cjk_char(prev[-1]) and is_cjk_char(nxt[0]):
        return True
    return False


def detokenize(surfaces: list[str] | tuple[str, ...]) -> str:
    """Join token surfaces using per-script spacing conventions."""
    out: list[str] = []
    for surf in surfaces:
        if not surf:
            continue
        if out and not _no_space_between(out[-1], surf):
            out.append(" ")
        out.append(surf)
    return "".join(out)
