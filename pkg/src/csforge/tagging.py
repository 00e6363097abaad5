"""Per-token language tagging, matrix-language detection, CS ratio.

Script-unique characters (Hangul, Kana, Arabic, Devanagari, Cyrillic)
decide immediately; Han defers to the declared pair for the
Mandarin/Cantonese split; Latin tokens go through per-language word
lists with the surrounding context as tie-breaker.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from csforge.languages import Language
from csforge.scripts import Script, dominant_script
from csforge.tokenization import TaggedSentence, Token


class AllUnknownError(ValueError):
    """No token in the sentence has a resolvable language."""


# Languages a Han-script token may belong to.
_HAN_LANGUAGES = (Language.MANDARIN, Language.CANTONESE, Language.JAPANESE)

_SCRIPT_TO_LANGUAGE = {
    Script.KANA: Language.JAPANESE,
    Script.HANGUL: Language.KOREAN,
    Script.ARABIC: Language.ARABIC,
    Script.DEVANAGARI: Language.HINDI,
    Script.CYRILLIC: Language.RUSSIAN,
}

# Latin-script languages shipping a word list, in tie-break order.
_LEXICON_LANGUAGES = (
    Language.ENGLISH,
    Language.SPANISH,
    Language.FRENCH,
    Language.GERMAN,
    Language.ITALIAN,
)


def _read_words(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.casefold())
    return frozenset(words)


class LexiconSet:
    """Word lists for Latin-script language identification."""

    def __init__(self, lexicons: dict[Language, frozenset[str]]):
        self._lexicons = dict(lexicons)

    @classmethod
    def default(cls) -> "LexiconSet":
        lex: dict[Language, frozenset[str]] = {}
        base = resources.files("csforge").joinpath("data/lexicons")
        for lang in _LEXICON_LANGUAGES:
            ref = base.joinpath(f"{lang.value}.txt")
            lex[lang] = _read_words(ref.read_text(encoding="utf-8"))
        return cls(lex)

    @classmethod
    def from_dir(cls, path: str | Path) -> "LexiconSet":
        lex: dict[Language, frozenset[str]] = {}
        for file in sorted(Path(path).glob("*.txt")):
            try:
                lang = Language(file.stem.lower())
            except ValueError:
                continue
            lex[lang] = _read_words(file.read_text(encoding="utf-8"))
        return cls(lex)

    def languages_of(self, word: str) -> list[Language]:
        """All languages whose list contains word, in a stable order."""
        w = word.casefold()
        hits = [lang for lang, words in self._lexicons.items() if w in words]
        return hits

    def resolve(self, word: str, preferred: list[Language]) -> Language | None:
        """Pick one language for word, honoring preference order on ties."""
        hits = self.languages_of(word)
        if not hits:
            return None
        if len(hits) == 1:
            return hits[0]
        for lang in preferred:
            if lang in hits:
                return lang
        return hits[0]


_DEFAULT_LEXICONS: LexiconSet | None = None


def default_lexicons() -> LexiconSet:
    global _DEFAULT_LEXICONS
    if _DEFAULT_LEXICONS is None:
        _DEFAULT_LEXICONS = LexiconSet.default()
    return _DEFAULT_LEXICONS


def tag_token_language(
    token: Token | str,
    context_majority: Language,
    lexicons: LexiconSet | None = None,
    pair: tuple[Language, Language] | None = None,
) -> Language:
    """Tag one token; Unknown when nothing resolves it.

    pair, when given, is the declared (matrix, embedded) languages; it
    narrows Han disambiguation and Latin lexicon tie-breaking beyond
    what context_majority alone can.
    """
    surface = token.surface if isinstance(token, Token) else token
    if not surface:
        raise ValueError("token must be non-empty")
    lexicons = lexicons or default_lexicons()
    script = dominant_script(surface)

    if script is Script.HAN:
        if context_majority in _HAN_LANGUAGES:
            return context_majority
        if pair:
            for lang in pair:
                if lang in (Language.MANDARIN, Language.CANTONESE):
                    return lang
        return Language.MANDARIN
    if script in _SCRIPT_TO_LANGUAGE:
        return _SCRIPT_TO_LANGUAGE[script]
    if script is Script.LATIN:
        preferred = [context_majority] + (list(pair) if pair else [])
        resolved = lexicons.resolve(surface, preferred)
        if resolved is not None:
            return resolved
        return context_majority
    # Digits and punctuation carry no language of their own.
    if any(ch.isalpha() for ch in surface):
        return Language.UNKNOWN
    return context_majority


def tag_sentence(
    sentence: TaggedSentence,
    pair: tuple[Language, Language] | None = None,
    lexicons: LexiconSet | None = None,
) -> TaggedSentence:
    """Two-pass tagging: script/lexicon first, then context fill-in.

    The first pass tags tokens that resolve without context; their
    majority becomes the context for Han disambiguation, ambiguous Latin
    words, digits, and punctuation in the second pass.
    """
    lexicons = lexicons or default_lexicons()
    provisional: list[Language | None] = []
    for tok in sentence.tokens:
        script = dominant_script(tok.surface)
        if script in _SCRIPT_TO_LANGUAGE:
            provisional.append(_SCRIPT_TO_LANGUAGE[script])
        elif script is Script.LATIN:
            hits = lexicons.languages_of(tok.surface)
            provisional.append(hits[0] if len(hits) == 1 else None)
        elif script is Script.HAN and pair:
            han = [l for l in pair if l in (Language.MANDARIN, Language.CANTONESE)]
            provisional.append(han[0] if len(han) == 1 else None)
        else:
            provisional.append(None)

    counts: dict[Language, int] = {}
    for lang in provisional:
        if lang is not None:
            counts[lang] = counts.get(lang, 0) + 1
    majority = max(counts, key=counts.get) if counts else (pair[0] if pair else Language.UNKNOWN)

    final: list[Language] = []
    for tok, lang in zip(sentence.tokens, provisional):
        if lang is not None:
            final.append(lang)
        else:
            final.append(tag_token_language(tok, majority, lexicons, pair))
    return sentence.retagged(final)


def _language_counts(sentence: TaggedSentence) -> dict[Language, int]:
    counts: dict[Language, int] = {}
    for tok in sentence.tokens:
        if tok.language is not Language.UNKNOWN:
            counts[tok.language] = counts.get(tok.language, 0) + 1
    return counts


def matrix_language(sentence: TaggedSentence) -> Language:
    """Majority language over non-Unknown tokens; earliest token breaks ties."""
    counts = _language_counts(sentence)
    if not counts:
        raise AllUnknownError("sentence has no resolvable token")
    best = max(counts.values())
    tied = {lang for lang, c in counts.items() if c == best}
    if len(tied) == 1:
        return tied.pop()
    for tok in sentence.tokens:
        if tok.language in tied:
            return tok.language
    raise AssertionError("unreachable: tied language must occur in tokens")


def cs_ratio(sentence: TaggedSentence) -> dict[Language, float]:
    """Token-level language fractions over non-Unknown tokens; sums to 1."""
    counts = _language_counts(sentence)
    if not counts:
        raise AllUnknownError("sentence has no resolvable token")
    total = sum(counts.values())
    return {lang: c / total for lang, c in counts.items()}
