"""Supported languages and their error-metric spaces."""

from __future__ import annotations

from enum import Enum


class Language(str, Enum):
    """The twelve supported languages plus Unknown for unresolvable tokens."""

    ARABIC = "arabic"
    CANTONESE = "cantonese"
    ENGLISH = "english"
    FRENCH = "french"
    GERMAN = "german"
    HINDI = "hindi"
    ITALIAN = "italian"
    JAPANESE = "japanese"
    KOREAN = "korean"
    MANDARIN = "mandarin"
    RUSSIAN = "russian"
    SPANISH = "spanish"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


SUPPORTED_LANGUAGES = tuple(lang for lang in Language if lang is not Language.UNKNOWN)


class ScriptClass(str, Enum):
    """Which form-error metric applies to hypotheses in a given language.

    Languages whose writing system has no reliable word delimiter (or where
    word segmentation is itself contested) are scored at character level;
    the rest at word level.
    """

    FORM_CER = "cer"
    FORM_WER = "wer"

    def __str__(self) -> str:
        return self.value


# Character-level group: Han/Kana/Hangul scripts plus Arabic, where
# whitespace tokenization is unreliable for error counting.
_CER_LANGUAGES = frozenset(
    {
        Language.ARABIC,
        Language.CANTONESE,
        Language.JAPANESE,
        Language.KOREAN,
        Language.MANDARIN,
    }
)


class UnknownLanguageError(ValueError):
    """Raised when an operation needs a concrete language but got Unknown."""


def script_class_of(
    language: Language,
    overrides: dict[Language, ScriptClass] | None = None,
) -> ScriptClass:
    """Map a language to its form-metric space, honoring config overrides."""
    if language is Language.UNKNOWN:
        raise UnknownLanguageError("no script class for Unknown")
    if overrides and language in overrides:
        return overrides[language]
    return ScriptClass.FORM_CER if language in _CER_LANGUAGES else ScriptClass.FORM_WER


def parse_form_metric_overrides(entries: dict[str, str]) -> dict[Language, ScriptClass]:
    """Parse `form_metric.<language> = wer|cer` style config entries.

    Accepts both flat dotted keys and a plain {language: metric} mapping.
    """
    overrides: dict[Language, ScriptClass] = {}
    for key, value in entries.items():
        name = key.split(".", 1)[1] if key.startswith("form_metric.") else key
        try:
            lang = Language(name.strip().lower())
        except ValueError:
            raise UnknownLanguageError(f"unknown language in form_metric override: {name!r}")
        metric = value.strip().lower()
        if metric == "wer":
            overrides[lang] = ScriptClass.FORM_WER
        elif metric == "cer":
            overrides[lang] = ScriptClass.FORM_CER
        else:
            raise ValueError(f"form_metric must be wer or cer, got {value!r}")
    return overrides
