"""Switch-type taxonomy: inter-, extra-, and intra-sentential."""

from __future__ import annotations

from enum import Enum
from importlib import resources
from pathlib import Path

from csforge.languages import Language
from csforge.tokenization import TaggedSentence, detokenize


class SwitchType(str, Enum):
    MONOLINGUAL = "monolingual"
    INTER_SENTENTIAL = "inter-sentential"
    EXTRA_SENTENTIAL = "extra-sentential"
    INTRA_SENTENTIAL = "intra-sentential"

    def __str__(self) -> str:
        return self.value


def load_tag_lexicon(path: str | Path | None = None) -> list[str]:
    """Discourse tags and fillers, casefolded, one per line."""
    if path is None:
        ref = resources.files("csforge").joinpath("data/tags/default.txt")
        text = ref.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line.casefold())
    return out


def _content_indices(sentence: TaggedSentence) -> list[int]:
    """Tokens that carry language evidence: tagged and containing a letter."""
    return [
        i
        for i, tok in enumerate(sentence.tokens)
        if tok.language is not Language.UNKNOWN and any(ch.isalpha() for ch in tok.surface)
    ]


def _edge_run(sentence: TaggedSentence, content: list[int], from_end: bool) -> list[int]:
    """Maximal same-language run of content tokens at one utterance edge."""
    order = list(reversed(content)) if from_end else content
    lang = sentence.tokens[order[0]].language
    run = []
    for i in order:
        if sentence.tokens[i].language is lang:
            run.append(i)
        else:
            break
    return sorted(run)


def _run_matches_tag(sentence: TaggedSentence, run: list[int], tags: set[str]) -> bool:
    # Include trailing punctuation tokens so "right" + "?" matches "right?".
    lo, hi = run[0], run[-1]
    while hi + 1 < len(sentence.tokens) and not any(
        ch.isalpha() for ch in sentence.tokens[hi + 1].surface
    ):
        hi += 1
    surfaces = [t.surface for t in sentence.tokens[lo : hi + 1]]
    phrase = detokenize(surfaces).casefold()
    return phrase in tags or phrase.rstrip(".,!?¿¡").strip() in tags


def classify_switch_type(
    sentence: TaggedSentence,
    tag_lexicon: list[str] | None = None,
) -> SwitchType:
    """Classify by where the language changes fall.

    Precedence: monolingual, then extra-sentential (a lexicon tag or
    filler at an utterance edge is a tag switch even when it also forms
    its own sentence), then inter-sentential when every change lines up
    with a sentence boundary, intra-sentential otherwise.
    """
    tags = set(tag_lexicon if tag_lexicon is not None else load_tag_lexicon())
    content = _content_indices(sentence)
    languages = {sentence.tokens[i].language for i in content}
    if len(languages) < 2:
        return SwitchType.MONOLINGUAL

    if len(languages) == 2:
        for from_end in (False, True):
            run = _edge_run(sentence, content, from_end)
            rest = [i for i in content if i not in run]
            rest_langs = {sentence.tokens[i].language for i in rest}
            if rest and len(rest_langs) == 1 and _run_matches_tag(sentence, run, tags):
                return SwitchType.EXTRA_SENTENTIAL

    boundaries = set(sentence.sentence_boundaries)
    for a, b in zip(content, content[1:]):
        if sentence.tokens[a].language is not sentence.tokens[b].language:
            if not any(a < cut <= b for cut in boundaries):
                return SwitchType.INTRA_SENTENTIAL
    return SwitchType.INTER_SENTENTIAL
