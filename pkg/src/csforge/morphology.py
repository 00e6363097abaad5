"""Free-morpheme checks: a switch may not strand a bound affix."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from csforge.alignment import AlignedPair, SwitchPoint
from csforge.languages import Language

# Apostrophes and hyphens at a token edge mark material that attaches to
# a neighbor; cutting between the pieces splits one morphological word.
_JOINERS = ("'", "’", "-")


def _read_affixes(text: str) -> frozenset[str]:
    entries = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line.casefold())
    return frozenset(entries)


def load_affixes(path: str | Path | None = None) -> dict[Language, frozenset[str]]:
    """Bound-affix lists per language.

    Only English ships a list by default; other languages rely on the
    joiner rule alone. A directory of <language>.txt files extends this.
    """
    if path is None:
        ref = resources.files("csforge").joinpath("data/affixes/english.txt")
        return {Language.ENGLISH: _read_affixes(ref.read_text(encoding="utf-8"))}
    out: dict[Language, frozenset[str]] = {}
    for file in sorted(Path(path).glob("*.txt")):
        try:
            lang = Language(file.stem.lower())
        except ValueError:
            continue
        out[lang] = _read_affixes(file.read_text(encoding="utf-8"))
    return out


def violates_free_morpheme(
    pair: AlignedPair,
    point: SwitchPoint,
    affixes: dict[Language, frozenset[str]] | None = None,
) -> bool:
    """True when switching at point would break a morphological word.

    Two triggers: the token before the boundary is itself a bound affix
    for its language, or the boundary separates pieces joined by a
    hyphen or apostrophe (either side carries the joiner at the cut
    edge, as in "run" + "-ning").
    """
    if affixes is None:
        affixes = load_affixes()
    tokens = pair.l1.tokens
    n = len(tokens)
    k = point.boundary
    if not 0 <= k <= n:
        raise ValueError(f"boundary {k} out of range")
    if k == 0:
        return False

    prev = tokens[k - 1].surface
    prev_lang = tokens[k - 1].language
    if prev.casefold() in affixes.get(prev_lang, frozenset()):
        return True
    if k < n:
        nxt = tokens[k].surface
        if prev.endswith(_JOINERS) or nxt.startswith(_JOINERS):
            return True
    return False
