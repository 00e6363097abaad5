from __future__ import annotations

import pytest

from csforge.alignment import AlignedPair, AlignmentLink
from csforge.languages import Language
from csforge.tokenization import sentence_from_surfaces

# The running example: an English sentence, its Spanish translation with
# pro-drop ("Yo" and "él" have no surface token), and chunk alignment.
ENGLISH_CHUNKS = ["I", "told him", "that", "so that", "he", "would bring it", "fast"]
SPANISH_CHUNKS = ["le dije", "eso", "pa' que", "la trajera", "ligero"]
CHUNK_LINKS = {(1, 0), (2, 1), (3, 2), (5, 3), (6, 4)}
MIXED_SENTENCE = "I told him that pa' que la trajera ligero"


@pytest.fixture
def chunk_pair() -> AlignedPair:
    l1 = sentence_from_surfaces(ENGLISH_CHUNKS, default_language=Language.ENGLISH)
    l2 = sentence_from_surfaces(SPANISH_CHUNKS, default_language=Language.SPANISH)
    return AlignedPair(
        l1=l1,
        l2=l2,
        links=frozenset(AlignmentLink(i, j) for i, j in CHUNK_LINKS),
    )
