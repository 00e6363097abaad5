"""Embedding-provider contract checks.

One suite, two uses: the deterministic mock must pass it in unit tests,
and a live embedding service must pass it through HttpEmbeddingProvider.
Each check raises AssertionError with a named reason on violation.
"""

from __future__ import annotations

import math
from typing import Sequence

from csforge.providers.base import EmbeddingProvider
from csforge.semantic import cosine

# Ten roughly-parallel bilingual pairs plus unrelated distractors, used
# only when semantic checks are enabled (real multilingual models).
TRANSLATION_PAIRS = [
    ("the weather is nice today", "el clima está agradable hoy"),
    ("I am going to the market", "voy al mercado"),
    ("she reads a book every night", "ella lee un libro cada noche"),
    ("we missed the last train", "perdimos el último tren"),
    ("the coffee is too hot", "el café está demasiado caliente"),
    ("my brother works in a hospital", "mi hermano trabaja en un hospital"),
    ("the children play in the park", "los niños juegan en el parque"),
    ("this song is very popular", "esta canción es muy popular"),
    ("he forgot his keys at home", "olvidó sus llaves en casa"),
    ("the meeting starts at nine", "la reunión empieza a las nueve"),
]

UNRELATED_TEXTS = [
    "quantum tunneling in superconductors",
    "recipe for sourdough bread",
    "договор аренды квартиры",
    "棒球比赛的规则",
    "annual rainfall statistics for the desert",
    "فهرس المكتبة الوطنية",
    "การซ่อมจักรยาน",
    "die Geschichte der Dampfmaschine",
    "programmazione funzionale avanzata",
    "le cycle de vie des papillons",
]

SAMPLE_TEXTS = [
    "hello there",
    "hola amigo",
    "我们走吧",
    "مرحبا بالعالم",
    "short",
    "a considerably longer sentence with many more words in it than the others",
]


def _norm(vec: Sequence[float]) -> float:
    return math.sqrt(sum(x * x for x in vec))


def check_batch_shape(provider: EmbeddingProvider) -> None:
    vectors = provider.embed(SAMPLE_TEXTS)
    assert len(vectors) == len(SAMPLE_TEXTS), "one vector per input required"
    dims = {len(v) for v in vectors}
    assert len(dims) == 1, f"uniform dim required, got {dims}"
    assert dims.pop() > 0, "dim must be positive"


def check_unit_norms(provider: EmbeddingProvider, tolerance: float = 1e-3) -> None:
    for vec in provider.embed(SAMPLE_TEXTS):
        assert abs(_norm(vec) - 1.0) <= tolerance, f"norm {_norm(vec)} outside 1 ± {tolerance}"


def check_determinism(provider: EmbeddingProvider) -> None:
    first = provider.embed(["hello there"])[0]
    second = provider.embed(["hello there"])[0]
    assert cosine(first, second) >= 1.0 - 1e-6, "identical texts must embed identically"
    both = provider.embed(["hello there", "hello there"])
    assert cosine(both[0], both[1]) >= 1.0 - 1e-6, "duplicates within a batch must agree"


def check_distinct_texts_differ(provider: EmbeddingProvider) -> None:
    texts = [f"sample text number {i}" for i in range(100)]
    vectors = provider.embed(texts)
    for i in range(len(vectors) - 1):
        assert vectors[i] != vectors[i + 1], "distinct texts should differ somewhere"


def check_translation_affinity(provider: EmbeddingProvider) -> None:
    """Translations should be closer than unrelated pairs, on average.

    Only meaningful for real multilingual encoders; hash-based mocks
    cannot and need not pass this.
    """
    related = []
    for en, es in TRANSLATION_PAIRS:
        a, b = provider.embed([en, es])
        related.append(cosine(a, b))
    unrelated = []
    for (en, _), other in zip(TRANSLATION_PAIRS, UNRELATED_TEXTS):
        a, b = provider.embed([en, other])
        unrelated.append(cosine(a, b))
    mean_related = sum(related) / len(related)
    mean_unrelated = sum(unrelated) / len(unrelated)
    assert mean_related > mean_unrelated, (
        f"translations ({mean_related:.3f}) should beat unrelated pairs ({mean_unrelated:.3f})"
    )


def run_embedding_contract(
    provider: EmbeddingProvider,
    check_semantics: bool = False,
) -> list[str]:
    """Run the full contract; returns the names of the checks that ran."""
    checks = [
        check_batch_shape,
        check_unit_norms,
        check_determinism,
        check_distinct_texts_differ,
    ]
    if check_semantics:
        checks.append(check_translation_affinity)
    for check in checks:
        check(provider)
    return [c.__name__ for c in checks]
