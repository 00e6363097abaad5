"""Corpus persistence: JSONL files plus a derived manifest.

One writer per corpus file at a time; readers stream lines. The
manifest is never authoritative, it is recomputed from the records, so
its counts can always be checked against a recount.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from csforge.corpus.records import (
    CorpusRecord,
    DuplicateIdError,
    SCHEMA_VERSION,
    SchemaError,
    record_from_json_line,
)
from csforge.languages import Language
from csforge.tagging import tag_sentence
from csforge.tokenization import tokenize

RATIO_BINS = 10


class CorpusWriter:
    """Append-only JSONL writer that enforces id uniqueness.

    Existing ids are loaded up front, so reopening a corpus and
    appending keeps the uniqueness invariant.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._seen: set[str] = set()
        if self.path.exists():
            for record in read_records(self.path):
                self._seen.add(record.id)
        self._handle = None

    def __enter__(self) -> "CorpusWriter":
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = self.path.open("a", encoding="utf-8")
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def append(self, record: CorpusRecord) -> None:
        if self._handle is None:
            raise ValueError("writer is not open; use it as a context manager")
        if record.id in self._seen:
            raise DuplicateIdError(record.id)
        self._handle.write(record.to_json_line() + "\n")
        self._handle.flush()
        self._seen.add(record.id)


def append_record(record: CorpusRecord, path: str | Path) -> None:
    """One-shot append; for bulk writes keep a CorpusWriter open."""
    with CorpusWriter(path) as writer:
        writer.append(record)


def read_records(path: str | Path) -> Iterator[CorpusRecord]:
    """Stream records; SchemaError carries the 1-based line number."""
    with Path(path).open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            yield record_from_json_line(line, line_number)


@dataclass(frozen=True)
class DatasetManifest:
    corpus_name: str
    record_count: int
    pair_counts: dict = field(default_factory=dict)
    topic_counts: dict = field(default_factory=dict)
    duration_seconds: float = 0.0
    schema: int = SCHEMA_VERSION
    ratio_histograms: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "corpus_name": self.corpus_name,
            "record_count": self.record_count,
            "pair_counts": dict(sorted(self.pair_counts.items())),
            "topic_counts": dict(sorted(self.topic_counts.items())),
            "duration_seconds": self.duration_seconds,
            "schema": self.schema,
            "ratio_histograms": {
                k: list(v) for k, v in sorted(self.ratio_histograms.items())
            },
        }


def _pair_key(record: CorpusRecord) -> str:
    return "-".join(record.language_pair)


def _embedded_fraction(record: CorpusRecord) -> float | None:
    """Fraction of embedded-language tokens across the record's turns."""
    pair = (Language(record.language_pair[0]), Language(record.language_pair[1]))
    counts = {pair[0]: 0, pair[1]: 0}
    for turn in record.content_turns():
        sentence = tokenize(turn)
        if not sentence.tokens:
            continue
        tagged = tag_sentence(sentence, pair=pair)
        for token in tagged.tokens:
            if token.language in counts:
                counts[token.language] += 1
    tagged_total = counts[pair[0]] + counts[pair[1]]
    if tagged_total == 0:
        return None
    return counts[pair[1]] / tagged_total


def _ratio_bin(fraction: float) -> int:
    return min(int(fraction * RATIO_BINS), RATIO_BINS - 1)


def build_manifest(
    records: Iterable[CorpusRecord], corpus_name: str, with_ratios: bool = True
) -> DatasetManifest:
    record_count = 0
    pair_counts: dict[str, int] = {}
    topic_counts: dict[str, int] = {}
    duration = 0.0
    histograms: dict[str, list[int]] = {}
    for record in records:
        record_count += 1
        key = _pair_key(record)
        pair_counts[key] = pair_counts.get(key, 0) + 1
        if record.topic:
            topic_counts[record.topic] = topic_counts.get(record.topic, 0) + 1
        value = record.provenance.get("duration_seconds")
        if isinstance(value, (int, float)):
            duration += float(value)
        if with_ratios:
            fraction = _embedded_fraction(record)
            if fraction is not None:
                bins = histograms.setdefault(key, [0] * RATIO_BINS)
                bins[_ratio_bin(fraction)] += 1
    return DatasetManifest(
        corpus_name=corpus_name,
        record_count=record_count,
        pair_counts=pair_counts,
        topic_counts=topic_counts,
        duration_seconds=duration,
        ratio_histograms=histograms,
    )


def dataset_stats(path: str | Path, with_ratios: bool = True) -> DatasetManifest:
    """Recompute the manifest from the corpus file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no corpus at {path}")
    name = path.name
    if name.endswith(".jsonl"):
        name = name[: -len(".jsonl")]
    return build_manifest(read_records(path), name, with_ratios=with_ratios)


def manifest_path_for(corpus_path: str | Path) -> Path:
    corpus_path = Path(corpus_path)
    name = corpus_path.name
    if name.endswith(".jsonl"):
        name = name[: -len(".jsonl")]
    return corpus_path.with_name(f"{name}.manifest.json")


def write_manifest(manifest: DatasetManifest, corpus_path: str | Path) -> Path:
    target = manifest_path_for(corpus_path)
    target.write_text(
        json.dumps(manifest.to_json_dict(), ensure_ascii=False, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )
    return target
