"""Corpus record schema.

One record per generated sample, serialized as a single JSON line.
Everything is NFC-normalized and forced into plain JSON shapes at
construction time so that parse(serialize(record)) compares equal, even
for records built from denormalized or tuple-bearing inputs.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from typing import Any, Mapping

from csforge.corpus.audio import validate_audio_name
from csforge.languages import Language

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """A record (or record line) that does not fit the schema."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DuplicateIdError(ValueError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"record id {record_id!r} already present in corpus")


def _canonical(value: Any) -> Any:
    """NFC-normalize strings and reduce containers to JSON shapes."""
    if isinstance(value, str):
        return unicodedata.normalize("NFC", value)
    if isinstance(value, Mapping):
        return {_canonical(k): _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    if value is None or isinstance(value, (bool, int, float)):
        return value
    raise SchemaError(f"value {value!r} is not JSON-serializable")


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    language_pair: tuple[str, str]
    cs_type: str
    topic: str = ""
    subtopic: str = ""
    text: str = ""
    turns: tuple[str, ...] = ()
    persona: dict = field(default_factory=dict)
    scores: dict = field(default_factory=dict)
    alignment: dict | None = None
    audio_refs: tuple[str, ...] = ()
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        norm = lambda s: unicodedata.normalize("NFC", s)
        object.__setattr__(self, "id", norm(self.id))
        object.__setattr__(self, "cs_type", norm(self.cs_type))
        object.__setattr__(self, "topic", norm(self.topic))
        object.__setattr__(self, "subtopic", norm(self.subtopic))
        object.__setattr__(self, "text", norm(self.text))
        object.__setattr__(self, "turns", tuple(norm(t) for t in self.turns))
        object.__setattr__(self, "audio_refs", tuple(norm(a) for a in self.audio_refs))
        object.__setattr__(self, "language_pair", tuple(norm(p) for p in self.language_pair))
        object.__setattr__(self, "persona", _canonical(dict(self.persona)))
        object.__setattr__(self, "scores", _canonical(dict(self.scores)))
        object.__setattr__(self, "provenance", _canonical(dict(self.provenance)))
        if self.alignment is not None:
            object.__setattr__(self, "alignment", _canonical(dict(self.alignment)))
        self._validate()

    def _validate(self) -> None:
        if not self.id:
            raise SchemaError("record id must be non-empty")
        if len(self.language_pair) != 2:
            raise SchemaError("language_pair must name exactly two languages")
        for tag in self.language_pair:
            try:
                lang = Language(tag)
            except ValueError as exc:
                raise SchemaError(f"unsupported language {tag!r}") from exc
            if lang is Language.UNKNOWN:
                raise SchemaError("language_pair members must be known languages")
        if not self.text and not self.turns:
            raise SchemaError("record needs text or at least one turn")
        for name in self.audio_refs:
            try:
                validate_audio_name(name)
            except ValueError as exc:
                raise SchemaError(f"audio_ref {name!r}: {exc}") from exc

    def content_turns(self) -> tuple[str, ...]:
        """The record's utterances: the turn list, or the single text."""
        return self.turns if self.turns else (self.text,)

    def to_json_dict(self) -> dict:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "id": self.id,
            "language_pair": list(self.language_pair),
            "cs_type": self.cs_type,
        }
        if self.topic:
            out["topic"] = self.topic
        if self.subtopic:
            out["subtopic"] = self.subtopic
        if self.turns:
            out["turns"] = list(self.turns)
        else:
            out["text"] = self.text
        if self.persona:
            out["persona"] = self.persona
        if self.scores:
            out["scores"] = self.scores
        if self.alignment is not None:
            out["alignment"] = self.alignment
        if self.audio_refs:
            out["audio_refs"] = list(self.audio_refs)
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, sort_keys=True)


def record_from_dict(data: Mapping, line_number: int | None = None) -> CorpusRecord:
    if not isinstance(data, Mapping):
        raise SchemaError("record must be a JSON object", line_number)
    if data.get("schema") != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema version {data.get('schema')!r}", line_number
        )
    try:
        return CorpusRecord(
            id=str(data.get("id", "")),
            language_pair=tuple(data.get("language_pair", ())),
            cs_type=str(data.get("cs_type", "")),
            topic=str(data.get("topic", "")),
            subtopic=str(data.get("subtopic", "")),
            text=str(data.get("text", "")),
            turns=tuple(data.get("turns", ())),
            persona=dict(data.get("persona", {})),
            scores=dict(data.get("scores", {})),
            alignment=dict(data["alignment"]) if "alignment" in data else None,
            audio_refs=tuple(data.get("audio_refs", ())),
            provenance=dict(data.get("provenance", {})),
        )
    except SchemaError as exc:
        if line_number is not None and exc.line_number is None:
            raise SchemaError(str(exc), line_number) from exc
        raise


def record_from_json_line(line: str, line_number: int | None = None) -> CorpusRecord:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON ({exc.msg})", line_number) from exc
    return record_from_dict(data, line_number)
