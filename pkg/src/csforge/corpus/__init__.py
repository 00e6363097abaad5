"""Corpus persistence: JSONL records, manifests, quality scores."""

from csforge.corpus.audio import (
    AUDIO_EXTENSIONS,
    MalformedNameError,
    is_valid_audio_name,
    validate_audio_name,
)
from csforge.corpus.quality import (
    CapExceededError,
    QualityScores,
    aggregate_quality,
)
from csforge.corpus.records import (
    CorpusRecord,
    DuplicateIdError,
    SCHEMA_VERSION,
    SchemaError,
    record_from_dict,
    record_from_json_line,
)
from csforge.corpus.store import (
    CorpusWriter,
    DatasetManifest,
    append_record,
    build_manifest,
    dataset_stats,
    manifest_path_for,
    read_records,
    write_manifest,
)

__all__ = [
    "AUDIO_EXTENSIONS",
    "CapExceededError",
    "CorpusRecord",
    "CorpusWriter",
    "DatasetManifest",
    "DuplicateIdError",
    "MalformedNameError",
    "QualityScores",
    "SCHEMA_VERSION",
    "SchemaError",
    "aggregate_quality",
    "append_record",
    "build_manifest",
    "dataset_stats",
    "is_valid_audio_name",
    "manifest_path_for",
    "read_records",
    "record_from_dict",
    "record_from_json_line",
    "validate_audio_name",
    "write_manifest",
]
