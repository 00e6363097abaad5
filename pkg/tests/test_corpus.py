"""Corpus records, persistence, audio naming, and quality aggregation."""

from __future__ import annotations

import json
import re
import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csforge.corpus import (
    CapExceededError,
    CorpusRecord,
    CorpusWriter,
    DuplicateIdError,
    MalformedNameError,
    QualityScores,
    SchemaError,
    aggregate_quality,
    append_record,
    build_manifest,
    dataset_stats,
    is_valid_audio_name,
    read_records,
    record_from_json_line,
    validate_audio_name,
    write_manifest,
)

REFERENCE_AUDIO_RE = re.compile(r"^\d+_\d+\.(mp3|wav|m4a|flac)$")


class TestAudioNames:
    def test_first_turn_of_first_conversation(self):
        assert validate_audio_name("0_1.wav") == (0, 1)

    def test_larger_indices(self):
        assert validate_audio_name("12_3.mp3") == (12, 3)

    def test_all_extensions(self):
        for ext in ("mp3", "wav", "m4a", "flac"):
            assert validate_audio_name(f"4_2.{ext}") == (4, 2)

    def test_non_numeric_turn_names_the_component(self):
        with pytest.raises(MalformedNameError) as excinfo:
            validate_audio_name("0_x.wav")
        assert excinfo.value.component == "turn"

    def test_non_numeric_context(self):
        with pytest.raises(MalformedNameError) as excinfo:
            validate_audio_name("ctx_1.wav")
        assert excinfo.value.component == "context"

    def test_unknown_extension(self):
        with pytest.raises(MalformedNameError) as excinfo:
            validate_audio_name("0_1.ogg")
        assert excinfo.value.component == "extension"

    def test_missing_separator(self):
        with pytest.raises(MalformedNameError) as excinfo:
            validate_audio_name("01.wav")
        assert excinfo.value.component == "separator"

    def test_negative_index_rejected(self):
        with pytest.raises(MalformedNameError):
            validate_audio_name("-1_2.wav")

    def test_superscript_digits_rejected(self):
        # str.isdigit would accept these; the naming grammar must not
        with pytest.raises(MalformedNameError):
            validate_audio_name("²_1.wav")

    @settings(max_examples=300)
    @given(
        st.text(
            alphabet="01239_.xmpwavfl4c-²",
            min_size=0,
            max_size=14,
        )
    )
    def test_matches_reference_regex(self, name):
        assert is_valid_audio_name(name) == bool(REFERENCE_AUDIO_RE.match(name))

    @given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=10**6))
    def test_accepts_every_index_pair(self, ctx, turn):
        assert validate_audio_name(f"{ctx}_{turn}.flac") == (ctx, turn)


class TestQualityScores:
    def test_full_scale_human_row(self):
        scores = QualityScores(16.2, 18.1, 16.4, 7.2, 9.2, 8.8, 9.5)
        assert round(aggregate_quality(scores), 1) == 85.4
        assert not scores.llm_mode

    def test_low_scoring_human_row(self):
        scores = QualityScores(5.0, 7.1, 7.4, 5.4, 4.4, 5.6, 5.2)
        assert round(scores.overall, 1) == 40.1

    def test_all_zeros(self):
        assert QualityScores(0, 0, 0, 0, 0, 0, 0).overall == 0.0

    def test_llm_mode_drops_audio_dimension(self):
        scores = QualityScores(20, 20, 20, 10, 10, 10)
        assert scores.llm_mode
        assert scores.overall == 90.0

    def test_full_marks_with_audio(self):
        assert QualityScores(20, 20, 20, 10, 10, 10, 10).overall == 100.0

    @pytest.mark.parametrize(
        "dimension,kwargs",
        [
            ("linguistic_richness", {"linguistic_richness": 20.5}),
            ("language_racial_diversity", {"language_racial_diversity": 21}),
            ("realism", {"realism": -0.1}),
            ("switching_naturalness", {"switching_naturalness": 11}),
            ("contextual_coherence", {"contextual_coherence": 10.2}),
            ("grammatical_accuracy", {"grammatical_accuracy": 12}),
            ("audio_quality", {"audio_quality": 10.5}),
        ],
    )
    def test_cap_violation_names_dimension(self, dimension, kwargs):
        base = dict(
            linguistic_richness=10,
            language_racial_diversity=10,
            realism=10,
            switching_naturalness=5,
            contextual_coherence=5,
            grammatical_accuracy=5,
            audio_quality=5,
        )
        base.update(kwargs)
        with pytest.raises(CapExceededError) as excinfo:
            QualityScores(**base)
        assert excinfo.value.dimension == dimension

    @given(
        st.tuples(
            st.floats(0, 20),
            st.floats(0, 20),
            st.floats(0, 20),
            st.floats(0, 10),
            st.floats(0, 10),
            st.floats(0, 10),
            st.one_of(st.none(), st.floats(0, 10)),
        )
    )
    def test_overall_is_plain_sum(self, values):
        scores = QualityScores(*values)
        expected = sum(v for v in values if v is not None)
        assert scores.overall == pytest.approx(expected)
        assert scores.overall <= (100.0 if values[6] is not None else 90.0) + 1e-9

    def test_as_dict_round_trips_dimensions(self):
        scores = QualityScores(16.2, 18.1, 16.4, 7.2, 9.2, 8.8)
        d = scores.as_dict()
        assert "audio_quality" not in d
        assert d["overall"] == pytest.approx(scores.overall)


def make_record(record_id="r1", **overrides):
    base = dict(
        id=record_id,
        language_pair=("english", "spanish"),
        cs_type="intra-sentential",
        topic="food",
        subtopic="street food",
        text="I told him that pa' que la trajera ligero",
        persona={"age_band": "25-34", "first_language": "english"},
        scores={"fluency": 9.0, "s_final": 9.25},
        provenance={"model": "mock", "tools": ["wiki"]},
    )
    base.update(overrides)
    return CorpusRecord(**base)


class TestCorpusRecord:
    def test_round_trip_equality(self):
        record = make_record()
        assert record_from_json_line(record.to_json_line()) == record

    def test_round_trip_non_latin_scripts(self):
        record = make_record(
            language_pair=("mandarin", "english"),
            text="我们去 store 买 groceries 吧",
        )
        assert record_from_json_line(record.to_json_line()) == record

    def test_combining_marks_normalize_to_nfc(self):
        # e + combining acute in, precomposed é out
        decomposed = "café por favor"
        record = make_record(text=decomposed, language_pair=("spanish", "english"))
        assert record.text == unicodedata.normalize("NFC", decomposed)
        assert record_from_json_line(record.to_json_line()) == record

    def test_serialized_line_carries_schema_version(self):
        data = json.loads(make_record().to_json_line())
        assert data["schema"] == 1

    def test_turns_replace_text_in_serialization(self):
        record = make_record(text="", turns=("Hola!", "Hey, what's up?"))
        data = json.loads(record.to_json_line())
        assert data["turns"] == ["Hola!", "Hey, what's up?"]
        assert "text" not in data
        assert record_from_json_line(record.to_json_line()) == record

    def test_requires_content(self):
        with pytest.raises(SchemaError):
            make_record(text="", turns=())

    def test_rejects_unknown_language(self):
        with pytest.raises(SchemaError):
            make_record(language_pair=("english", "klingon"))

    def test_rejects_unknown_tag_as_pair_member(self):
        with pytest.raises(SchemaError):
            make_record(language_pair=("english", "unknown"))

    def test_rejects_empty_id(self):
        with pytest.raises(SchemaError):
            make_record(record_id="")

    def test_rejects_bad_audio_ref(self):
        with pytest.raises(SchemaError):
            make_record(audio_refs=("0_1.ogg",))

    def test_accepts_valid_audio_refs(self):
        record = make_record(audio_refs=("0_1.wav", "0_2.wav"))
        assert record_from_json_line(record.to_json_line()) == record

    def test_alignment_payload_round_trips(self):
        alignment = {
            "l1_tokens": ["I", "told him", "that"],
            "l2_tokens": ["le dije", "eso"],
            "links": [[1, 0], [2, 1]],
        }
        record = make_record(alignment=alignment)
        back = record_from_json_line(record.to_json_line())
        assert back.alignment == alignment

    def test_tuples_inside_mappings_are_canonicalized(self):
        record = make_record(alignment={"links": ((1, 0), (2, 1))})
        assert record.alignment == {"links": [[1, 0], [2, 1]]}
        assert record_from_json_line(record.to_json_line()) == record

    def test_schema_version_checked_on_parse(self):
        data = json.loads(make_record().to_json_line())
        data["schema"] = 2
        with pytest.raises(SchemaError):
            record_from_json_line(json.dumps(data))

    @settings(max_examples=60, deadline=None)
    @given(
        record_id=st.text(min_size=1, max_size=12).filter(str.strip),
        text=st.text(min_size=1, max_size=60).filter(
            lambda s: unicodedata.normalize("NFC", s).strip()
        ),
        topic=st.sampled_from(["technology", "food", "travel", ""]),
        scores=st.dictionaries(
            st.sampled_from(["fluency", "naturalness", "s_final"]),
            st.floats(0, 10, allow_nan=False),
            max_size=3,
        ),
    )
    def test_round_trip_property(self, record_id, text, topic, scores):
        record = CorpusRecord(
            id=record_id,
            language_pair=("korean", "english"),
            cs_type="inter-sentential",
            topic=topic,
            text=text,
            scores=scores,
        )
        assert record_from_json_line(record.to_json_line()) == record


class TestStore:
    def test_append_then_read_round_trip(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        record = make_record()
        append_record(record, path)
        assert list(read_records(path)) == [record]

    def test_duplicate_id_within_one_writer(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            writer.append(make_record("a"))
            with pytest.raises(DuplicateIdError):
                writer.append(make_record("a"))

    def test_duplicate_id_across_reopen(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        append_record(make_record("a"), path)
        with pytest.raises(DuplicateIdError):
            append_record(make_record("a"), path)

    def test_thousand_appends_thousand_lines(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            for i in range(1000):
                writer.append(make_record(f"r{i}", topic="technology" if i % 4 else "food"))
        lines = path.read_text(encoding="utf-8").strip().splitlines()
        assert len(lines) == 1000
        manifest = dataset_stats(path, with_ratios=False)
        assert manifest.record_count == 1000
        assert manifest.pair_counts == {"english-spanish": 1000}
        assert manifest.topic_counts["food"] == 250
        assert manifest.topic_counts["technology"] == 750

    def test_schema_error_carries_line_number(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        append_record(make_record("a"), path)
        with path.open("a", encoding="utf-8") as handle:
            handle.write("{not json\n")
        with pytest.raises(SchemaError) as excinfo:
            list(read_records(path))
        assert excinfo.value.line_number == 2
        assert "line 2" in str(excinfo.value)

    def test_bad_record_line_number(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        append_record(make_record("a"), path)
        with path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps({"schema": 1, "id": "", "language_pair": ["english", "spanish"], "cs_type": "x", "text": "hi"}) + "\n")
        with pytest.raises(SchemaError) as excinfo:
            list(read_records(path))
        assert excinfo.value.line_number == 2

    def test_append_requires_open_writer(self, tmp_path):
        writer = CorpusWriter(tmp_path / "corpus.jsonl")
        with pytest.raises(ValueError):
            writer.append(make_record())


class TestManifest:
    def test_empty_corpus_zero_counts(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text("", encoding="utf-8")
        manifest = dataset_stats(path)
        assert manifest.record_count == 0
        assert manifest.pair_counts == {}
        assert manifest.topic_counts == {}
        assert manifest.duration_seconds == 0.0

    def test_pair_counts_split(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            writer.append(make_record("a"))
            writer.append(make_record("b"))
            writer.append(
                make_record("c", language_pair=("mandarin", "english"), text="我们去 store")
            )
        manifest = dataset_stats(path, with_ratios=False)
        assert manifest.pair_counts == {"english-spanish": 2, "mandarin-english": 1}

    def test_topic_skew_is_exact(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            for i in range(50):
                topic = "technology" if i < 13 else f"other{i % 5}"
                writer.append(make_record(f"r{i}", topic=topic))
        manifest = dataset_stats(path, with_ratios=False)
        assert manifest.topic_counts["technology"] == 13
        assert manifest.topic_counts["technology"] / manifest.record_count == 0.26

    def test_manifest_counts_equal_recounts(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            for i in range(40):
                pair = ("english", "spanish") if i % 3 else ("german", "english")
                writer.append(make_record(f"r{i}", language_pair=pair, topic=f"t{i % 7}"))
        manifest = dataset_stats(path, with_ratios=False)
        records = list(read_records(path))
        assert manifest.record_count == len(records)
        for key, count in manifest.pair_counts.items():
            assert count == sum(1 for r in records if "-".join(r.language_pair) == key)
        for topic, count in manifest.topic_counts.items():
            assert count == sum(1 for r in records if r.topic == topic)

    def test_duration_totals_summed_from_provenance(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            writer.append(make_record("a", provenance={"duration_seconds": 3.5}))
            writer.append(make_record("b", provenance={"duration_seconds": 2.0}))
            writer.append(make_record("c"))
        manifest = dataset_stats(path, with_ratios=False)
        assert manifest.duration_seconds == pytest.approx(5.5)

    def test_ratio_histogram_buckets_mixed_text(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            # 4 English + 4 Spanish chunk tokens -> embedded fraction 0.5
            writer.append(make_record("a"))
        manifest = dataset_stats(path)
        histogram = manifest.ratio_histograms["english-spanish"]
        assert sum(histogram) == 1
        assert histogram[5] == 1

    def test_write_manifest_next_to_corpus(self, tmp_path):
        path = tmp_path / "demo.jsonl"
        append_record(make_record(), path)
        manifest = dataset_stats(path, with_ratios=False)
        target = write_manifest(manifest, path)
        assert target.name == "demo.manifest.json"
        data = json.loads(target.read_text(encoding="utf-8"))
        assert data["record_count"] == 1
        assert data["schema"] == 1

    def test_build_manifest_matches_dataset_stats(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with CorpusWriter(path) as writer:
            for i in range(10):
                writer.append(make_record(f"r{i}"))
        from_file = dataset_stats(path, with_ratios=False)
        from_records = build_manifest(read_records(path), "corpus", with_ratios=False)
        assert from_file == from_records
