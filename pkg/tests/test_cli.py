"""End-to-end command-line behavior through click's test runner."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest
from click.testing import CliRunner

from csforge.cli import main

MIXED = "I told him that pa' que la trajera ligero"
MIXED_JSON = json.dumps({"text": MIXED})

# The env is cleared of provider endpoints so tests never depend on the
# machine they run on.
NO_PROVIDERS = {
    "CSFORGE_CHAT_ENDPOINT": None,
    "CSFORGE_EMBED_ENDPOINT": None,
    "CSFORGE_API_KEY": None,
}


@pytest.fixture
def runner():
    return CliRunner(env=NO_PROVIDERS)


def invoke(runner, args, **kwargs):
    result = runner.invoke(main, args, catch_exceptions=False, **kwargs)
    return result


def read_jsonl(path):
    return [
        json.loads(line)
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def without_timestamps(records):
    out = []
    for record in records:
        record = json.loads(json.dumps(record))
        record.get("provenance", {}).pop("created_at", None)
        out.append(record)
    return out


def write_script(path, fluency=("9",), naturalness=("9",), socio=("9",)):
    script = {
        "Write the code-switched": [MIXED_JSON],
        "Revise the code-switched": [MIXED_JSON],
        "Rate the fluency": list(fluency),
        "Rate the naturalness": list(naturalness),
        "Rate the socio-cultural": list(socio),
    }
    path.write_text(json.dumps(script), encoding="utf-8")
    return path


class TestGenerate:
    def test_mock_run_writes_corpus_and_manifests(self, runner, tmp_path):
        out = tmp_path / "demo.jsonl"
        result = invoke(
            runner, ["--mock", "--seed", "5", "generate", "--count", "10", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert "accepted 10/10" in result.stdout
        assert "mean iterations 0.00" in result.stdout
        records = read_jsonl(out)
        assert len(records) == 10
        assert all(r["text"] == MIXED for r in records)
        manifest = json.loads((tmp_path / "demo.manifest.json").read_text(encoding="utf-8"))
        assert manifest["record_count"] == 10
        assert manifest["pair_counts"] == {"english-spanish": 10}
        run = json.loads((tmp_path / "demo.run.json").read_text(encoding="utf-8"))
        assert run["accepted"] == 10
        assert run["acceptance_rate"] == 1.0
        assert run["total_cost_usd"] > 0
        assert not (tmp_path / "demo.quarantine.jsonl").exists()

    def test_record_ids_are_seeded_and_unique(self, runner, tmp_path):
        out = tmp_path / "demo.jsonl"
        invoke(runner, ["--mock", "--seed", "5", "generate", "--count", "3", "--out", str(out)])
        ids = [r["id"] for r in read_jsonl(out)]
        assert ids == ["s5-00000", "s5-00001", "s5-00002"]

    def test_same_seed_reproduces_records(self, runner, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (a, b):
            invoke(runner, ["--mock", "--seed", "11", "generate", "--count", "5", "--out", str(out)])
        assert without_timestamps(read_jsonl(a)) == without_timestamps(read_jsonl(b))

    def test_parallel_matches_serial(self, runner, tmp_path):
        serial, parallel = tmp_path / "s.jsonl", tmp_path / "p.jsonl"
        invoke(runner, ["--mock", "--seed", "2", "generate", "--count", "8", "--out", str(serial)])
        invoke(
            runner,
            ["--mock", "--seed", "2", "--parallel", "4", "generate", "--count", "8", "--out", str(parallel)],
        )
        assert without_timestamps(read_jsonl(serial)) == without_timestamps(read_jsonl(parallel))

    def test_scripted_fail_then_pass_means_one_iteration(self, runner, tmp_path):
        script = write_script(tmp_path / "script.json", fluency=("3", "9"))
        out = tmp_path / "demo.jsonl"
        result = invoke(
            runner,
            [
                "--seed", "1", "generate", "--count", "6",
                "--out", str(out), "--mock-script", str(script),
                "--ratio", str(5 / 9),
            ],
        )
        assert result.exit_code == 0
        assert "accepted 6/6" in result.stdout
        assert "mean iterations 1.00" in result.stdout

    def test_rejections_go_to_quarantine(self, runner, tmp_path):
        # Fluency stuck at 2 keeps s_final at 7.5, below the bar.
        script = write_script(tmp_path / "script.json", fluency=("2",))
        out = tmp_path / "demo.jsonl"
        result = invoke(
            runner,
            [
                "--seed", "1", "generate", "--count", "3",
                "--out", str(out), "--mock-script", str(script),
                "--ratio", str(5 / 9),
            ],
        )
        assert result.exit_code == 0
        assert "accepted 0/3" in result.stdout
        assert read_jsonl(out) == []
        quarantined = read_jsonl(tmp_path / "demo.quarantine.jsonl")
        assert len(quarantined) == 3
        assert all(not r["provenance"]["accepted"] for r in quarantined)
        run = json.loads((tmp_path / "demo.run.json").read_text(encoding="utf-8"))
        assert all(s["iterations_used"] == 3 for s in run["samples"])

    def test_missing_config_exits_2_naming_path(self, runner, tmp_path):
        result = invoke(
            runner, ["--config", str(tmp_path / "nope.yaml"), "--mock", "generate", "--count", "1"]
        )
        assert result.exit_code == 2
        assert "nope.yaml" in result.stderr

    def test_bad_pair_exits_2(self, runner, tmp_path):
        out = str(tmp_path / "x.jsonl")
        assert invoke(runner, ["--mock", "generate", "--pair", "english", "--out", out]).exit_code == 2
        assert (
            invoke(runner, ["--mock", "generate", "--pair", "english-klingon", "--out", out]).exit_code
            == 2
        )

    def test_bad_cs_type_exits_2(self, runner, tmp_path):
        result = invoke(
            runner,
            ["--mock", "generate", "--cs-type", "diagonal", "--out", str(tmp_path / "x.jsonl")],
        )
        assert result.exit_code == 2

    def test_no_chat_endpoint_exits_2(self, runner, tmp_path):
        result = invoke(runner, ["generate", "--count", "1", "--out", str(tmp_path / "x.jsonl")])
        assert result.exit_code == 2
        assert "chat endpoint" in result.stderr

    def test_chat_provider_down_exits_3(self, runner, tmp_path):
        result = invoke(
            runner,
            ["generate", "--count", "1", "--out", str(tmp_path / "x.jsonl")],
            env={"CSFORGE_CHAT_ENDPOINT": "http://127.0.0.1:9/v1/chat"},
        )
        assert result.exit_code == 3
        assert "chat provider failed" in result.stderr

    def test_bad_mock_script_exits_2(self, runner, tmp_path):
        bad = tmp_path / "script.json"
        bad.write_text('{"Rate the fluency": []}', encoding="utf-8")
        result = invoke(
            runner,
            ["generate", "--count", "1", "--out", str(tmp_path / "x.jsonl"), "--mock-script", str(bad)],
        )
        assert result.exit_code == 2


def write_pairs(path, rows):
    lines = [json.dumps(row, ensure_ascii=False) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def pair_row(pair_id, hypothesis, reference, languages=("english", "spanish")):
    return {
        "id": pair_id,
        "hypothesis": hypothesis,
        "reference": reference,
        "language_pair": list(languages),
    }


def mean_row(stdout):
    for line in stdout.splitlines():
        if line.startswith("mean\t"):
            return line.split("\t")
    raise AssertionError("no mean row in output")


class TestScore:
    def test_identical_pairs_score_zero_error(self, runner, tmp_path):
        pairs = write_pairs(
            tmp_path / "pairs.jsonl",
            [
                pair_row("a", "hello world", "hello world"),
                pair_row("b", "你好 世界", "你好 世界", ("mandarin", "english")),
            ],
        )
        result = invoke(runner, ["--mock-embed", "score", str(pairs)])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "id\twer\tcer\tsem\tsaer\tform_metric"
        assert lines[1] == "a\t0.0000\t0.0000\t1.0000\t0.0000\twer"
        assert lines[2] == "b\t0.0000\t0.0000\t1.0000\t0.0000\tcer"
        assert mean_row(result.stdout)[1:5] == ["0.0000", "0.0000", "1.0000", "0.0000"]

    def test_report_files_written(self, runner, tmp_path):
        pairs = write_pairs(tmp_path / "pairs.jsonl", [pair_row("a", "hi there", "hi there")])
        base = tmp_path / "out" / "report"
        result = invoke(runner, ["--mock-embed", "score", str(pairs), "--report", str(base)])
        assert result.exit_code == 0
        tsv = (tmp_path / "out" / "report.tsv").read_text(encoding="utf-8")
        assert tsv.splitlines()[0] == "id\twer\tcer\tsem\tsaer\tform_metric"
        payload = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
        assert payload["means"]["scored"] == 1
        assert payload["pairs"][0]["id"] == "a"
        assert payload["pairs"][0]["matrix_language"] == "english"

    def test_clean_strictly_lowers_mean_wer(self, runner, tmp_path):
        references = [
            "vamos al mercado this afternoon",
            "she said que no hay problema",
            "el tren was late again today",
            "we cooked arroz con pollo together",
        ]
        rows = [
            pair_row(f"p{i}", f"The speaker said: {ref}", ref) for i, ref in enumerate(references)
        ]
        pairs = write_pairs(tmp_path / "pairs.jsonl", rows)
        raw = invoke(runner, ["--mock-embed", "score", str(pairs)])
        cleaned = invoke(runner, ["--mock-embed", "score", str(pairs), "--clean"])
        raw_wer = float(mean_row(raw.stdout)[1])
        cleaned_wer = float(mean_row(cleaned.stdout)[1])
        assert cleaned_wer < raw_wer
        assert cleaned_wer == 0.0

    def test_clean_is_idempotent_on_already_clean_text(self, runner, tmp_path):
        pairs = write_pairs(
            tmp_path / "pairs.jsonl", [pair_row("a", "ya la vi downtown", "ya la vi downtown")]
        )
        first = invoke(runner, ["--mock-embed", "score", str(pairs), "--clean"])
        second = invoke(runner, ["--mock-embed", "score", str(pairs), "--clean"])
        assert first.stdout == second.stdout
        assert mean_row(first.stdout)[1] == "0.0000"

    def test_casefold_flag(self, runner, tmp_path):
        pairs = write_pairs(tmp_path / "pairs.jsonl", [pair_row("a", "HELLO WORLD", "hello world")])
        plain = invoke(runner, ["--mock-embed", "score", str(pairs)])
        folded = invoke(runner, ["--mock-embed", "score", str(pairs), "--casefold"])
        assert mean_row(plain.stdout)[1] == "1.0000"
        assert mean_row(folded.stdout)[1] == "0.0000"

    def test_alpha_override_shifts_blend(self, runner, tmp_path):
        pairs = write_pairs(
            tmp_path / "pairs.jsonl", [pair_row("a", "hola mundo feliz", "hola mundo")]
        )
        form_only = invoke(runner, ["--mock-embed", "score", str(pairs), "--alpha", "1.0"])
        sem_only = invoke(runner, ["--mock-embed", "score", str(pairs), "--alpha", "0.0"])
        form_cols = mean_row(form_only.stdout)
        sem_cols = mean_row(sem_only.stdout)
        assert form_cols[4] == form_cols[1]
        assert float(sem_cols[4]) == pytest.approx(1.0 - float(sem_cols[3]), abs=1e-4)

    def test_alpha_out_of_range_exits_2(self, runner, tmp_path):
        pairs = write_pairs(tmp_path / "pairs.jsonl", [pair_row("a", "x", "x")])
        result = invoke(runner, ["--mock-embed", "score", str(pairs), "--alpha", "1.5"])
        assert result.exit_code == 2

    def test_missing_pairs_file_exits_5(self, runner, tmp_path):
        result = invoke(runner, ["--mock-embed", "score", str(tmp_path / "nope.jsonl")])
        assert result.exit_code == 5

    def test_empty_pairs_file_exits_5(self, runner, tmp_path):
        empty = tmp_path / "pairs.jsonl"
        empty.write_text("\n", encoding="utf-8")
        result = invoke(runner, ["--mock-embed", "score", str(empty)])
        assert result.exit_code == 5

    def test_malformed_line_exits_5_naming_line(self, runner, tmp_path):
        bad = tmp_path / "pairs.jsonl"
        bad.write_text('{"id": "a"}\n', encoding="utf-8")
        result = invoke(runner, ["--mock-embed", "score", str(bad)])
        assert result.exit_code == 5
        assert ":1:" in result.stderr

    def test_unknown_language_exits_5(self, runner, tmp_path):
        pairs = write_pairs(tmp_path / "pairs.jsonl", [pair_row("a", "x", "x", ("english", "elvish"))])
        result = invoke(runner, ["--mock-embed", "score", str(pairs)])
        assert result.exit_code == 5

    def test_no_embed_endpoint_exits_2(self, runner, tmp_path):
        pairs = write_pairs(tmp_path / "pairs.jsonl", [pair_row("a", "x", "x")])
        result = invoke(runner, ["score", str(pairs)])
        assert result.exit_code == 2
        assert "embedding endpoint" in result.stderr

    def test_embed_provider_down_exits_4(self, runner, tmp_path):
        pairs = write_pairs(tmp_path / "pairs.jsonl", [pair_row("a", "x", "x")])
        result = invoke(
            runner,
            ["score", str(pairs)],
            env={"CSFORGE_EMBED_ENDPOINT": "http://127.0.0.1:9/embed"},
        )
        assert result.exit_code == 4
        assert "embedding provider failed" in result.stderr


class TestStats:
    def test_stats_on_generated_corpus(self, runner, tmp_path):
        out = tmp_path / "demo.jsonl"
        invoke(runner, ["--mock", "--seed", "5", "generate", "--count", "4", "--out", str(out)])
        result = invoke(runner, ["stats", str(out)])
        assert result.exit_code == 0
        assert result.stdout == (
            "corpus: demo\n"
            "records: 4\n"
            "duration_seconds: 0\n"
            "pairs:\n"
            "  english-spanish: 4\n"
            "topics:\n"
            "  daily life: 4\n"
            "ratio histogram (english-spanish): 0 0 0 0 0 4 0 0 0 0\n"
        )

    def test_empty_corpus_prints_zeroed_table(self, runner, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("", encoding="utf-8")
        result = invoke(runner, ["stats", str(empty)])
        assert result.exit_code == 0
        assert "records: 0" in result.stdout

    def test_missing_corpus_exits_5(self, runner, tmp_path):
        result = invoke(runner, ["stats", str(tmp_path / "nope.jsonl")])
        assert result.exit_code == 5

    def test_corrupt_line_exits_5(self, runner, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{not json\n", encoding="utf-8")
        result = invoke(runner, ["stats", str(bad)])
        assert result.exit_code == 5

    def test_write_manifest_flag(self, runner, tmp_path):
        out = tmp_path / "demo.jsonl"
        invoke(runner, ["--mock", "--seed", "5", "generate", "--count", "2", "--out", str(out)])
        result = invoke(runner, ["stats", str(out), "--write-manifest", "--no-ratios"])
        assert result.exit_code == 0
        assert "ratio histogram" not in result.stdout
        manifest = json.loads((tmp_path / "demo.manifest.json").read_text(encoding="utf-8"))
        assert manifest["record_count"] == 2


class _SnippetHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        if self.path.startswith("/fail"):
            self.send_response(500)
            self.end_headers()
            return
        body = json.dumps({"extract": "Paris is the capital of France."}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def snippet_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _SnippetHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    thread.join(timeout=5)


class TestTools:
    def register(self, runner, registry, url_template, name="wiki"):
        return invoke(
            runner,
            [
                "tools", "register",
                "--registry", str(registry),
                "--name", name,
                "--url-template", url_template,
                "--parse-path", "extract",
            ],
        )

    def test_register_then_list(self, runner, tmp_path):
        registry = tmp_path / "tools.yaml"
        assert self.register(runner, registry, "http://x/{topic}").exit_code == 0
        result = invoke(runner, ["tools", "list", "--registry", str(registry)])
        assert result.exit_code == 0
        assert result.stdout.startswith("wiki\tGET\thttp://x/{topic}")

    def test_register_without_placeholder_exits_2(self, runner, tmp_path):
        registry = tmp_path / "tools.yaml"
        result = self.register(runner, registry, "http://x/static")
        assert result.exit_code == 2

    def test_list_missing_registry_exits_2(self, runner, tmp_path):
        result = invoke(runner, ["tools", "list", "--registry", str(tmp_path / "nope.yaml")])
        assert result.exit_code == 2

    def test_fetch_through_registered_tool(self, runner, tmp_path, snippet_server):
        registry = tmp_path / "tools.yaml"
        self.register(runner, registry, snippet_server + "/summary?q={topic}")
        result = invoke(runner, ["tools", "test", "wiki", "--registry", str(registry)])
        assert result.exit_code == 0
        assert "Paris is the capital of France." in result.stdout
        assert "estimated tokens:" in result.stdout

    def test_unknown_tool_exits_2(self, runner, tmp_path, snippet_server):
        registry = tmp_path / "tools.yaml"
        self.register(runner, registry, snippet_server + "/summary?q={topic}")
        result = invoke(runner, ["tools", "test", "ghost", "--registry", str(registry)])
        assert result.exit_code == 2

    def test_failing_fetch_exits_3(self, runner, tmp_path, snippet_server):
        registry = tmp_path / "tools.yaml"
        self.register(runner, registry, snippet_server + "/fail?q={topic}")
        result = invoke(runner, ["tools", "test", "wiki", "--registry", str(registry)])
        assert result.exit_code == 3


class TestConfigThreading:
    def test_config_tau_changes_acceptance(self, runner, tmp_path):
        # A bar above 9.25 rejects what the default accepts.
        config = tmp_path / "run.yaml"
        config.write_text("pipeline:\n  tau: 9.5\n", encoding="utf-8")
        out = tmp_path / "demo.jsonl"
        result = invoke(
            runner,
            ["--config", str(config), "--mock", "--seed", "1", "generate", "--count", "2", "--out", str(out)],
        )
        assert result.exit_code == 0
        assert "accepted 0/2" in result.stdout

    def test_config_form_metric_override_applies(self, runner, tmp_path):
        # Mandarin normally scores by character; the override flips it.
        config = tmp_path / "run.yaml"
        config.write_text("scoring:\n  form_metric:\n    mandarin: wer\n", encoding="utf-8")
        pairs = write_pairs(
            tmp_path / "pairs.jsonl",
            [pair_row("a", "你好 世界", "你好 世界", ("mandarin", "english"))],
        )
        result = invoke(runner, ["--config", str(config), "--mock-embed", "score", str(pairs)])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[1].endswith("\twer")

    def test_tools_path_in_config_feeds_generation(self, runner, tmp_path, snippet_server):
        registry = tmp_path / "tools.yaml"
        TestTools().register(runner, registry, snippet_server + "/s?q={topic}")
        config = tmp_path / "run.yaml"
        config.write_text(f"tools: {registry}\n", encoding="utf-8")
        out = tmp_path / "demo.jsonl"
        result = invoke(
            runner,
            ["--config", str(config), "--mock", "--seed", "4", "generate", "--count", "2", "--out", str(out)],
        )
        assert result.exit_code == 0
        records = read_jsonl(out)
        assert all(r["provenance"]["tools"] == ["wiki"] for r in records)
        # Acceptance feeds back into the utility store next to the registry.
        utility = json.loads((tmp_path / "tools.utility.json").read_text(encoding="utf-8"))
        assert utility["rates"]["wiki"] > 0.5
