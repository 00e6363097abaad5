"""Command-line interface.

Exit codes are a stable contract: 0 ok, 2 config problem, 3 chat
provider failure, 4 embedding provider failure, 5 data error.
"""

from __future__ import annotations

import json
import random
import uuid
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import replace
from pathlib import Path

import click

from csforge.classify import SwitchType
from csforge.cleaning import clean_hypothesis, load_cleaning_patterns
from csforge.corpus import (
    CorpusRecord,
    CorpusWriter,
    SchemaError,
    dataset_stats,
    write_manifest,
)
from csforge.languages import Language
from csforge.pipeline import (
    CandidateSample,
    ConfigError,
    GenerationParams,
    ToolkitConfig,
    UnparsableResponseError,
    load_config,
    run_pipeline,
)
from csforge.providers.base import (
    ProviderError,
    chat_config_from_env,
    embed_config_from_env,
    estimate_tokens,
)
from csforge.providers.http import HttpChatProvider, HttpEmbeddingProvider
from csforge.providers.mock import MockChatProvider, MockEmbeddingProvider, ScriptedChatProvider
from csforge.saer import batch_score
from csforge.semantic import DimMismatchError
from csforge.tools.context import http_fetch
from csforge.tools.registry import InvalidSpecError, ToolRegistry, ToolSpec, load_registry, save_registry
from csforge.tools.utility import UtilityStats

EXIT_CONFIG = 2
EXIT_CHAT_PROVIDER = 3
EXIT_EMBED_PROVIDER = 4
EXIT_DATA = 5

# Markers the built-in mock keys on; they appear in exactly one prompt each.
GENERATION_MARKER = "Write the code-switched"
REFINEMENT_MARKER = "Revise the code-switched"

MOCK_SAMPLE = json.dumps({"text": "I told him that pa' que la trajera ligero"})


def _fail(ctx: click.Context, code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    ctx.exit(code)


def _toolkit_config(ctx: click.Context) -> ToolkitConfig:
    try:
        return load_config(ctx.obj.get("config_path"))
    except ConfigError as exc:
        _fail(ctx, EXIT_CONFIG, str(exc))


@click.group()
@click.version_option(package_name="csforge")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Run config YAML.")
@click.option("--seed", type=int, default=None, help="Seed for all stochastic choices.")
@click.option("--mock", is_flag=True, help="Offline deterministic chat provider.")
@click.option("--mock-embed", is_flag=True, help="Offline deterministic embedding provider.")
@click.option("--parallel", type=int, default=1, help="Concurrent pipelines for generate.")
@click.pass_context
def main(ctx, config_path, seed, mock, mock_embed, parallel):
    """Code-switching corpus toolkit: generate, score, inspect."""
    ctx.obj = {
        "config_path": config_path,
        "seed": seed,
        "mock": mock,
        "mock_embed": mock_embed,
        "parallel": max(1, parallel),
    }


def default_mock_chat() -> MockChatProvider:
    """Canned offline provider: accepts on the first pass."""
    return MockChatProvider(
        canned={
            GENERATION_MARKER: MOCK_SAMPLE,
            REFINEMENT_MARKER: MOCK_SAMPLE,
            "Rate the fluency": "9",
            "Rate the naturalness": "9",
            "Rate the socio-cultural": "9",
        }
    )


def _load_mock_script(ctx: click.Context, path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        _fail(ctx, EXIT_CONFIG, f"cannot read mock script {path}: {exc}")
    except json.JSONDecodeError as exc:
        _fail(ctx, EXIT_CONFIG, f"mock script {path} is not valid JSON: {exc}")
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, list) and v and all(isinstance(x, str) for x in v)
        for k, v in data.items()
    ):
        _fail(ctx, EXIT_CONFIG, f"mock script {path} must map marker strings to non-empty reply lists")
    return data


def _parse_pair(ctx: click.Context, pair: str) -> tuple[Language, Language]:
    parts = pair.split("-")
    if len(parts) != 2:
        _fail(ctx, EXIT_CONFIG, f"pair must look like matrix-embedded, got {pair!r}")
    try:
        return (Language(parts[0].strip().lower()), Language(parts[1].strip().lower()))
    except ValueError:
        _fail(ctx, EXIT_CONFIG, f"unsupported language pair {pair!r}")


def _load_tools(ctx: click.Context, cfg: ToolkitConfig) -> tuple[ToolRegistry | None, UtilityStats, Path | None]:
    if not cfg.tools_path:
        return None, UtilityStats(), None
    path = Path(cfg.tools_path)
    if not path.exists():
        _fail(ctx, EXIT_CONFIG, f"tool registry not found: {path}")
    try:
        registry = load_registry(path)
    except InvalidSpecError as exc:
        _fail(ctx, EXIT_CONFIG, f"tool registry {path}: {exc}")
    utility_path = path.with_name(path.stem + ".utility.json")
    utility = UtilityStats.load(utility_path) if utility_path.exists() else UtilityStats()
    return registry, utility, utility_path


def _record_from_sample(sample: CandidateSample, record_id: str, model_name: str) -> CorpusRecord:
    params = sample.params
    scores = {}
    if sample.scores is not None:
        scores = {
            "fluency": sample.scores.fluency,
            "naturalness": sample.scores.naturalness,
            "ratio": sample.scores.ratio_score,
            "socio_cultural": sample.scores.socio_cultural,
            "s_final": sample.verdict.s_final,
        }
    persona = {
        "age_band": params.persona.age_band,
        "gender": params.persona.gender,
        "education": params.persona.education,
        "ethnicity": params.persona.ethnicity,
        "first_language": str(params.persona.first_language),
        "second_language": str(params.persona.second_language),
    }
    persona = {k: v for k, v in persona.items() if v}
    turns = tuple(s.source for s in sample.sentences)
    single = len(turns) == 1
    return CorpusRecord(
        id=record_id,
        language_pair=(str(params.matrix_language), str(params.embedded_language)),
        cs_type=str(params.cs_type),
        topic=params.topic,
        subtopic=params.subtopic,
        text=turns[0] if single else "",
        turns=() if single else turns,
        persona=persona,
        scores=scores,
        provenance={
            "model": model_name,
            "tools": list(sample.context_blocks_used),
            "created_at": sample.created_at,
            "cost_usd": sample.cost.total_cost if sample.cost else 0.0,
            "accepted": sample.verdict.accepted,
            "iterations_used": sample.verdict.iterations_used,
            "flags": list(sample.flags),
        },
    )


@main.command()
@click.option("--count", default=1, show_default=True, help="Pipelines to run.")
@click.option("--out", type=click.Path(), default="corpus.jsonl", show_default=True)
@click.option("--topic", default="daily life", show_default=True)
@click.option("--subtopic", default="")
@click.option("--pair", default="english-spanish", show_default=True, help="matrix-embedded")
@click.option("--ratio", type=float, default=None, help="Target embedded-language ratio.")
@click.option("--tolerance", type=float, default=None)
@click.option("--cs-type", "cs_type", default="intra-sentential", show_default=True)
@click.option("--turns", type=int, default=1, show_default=True)
@click.option("--mock-script", type=click.Path(), default=None,
              help="JSON map of prompt markers to scripted reply lists; implies fresh provider per run.")
@click.pass_context
def generate(ctx, count, out, topic, subtopic, pair, ratio, tolerance, cs_type, turns, mock_script):
    """Run generation pipelines and append accepted samples to a corpus."""
    cfg = _toolkit_config(ctx)
    language_pair = _parse_pair(ctx, pair)
    try:
        params = GenerationParams(
            topic=topic,
            subtopic=subtopic,
            language_pair=language_pair,
            target_ratio=ratio if ratio is not None else 5 / 9,
            tolerance=tolerance if tolerance is not None else 0.25,
            cs_type=SwitchType(cs_type),
            turns=turns,
        )
    except ValueError as exc:
        _fail(ctx, EXIT_CONFIG, str(exc))

    script = _load_mock_script(ctx, mock_script) if mock_script else None
    use_mock = ctx.obj["mock"] or script is not None
    if not use_mock and not cfg.chat_endpoint and not chat_config_from_env().endpoint:
        _fail(ctx, EXIT_CONFIG, "no chat endpoint configured; set providers.chat_endpoint or use --mock")
    shared_chat = None
    if use_mock and script is None:
        shared_chat = default_mock_chat()
    elif not use_mock:
        shared_chat = HttpChatProvider(
            chat_config_from_env(endpoint=cfg.chat_endpoint or None, model_name=cfg.model_name)
        )

    registry, utility, utility_path = _load_tools(ctx, cfg)

    seed = ctx.obj["seed"]
    master = random.Random(seed)
    run_seeds = [master.randrange(2**32) for _ in range(count)]
    prefix = f"s{seed}" if seed is not None else uuid.uuid4().hex[:8]
    record_ids = [f"{prefix}-{i:05d}" for i in range(count)]

    def one_run(index: int) -> tuple[int, CandidateSample]:
        chat = ScriptedChatProvider(script) if script is not None else shared_chat
        sample = run_pipeline(
            params,
            cfg.pipeline,
            chat,
            registry=registry,
            utility=utility,
            rng=random.Random(run_seeds[index]),
        )
        return index, sample

    out_path = Path(out)
    quarantine_path = out_path.with_name(out_path.stem + ".quarantine.jsonl")
    results: dict[int, CandidateSample] = {}
    try:
        if ctx.obj["parallel"] > 1:
            with ThreadPoolExecutor(max_workers=ctx.obj["parallel"]) as pool:
                futures = [pool.submit(one_run, i) for i in range(count)]
                for future in as_completed(futures):
                    index, sample = future.result()
                    results[index] = sample
        else:
            for i in range(count):
                index, sample = one_run(i)
                results[index] = sample
    except UnparsableResponseError as exc:
        _fail(ctx, EXIT_CHAT_PROVIDER, f"generation failed: {exc}")
    except ProviderError as exc:
        _fail(ctx, EXIT_CHAT_PROVIDER, f"chat provider failed: {exc}")

    accepted = 0
    total_iterations = 0
    total_cost = 0.0
    sample_rows = []
    rejected = [i for i in sorted(results) if not results[i].verdict.accepted]
    try:
        with CorpusWriter(out_path) as corpus:
            for index in sorted(results):
                sample = results[index]
                if sample.verdict.accepted:
                    corpus.append(_record_from_sample(sample, record_ids[index], cfg.model_name))
        if rejected:
            with CorpusWriter(quarantine_path) as quarantine:
                for index in rejected:
                    quarantine.append(
                        _record_from_sample(results[index], record_ids[index], cfg.model_name)
                    )
        for index in sorted(results):
            sample = results[index]
            accepted += int(sample.verdict.accepted)
            total_iterations += sample.verdict.iterations_used
            total_cost += sample.cost.total_cost if sample.cost else 0.0
            sample_rows.append(
                {
                    "id": record_ids[index],
                    "accepted": sample.verdict.accepted,
                    "s_final": round(sample.verdict.s_final, 4),
                    "iterations_used": sample.verdict.iterations_used,
                    "cost_usd": round(sample.cost.total_cost if sample.cost else 0.0, 6),
                }
            )
        write_manifest(dataset_stats(out_path, with_ratios=False), out_path)
    except (SchemaError, OSError) as exc:
        _fail(ctx, EXIT_DATA, str(exc))

    run_manifest = {
        "count": count,
        "accepted": accepted,
        "acceptance_rate": round(accepted / count, 4) if count else 0.0,
        "mean_iterations": round(total_iterations / count, 4) if count else 0.0,
        "total_cost_usd": round(total_cost, 6),
        "samples": sample_rows,
    }
    run_path = out_path.with_name(out_path.stem + ".run.json")
    run_path.write_text(json.dumps(run_manifest, indent=2) + "\n", encoding="utf-8")

    if utility_path is not None:
        utility.save(utility_path)

    click.echo(f"accepted {accepted}/{count} ({run_manifest['acceptance_rate']:.1%})")
    click.echo(f"mean iterations {run_manifest['mean_iterations']:.2f}")
    click.echo(f"total cost ${run_manifest['total_cost_usd']:.6f}")
    click.echo(f"corpus {out_path}")
    if count - accepted:
        click.echo(f"quarantined {count - accepted} -> {quarantine_path}")


def _read_score_pairs(ctx: click.Context, path: Path):
    if not path.exists():
        _fail(ctx, EXIT_DATA, f"pairs file not found: {path}")
    pairs = []
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                _fail(ctx, EXIT_DATA, f"{path}:{line_number}: invalid JSON ({exc.msg})")
            try:
                pair = data["language_pair"]
                languages = (Language(pair[0]), Language(pair[1]))
                pairs.append(
                    (str(data["id"]), str(data["hypothesis"]), str(data["reference"]), languages)
                )
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                _fail(
                    ctx,
                    EXIT_DATA,
                    f"{path}:{line_number}: need id, hypothesis, reference, language_pair ({exc})",
                )
    if not pairs:
        _fail(ctx, EXIT_DATA, f"{path} holds no pairs")
    return pairs


def _format_row(pair_id: str, row) -> str:
    if row.breakdown is None:
        return f"{pair_id}\t-\t-\t-\t-\t-"
    b = row.breakdown
    sem = 1.0 - b.sem_error
    return (
        f"{pair_id}\t{b.wer:.4f}\t{b.cer:.4f}\t{sem:.4f}\t{b.saer:.4f}\t{b.form_metric}"
    )


@main.command()
@click.argument("pairs_file", type=click.Path())
@click.option("--report", "report_base", type=click.Path(), default=None,
              help="Write REPORT.tsv and REPORT.json next to printing.")
@click.option("--clean", is_flag=True, help="Strip boilerplate from hypotheses first.")
@click.option("--alpha", type=float, default=None, help="Override the semantic/form balance.")
@click.option("--casefold", is_flag=True, help="Casefold before word-level comparison.")
@click.pass_context
def score(ctx, pairs_file, report_base, clean, alpha, casefold):
    """Score hypothesis/reference pairs: WER, CER, SEM, SAER."""
    cfg = _toolkit_config(ctx)
    saer_config = cfg.saer
    if alpha is not None:
        try:
            saer_config = replace(saer_config, alpha=alpha)
        except ValueError as exc:
            _fail(ctx, EXIT_CONFIG, str(exc))
    if casefold:
        saer_config = replace(saer_config, casefold_wer=True)

    pairs = _read_score_pairs(ctx, Path(pairs_file))
    if clean:
        patterns = load_cleaning_patterns()
        pairs = [
            (pid, clean_hypothesis(hyp, patterns), ref, langs)
            for pid, hyp, ref, langs in pairs
        ]

    if ctx.obj["mock_embed"]:
        embeddings = MockEmbeddingProvider(seed=ctx.obj["seed"] or 0)
    else:
        embed_config = embed_config_from_env(endpoint=cfg.embed_endpoint or None)
        if not embed_config.endpoint:
            _fail(ctx, EXIT_CONFIG,
                  "no embedding endpoint configured; set providers.embed_endpoint or use --mock-embed")
        embeddings = HttpEmbeddingProvider(embed_config)
        try:
            embeddings.embed(["ping"])
        except (ProviderError, DimMismatchError) as exc:
            _fail(ctx, EXIT_EMBED_PROVIDER, f"embedding provider failed: {exc}")

    rows, means = batch_score(pairs, embeddings, saer_config)

    lines = ["id\twer\tcer\tsem\tsaer\tform_metric"]
    lines += [_format_row(row.pair_id, row) for row in rows]
    lines.append(
        f"mean\t{means.wer:.4f}\t{means.cer:.4f}\t{means.sem:.4f}\t{means.saer:.4f}\t-"
    )
    output = "\n".join(lines)
    click.echo(output)
    if means.flagged:
        click.echo(f"flagged {means.flagged} pair(s); see JSON report for details", err=True)

    if report_base:
        base = Path(report_base)
        base.parent.mkdir(parents=True, exist_ok=True)
        tsv_path = base.with_suffix(".tsv")
        json_path = base.with_suffix(".json")
        tsv_path.write_text(output + "\n", encoding="utf-8")
        payload = {
            "pairs": [
                (
                    {
                        "id": row.pair_id,
                        "wer": round(row.breakdown.wer, 6),
                        "cer": round(row.breakdown.cer, 6),
                        "sem": round(1.0 - row.breakdown.sem_error, 6),
                        "saer": round(row.breakdown.saer, 6),
                        "form_metric": str(row.breakdown.form_metric),
                        "matrix_language": str(row.breakdown.matrix_language),
                    }
                    if row.breakdown is not None
                    else {"id": row.pair_id, "error": row.error}
                )
                for row in rows
            ],
            "means": {
                "wer": round(means.wer, 6),
                "cer": round(means.cer, 6),
                "sem": round(means.sem, 6),
                "saer": round(means.saer, 6),
                "scored": means.scored,
                "flagged": means.flagged,
            },
        }
        json_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        click.echo(f"report {tsv_path} {json_path}")


@main.command()
@click.argument("corpus", type=click.Path())
@click.option("--write-manifest", "write_manifest_flag", is_flag=True,
              help="Also write <corpus>.manifest.json.")
@click.option("--no-ratios", is_flag=True, help="Skip the CS-ratio histograms.")
@click.pass_context
def stats(ctx, corpus, write_manifest_flag, no_ratios):
    """Print dataset statistics recomputed from the corpus file."""
    path = Path(corpus)
    try:
        manifest = dataset_stats(path, with_ratios=not no_ratios)
    except FileNotFoundError as exc:
        _fail(ctx, EXIT_DATA, str(exc))
    except SchemaError as exc:
        _fail(ctx, EXIT_DATA, str(exc))
    except OSError as exc:
        _fail(ctx, EXIT_DATA, str(exc))

    click.echo(f"corpus: {manifest.corpus_name}")
    click.echo(f"records: {manifest.record_count}")
    click.echo(f"duration_seconds: {manifest.duration_seconds:g}")
    click.echo("pairs:")
    for key in sorted(manifest.pair_counts):
        click.echo(f"  {key}: {manifest.pair_counts[key]}")
    click.echo("topics:")
    for key in sorted(manifest.topic_counts):
        click.echo(f"  {key}: {manifest.topic_counts[key]}")
    if manifest.ratio_histograms:
        for key in sorted(manifest.ratio_histograms):
            bins = " ".join(str(v) for v in manifest.ratio_histograms[key])
            click.echo(f"ratio histogram ({key}): {bins}")
    if write_manifest_flag:
        target = write_manifest(manifest, path)
        click.echo(f"manifest {target}")


@main.group()
def tools():
    """Inspect and edit the tool registry."""


@tools.command("list")
@click.option("--registry", "registry_path", required=True, type=click.Path())
@click.pass_context
def tools_list(ctx, registry_path):
    """Print registered tools."""
    path = Path(registry_path)
    if not path.exists():
        _fail(ctx, EXIT_CONFIG, f"tool registry not found: {path}")
    try:
        registry = load_registry(path)
    except InvalidSpecError as exc:
        _fail(ctx, EXIT_CONFIG, str(exc))
    specs = registry.list_tools()
    if not specs:
        click.echo("(no tools registered)")
        return
    for spec in specs:
        click.echo(f"{spec.name}\t{spec.method}\t{spec.url_template}")


@tools.command("register")
@click.option("--registry", "registry_path", required=True, type=click.Path())
@click.option("--name", required=True)
@click.option("--url-template", required=True)
@click.option("--auth-env", default="")
@click.option("--method", default="GET", show_default=True)
@click.option("--parse-path", "parse_paths", multiple=True)
@click.option("--timeout", type=float, default=5.0, show_default=True)
@click.pass_context
def tools_register(ctx, registry_path, name, url_template, auth_env, method, parse_paths, timeout):
    """Add or replace a tool entry."""
    path = Path(registry_path)
    try:
        registry = load_registry(path) if path.exists() else ToolRegistry()
        registry.register(
            ToolSpec(
                name=name,
                url_template=url_template,
                auth_env=auth_env,
                method=method,
                parse_paths=tuple(parse_paths),
                timeout=timeout,
            )
        )
    except InvalidSpecError as exc:
        _fail(ctx, EXIT_CONFIG, str(exc))
    save_registry(registry, path)
    click.echo(f"registered {name} -> {path}")


@tools.command("test")
@click.argument("name")
@click.option("--registry", "registry_path", required=True, type=click.Path())
@click.option("--topic", default="test", show_default=True)
@click.pass_context
def tools_test(ctx, name, registry_path, topic):
    """Fetch one snippet through a registered tool."""
    path = Path(registry_path)
    if not path.exists():
        _fail(ctx, EXIT_CONFIG, f"tool registry not found: {path}")
    try:
        registry = load_registry(path)
    except InvalidSpecError as exc:
        _fail(ctx, EXIT_CONFIG, str(exc))
    spec = registry.get(name)
    if spec is None:
        _fail(ctx, EXIT_CONFIG, f"no tool named {name!r} in {path}")
    snippet = http_fetch(spec, topic)
    if snippet is None:
        _fail(ctx, EXIT_CHAT_PROVIDER, f"fetch through {name} failed")
    click.echo(snippet)
    click.echo(f"estimated tokens: {estimate_tokens(snippet)}")


if __name__ == "__main__":
    main()
