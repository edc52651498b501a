"""Command-line interface.

Verbs map one-to-one onto engine operations: ingest/normalize/build for
the corpus pipeline, query/discriminate/infer/session for the framework,
fit-powerlaw for the distributional analysis, serve for the HTTP API.
Exit codes: 0 success, 1 caller error (bad input, unknown name), 2 engine
error.
"""

from __future__ import annotations

import importlib.resources
import json
import sys
from pathlib import Path
from typing import Optional

import click

from nvsyn.corpus import Corpus, IoError, ParseError, load_corpus, validate_corpus
from nvsyn.evidence import RelationshipTier, build_evidence_index
from nvsyn.framework import (
    Framework,
    UnknownCue,
    UnknownState,
    build_confusable_pair,
    build_framework,
    export_framework,
    load_framework,
)
from nvsyn.inference import (
    TIER_PRESETS,
    InconsistentObservation,
    NoKnownCues,
    Observation,
    replay_session,
    run_inference,
)
from nvsyn.normalization import NormalizationDictionary, normalize_corpus
from nvsyn.powerlaw import (
    CountSample,
    DomainError,
    fit_alpha,
    plot_data,
    relationship_count_distribution,
    select_xmin,
)

CALLER_ERRORS = (
    ParseError,
    IoError,
    UnknownState,
    UnknownCue,
    NoKnownCues,
    InconsistentObservation,
    FileNotFoundError,
    ValueError,
    DomainError,
    json.JSONDecodeError,
)


def _fail(exc: Exception, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _guard(fn):
    """Translate engine exceptions into documented exit codes."""
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CALLER_ERRORS as exc:
            _fail(exc, 1)
        except click.ClickException:
            raise
        except Exception as exc:  # engine fault
            _fail(exc, 2)

    return wrapper


def _data_path(name: str) -> Path:
    return Path(importlib.resources.files("nvsyn").joinpath("data", name))


def default_dictionary() -> NormalizationDictionary:
    return NormalizationDictionary.from_json(_data_path("dictionary.json"))


def default_definitions() -> dict:
    return json.loads(_data_path("state_definitions.json").read_text(encoding="utf-8"))


def build_seed_framework() -> Framework:
    """Build the framework bundled with the package (seed corpus)."""
    corpus = load_corpus(_data_path("seed_corpus.jsonl"))
    d = default_dictionary()
    mappings, _ = normalize_corpus(corpus, d)
    idx = build_evidence_index(mappings, d)
    return build_framework(idx, definitions=default_definitions())


def resolve_framework(path: Optional[str]) -> Framework:
    """--framework option, then NVSYN_FRAMEWORK, then the bundled seed."""
    import os

    path = path or os.environ.get("NVSYN_FRAMEWORK")
    if path:
        return load_framework(path)
    return build_seed_framework()


def _parse_min_tier(value: Optional[str]) -> RelationshipTier:
    if value is None:
        return RelationshipTier.R6
    if value in TIER_PRESETS:
        return TIER_PRESETS[value]
    try:
        return RelationshipTier[value.upper()]
    except KeyError:
        raise ValueError(
            f"min-tier must be R1..R6 or one of {sorted(TIER_PRESETS)}, got {value!r}"
        ) from None


def _split_cues(raw: Optional[str]) -> list[str]:
    if not raw:
        return []
    return [c.strip() for c in raw.split(";") if c.strip()]


framework_option = click.option(
    "--framework", "framework_path", default=None,
    help="Framework JSON path (default: $NVSYN_FRAMEWORK or the bundled seed).",
)


@click.group()
@click.version_option(package_name="nvsyn")
def main():
    """Evidence-graded behavioral-cue knowledge base."""


@main.command()
@click.argument("corpus_file", type=click.Path(exists=True))
@_guard
def ingest(corpus_file):
    """Load and validate a corpus file; print the validation report."""
    corpus = load_corpus(corpus_file)
    report = validate_corpus(corpus)
    click.echo(report.to_json())
    if not report.well_formed:
        sys.exit(1)


@main.command()
@click.argument("corpus_file", type=click.Path(exists=True))
@click.argument("dictionary_file", type=click.Path(exists=True))
@_guard
def normalize(corpus_file, dictionary_file):
    """Normalize a corpus and print the label-reduction report."""
    corpus = load_corpus(corpus_file)
    d = NormalizationDictionary.from_json(dictionary_file)
    _, report = normalize_corpus(corpus, d)
    click.echo(report.to_json())


@main.command()
@click.argument("corpus_file", type=click.Path(exists=True), required=False)
@click.argument("dictionary_file", type=click.Path(exists=True), required=False)
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--seed", "use_seed", is_flag=True, help="Build from the bundled seed corpus.")
@click.option("--min-shared", default=3, show_default=True)
@_guard
def build(corpus_file, dictionary_file, output, use_seed, min_shared):
    """Run normalize -> index -> levels 1-4 and write a framework document."""
    if use_seed:
        fw = build_seed_framework()
    else:
        if not corpus_file or not dictionary_file:
            raise ValueError("provide CORPUS_FILE and DICTIONARY_FILE, or --seed")
        corpus = load_corpus(corpus_file)
        d = NormalizationDictionary.from_json(dictionary_file)
        mappings, report = normalize_corpus(corpus, d)
        for w in report.warnings:
            click.echo(f"warning: {w}", err=True)
        idx = build_evidence_index(mappings, d)
        fw = build_framework(idx, min_shared=min_shared, definitions=default_definitions())
    export_framework(fw, output)
    click.echo(
        f"wrote framework: {len(fw.index.state_papers)} states, "
        f"{len(fw.index.cue_papers)} cues, {len(fw.pairs)} confusable pairs, "
        f"hash {fw.document_hash()[:12]}"
    )


@main.group()
def query():
    """Query framework entries."""


@query.command("state")
@click.argument("name")
@click.option("--json", "as_json", is_flag=True)
@framework_option
@_guard
def query_state(name, as_json, framework_path):
    """Render the Level-2 cluster for one state."""
    fw = resolve_framework(framework_path)
    if name not in fw.clusters:
        raise UnknownState(name)
    cluster = fw.clusters[name]
    click.echo(json.dumps(cluster.to_dict(), indent=2) if as_json else cluster.render())


@query.command("cue")
@click.argument("name")
@framework_option
@_guard
def query_cue(name, framework_path):
    """Render the Level-1 vocabulary entry for one cue."""
    fw = resolve_framework(framework_path)
    for entry in fw.vocabulary:
        if entry.canonical_cue == name:
            click.echo(json.dumps(entry.to_dict(), indent=2))
            return
    raise UnknownCue(name)


@main.command()
@click.argument("state_a")
@click.argument("state_b")
@click.option("--top", default=None, type=int, help="Truncate each column.")
@framework_option
@_guard
def discriminate(state_a, state_b, top, framework_path):
    """Render the two-column discriminative-cue report for a state pair."""
    fw = resolve_framework(framework_path)
    pair = build_confusable_pair(fw.index, state_a, state_b)
    click.echo(pair.render(top=top))


@main.command()
@click.option("--cues", required=True, help='Observed cues, ";"-separated.')
@click.option("--absent", default=None, help='Explicitly absent cues, ";"-separated.')
@click.option("--min-tier", default=None, help="R1..R6 or high-stakes/general/exploratory.")
@framework_option
@_guard
def infer(cues, absent, min_tier, framework_path):
    """Run the four-step inference and print the result as JSON."""
    fw = resolve_framework(framework_path)
    obs = Observation.from_raw(
        _split_cues(cues), default_dictionary(), absent=_split_cues(absent)
    )
    result = run_inference(obs, fw, min_tier=_parse_min_tier(min_tier))
    click.echo(result.to_json())


@main.group()
def session():
    """Diagnostic-session utilities."""


@session.command("replay")
@click.argument("session_file", type=click.Path(exists=True))
@click.option("--min-tier", default=None)
@framework_option
@_guard
def session_replay(session_file, min_tier, framework_path):
    """Replay a recorded session (JSON delta list) and print the final snapshot.

    The file is either {"deltas": [...]} or a bare list; each delta has
    "observed" and optionally "absent" cue lists.
    """
    fw = resolve_framework(framework_path)
    data = json.loads(Path(session_file).read_text(encoding="utf-8"))
    raw_deltas = data["deltas"] if isinstance(data, dict) else data
    d = default_dictionary()
    deltas = [
        Observation.from_raw(delta.get("observed", []), d, absent=delta.get("absent", []))
        for delta in raw_deltas
    ]
    sess = replay_session(fw, deltas, min_tier=_parse_min_tier(min_tier))
    if not sess.history:
        raise ValueError("session file contains no deltas")
    click.echo(sess.history[-1].to_json())


@main.command("fit-powerlaw")
@click.option("--counts-file", type=click.Path(exists=True), default=None,
              help="Newline-separated integer counts (default: relationship counts of the framework).")
@click.option("--xmin", default=None, type=int, help="Fix x_min instead of scanning.")
@click.option("--bootstrap", default=0, type=int, show_default=True,
              help="Bootstrap replicates for the goodness-of-fit p-value.")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--jobs", default=1, type=int, show_default=True)
@click.option("--compare", default="exponential,lognormal,stretched-exponential",
              show_default=True, help="Comma-separated alternatives (empty to skip).")
@click.option("--plot-out", type=click.Path(), default=None,
              help="Write CCDF/PDF plot data (TSV) to this path.")
@framework_option
@_guard
def fit_powerlaw(counts_file, xmin, bootstrap, seed, jobs, compare, plot_out, framework_path):
    """Fit a discrete power law to relationship paper counts."""
    if counts_file:
        values = [int(line) for line in Path(counts_file).read_text().split() if line.strip()]
        sample = CountSample.from_iterable(values)
    else:
        fw = resolve_framework(framework_path)
        sample = relationship_count_distribution(fw.index)
    from nvsyn.powerlaw import PowerLawReport, bootstrap_gof, likelihood_ratio_test

    fit = fit_alpha(sample, xmin) if xmin is not None else select_xmin(sample)
    gof = bootstrap_gof(sample, fit, bootstrap, seed, jobs) if bootstrap > 0 else None
    alternatives = [a.strip() for a in compare.split(",") if a.strip()]
    comparisons = [likelihood_ratio_test(sample, fit, a) for a in alternatives]
    report = PowerLawReport(fit=fit, gof=gof, comparisons=comparisons)
    click.echo(report.to_json())
    if plot_out:
        Path(plot_out).write_text(plot_data(sample, report.fit), encoding="utf-8")
        click.echo(f"wrote plot data to {plot_out}", err=True)


@main.command()
@click.argument("framework_file", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@_guard
def export(framework_file, output):
    """Round-trip a framework document through the engine (validates it)."""
    fw = load_framework(framework_file)
    export_framework(fw, output)
    click.echo(f"exported framework hash {fw.document_hash()[:12]} to {output}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8350, show_default=True)
@framework_option
@_guard
def serve(host, port, framework_path):
    """Serve the read-only HTTP API over the loaded framework."""
    import uvicorn

    from nvsyn.server import create_app

    app = create_app(resolve_framework(framework_path), default_dictionary())
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
