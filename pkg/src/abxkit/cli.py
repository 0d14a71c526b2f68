"""Command-line entry point.

Subcommands cover the full pipeline: ``score`` builds pairwise score
matrices from a manifest (several snippet lengths in one run make a
sweep), ``reverb`` renders wet-mix variants of a directory of WAV files,
``report`` turns a score file into an SVG heatmap and ``summary``
aggregates score files into a CSV.

Exit codes: 0 success, 2 usage error, 3 malformed or missing input data,
4 valid data that cannot be scored. Every failure prints a single
``ERROR <name>: <message>`` line to stderr.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .audio import read_wav, write_wav
from .errors import AbxError, ComputeError, DataError, IoFailure
from .manifest import load_manifest
from .matrix import read_matrix_json, score_matrix, write_matrix_csv, write_matrix_json
from .pooling import SnippetParams
from .validation import POOLING_MODES
from .reporting import render_heatmap, summarize, write_summary_csv
from .reverb import ReverbParams, apply_reverb
from .scoring import SampleSpec


def _fail(exc: AbxError, code: int) -> None:
    message = " ".join(str(exc).split())  # keep the line machine-parseable
    click.echo(f"ERROR {type(exc).__name__}: {message}", err=True)
    sys.exit(code)


def _guarded(action) -> None:
    try:
        action()
    except DataError as exc:
        _fail(exc, 3)
    except ComputeError as exc:
        _fail(exc, 4)


def _float_list(value: str, label: str) -> tuple[float, ...]:
    try:
        items = tuple(float(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter(f"{label} must be a comma-separated list of numbers")
    if not items:
        raise click.BadParameter(f"{label} must not be empty")
    return items


@click.group()
@click.version_option(package_name="abxkit", prog_name="abx")
def main() -> None:
    """ABX discriminability scoring for speech representations."""


@main.command()
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Dataset manifest JSON.")
@click.option("--snippet-seconds", "lengths", default="10", show_default=True,
              help="Snippet length in seconds, or a comma-separated sweep.")
@click.option("--pool", type=click.Choice(POOLING_MODES), default="max", show_default=True,
              help="Pooling over the frames of one snippet.")
@click.option("--mode", type=click.Choice(["full", "sample"]), default="full",
              show_default=True, help="Enumerate all triplets or sample them.")
@click.option("--max-triplets", type=int, default=None,
              help="Triplets drawn per pair (sample mode only).")
@click.option("--seed", type=int, default=None, help="Base seed (sample mode only).")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker threads per pair; results do not depend on this.")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False, path_type=Path), help="Output directory.")
def score(manifest_path: Path, lengths: str, pool: str, mode: str,
          max_triplets: int | None, seed: int | None, jobs: int, out_dir: Path) -> None:
    """Score every pair of recordings; one JSON + CSV matrix per snippet length."""
    snippet_lengths = _float_list(lengths, "--snippet-seconds")
    if any(length <= 0 for length in snippet_lengths):
        raise click.BadParameter("--snippet-seconds values must be positive")
    if mode == "sample":
        if max_triplets is None or seed is None:
            raise click.UsageError("--mode sample requires --max-triplets and --seed")
        if max_triplets < 1:
            raise click.BadParameter("--max-triplets must be >= 1")
        sample = SampleSpec(count=max_triplets, seed=seed)
    else:
        if max_triplets is not None or seed is not None:
            raise click.UsageError("--max-triplets and --seed are only valid with --mode sample")
        sample = None
    if jobs < 1:
        raise click.BadParameter("--jobs must be >= 1")

    def run() -> None:
        manifest = load_manifest(manifest_path)
        out_dir.mkdir(parents=True, exist_ok=True)
        for length in snippet_lengths:
            params = SnippetParams(snippet_seconds=length, pooling=pool)
            matrix = score_matrix(manifest, params, sample=sample, n_jobs=jobs)
            json_path = out_dir / f"scores_{length:g}s.json"
            csv_path = out_dir / f"scores_{length:g}s.csv"
            write_matrix_json(matrix, json_path)
            write_matrix_csv(matrix, csv_path)
            click.echo(str(json_path))
            click.echo(str(csv_path))

    _guarded(run)


@main.command()
@click.option("--in", "in_dir", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path),
              help="Directory of mono 16-bit WAV files.")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False, path_type=Path), help="Output directory.")
@click.option("--wet", required=True, help="Wet-mix fraction(s) in [0, 1], comma-separated.")
@click.option("--decay-seconds", type=float, default=1.2, show_default=True,
              help="Reverb decay time.")
def reverb(in_dir: Path, out_dir: Path, wet: str, decay_seconds: float) -> None:
    """Write one reverberated copy of the input directory per wet value."""
    wet_values = _float_list(wet, "--wet")
    if any(not 0.0 <= w <= 1.0 for w in wet_values):
        raise click.BadParameter("--wet values must lie in [0, 1]")
    if decay_seconds <= 0:
        raise click.BadParameter("--decay-seconds must be positive")

    def run() -> None:
        wav_paths = sorted(in_dir.glob("*.wav"))
        if not wav_paths:
            raise IoFailure(f"no .wav files found in {in_dir}")
        for w in wet_values:
            params = ReverbParams(wet=w, decay_seconds=decay_seconds)
            subdir = out_dir / f"wet_{w:g}"
            subdir.mkdir(parents=True, exist_ok=True)
            for wav_path in wav_paths:
                write_wav(apply_reverb(read_wav(wav_path), params), subdir / wav_path.name)
            click.echo(str(subdir))

    _guarded(run)


@main.command()
@click.option("--scores", "scores_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Score matrix JSON produced by `abx score`.")
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False, path_type=Path), help="SVG file to write.")
def report(scores_path: Path, out_path: Path) -> None:
    """Render a score matrix as an SVG heatmap."""

    def run() -> None:
        render_heatmap(read_matrix_json(scores_path), out_path)
        click.echo(str(out_path))

    _guarded(run)


@main.command()
@click.option("--scores", "scores_paths", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Score matrix JSON file(s); repeat for a sweep.")
@click.option("--group", default="all", show_default=True,
              help="Group label attached to these score files.")
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False, path_type=Path), help="CSV file to write.")
def summary(scores_paths: tuple[Path, ...], group: str, out_path: Path) -> None:
    """Aggregate score files into per-length mean/std rows."""

    def run() -> None:
        matrices = [read_matrix_json(path) for path in scores_paths]
        write_summary_csv(summarize({group: matrices}), out_path)
        click.echo(str(out_path))

    _guarded(run)


if __name__ == "__main__":
    main()
