"""abx-extract: encode a directory of WAVs into embedding files + manifest."""
import logging
import re
import sys
from pathlib import Path

import click

from .errors import EnvironmentError_, InputError
from .extract import DEFAULT_MODEL, ExtractionConfig, extract_manifest
from .model import load_encoder


def _fail(exc: Exception, code: int) -> None:
    message = re.sub(r"\s+", " ", str(exc)).strip()
    click.echo(f"ERROR {type(exc).__name__}: {message}", err=True)
    sys.exit(code)


@click.command(name="abx-extract")
@click.option("--in", "in_dir", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path),
              help="Directory of WAV files.")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path),
              help="Directory for .abxe files and manifest.json.")
@click.option("--model", default=DEFAULT_MODEL, show_default=True,
              help="Checkpoint identifier, or untrained:<large|base|tiny> for a "
                   "randomly initialized offline encoder.")
@click.option("--layer", type=int, default=21, show_default=True,
              help="0 = convolutional front-end output, k = transformer block k.")
@click.option("--sidecar", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="CSV with an 'id' column plus metadata columns.")
@click.option("--dataset", default=None, help="Dataset name (default: input dir name).")
@click.option("--chunk-seconds", type=float, default=30.0, show_default=True)
@click.option("--device", default="cpu", show_default=True)
@click.version_option(package_name="abxextract", prog_name="abx-extract")
def main(in_dir: Path, out_dir: Path, model: str, layer: int, sidecar: Path | None,
         dataset: str | None, chunk_seconds: float, device: str) -> None:
    logging.basicConfig(format="%(levelname)s %(message)s")
    try:
        config = ExtractionConfig(
            model=model, layer_index=layer, device=device, chunk_seconds=chunk_seconds
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        encoder = load_encoder(config.model, config.device)
        manifest = extract_manifest(
            in_dir, out_dir, config, sidecar=sidecar, dataset_name=dataset,
            encoder=encoder,
        )
    except InputError as exc:
        _fail(exc, 3)
    except EnvironmentError_ as exc:
        _fail(exc, 4)
    else:
        click.echo(str(manifest))
