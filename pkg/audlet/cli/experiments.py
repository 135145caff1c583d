from pathlib import Path

import click

from audlet.cli.utils.formatting import cli_echo_title
from audlet.config.schemas import (
    ComparisonExperimentSchema,
    DenoisingExperimentSchema,
    SeparationExperimentSchema,
)
from audlet.experiments.comparison import run_comparison
from audlet.experiments.denoising import run_denoising
from audlet.experiments.separation import run_separation

_existing_file = click.Path(exists=True, dir_okay=False, path_type=Path)


@click.command(
    help="""
    Reconstruction errors of AUDlet, roex and gammatone banks per redundancy.
    Example:
    python run.py compare-gammatone --redfac 0.38 --redfac 1 --redfac 2
""",
)
@click.option(
    "--redfac",
    "redfacs",
    type=float,
    multiple=True,
    default=(0.38, 0.5, 1.0, 2.0),
)
@click.option("--fs", "sample_rate", type=float, default=16000.0, show_default=True)
@click.option("--len", "signal_length", type=int, default=60480, show_default=True)
@click.option("--v", "density", type=float, default=1.0, show_default=True)
@click.option("--bwdiv", "bw_divisor", type=float, default=1.0, show_default=True)
@click.option("-i", "--input", "input_path", type=_existing_file, default=None)
@click.option("--no-roex", is_flag=True)
@click.option("--seed", type=int, default=0, show_default=True)
def compare_gammatone(  # noqa: PLR0913
    redfacs: tuple[float, ...],
    sample_rate: float,
    signal_length: int,
    density: float,
    bw_divisor: float,
    input_path: Path | None,
    seed: int,
    *,
    no_roex: bool,
) -> None:
    schema = ComparisonExperimentSchema(
        name="compare-gammatone",
        redfacs=list(redfacs),
        sample_rate=sample_rate,
        signal_length=signal_length,
        density=density,
        bw_divisor=bw_divisor,
        input_path=input_path,
        include_roex=not no_roex,
        seed=seed,
    )
    cli_echo_title("Comparing reconstruction errors")
    click.echo(run_comparison(schema).to_table())


@click.command(help="Masked resynthesis of a target source with separation scores")
@click.option("--target", "target_path", type=_existing_file, required=True)
@click.option("--interferer", "interferer_path", type=_existing_file, required=True)
@click.option("--mixture", "mixture_path", type=_existing_file, default=None)
@click.option(
    "--mask",
    "mask_paths",
    type=_existing_file,
    multiple=True,
    help="AUDM mask; downsampling factors come from its header",
)
@click.option(
    "--redfac",
    "redfacs",
    type=float,
    multiple=True,
    default=(0.38, 1.0, 2.0),
)
@click.option("--fs", "sample_rate", type=float, default=16000.0, show_default=True)
@click.option("--v", "density", type=float, default=6.0, show_default=True)
@click.option("--bwdiv", "bw_divisor", type=float, default=6.0, show_default=True)
@click.option("--name", "target_name", default="target", show_default=True)
@click.option(
    "--output-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Write the separated signals and their spectrograms here",
)
def mask_separate(  # noqa: PLR0913
    target_path: Path,
    interferer_path: Path,
    mixture_path: Path | None,
    mask_paths: tuple[Path, ...],
    redfacs: tuple[float, ...],
    sample_rate: float,
    density: float,
    bw_divisor: float,
    target_name: str,
    output_dir: Path | None,
) -> None:
    schema = SeparationExperimentSchema(
        name="mask-separate",
        target_path=target_path,
        interferer_path=interferer_path,
        mixture_path=mixture_path,
        mask_paths=list(mask_paths),
        redfacs=list(redfacs),
        sample_rate=sample_rate,
        density=density,
        bw_divisor=bw_divisor,
        target_name=target_name,
        output_dir=output_dir,
    )
    cli_echo_title(f"Separating {target_name}")
    click.echo(run_separation(schema).to_table())


@click.command(help="Soft-threshold denoising with SNR and segSNR scores")
@click.option("-i", "--input", "input_path", type=_existing_file, required=True)
@click.option(
    "--sigma",
    "sigmas",
    type=float,
    multiple=True,
    help="Noise std deviation",
)
@click.option(
    "--input-snr",
    "input_snrs",
    type=float,
    multiple=True,
    default=(-5.0, 0.0, 10.0),
    show_default=True,
)
@click.option("--eta", type=float, default=None, help="Threshold, defaults to sigma")
@click.option(
    "--redfac",
    "redfacs",
    type=float,
    multiple=True,
    default=(0.38, 1.0, 2.0),
)
@click.option("--fs", "sample_rate", type=float, default=16000.0, show_default=True)
@click.option("--v", "density", type=float, default=6.0, show_default=True)
@click.option("--bwdiv", "bw_divisor", type=float, default=6.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--output-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Write the denoised signals here",
)
def denoise(  # noqa: PLR0913
    input_path: Path,
    sigmas: tuple[float, ...],
    input_snrs: tuple[float, ...],
    eta: float | None,
    redfacs: tuple[float, ...],
    sample_rate: float,
    density: float,
    bw_divisor: float,
    seed: int,
    output_dir: Path | None,
) -> None:
    schema = DenoisingExperimentSchema(
        name="denoise",
        input_path=input_path,
        sigmas=list(sigmas) or None,
        input_snrs=list(input_snrs),
        eta=eta,
        redfacs=list(redfacs),
        sample_rate=sample_rate,
        density=density,
        bw_divisor=bw_divisor,
        seed=seed,
        output_dir=output_dir,
    )
    cli_echo_title(f"Denoising {input_path.name}")
    click.echo(run_denoising(schema).to_table())
