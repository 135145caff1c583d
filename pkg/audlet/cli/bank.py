from pathlib import Path

import click

from audlet.cli.utils.formatting import cli_echo_title
from audlet.config.schemas import CenterSpacing, PrototypeKind, PrototypeSpec, ScaleKind
from audlet.filterbank.design import audlet_filters, redundancy, select_downsampling
from audlet.filterbank.frame import diagnostics
from audlet.io.descriptor import load_bank, write_bank_descriptor
from audlet.io.exports import export_response_csv


@click.command(
    help="""
    Designs an AUDlet bank and writes its descriptor.
    Example:
    python run.py design --len 60480 --v 1 --redfac 1 -o bank.json
""",
)
@click.option(
    "--scale",
    type=click.Choice([s.value for s in ScaleKind]),
    default=ScaleKind.ERB.value,
    show_default=True,
)
@click.option("--fs", "sample_rate", type=float, default=16000.0, show_default=True)
@click.option("--len", "signal_length", type=int, required=True, help="Signal length L")
@click.option("--fmin", type=float, default=0.0, show_default=True)
@click.option("--fmax", type=float, default=None, help="Defaults to fs/2")
@click.option("--v", "density", type=float, default=None, help="Filters per scale unit")
@click.option("--k", "count", type=int, default=None, help="Number of designed centers")
@click.option(
    "--proto",
    type=click.Choice(
        [PrototypeKind.HANN.value, PrototypeKind.GAUSS.value, PrototypeKind.ROEX.value],
    ),
    default=PrototypeKind.HANN.value,
    show_default=True,
)
@click.option("--bwdiv", "bw_divisor", type=float, default=1.0, show_default=True)
@click.option("--redfac", type=float, default=1.0, show_default=True)
@click.option(
    "--spacing",
    type=click.Choice([s.value for s in CenterSpacing]),
    default=CenterSpacing.EXACT.value,
    show_default=True,
)
@click.option(
    "-o",
    "--output",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Bank descriptor output",
)
def design(  # noqa: PLR0913
    scale: str,
    sample_rate: float,
    signal_length: int,
    fmin: float,
    fmax: float | None,
    density: float | None,
    count: int | None,
    proto: str,
    bw_divisor: float,
    redfac: float,
    spacing: str,
    output: Path,
) -> None:
    if density is not None and count is not None:
        msg = "--v and --k are mutually exclusive"
        raise click.UsageError(msg)
    cli_echo_title(f"Designing {scale.upper()} bank")
    bank = audlet_filters(
        sample_rate,
        signal_length,
        scale=ScaleKind(scale),
        fmin=fmin,
        fmax=fmax,
        density=1.0 if density is None and count is None else density,
        count=count,
        prototype=PrototypeSpec(kind=PrototypeKind(proto)),
        bw_divisor=bw_divisor,
        spacing=CenterSpacing(spacing),
    )
    choice = select_downsampling(bank, redfac)
    report = diagnostics(choice.bank)
    write_bank_descriptor(output, choice.bank)
    click.echo(f"channels (K+1): {len(choice.bank)}")
    click.echo(f"redundancy R:   {redundancy(choice.bank):.4f}")
    click.echo(f"painless:       {report.painless}")
    click.echo(f"frame bounds:   A={report.lower_bound:.6g} B={report.upper_bound:.6g}")
    if choice.fallback_channels:
        click.echo(f"d=1 fallback:   channels {choice.fallback_channels}")


@click.command(help="Writes the bank response (H0 and per-channel dB) as CSV")
@click.option(
    "-b",
    "--bank",
    "bank_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option(
    "-o",
    "--output",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
)
def respond(bank_path: Path, output: Path) -> None:
    bank = load_bank(bank_path)
    cli_echo_title(f"Response of {bank}")
    export_response_csv(output, bank)
