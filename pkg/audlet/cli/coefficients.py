from pathlib import Path

import click
import numpy as np

from audlet.audio.wav import read_wav, write_wav
from audlet.cli.utils.formatting import cli_echo_title
from audlet.config.commons import SPECTROGRAM_FLOOR_DB
from audlet.config.schemas import SynthesisMethod
from audlet.errors import ConvergenceError
from audlet.filterbank.frame import painless_dual, time_reversed_dual
from audlet.filterbank.solver import cg_synthesize
from audlet.filterbank.transform import analyze as analyze_signal
from audlet.filterbank.transform import synthesize as synthesize_signal
from audlet.filterbank.uniform import synthesize_uniform, to_uniform, uniform_dual
from audlet.io.containers import read_coefficients, write_coefficients
from audlet.io.descriptor import load_bank
from audlet.io.exports import export_spectrogram_csv

_bank_option = click.option(
    "-b",
    "--bank",
    "bank_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Bank descriptor written by 'design'",
)
_output_option = click.option(
    "-o",
    "--output",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
)


@click.command(help="Analyzes a WAV file into an AUDC coefficient file")
@_bank_option
@click.option(
    "-i",
    "--input",
    "input_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@_output_option
@click.option(
    "--fit-length",
    is_flag=True,
    help="Zero-pad or cut the input to the bank length",
)
@click.option("--single", is_flag=True, help="Store complex64 instead of complex128")
def analyze(
    bank_path: Path,
    input_path: Path,
    output: Path,
    *,
    fit_length: bool,
    single: bool,
) -> None:
    bank = load_bank(bank_path)
    cli_echo_title(f"Analyzing {input_path.name} with {bank}")
    signal = read_wav(input_path, target_rate=bank.sample_rate)
    if fit_length and len(signal) != bank.signal_length:
        samples = np.zeros(bank.signal_length)
        count = min(len(signal), bank.signal_length)
        samples[:count] = signal.samples[:count]
        signal = signal.with_samples(samples)
    write_coefficients(
        output,
        analyze_signal(signal, bank),
        double_precision=not single,
    )


@click.command(help="Synthesizes a WAV file from an AUDC coefficient file")
@_bank_option
@click.option(
    "-c",
    "--coefficients",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@_output_option
@click.option(
    "--method",
    type=click.Choice([m.value for m in SynthesisMethod]),
    default=SynthesisMethod.PAINLESS.value,
    show_default=True,
)
@click.option("--tol", type=float, default=None, help="CG relative residual")
@click.option("--maxit", type=int, default=None, help="CG iteration limit")
@click.option(
    "--noprecond",
    is_flag=True,
    help="Plain CG without the 1/H0 preconditioner",
)
def synthesize(  # noqa: PLR0913
    bank_path: Path,
    coefficients: Path,
    output: Path,
    method: str,
    tol: float | None,
    maxit: int | None,
    *,
    noprecond: bool,
) -> None:
    bank = load_bank(bank_path)
    c = read_coefficients(coefficients, bank)
    cli_echo_title(f"Synthesizing with {bank} ({method})")
    route = SynthesisMethod(method)
    if route == SynthesisMethod.PAINLESS:
        signal = synthesize_signal(c, painless_dual(bank))
    elif route == SynthesisMethod.UNIFORM:
        signal = synthesize_uniform(c, uniform_dual(to_uniform(bank)))
    elif route == SynthesisMethod.REVERSED:
        signal = synthesize_signal(c, time_reversed_dual(bank))
    else:
        result = cg_synthesize(c, bank, tol, maxit, precondition=not noprecond)
        signal = result.signal
        click.echo(
            f"CG iterations: {result.report.iterations}, "
            f"residual {result.report.final_residual:.3e}",
        )
        if not result.report.converged:
            write_wav(output, signal)
            msg = (
                f"CG did not converge in {result.report.iterations} iterations; "
                f"best iterate written to {output}"
            )
            raise ConvergenceError(msg)
    write_wav(output, signal)


@click.command(help="Writes the coefficient magnitudes in dB as CSV")
@click.option(
    "-c",
    "--coefficients",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@_output_option
@click.option(
    "--floor-db",
    type=float,
    default=SPECTROGRAM_FLOOR_DB,
    show_default=True,
)
def spectrogram(coefficients: Path, output: Path, floor_db: float) -> None:
    c = read_coefficients(coefficients)
    cli_echo_title(f"Spectrogram of {coefficients.name}")
    export_spectrogram_csv(output, c, floor_db)
