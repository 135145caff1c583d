import logging

import click
from pydantic import ValidationError

from audlet.cli.bank import design, respond
from audlet.cli.coefficients import analyze, spectrogram, synthesize
from audlet.cli.experiments import compare_gammatone, denoise, mask_separate
from audlet.cli.utils.formatting import cli_echo_failure
from audlet.errors import EXIT_USAGE, AudletError
from audlet.logging import setup_logging


class AudletGroup(click.Group):
    """Maps library errors to the documented exit codes."""

    def invoke(self, ctx: click.Context) -> object:
        try:
            return super().invoke(ctx)
        except AudletError as e:
            cli_echo_failure(str(e), with_logs=_debug(ctx))
            ctx.exit(e.exit_code)
        except ValidationError as e:
            cli_echo_failure(str(e), with_logs=_debug(ctx))
            ctx.exit(EXIT_USAGE)
        return None


def _debug(ctx: click.Context) -> bool:
    return bool(ctx.obj and ctx.obj.get("debug"))


@click.group(
    cls=AudletGroup,
    help="""
    AUDlet filter bank toolkit.

    Exit codes: 0 success, 2 usage or domain error, 3 file format error,
    4 numerical failure (no frame, no convergence).
""",
)
@click.option("--debug", is_flag=True, help="Verbose logs, dumped again on failure")
@click.pass_context
def manager(ctx: click.Context, *, debug: bool) -> None:
    """Primary CLI - entry point."""
    ctx.ensure_object(dict)
    ctx.obj["debug"] = debug
    if debug:
        setup_logging(logging.DEBUG)


manager.add_command(design, "design")
manager.add_command(respond, "respond")
manager.add_command(analyze, "analyze")
manager.add_command(synthesize, "synthesize")
manager.add_command(spectrogram, "spectrogram")
manager.add_command(compare_gammatone, "compare-gammatone")
manager.add_command(mask_separate, "mask-separate")
manager.add_command(denoise, "denoise")
