import click

from audlet.logging import get_logs

_FAILURE_LOG_LINES = 20


def cli_echo_title(title: str) -> None:
    """Echo a title to the CLI."""
    click.secho(
        f" *** {title} *** ",
        bg="bright_white",
        fg="black",
        bold=True,
    )


def cli_echo_failure(message: str, *, with_logs: bool = False) -> None:
    click.secho(f"Error: {message}", fg="red", err=True)
    if with_logs:
        for line in get_logs(_FAILURE_LOG_LINES):
            click.echo(line, err=True)
