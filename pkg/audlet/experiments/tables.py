"""Fixed-width text tables for experiment reports."""

from collections.abc import Sequence

from audlet.metrics import is_capped

_LABEL_WIDTH = 14
_CELL_WIDTH = 11


def format_value(value: float | None, precision: int = 2) -> str:
    if value is None:
        return "-"
    if value != 0.0 and (abs(value) < 1e-2 or abs(value) >= 1e4):  # noqa: PLR2004
        return f"{value:.1e}"
    return f"{value:.{precision}f}"


def format_db(value: float | None, precision: int = 2) -> str:
    """Like format_value, but ratios at the dB cap read as a bound."""
    if value is not None and is_capped(value):
        return f">={value:.0f}" if value > 0 else f"<={value:.0f}"
    return format_value(value, precision)


def render_table(
    title: str,
    columns: Sequence[str],
    rows: Sequence[tuple[str, Sequence[float | None]]],
    precision: int = 2,
    *,
    decibels: bool = False,
) -> str:
    """Title line, header row and one row per label; cells right-aligned."""
    formatter = format_db if decibels else format_value
    lines = [title]
    header = "".ljust(_LABEL_WIDTH) + "".join(c.rjust(_CELL_WIDTH) for c in columns)
    lines.append(header)
    lines.append("-" * len(header))
    for label, values in rows:
        cells = "".join(formatter(v, precision).rjust(_CELL_WIDTH) for v in values)
        lines.append(label.ljust(_LABEL_WIDTH) + cells)
    return "\n".join(lines)
