"""CSV exports of bank responses and coefficient spectrograms."""

import logging
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from audlet.config.commons import RESPONSE_FLOOR_DB, SPECTROGRAM_FLOOR_DB
from audlet.filterbank.bank import Coefficients, FilterBank
from audlet.filterbank.transform import filterbank_response

_CSV_FORMAT = "%.10g"

logger = logging.getLogger(__name__)


def _to_db(magnitude: NDArray[np.float64], floor_db: float) -> NDArray[np.float64]:
    floor = 10.0 ** (floor_db / 20.0)
    return 20.0 * np.log10(np.maximum(magnitude, floor))


def response_table(fb: FilterBank) -> NDArray[np.float64]:
    """Rows per bin 0..L/2: frequency, H0 and |H_k| in dB per channel."""
    length = fb.signal_length
    bins = np.arange(length // 2 + 1)
    columns = [bins * fb.sample_rate / length, filterbank_response(fb)[bins]]
    columns.extend(
        _to_db(np.abs(channel.dense(length)[bins]), RESPONSE_FLOOR_DB)
        for channel in fb.channels
    )
    return np.column_stack(columns)


def export_response_csv(path: Path, fb: FilterBank) -> None:
    header = ",".join(["freq_hz", "H0", *(f"{c:.6g}" for c in fb.centers)])
    np.savetxt(
        path,
        response_table(fb),
        delimiter=",",
        header=header,
        comments="",
        fmt=_CSV_FORMAT,
    )
    logger.info("Wrote the response of %s to %s", fb, path)


def spectrogram_table(
    c: Coefficients,
    floor_db: float = SPECTROGRAM_FLOOR_DB,
) -> NDArray[np.float64]:
    """Time column plus 20 log10 |y_k| per channel on the finest time grid.

    Coarser channels are held over the d_k / d_min rows they cover.
    """
    step = min(c.factors)
    rows = np.arange(c.signal_length // step)
    columns = [rows * step / c.sample_rate]
    for y, factor in zip(c.channels, c.factors, strict=True):
        held = y[(rows * step) // factor]
        columns.append(_to_db(np.abs(held), floor_db))
    return np.column_stack(columns)


def export_spectrogram_csv(
    path: Path,
    c: Coefficients,
    floor_db: float = SPECTROGRAM_FLOOR_DB,
) -> None:
    header = ",".join(["time_s", *(f"{center:.6g}" for center in c.centers)])
    np.savetxt(
        path,
        spectrogram_table(c, floor_db),
        delimiter=",",
        header=header,
        comments="",
        fmt=_CSV_FORMAT,
    )
    logger.info("Wrote a %d-channel spectrogram to %s", len(c), path)
