import logging
from pathlib import Path

import numpy as np
import soundfile as sf
import soxr

from audlet.audio.signal import Signal
from audlet.config.audio_format import (
    DEFAULT_AUDIO_FORMAT,
    AudioFormat,
    AudioFormatType,
)
from audlet.errors import FormatError

INT16_SCALE = 32768.0

logger = logging.getLogger(__name__)


def read_wav(path: Path | str, target_rate: float | None = None) -> Signal:
    """Read a PCM16 or float32 WAV file as a mono signal in [-1, 1].

    Multichannel files are reduced to their first channel. When ``target_rate``
    differs from the file rate the samples are resampled with soxr.
    """
    try:
        info = sf.info(str(path))
    except RuntimeError as e:
        msg = f"Cannot decode audio file {path}: {e}"
        raise FormatError(msg) from e
    if info.format != "WAV":
        msg = f"Unsupported container {info.format} in {path}, expected WAV"
        raise FormatError(msg)
    audio_format = AudioFormat.from_subtype(info.subtype)

    data, rate = sf.read(str(path), dtype="float64", always_2d=True)
    if data.shape[1] > 1:
        logger.info(
            "File %s has %d channels, using the first one",
            path,
            data.shape[1],
        )
    samples = data[:, 0]
    logger.debug(
        "Read %s: %d samples, %s, %d Hz",
        path,
        len(samples),
        audio_format,
        rate,
    )

    if target_rate is not None and float(rate) != float(target_rate):
        samples = soxr.resample(samples, rate, target_rate)
        logger.info("Resampled %s from %d to %g Hz", path, rate, target_rate)
        rate = target_rate

    return Signal(samples=samples, sample_rate=float(rate))


def write_wav(
    path: Path | str,
    signal: Signal,
    audio_format: AudioFormat = DEFAULT_AUDIO_FORMAT,
) -> None:
    rate = round(signal.sample_rate)
    if audio_format.format_type == AudioFormatType.INT_16:
        # symmetric with the 1/32768 read normalisation
        scaled = np.round(signal.samples * INT16_SCALE)
        data = np.clip(scaled, -INT16_SCALE, INT16_SCALE - 1).astype(np.int16)
    else:
        data = signal.samples.astype(audio_format.numpy_format)
    sf.write(str(path), data, rate, subtype=audio_format.subtype, format="WAV")
    logger.info("Saved %s to %s as %s", signal, path, audio_format)
