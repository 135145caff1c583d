"""Reconstruction and separation quality measures."""

import logging
import math
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel

from audlet.audio.signal import Signal
from audlet.config.commons import DB_CAP, SEGSNR_CLIP_DB, SEGSNR_FRAME_MS
from audlet.errors import DomainError, RankError

logger = logging.getLogger(__name__)


class BssEvalScores(BaseModel):
    sdr: float
    sir: float
    sar: float
    # names of the ratios that hit +/- DB_CAP
    capped: tuple[str, ...] = ()


class BssComponents(NamedTuple):
    """Estimate split into target, interference and artifact parts."""

    s_target: NDArray[np.float64]
    e_interf: NDArray[np.float64]
    e_artif: NDArray[np.float64]


def _values(x: Signal | NDArray) -> NDArray[np.float64]:
    if isinstance(x, Signal):
        return x.samples
    return np.asarray(x, dtype=np.float64).reshape(-1)


def _paired(
    reference: Signal | NDArray,
    estimate: Signal | NDArray,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    ref = _values(reference)
    est = _values(estimate)
    if ref.shape != est.shape:
        msg = f"Signal lengths differ: {ref.shape[0]} and {est.shape[0]}"
        raise DomainError(msg)
    return ref, est


def ratio_db(numerator: float, denominator: float) -> tuple[float, bool]:
    """10 log10(numerator / denominator) limited to +/- DB_CAP, with a capped flag."""
    if denominator <= 0.0 or numerator >= denominator * 10.0 ** (DB_CAP / 10.0):
        return DB_CAP, True
    if numerator <= denominator * 10.0 ** (-DB_CAP / 10.0):
        return -DB_CAP, True
    return 10.0 * math.log10(numerator / denominator), False


def is_capped(value_db: float) -> bool:
    return abs(value_db) >= DB_CAP


def rel_error(
    x: Signal | NDArray,
    x_hat: Signal | NDArray,
    delay: int = 0,
) -> float:
    """||x_hat - x|| / ||x||, with x_hat advanced circularly by ``delay`` samples."""
    ref, est = _paired(x, x_hat)
    norm = float(np.linalg.norm(ref))
    if norm == 0.0:
        msg = "Relative error of a zero reference signal is undefined"
        raise DomainError(msg)
    if delay:
        est = np.roll(est, -delay)
    return float(np.linalg.norm(est - ref)) / norm


def snr(reference: Signal | NDArray, estimate: Signal | NDArray) -> float:
    """10 log10(||ref||^2 / ||ref - est||^2); DB_CAP when est equals ref."""
    ref, est = _paired(reference, estimate)
    energy = float(np.dot(ref, ref))
    if energy == 0.0:
        msg = "SNR needs a non-zero reference"
        raise DomainError(msg)
    error = ref - est
    value, _ = ratio_db(energy, float(np.dot(error, error)))
    return value


def segsnr(  # noqa: PLR0913
    reference: Signal | NDArray,
    estimate: Signal | NDArray,
    sample_rate: float | None = None,
    frame_ms: float = SEGSNR_FRAME_MS,
    clip: tuple[float, float] = SEGSNR_CLIP_DB,
) -> float:
    """Mean of per-frame SNRs over non-overlapping frames, each clipped to ``clip``.

    Frames with a silent reference are skipped and a trailing partial frame is
    dropped.
    """
    if sample_rate is None:
        if not isinstance(reference, Signal):
            msg = "segsnr needs a sample rate for raw arrays"
            raise DomainError(msg)
        sample_rate = reference.sample_rate
    ref, est = _paired(reference, estimate)
    frame = round(frame_ms * sample_rate / 1000.0)
    count = ref.shape[0] // frame if frame > 0 else 0
    if count == 0:
        msg = (
            f"Signal of {ref.shape[0]} samples is shorter than one "
            f"{frame_ms} ms frame"
        )
        raise DomainError(msg)

    ref_frames = ref[: count * frame].reshape(count, frame)
    err_frames = ref_frames - est[: count * frame].reshape(count, frame)
    low, high = clip
    values = []
    for ref_frame, err_frame in zip(ref_frames, err_frames, strict=True):
        energy = float(np.dot(ref_frame, ref_frame))
        if energy == 0.0:
            continue
        value, _ = ratio_db(energy, float(np.dot(err_frame, err_frame)))
        values.append(min(max(value, low), high))
    if not values:
        msg = "Every reference frame is silent"
        raise DomainError(msg)
    logger.debug("segSNR over %d of %d frames", len(values), count)
    return float(np.mean(values))


def bss_decompose(
    references: list[Signal] | list[NDArray],
    estimate: Signal | NDArray,
    target_index: int,
) -> BssComponents:
    """Project the estimate on the target and on the span of all references."""
    if len(references) < 2:  # noqa: PLR2004
        msg = f"bss_eval needs at least 2 reference sources, got {len(references)}"
        raise DomainError(msg)
    if not 0 <= target_index < len(references):
        msg = f"Target index {target_index} out of range"
        raise DomainError(msg)
    est = _values(estimate)
    sources = np.stack([_paired(ref, est)[0] for ref in references], axis=1)
    if np.linalg.matrix_rank(sources) < sources.shape[1]:
        msg = "Reference sources are linearly dependent"
        raise RankError(msg)

    target = sources[:, target_index]
    s_target = float(np.dot(est, target)) / float(np.dot(target, target)) * target
    coefficients, *_ = np.linalg.lstsq(sources, est, rcond=None)
    projected = sources @ coefficients
    e_interf = projected - s_target
    e_artif = est - projected
    return BssComponents(s_target, e_interf, e_artif)


def bss_eval(
    references: list[Signal] | list[NDArray],
    estimate: Signal | NDArray,
    target_index: int,
) -> BssEvalScores:
    """SDR, SIR and SAR from projections on the reference sources, whole signal."""
    s_target, e_interf, e_artif = bss_decompose(references, estimate, target_index)

    def energy(x: NDArray[np.float64]) -> float:
        return float(np.dot(x, x))

    sdr, sdr_capped = ratio_db(energy(s_target), energy(e_interf + e_artif))
    sir, sir_capped = ratio_db(energy(s_target), energy(e_interf))
    sar, sar_capped = ratio_db(energy(s_target + e_interf), energy(e_artif))
    flags = (("sdr", sdr_capped), ("sir", sir_capped), ("sar", sar_capped))
    capped = tuple(name for name, flag in flags if flag)
    return BssEvalScores(sdr=sdr, sir=sir, sar=sar, capped=capped)
