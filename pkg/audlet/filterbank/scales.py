"""Perceptual frequency scales: Hz <-> auditory units and auditory bandwidths."""

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import bisect

from audlet.config.commons import BISECTION_XTOL_HZ, MAX_SUPPORTED_HZ
from audlet.config.schemas import ScaleKind
from audlet.errors import DomainError

ERB_SLOPE = 9.265
ERB_CORNER_HZ = 228.8455
ERB_MIN_BANDWIDTH_HZ = 24.7
MEL_FACTOR = 2595.0
MEL_CORNER_HZ = 700.0
# slack when counting whole grid steps
_GRID_EPS = 1e-9

FloatOrArray = float | NDArray[np.float64]


def _unwrap(values: NDArray[np.float64]) -> FloatOrArray:
    return float(values) if values.ndim == 0 else values


def _validated_frequencies(freq_hz: ArrayLike) -> NDArray[np.float64]:
    values = np.asarray(freq_hz, dtype=np.float64)
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        msg = f"Frequencies must be finite and non-negative, got {freq_hz}"
        raise DomainError(msg)
    return values


def _bark(freq_hz: NDArray[np.float64]) -> NDArray[np.float64]:
    return 13.0 * np.arctan(0.00076 * freq_hz) + 3.5 * np.arctan(
        (freq_hz / 7500.0) ** 2,
    )


def _forward(scale: ScaleKind, freq_hz: NDArray[np.float64]) -> NDArray[np.float64]:
    if scale == ScaleKind.ERB:
        return ERB_SLOPE * np.log1p(freq_hz / ERB_CORNER_HZ)
    if scale == ScaleKind.BARK:
        return _bark(freq_hz)
    return MEL_FACTOR * np.log10(1.0 + freq_hz / MEL_CORNER_HZ)


def aud_forward(scale: ScaleKind, freq_hz: ArrayLike) -> FloatOrArray:
    return _unwrap(_forward(scale, _validated_frequencies(freq_hz)))


def _bark_inverse(aud_units: float) -> float:
    if aud_units == 0.0:
        return 0.0
    # the Bark map has no closed-form inverse but is monotone
    return float(
        bisect(
            lambda f: float(_bark(np.float64(f))) - aud_units,
            0.0,
            MAX_SUPPORTED_HZ,
            xtol=BISECTION_XTOL_HZ,
            maxiter=200,
        ),
    )


def aud_inverse(scale: ScaleKind, aud_units: ArrayLike) -> FloatOrArray:
    values = np.asarray(aud_units, dtype=np.float64)
    upper = float(_forward(scale, np.float64(MAX_SUPPORTED_HZ)))
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        msg = f"Auditory units must be finite and non-negative, got {aud_units}"
        raise DomainError(msg)
    if np.any(values > upper):
        msg = (
            f"Auditory units exceed {upper:.6g} {scale.value}, the image of the "
            f"highest supported frequency {MAX_SUPPORTED_HZ:g} Hz"
        )
        raise DomainError(msg)

    if scale == ScaleKind.ERB:
        freqs = ERB_CORNER_HZ * np.expm1(values / ERB_SLOPE)
    elif scale == ScaleKind.MEL:
        freqs = MEL_CORNER_HZ * (np.power(10.0, values / MEL_FACTOR) - 1.0)
    else:
        freqs = np.vectorize(_bark_inverse, otypes=[np.float64])(values)
    return _unwrap(np.asarray(freqs, dtype=np.float64))


def _mel_bandwidth(freq_hz: NDArray[np.float64], density: float) -> NDArray[np.float64]:
    """Distance between the neighbouring centers of a grid with 1/density spacing.

    Triangular filters overlapping by 50 % span from the lower to the upper
    neighbour; at the low edge the one-sided difference is doubled.
    """
    step = 1.0 / density
    mels = _forward(ScaleKind.MEL, freq_hz)
    upper = np.asarray(aud_inverse(ScaleKind.MEL, mels + step))
    lower_mels = mels - step
    lower = np.asarray(aud_inverse(ScaleKind.MEL, np.maximum(lower_mels, 0.0)))
    return np.where(lower_mels >= 0, upper - lower, 2.0 * (upper - freq_hz))


def aud_bandwidth(
    scale: ScaleKind,
    freq_hz: ArrayLike,
    density: float = 1.0,
) -> FloatOrArray:
    """Auditory filter bandwidth in Hz at ``freq_hz``.

    ``density`` only matters for the Mel scale, which defines bandwidths through
    the channel spacing.
    """
    values = _validated_frequencies(freq_hz)
    if scale == ScaleKind.ERB:
        return _unwrap(ERB_MIN_BANDWIDTH_HZ + values / ERB_SLOPE)
    if scale == ScaleKind.BARK:
        return _unwrap(25.0 + 75.0 * np.power(1.0 + 1.4e-6 * values**2, 0.69))
    if density <= 0:
        msg = f"Channel density must be positive, got {density}"
        raise DomainError(msg)
    return _unwrap(_mel_bandwidth(values, density))


def grid_bandwidths(
    scale: ScaleKind,
    centers: ArrayLike,
    density: float,
) -> NDArray[np.float64]:
    """Bandwidths of a designed grid of centers.

    ERB and Bark use their closed forms. Mel bandwidths are the distances between
    the neighbours on the grid itself, one-sided (and doubled) at both ends.
    """
    grid = _validated_frequencies(centers).reshape(-1)
    if scale != ScaleKind.MEL:
        return np.asarray(aud_bandwidth(scale, grid), dtype=np.float64).reshape(-1)
    if grid.size == 1:
        return np.asarray(aud_bandwidth(scale, grid, density)).reshape(-1)
    bandwidths = np.empty_like(grid)
    bandwidths[1:-1] = grid[2:] - grid[:-2]
    bandwidths[0] = 2.0 * (grid[1] - grid[0])
    bandwidths[-1] = 2.0 * (grid[-1] - grid[-2])
    return bandwidths


def _check_range(fmin_hz: float, fmax_hz: float) -> None:
    _validated_frequencies([fmin_hz, fmax_hz])
    if fmin_hz >= fmax_hz:
        msg = f"Empty frequency range [{fmin_hz}, {fmax_hz}]"
        raise DomainError(msg)


def aud_space(
    scale: ScaleKind,
    fmin_hz: float,
    fmax_hz: float,
    density: float,
) -> NDArray[np.float64]:
    """Centers at AUD(fmin) + k/density for every k that stays within fmax."""
    if density <= 0:
        msg = f"Channel density must be positive, got {density}"
        raise DomainError(msg)
    _check_range(fmin_hz, fmax_hz)
    aud_min = float(_forward(scale, np.float64(fmin_hz)))
    aud_max = float(_forward(scale, np.float64(fmax_hz)))

    steps = math.floor((aud_max - aud_min) * density + _GRID_EPS)
    auds = aud_min + np.arange(steps + 1) / density
    centers = np.asarray(
        aud_inverse(scale, np.minimum(auds, aud_max)),
        dtype=np.float64,
    ).reshape(-1)
    centers[0] = fmin_hz
    return np.minimum(centers, fmax_hz)


def aud_space_fit(
    scale: ScaleKind,
    fmin_hz: float,
    fmax_hz: float,
    count: int,
) -> NDArray[np.float64]:
    """``count + 1`` centers evenly spaced in auditory units, both ends included."""
    if count < 1:
        msg = f"Channel count must be at least 1, got {count}"
        raise DomainError(msg)
    _check_range(fmin_hz, fmax_hz)
    aud_min = float(_forward(scale, np.float64(fmin_hz)))
    aud_max = float(_forward(scale, np.float64(fmax_hz)))
    auds = np.linspace(aud_min, aud_max, count + 1)
    centers = np.asarray(aud_inverse(scale, auds), dtype=np.float64).reshape(-1)
    centers[0] = fmin_hz
    centers[-1] = fmax_hz
    return centers
