"""Coefficient-domain processing: masking and soft thresholding."""

import logging

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, field_validator

from audlet.errors import DomainError
from audlet.filterbank.bank import Coefficients

logger = logging.getLogger(__name__)


class Mask(BaseModel):
    """Per-channel real weights in [0, 1] on the coefficient grid."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    channels: list[np.ndarray]

    @field_validator("channels", mode="before")
    @classmethod
    def _as_unit_interval(cls, value: list[object]) -> list[np.ndarray]:
        channels = [np.asarray(m, dtype=np.float64).reshape(-1) for m in value]
        for k, m in enumerate(channels):
            if not np.all(np.isfinite(m)) or np.any((m < 0.0) | (m > 1.0)):
                msg = f"Mask channel {k} has values outside [0, 1]"
                raise ValueError(msg)
        return channels

    @classmethod
    def full_like(cls, c: Coefficients, value: float) -> "Mask":
        return cls(channels=[np.full(y.shape[0], value) for y in c.channels])

    def __len__(self) -> int:
        return len(self.channels)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(m.shape[0] for m in self.channels)

    @property
    def is_binary(self) -> bool:
        return all(np.all((m == 0.0) | (m == 1.0)) for m in self.channels)

    def complement(self) -> "Mask":
        return Mask(channels=[1.0 - m for m in self.channels])


def apply_mask(c: Coefficients, m: Mask) -> Coefficients:
    shape = tuple(y.shape[0] for y in c.channels)
    if m.shape != shape:
        msg = f"Mask shape {m.shape} does not match coefficient shape {shape}"
        raise DomainError(msg)
    return c.with_channels(
        [weights * y for weights, y in zip(m.channels, c.channels, strict=True)],
    )


def _shrink(y: NDArray[np.complex128], eta: float) -> NDArray[np.complex128]:
    magnitude = np.abs(y)
    shrunk = np.maximum(magnitude - eta, 0.0)
    # sgn(0) = 0
    phase = np.divide(y, magnitude, out=np.zeros_like(y), where=magnitude > 0)
    return phase * shrunk


def soft_threshold(c: Coefficients, eta: float) -> Coefficients:
    """sgn(y) (|y| - eta)_+ on every coefficient, phase preserved."""
    if eta < 0:
        msg = f"Threshold must be non-negative, got {eta}"
        raise DomainError(msg)
    channels = [_shrink(y, eta) for y in c.channels]
    kept = sum(int(np.count_nonzero(y)) for y in channels)
    total = sum(y.shape[0] for y in channels)
    logger.debug("Soft threshold %.4g kept %d of %d coefficients", eta, kept, total)
    return c.with_channels(channels)
