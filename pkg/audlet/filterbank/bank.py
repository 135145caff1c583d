import hashlib
from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from audlet.config.schemas import BankDesign, BankRole, ScaleKind

# centers closer than this (relative to the sample rate) count as DC / Nyquist
_EDGE_RTOL = 1e-9


class Channel(BaseModel):
    """One filter sampled on the length-L DFT grid.

    Only the contiguous (circular) support is stored: ``response[i]`` is the
    value at bin ``(start + i) % L`` and every other bin is zero.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    center: float
    bandwidth: float
    factor: Annotated[int, Field(ge=1)] = 1
    start: Annotated[int, Field(ge=0)] = 0
    response: np.ndarray

    @field_validator("response", mode="before")
    @classmethod
    def _as_complex(cls, value: object) -> np.ndarray:
        return np.asarray(value, dtype=np.complex128).reshape(-1)

    @property
    def support_size(self) -> int:
        return int(self.response.shape[0])

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.response) ** 2))

    def indices(self, signal_length: int) -> NDArray[np.int64]:
        return (self.start + np.arange(self.support_size)) % signal_length

    def dense(self, signal_length: int) -> NDArray[np.complex128]:
        values = np.zeros(signal_length, dtype=np.complex128)
        values[self.indices(signal_length)] = self.response
        return values

    def with_factor(self, factor: int) -> "Channel":
        return self.model_copy(update={"factor": int(factor)})

    def with_response(
        self,
        response: np.ndarray,
        start: int | None = None,
    ) -> "Channel":
        return Channel(
            center=self.center,
            bandwidth=self.bandwidth,
            factor=self.factor,
            start=self.start if start is None else start,
            response=response,
        )


class BankDescriptor(BaseModel):
    """What a bank is regenerated from: its design plus downsampling factors."""

    model_config = ConfigDict(frozen=True)

    design: BankDesign
    factors: tuple[int, ...] | None = None

    @property
    def fingerprint(self) -> str:
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()


class FilterBank(BaseModel):
    """Ordered channels of a real-signal filter bank.

    Channels cover the non-negative frequencies only; the mirrored negative half
    is implied. Interior channels therefore carry weight 2 while channels
    centered at DC or Nyquist carry weight 1.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    channels: Annotated[list[Channel], Field(min_length=1)]
    sample_rate: Annotated[float, Field(gt=0.0)]
    signal_length: Annotated[int, Field(ge=2)]
    scale: ScaleKind = ScaleKind.ERB
    design: BankDesign
    role: BankRole = BankRole.ANALYSIS
    is_real_signal_bank: bool = True

    @model_validator(mode="after")
    def _check_geometry(self) -> "FilterBank":
        length = self.signal_length
        for k, channel in enumerate(self.channels):
            if length % channel.factor:
                msg = f"Channel {k}: factor {channel.factor} does not divide L={length}"
                raise ValueError(msg)
            if channel.support_size > length:
                msg = f"Channel {k}: support exceeds the signal length {length}"
                raise ValueError(msg)
        centers = np.array([channel.center for channel in self.channels])
        if np.any(np.diff(centers) <= 0):
            msg = "Channel centers must be strictly increasing"
            raise ValueError(msg)
        return self

    def __len__(self) -> int:
        return len(self.channels)

    def __str__(self) -> str:
        return (
            f"FB({self.design.family.value}/{self.role.value}, "
            f"{len(self)} ch, L={self.signal_length}, {self.sample_rate:g} Hz)"
        )

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(channel.factor for channel in self.channels)

    @property
    def centers(self) -> NDArray[np.float64]:
        return np.array([channel.center for channel in self.channels])

    @property
    def bandwidths(self) -> NDArray[np.float64]:
        return np.array([channel.bandwidth for channel in self.channels])

    @property
    def weights(self) -> NDArray[np.float64]:
        if not self.is_real_signal_bank:
            return np.ones(len(self))
        nyquist = self.sample_rate / 2
        tol = _EDGE_RTOL * self.sample_rate
        edge = (np.abs(self.centers) <= tol) | (np.abs(self.centers - nyquist) <= tol)
        return np.where(edge, 1.0, 2.0)

    @property
    def descriptor(self) -> BankDescriptor:
        return BankDescriptor(design=self.design, factors=self.factors)

    @property
    def fingerprint(self) -> str:
        return self.descriptor.fingerprint

    @property
    def is_painless_supported(self) -> bool:
        """Every support fits into one period of its decimated spectrum."""
        return all(
            channel.support_size * channel.factor <= self.signal_length
            for channel in self.channels
        )

    def with_factors(self, factors: list[int] | tuple[int, ...]) -> "FilterBank":
        if len(factors) != len(self):
            msg = f"Expected {len(self)} factors, got {len(factors)}"
            raise ValueError(msg)
        channels = [
            channel.with_factor(factor)
            for channel, factor in zip(self.channels, factors, strict=True)
        ]
        return self.with_channels(channels, self.role)

    def with_channels(self, channels: list[Channel], role: BankRole) -> "FilterBank":
        return FilterBank(
            channels=channels,
            sample_rate=self.sample_rate,
            signal_length=self.signal_length,
            scale=self.scale,
            design=self.design,
            role=role,
            is_real_signal_bank=self.is_real_signal_bank,
        )

    def dense_responses(self) -> NDArray[np.complex128]:
        length = self.signal_length
        return np.stack([channel.dense(length) for channel in self.channels])


class Coefficients(BaseModel):
    """Ragged sub-band sequences y_k of lengths L / d_k."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    channels: list[np.ndarray]
    factors: tuple[int, ...]
    centers: tuple[float, ...]
    bandwidths: tuple[float, ...]
    signal_length: Annotated[int, Field(ge=2)]
    sample_rate: Annotated[float, Field(gt=0.0)]
    fingerprint: str

    @field_validator("channels", mode="before")
    @classmethod
    def _as_complex(cls, value: list[object]) -> list[np.ndarray]:
        return [np.asarray(y, dtype=np.complex128).reshape(-1) for y in value]

    @model_validator(mode="after")
    def _check_lengths(self) -> "Coefficients":
        sizes = {len(self.channels), len(self.factors), len(self.centers)}
        if len(sizes) != 1 or len(self.bandwidths) != len(self.factors):
            msg = "Channel, factor, center and bandwidth counts differ"
            raise ValueError(msg)
        for k, (y, factor) in enumerate(zip(self.channels, self.factors, strict=True)):
            if y.shape[0] * factor != self.signal_length:
                msg = (
                    f"Channel {k}: {y.shape[0]} coefficients with factor {factor} "
                    f"do not cover L={self.signal_length}"
                )
                raise ValueError(msg)
        return self

    @classmethod
    def for_bank(cls, bank: FilterBank, channels: list[np.ndarray]) -> "Coefficients":
        return cls(
            channels=channels,
            factors=bank.factors,
            centers=tuple(float(c) for c in bank.centers),
            bandwidths=tuple(float(b) for b in bank.bandwidths),
            signal_length=bank.signal_length,
            sample_rate=bank.sample_rate,
            fingerprint=bank.fingerprint,
        )

    def __len__(self) -> int:
        return len(self.channels)

    def with_channels(self, channels: list[np.ndarray]) -> "Coefficients":
        return self.model_copy(
            update={
                "channels": [np.asarray(y, dtype=np.complex128) for y in channels],
            },
        )

    def weighted_energy(self, weights: NDArray[np.float64]) -> float:
        return float(
            sum(
                w * np.sum(np.abs(y) ** 2)
                for w, y in zip(weights, self.channels, strict=True)
            ),
        )

    def matches(self, bank: FilterBank) -> bool:
        return (
            self.signal_length == bank.signal_length
            and self.sample_rate == bank.sample_rate
            and self.factors == bank.factors
        )
