"""AUDC coefficient and AUDM mask containers, little-endian throughout."""

import logging
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from audlet.errors import FormatError
from audlet.filterbank.bank import Coefficients, FilterBank
from audlet.processing import Mask

COEFFICIENTS_MAGIC = b"AUDC"
MASK_MAGIC = b"AUDM"
FORMAT_VERSION = 1
FLAG_COMPLEX128 = 0x1
FINGERPRINT_BYTES = 32

_HEADER = np.dtype(
    [
        ("magic", "S4"),
        ("version", "<u2"),
        ("flags", "<u2"),
        ("sample_rate", "<f8"),
        ("signal_length", "<u8"),
        ("channel_count", "<u4"),
    ],
)
_CHANNEL = np.dtype(
    [
        ("center", "<f8"),
        ("bandwidth", "<f8"),
        ("factor", "<u4"),
        ("size", "<u8"),
    ],
)

logger = logging.getLogger(__name__)


class ChannelGeometry(BaseModel):
    """Grid shared by both containers: rate, length and per-channel layout."""

    sample_rate: float
    signal_length: int
    centers: tuple[float, ...]
    bandwidths: tuple[float, ...]
    factors: tuple[int, ...]

    @classmethod
    def of(cls, source: Coefficients | FilterBank) -> "ChannelGeometry":
        return cls(
            sample_rate=source.sample_rate,
            signal_length=source.signal_length,
            centers=tuple(float(c) for c in source.centers),
            bandwidths=tuple(float(b) for b in source.bandwidths),
            factors=tuple(source.factors),
        )

    @property
    def sizes(self) -> list[int]:
        return [self.signal_length // d for d in self.factors]


class MaskFile(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mask: Mask
    geometry: ChannelGeometry


class _Reader:
    def __init__(self, path: Path) -> None:
        self.path = path
        self.buffer = path.read_bytes()
        self.offset = 0

    def take(self, dtype: np.dtype | str, count: int = 1) -> NDArray:
        dtype = np.dtype(dtype)
        end = self.offset + dtype.itemsize * count
        if end > len(self.buffer):
            msg = f"{self.path}: truncated container at byte {self.offset}"
            raise FormatError(msg)
        values = np.frombuffer(
            self.buffer,
            dtype=dtype,
            count=count,
            offset=self.offset,
        )
        self.offset = end
        return values

    def rest(self) -> bytes:
        return self.buffer[self.offset :]


def _header_bytes(magic: bytes, flags: int, geometry: ChannelGeometry) -> bytes:
    header = np.zeros(1, dtype=_HEADER)
    header["magic"] = magic
    header["version"] = FORMAT_VERSION
    header["flags"] = flags
    header["sample_rate"] = geometry.sample_rate
    header["signal_length"] = geometry.signal_length
    header["channel_count"] = len(geometry.factors)
    return header.tobytes()


def _channel_bytes(geometry: ChannelGeometry, k: int) -> bytes:
    record = np.zeros(1, dtype=_CHANNEL)
    record["center"] = geometry.centers[k]
    record["bandwidth"] = geometry.bandwidths[k]
    record["factor"] = geometry.factors[k]
    record["size"] = geometry.sizes[k]
    return record.tobytes()


def _read_header(reader: _Reader, magic: bytes) -> tuple[int, float, int, int]:
    header = reader.take(_HEADER)[0]
    if bytes(header["magic"]) != magic:
        msg = f"{reader.path}: bad magic {bytes(header['magic'])!r}, expected {magic!r}"
        raise FormatError(msg)
    if int(header["version"]) != FORMAT_VERSION:
        msg = f"{reader.path}: unsupported container version {int(header['version'])}"
        raise FormatError(msg)
    return (
        int(header["flags"]),
        float(header["sample_rate"]),
        int(header["signal_length"]),
        int(header["channel_count"]),
    )


def _read_channel(reader: _Reader, signal_length: int) -> tuple[float, float, int, int]:
    record = reader.take(_CHANNEL)[0]
    factor = int(record["factor"])
    size = int(record["size"])
    if factor == 0 or size * factor != signal_length:
        msg = (
            f"{reader.path}: channel with {size} samples and factor {factor} "
            f"does not cover L={signal_length}"
        )
        raise FormatError(msg)
    return float(record["center"]), float(record["bandwidth"]), factor, size


def write_coefficients(
    path: Path,
    c: Coefficients,
    *,
    double_precision: bool = True,
) -> None:
    geometry = ChannelGeometry.of(c)
    dtype = "<c16" if double_precision else "<c8"
    flags = FLAG_COMPLEX128 if double_precision else 0
    with path.open("wb") as f:
        f.write(_header_bytes(COEFFICIENTS_MAGIC, flags, geometry))
        for k, y in enumerate(c.channels):
            f.write(_channel_bytes(geometry, k))
            f.write(y.astype(dtype).tobytes())
        f.write(bytes.fromhex(c.fingerprint))
    logger.info("Wrote %d coefficient channels to %s", len(c), path)


def read_coefficients(path: Path, bank: FilterBank | None = None) -> Coefficients:
    """Load an AUDC file; with ``bank`` the stored fingerprint must match it."""
    reader = _Reader(path)
    flags, sample_rate, signal_length, count = _read_header(reader, COEFFICIENTS_MAGIC)
    dtype = "<c16" if flags & FLAG_COMPLEX128 else "<c8"

    centers, bandwidths, factors, channels = [], [], [], []
    for _ in range(count):
        center, bandwidth, factor, size = _read_channel(reader, signal_length)
        centers.append(center)
        bandwidths.append(bandwidth)
        factors.append(factor)
        channels.append(reader.take(dtype, size).astype(np.complex128))

    trailer = reader.rest()
    if len(trailer) != FINGERPRINT_BYTES:
        msg = f"{path}: expected a {FINGERPRINT_BYTES}-byte fingerprint trailer"
        raise FormatError(msg)
    fingerprint = trailer.hex()
    if bank is not None and fingerprint != bank.fingerprint:
        msg = f"{path}: coefficients were not produced by {bank}"
        raise FormatError(msg)

    return Coefficients(
        channels=channels,
        factors=tuple(factors),
        centers=tuple(centers),
        bandwidths=tuple(bandwidths),
        signal_length=signal_length,
        sample_rate=sample_rate,
        fingerprint=fingerprint,
    )


def write_mask(path: Path, mask: Mask, grid: Coefficients | FilterBank) -> None:
    geometry = ChannelGeometry.of(grid)
    if list(mask.shape) != geometry.sizes:
        msg = f"Mask shape {mask.shape} does not match the grid {geometry.sizes}"
        raise FormatError(msg)
    with path.open("wb") as f:
        f.write(_header_bytes(MASK_MAGIC, 0, geometry))
        for k, m in enumerate(mask.channels):
            f.write(_channel_bytes(geometry, k))
            f.write(m.astype("<f4").tobytes())
    logger.info("Wrote %d mask channels to %s", len(mask), path)


def read_mask(path: Path) -> MaskFile:
    reader = _Reader(path)
    _, sample_rate, signal_length, count = _read_header(reader, MASK_MAGIC)
    centers, bandwidths, factors, channels = [], [], [], []
    for k in range(count):
        center, bandwidth, factor, size = _read_channel(reader, signal_length)
        values = reader.take("<f4", size).astype(np.float64)
        if np.any((values < 0.0) | (values > 1.0)) or not np.all(np.isfinite(values)):
            msg = f"{path}: mask channel {k} has values outside [0, 1]"
            raise FormatError(msg)
        centers.append(center)
        bandwidths.append(bandwidth)
        factors.append(factor)
        channels.append(values)
    if reader.rest():
        msg = f"{path}: unexpected trailing bytes"
        raise FormatError(msg)
    geometry = ChannelGeometry(
        sample_rate=sample_rate,
        signal_length=signal_length,
        centers=tuple(centers),
        bandwidths=tuple(bandwidths),
        factors=tuple(factors),
    )
    return MaskFile(mask=Mask(channels=channels), geometry=geometry)
