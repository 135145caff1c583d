"""Equivalent uniform filter bank with common factor D = lcm(d_k) and its dual."""

import logging
import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from audlet.audio.signal import Signal
from audlet.config.commons import GRAM_RCOND
from audlet.config.schemas import BankRole
from audlet.config.settings import get_settings
from audlet.errors import CapacityError, DomainError, FrameError
from audlet.filterbank.bank import Channel, Coefficients, FilterBank
from audlet.filterbank.transform import decimate_channel, signal_samples

# relative spread allowed between the delayed copies of one mapped-back filter
_MAPPING_RTOL = 1e-8

logger = logging.getLogger(__name__)


class UniformBank(BaseModel):
    """sum_k q_k channels (k, l): filter k delayed by l d_k samples, factor D each."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source: FilterBank
    channels: list[Channel]
    origins: list[tuple[int, int]]
    lcm: int
    role: BankRole = BankRole.ANALYSIS

    def __len__(self) -> int:
        return len(self.channels)

    def __str__(self) -> str:
        return f"UniformFB({len(self)} ch, D={self.lcm}, from {self.source})"

    @property
    def multiplicities(self) -> list[int]:
        return [self.lcm // d for d in self.source.factors]

    @property
    def weights(self) -> NDArray[np.float64]:
        source_weights = self.source.weights
        return np.array([source_weights[k] for k, _ in self.origins])


def _delay_phase(
    bins: NDArray[np.int64],
    delay: int,
    length: int,
) -> NDArray[np.complex128]:
    return np.exp(-2j * np.pi * bins * delay / length)


def to_uniform(fb: FilterBank) -> UniformBank:
    settings = get_settings()
    lcm = math.lcm(*fb.factors)
    count = sum(lcm // d for d in fb.factors)
    if lcm > settings.max_lcm or count > settings.max_uniform_channels:
        msg = (
            f"Equivalent uniform bank of {fb} needs D={lcm} and {count} channels; "
            f"caps are max_lcm={settings.max_lcm} and "
            f"max_uniform_channels={settings.max_uniform_channels}"
        )
        raise CapacityError(msg)

    length = fb.signal_length
    channels = []
    origins = []
    for k, channel in enumerate(fb.channels):
        bins = channel.indices(length)
        for delay_index in range(lcm // channel.factor):
            phase = _delay_phase(bins, delay_index * channel.factor, length)
            channels.append(
                Channel(
                    center=channel.center,
                    bandwidth=channel.bandwidth,
                    factor=lcm,
                    start=channel.start,
                    response=channel.response * phase,
                ),
            )
            origins.append((k, delay_index))
    uniform = UniformBank(source=fb, channels=channels, origins=origins, lcm=lcm)
    logger.info("Expanded %s into %s", fb, uniform)
    return uniform


def analyze_uniform(
    x: Signal | NDArray,
    ub: UniformBank,
) -> list[NDArray[np.complex128]]:
    """Sub-band sequences y_(k,l), each of length L / D."""
    length = ub.source.signal_length
    spectrum = np.fft.fft(signal_samples(x, ub.source))
    return [decimate_channel(spectrum, channel, length) for channel in ub.channels]


def regroup(ub: UniformBank, sequences: list[NDArray]) -> Coefficients:
    """Interleave y_(k,l)[n] = y_k[n q_k - l] back into the non-uniform channels."""
    if len(sequences) != len(ub):
        msg = f"Expected {len(ub)} uniform sequences, got {len(sequences)}"
        raise DomainError(msg)
    length = ub.source.signal_length
    channels = [
        np.zeros(length // d, dtype=np.complex128) for d in ub.source.factors
    ]
    for (k, delay_index), y in zip(ub.origins, sequences, strict=True):
        size = channels[k].shape[0]
        multiplicity = ub.lcm // ub.source.factors[k]
        positions = (np.arange(y.shape[0]) * multiplicity - delay_index) % size
        channels[k][positions] = y
    return Coefficients.for_bank(ub.source, channels)


def _split(c: Coefficients, ub: UniformBank) -> list[NDArray[np.complex128]]:
    sequences = []
    for k, delay_index in ub.origins:
        y = c.channels[k]
        multiplicity = ub.lcm // ub.source.factors[k]
        count = ub.source.signal_length // ub.lcm
        positions = np.arange(count) * multiplicity - delay_index
        sequences.append(y[positions % y.shape[0]])
    return sequences


def _polyphase(
    responses: NDArray[np.complex128],
    lcm: int,
) -> NDArray[np.complex128]:
    """(E, L) responses as (E, D, L / D) blocks with bin j = m (L / D) + r."""
    entries, length = responses.shape
    return responses.reshape(entries, lcm, length // lcm)


def _with_mirrors(
    responses: NDArray[np.complex128],
    weights: NDArray[np.float64],
) -> tuple[NDArray[np.complex128], NDArray[np.float64]]:
    length = responses.shape[1]
    mirrored = np.conj(responses[:, (-np.arange(length)) % length])
    halved = np.concatenate([weights, weights]) / 2.0
    return np.concatenate([responses, mirrored]), halved


def _dense(channels: list[Channel], length: int) -> NDArray[np.complex128]:
    return np.stack([channel.dense(length) for channel in channels])


def uniform_dual(ub: UniformBank) -> UniformBank:
    """Canonical dual of the uniform bank, solved per residue class of L / D.

    For each residue r the D x D Gram matrix of the alias components is
    inverted; a singular block means the bank is not a frame at that frequency.
    """
    source = ub.source
    length = source.signal_length
    lcm = ub.lcm
    count = len(ub)
    responses, omegas = _with_mirrors(_dense(ub.channels, length), ub.weights)
    blocks = _polyphase(responses, lcm)

    gram = np.einsum("cmr,c,cnr->rmn", blocks, omegas, np.conj(blocks))
    eigenvalues = np.linalg.eigvalsh(gram)
    smallest = eigenvalues[:, 0]
    cutoff = GRAM_RCOND * float(np.max(eigenvalues))
    singular = np.flatnonzero(smallest <= cutoff)
    if singular.size:
        frequency = singular[0] * source.sample_rate / length
        msg = (
            f"{ub} is not a frame: alias matrix is rank deficient at "
            f"{frequency:.3f} Hz (and {singular.size - 1} more residues)"
        )
        raise FrameError(msg)

    rhs = np.transpose(blocks, (2, 1, 0))
    solved = lcm * np.linalg.solve(gram, rhs)
    duals = np.transpose(solved, (2, 1, 0)).reshape(-1, length)[:count]

    channels = [
        Channel(
            center=channel.center,
            bandwidth=channel.bandwidth,
            factor=lcm,
            start=0,
            response=dual,
        )
        for channel, dual in zip(ub.channels, duals, strict=True)
    ]
    logger.info("Computed the uniform dual of %s", ub)
    return ub.model_copy(update={"channels": channels, "role": BankRole.SYNTHESIS})


def uniform_pr_residual(ub_ana: UniformBank, ub_syn: UniformBank) -> float:
    """max over residues of |G^H W H / D - I|, zero for perfect reconstruction."""
    length = ub_ana.source.signal_length
    lcm = ub_ana.lcm
    analysis, omegas = _with_mirrors(_dense(ub_ana.channels, length), ub_ana.weights)
    synthesis, _ = _with_mirrors(_dense(ub_syn.channels, length), ub_syn.weights)
    product = np.einsum(
        "cmr,c,cnr->rmn",
        np.conj(_polyphase(synthesis, lcm)),
        omegas,
        _polyphase(analysis, lcm),
    )
    return float(np.max(np.abs(product / lcm - np.eye(lcm))))


def synthesize_uniform(c: Coefficients, ub_syn: UniformBank) -> Signal:
    """Synthesis through the uniform bank, splitting y_k into its q_k phases."""
    source = ub_syn.source
    if c.fingerprint != source.fingerprint or not c.matches(source):
        msg = f"Coefficients do not belong to {source}"
        raise DomainError(msg)
    length = source.signal_length
    accumulator = np.zeros(length, dtype=np.complex128)
    for weight, channel, y in zip(
        ub_syn.weights,
        ub_syn.channels,
        _split(c, ub_syn),
        strict=True,
    ):
        bins = channel.indices(length)
        spectrum = np.fft.fft(y)
        accumulator[bins] += (
            weight * np.conj(channel.response) * spectrum[bins % spectrum.shape[0]]
        )
    return Signal(samples=np.fft.ifft(accumulator).real, sample_rate=source.sample_rate)


def uniform_to_filterbank(ub_syn: UniformBank) -> FilterBank:
    """Map g_(k,l) back to non-uniform filters g_k, when the delays are consistent."""
    source = ub_syn.source
    length = source.signal_length
    bins = np.arange(length)
    grouped: dict[int, list[NDArray[np.complex128]]] = {}
    for (k, delay_index), channel in zip(ub_syn.origins, ub_syn.channels, strict=True):
        undelayed = channel.dense(length) * np.conj(
            _delay_phase(bins, delay_index * source.factors[k], length),
        )
        grouped.setdefault(k, []).append(undelayed)

    channels = []
    for k, copies in sorted(grouped.items()):
        reference = copies[0]
        scale = max(float(np.max(np.abs(reference))), np.finfo(float).tiny)
        spread = max(float(np.max(np.abs(copy - reference))) for copy in copies)
        if spread > _MAPPING_RTOL * scale:
            msg = (
                f"Channel {k}: the uniform dual filters are not delayed copies of one "
                "filter; synthesize through the uniform bank instead"
            )
            raise FrameError(msg)
        channels.append(source.channels[k].with_response(reference, start=0))
    return source.with_channels(channels, BankRole.SYNTHESIS)
