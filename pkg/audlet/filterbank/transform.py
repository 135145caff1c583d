"""DFT-domain analysis and synthesis on the circular signal model."""

import logging
import math

import numpy as np
from numpy.typing import NDArray

from audlet.audio.signal import Signal
from audlet.errors import DomainError
from audlet.filterbank.bank import Channel, Coefficients, FilterBank

logger = logging.getLogger(__name__)


def signal_samples(x: Signal | NDArray, fb: FilterBank) -> NDArray[np.float64]:
    if isinstance(x, Signal):
        if not math.isclose(x.sample_rate, fb.sample_rate):
            msg = f"{x} does not match the bank sample rate {fb.sample_rate:g} Hz"
            raise DomainError(msg)
        samples = x.samples
    else:
        samples = np.asarray(x, dtype=np.float64).reshape(-1)
    if samples.shape[0] != fb.signal_length:
        msg = (
            f"Signal length {samples.shape[0]} does not match the bank length "
            f"L={fb.signal_length}"
        )
        raise DomainError(msg)
    return samples


def decimate_channel(spectrum: NDArray, channel: Channel, length: int) -> NDArray:
    """Sub-band sequence of one channel from the signal spectrum X."""
    indices = channel.indices(length)
    product = spectrum[indices] * channel.response
    size = length // channel.factor
    if channel.factor == 1:
        folded = np.zeros(length, dtype=np.complex128)
        folded[indices] = product
        return np.fft.ifft(folded)
    # aliasing of the decimation = folding the spectrum onto L/d bins
    slots = indices % size
    real = np.bincount(slots, weights=product.real, minlength=size)
    imag = np.bincount(slots, weights=product.imag, minlength=size)
    folded = real + 1j * imag
    return np.fft.ifft(folded) / channel.factor


def analyze(x: Signal | NDArray, fb: FilterBank) -> Coefficients:
    """y_k[n] = (h_k * x)[n d_k] for every channel, circular convolution."""
    spectrum = np.fft.fft(signal_samples(x, fb))
    channels = [
        decimate_channel(spectrum, channel, fb.signal_length) for channel in fb.channels
    ]
    return Coefficients.for_bank(fb, channels)


def synthesize(c: Coefficients, fb_syn: FilterBank) -> Signal:
    """Real part of the channel sum of conj(G_k) times periodised sub-band spectra."""
    if c.fingerprint != fb_syn.fingerprint:
        msg = (
            f"Coefficients were produced by bank {c.fingerprint[:12]}, "
            f"not by {fb_syn} ({fb_syn.fingerprint[:12]})"
        )
        raise DomainError(msg)
    if not c.matches(fb_syn):
        msg = f"Coefficient geometry does not match {fb_syn}"
        raise DomainError(msg)

    length = fb_syn.signal_length
    accumulator = np.zeros(length, dtype=np.complex128)
    channels = zip(fb_syn.weights, fb_syn.channels, c.channels, strict=True)
    for weight, channel, y in channels:
        indices = channel.indices(length)
        spectrum = np.fft.fft(y)
        accumulator[indices] += (
            weight * np.conj(channel.response) * spectrum[indices % spectrum.shape[0]]
        )
    samples = np.fft.ifft(accumulator).real
    return Signal(samples=samples, sample_rate=fb_syn.sample_rate)


def filterbank_response(fb: FilterBank) -> NDArray[np.float64]:
    """Diagonal of the frame operator in the DFT domain, mirrored for real signals."""
    length = fb.signal_length
    response = np.zeros(length)
    for weight, channel in zip(fb.weights, fb.channels, strict=True):
        indices = channel.indices(length)
        power = (weight / 2.0) / channel.factor * np.abs(channel.response) ** 2
        np.add.at(response, indices, power)
        np.add.at(response, (-indices) % length, power)
    return response


def apply_frame_operator(x: Signal | NDArray, fb: FilterBank) -> Signal:
    """S x = synthesis with the analysis bank itself after analysis."""
    return synthesize(analyze(x, fb), fb)


def resample_rational(y: NDArray, p: int, q: int) -> NDArray[np.complex128]:
    """Change the rate of ``y`` by p/q by placing and folding its DFT.

    Upsampling keeps the original band (ideal interpolation), downsampling folds
    the spectrum onto the shorter grid.
    """
    if p <= 0 or q <= 0:
        msg = f"Rate factor {p}/{q} must have positive terms"
        raise DomainError(msg)
    if math.gcd(p, q) != 1:
        msg = f"Rate factor {p}/{q} is not in lowest terms"
        raise DomainError(msg)
    values = np.asarray(y, dtype=np.complex128).reshape(-1)
    n = values.shape[0]
    if (n * p) % q:
        msg = f"Output length {n}*{p}/{q} is not an integer"
        raise DomainError(msg)

    spectrum = np.fft.fft(values)
    if p > 1:
        size = n * p
        even = n % 2 == 0
        positive = n // 2 if even else (n + 1) // 2
        negative = n - positive - int(even)
        upsampled = np.zeros(size, dtype=np.complex128)
        upsampled[:positive] = spectrum[:positive]
        if negative:
            upsampled[size - negative :] = spectrum[n - negative :]
        if even:
            # the Nyquist bin splits between both band edges
            upsampled[n // 2] += spectrum[n // 2] / 2
            upsampled[size - n // 2] += spectrum[n // 2] / 2
        spectrum = upsampled * p
    if q > 1:
        spectrum = spectrum.reshape(q, -1).sum(axis=0) / q
    logger.debug("Resampled %d samples by %d/%d", n, p, q)
    return np.fft.ifft(spectrum)
