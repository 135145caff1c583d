import numpy as np
import pytest
from scipy.linalg import circulant

from audlet.audio.signal import Signal
from audlet.errors import DomainError
from audlet.filterbank.bank import Coefficients
from audlet.filterbank.transform import (
    analyze,
    apply_frame_operator,
    filterbank_response,
    resample_rational,
    synthesize,
)


def _random_coefficients(bank, rng, channels):
    sequences = [
        np.zeros(bank.signal_length // d, dtype=np.complex128) for d in bank.factors
    ]
    for k in channels:
        size = sequences[k].shape[0]
        sequences[k] = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return Coefficients.for_bank(bank, sequences)


def test_analysis_is_decimated_circular_convolution(painless_bank, noise):
    c = analyze(noise, painless_bank)
    length = painless_bank.signal_length
    for channel, y in zip(painless_bank.channels, c.channels, strict=True):
        impulse = np.fft.ifft(channel.dense(length))
        expected = (circulant(impulse) @ noise.samples)[:: channel.factor]
        assert y.shape == (length // channel.factor,)
        assert np.allclose(y, expected, atol=1e-10)


def test_analysis_without_downsampling(small_bank, noise):
    c = analyze(noise, small_bank)
    spectrum = np.fft.fft(noise.samples)
    for channel, y in zip(small_bank.channels, c.channels, strict=True):
        expected = np.fft.ifft(spectrum * channel.dense(small_bank.signal_length))
        assert np.allclose(y, expected, atol=1e-12)


def test_synthesis_is_adjoint_convolution(undersampled_bank, rng):
    bank = undersampled_bank
    length = bank.signal_length
    picked = [0, 7, len(bank) - 1]
    c = _random_coefficients(bank, rng, picked)
    expected = np.zeros(length, dtype=np.complex128)
    for k in picked:
        channel = bank.channels[k]
        upsampled = np.zeros(length, dtype=np.complex128)
        upsampled[:: channel.factor] = c.channels[k]
        impulse = np.fft.ifft(channel.dense(length))
        reversed_impulse = np.conj(impulse[(-np.arange(length)) % length])
        expected += bank.weights[k] * (circulant(reversed_impulse) @ upsampled)
    assert np.allclose(synthesize(c, bank).samples, expected.real, atol=1e-10)


def test_analysis_is_linear(undersampled_bank, rng):
    x, y = rng.standard_normal((2, undersampled_bank.signal_length))
    combined = analyze(2.5 * x - 0.75 * y, undersampled_bank)
    separate = zip(
        analyze(x, undersampled_bank).channels,
        analyze(y, undersampled_bank).channels,
        combined.channels,
        strict=True,
    )
    for cx, cy, c in separate:
        assert np.allclose(c, 2.5 * cx - 0.75 * cy, atol=1e-12)


def test_zero_coefficients_give_silence(painless_bank):
    c = Coefficients.for_bank(
        painless_bank,
        [np.zeros(painless_bank.signal_length // d) for d in painless_bank.factors],
    )
    signal = synthesize(c, painless_bank)
    assert np.all(signal.samples == 0.0)
    assert signal.sample_rate == painless_bank.sample_rate


def test_synthesis_rejects_foreign_coefficients(small_bank, painless_bank, noise):
    c = analyze(noise, small_bank)
    with pytest.raises(DomainError, match="Coefficients were produced by bank"):
        synthesize(c, painless_bank)


def test_synthesis_rejects_mismatched_geometry(painless_bank, noise):
    c = analyze(noise, painless_bank).model_copy(update={"sample_rate": 16000.0})
    with pytest.raises(DomainError, match="geometry does not match"):
        synthesize(c, painless_bank)


def test_analysis_rejects_wrong_length(small_bank):
    with pytest.raises(DomainError, match="does not match the bank length"):
        analyze(np.zeros(small_bank.signal_length + 1), small_bank)


def test_analysis_rejects_wrong_sample_rate(small_bank):
    signal = Signal(samples=np.zeros(small_bank.signal_length), sample_rate=16000.0)
    with pytest.raises(DomainError, match="sample rate"):
        analyze(signal, small_bank)


def test_frame_operator_is_diagonal_without_downsampling(small_bank, noise):
    result = apply_frame_operator(noise, small_bank).samples
    response = filterbank_response(small_bank)
    expected = np.fft.ifft(response * np.fft.fft(noise.samples)).real
    assert np.allclose(result, expected, atol=1e-10)


def test_filterbank_response_is_mirror_symmetric(undersampled_bank):
    response = filterbank_response(undersampled_bank)
    length = undersampled_bank.signal_length
    assert np.allclose(response, response[(-np.arange(length)) % length])
    assert np.all(response >= 0.0)


def test_frame_operator_is_self_adjoint(undersampled_bank, rng):
    x = rng.standard_normal(undersampled_bank.signal_length)
    z = rng.standard_normal(undersampled_bank.signal_length)
    sx = apply_frame_operator(x, undersampled_bank).samples
    sz = apply_frame_operator(z, undersampled_bank).samples
    assert np.dot(sx, z) == pytest.approx(np.dot(x, sz), rel=1e-10)


def test_weighted_energy_is_frame_operator_quadratic_form(undersampled_bank, noise):
    c = analyze(noise, undersampled_bank)
    energy = c.weighted_energy(undersampled_bank.weights)
    sx = apply_frame_operator(noise, undersampled_bank).samples
    assert energy == pytest.approx(np.dot(sx, noise.samples), rel=1e-10)


def test_painless_energy_is_weighted_by_response(painless_bank, noise):
    c = analyze(noise, painless_bank)
    energy = c.weighted_energy(painless_bank.weights)
    response = filterbank_response(painless_bank)
    spectrum = np.fft.fft(noise.samples)
    length = painless_bank.signal_length
    expected = float(np.sum(np.abs(spectrum) ** 2 * response)) / length
    assert energy == pytest.approx(expected, rel=1e-10)
    assert np.min(response) * noise.energy <= energy <= np.max(response) * noise.energy


def test_resample_upsamples_complex_exponential():
    n = np.arange(16)
    y = np.exp(2j * np.pi * 3 * n / 16)
    m = np.arange(32)
    assert np.allclose(resample_rational(y, 2, 1), np.exp(2j * np.pi * 3 * m / 32))


def test_resample_splits_nyquist_bin():
    y = np.cos(np.pi * np.arange(4))
    assert np.allclose(resample_rational(y, 2, 1), np.cos(np.pi * np.arange(8) / 2))


def test_resample_downsampling_folds_spectrum():
    m = np.arange(32)
    y = np.exp(2j * np.pi * 3 * m / 32)
    assert np.allclose(resample_rational(y, 1, 2), np.exp(2j * np.pi * 3 * m[:16] / 16))


def test_resample_rational_length():
    assert resample_rational(np.ones(16), 3, 2).shape == (24,)
    assert np.allclose(resample_rational(np.ones(16), 3, 2), 1.0)


def test_resample_halving_and_doubling_restores_half_band_signal(rng):
    length = 1024
    spectrum = np.zeros(length, dtype=np.complex128)
    band = np.arange(1, length // 4)
    real, imag = rng.standard_normal((2, band.size))
    spectrum[band] = real + 1j * imag
    spectrum[length - band] = np.conj(spectrum[band])
    x = np.fft.ifft(spectrum).real
    restored = resample_rational(resample_rational(x, 1, 2), 2, 1)
    assert np.max(np.abs(restored.imag)) <= 1e-12
    assert np.linalg.norm(restored.real - x) <= 1e-10 * np.linalg.norm(x)


def test_resample_by_one_third_keeps_single_bin():
    length, k = 960, 40
    x = np.exp(2j * np.pi * k * np.arange(length) / length)
    spectrum = np.fft.fft(resample_rational(x, 1, 3))
    assert spectrum.shape == (length // 3,)
    assert spectrum[k] == pytest.approx(np.fft.fft(x)[k] / 3)
    others = np.delete(spectrum, k)
    assert np.max(np.abs(others)) <= 1e-9


@pytest.mark.parametrize(
    ("length", "p", "q", "message"),
    [
        (16, 0, 1, "positive terms"),
        (16, 2, 4, "lowest terms"),
        (15, 1, 2, "not an integer"),
    ],
)
def test_resample_rejects_bad_factors(length, p, q, message):
    with pytest.raises(DomainError, match=message):
        resample_rational(np.ones(length), p, q)
