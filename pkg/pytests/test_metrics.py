import numpy as np
import pytest

from audlet.audio.signal import Signal
from audlet.config.commons import DB_CAP
from audlet.errors import DomainError, RankError
from audlet.metrics import (
    bss_decompose,
    bss_eval,
    is_capped,
    ratio_db,
    rel_error,
    segsnr,
    snr,
)

PERIOD = 1000


def _tone(cycles, phase=0.0):
    return np.sin(2 * np.pi * cycles * np.arange(PERIOD) / PERIOD + phase)


def test_ratio_db():
    assert ratio_db(10.0, 1.0) == (pytest.approx(10.0), False)
    assert ratio_db(1.0, 0.0) == (DB_CAP, True)
    assert ratio_db(0.0, 1.0) == (-DB_CAP, True)
    assert is_capped(DB_CAP)
    assert is_capped(-DB_CAP)
    assert not is_capped(299.0)


def test_rel_error():
    x = _tone(3)
    assert rel_error(x, 1.1 * x) == pytest.approx(0.1)
    assert rel_error(x, np.roll(x, 7), delay=7) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError, match="zero reference"):
        rel_error(np.zeros(4), np.ones(4))
    with pytest.raises(DomainError, match="lengths differ"):
        rel_error(np.ones(4), np.ones(5))


def test_snr():
    x = _tone(3)
    assert snr(x, 0.9 * x) == pytest.approx(20.0)
    assert snr(x, x) == DB_CAP
    signal = Signal(samples=x, sample_rate=8000.0)
    assert snr(signal, np.zeros_like(x)) == pytest.approx(0.0)


@pytest.mark.parametrize("scale", [1e-3, 7.0, -2.0])
def test_snr_is_scale_invariant(rng, scale):
    x = _tone(3)
    estimate = x + 0.05 * rng.standard_normal(PERIOD)
    assert snr(scale * x, scale * estimate) == pytest.approx(snr(x, estimate))


def test_segsnr_of_single_frame_is_snr(rng):
    # one 32 ms frame at 8 kHz, SNR inside the clip range
    x = rng.standard_normal(256)
    estimate = x + 0.1 * rng.standard_normal(256)
    value = snr(x, estimate)
    assert 0.0 < value < 35.0
    assert segsnr(x, estimate, sample_rate=8000.0) == pytest.approx(value)


def test_segsnr_of_inverted_signal():
    x = _tone(13, 0.3)
    assert segsnr(x, -x, sample_rate=8000.0) == pytest.approx(-6.0206, abs=1e-4)


def test_segsnr_clips_and_skips_silence(rng):
    x = rng.standard_normal(1024)
    x[:256] = 0.0
    signal = Signal(samples=x, sample_rate=8000.0)
    assert segsnr(signal, x) == pytest.approx(35.0)
    assert segsnr(signal, 0.9 * x) == pytest.approx(20.0)
    assert segsnr(signal, 100 * x) == pytest.approx(-10.0)


def test_segsnr_errors():
    with pytest.raises(DomainError, match="sample rate"):
        segsnr(np.ones(1024), np.ones(1024))
    with pytest.raises(DomainError, match="shorter than one"):
        segsnr(np.ones(100), np.ones(100), sample_rate=8000.0)
    with pytest.raises(DomainError, match="silent"):
        segsnr(np.zeros(512), np.zeros(512), sample_rate=8000.0)


def test_bss_eval_with_pure_interference():
    target = _tone(5)
    interferer = _tone(7, np.pi / 2)
    scores = bss_eval([target, interferer], target + interferer, 0)
    assert scores.sdr == pytest.approx(0.0, abs=1e-9)
    assert scores.sir == pytest.approx(0.0, abs=1e-9)
    assert scores.sar > 200.0


def test_bss_eval_with_pure_artifacts():
    target = _tone(5)
    interferer = _tone(7, np.pi / 2)
    artifact = _tone(11)
    scores = bss_eval([target, interferer], target + artifact, 0)
    assert scores.sdr == pytest.approx(0.0, abs=1e-9)
    assert scores.sar == pytest.approx(0.0, abs=1e-9)
    assert scores.sir > 100.0


def test_bss_eval_perfect_estimate_is_capped():
    target = _tone(5)
    interferer = _tone(7)
    scores = bss_eval([target, interferer], target, 0)
    assert scores.sdr > 200.0
    assert scores.sir > 200.0


def test_bss_components_add_up_to_estimate(rng):
    target = _tone(5)
    interferer = _tone(7, np.pi / 2)
    estimate = 0.8 * target + 0.3 * interferer + 0.1 * rng.standard_normal(PERIOD)
    parts = bss_decompose([target, interferer], estimate, 0)
    assert np.allclose(parts.s_target + parts.e_interf + parts.e_artif, estimate)
    assert np.dot(parts.e_artif, target) == pytest.approx(0.0, abs=1e-9)
    assert np.dot(parts.e_artif, interferer) == pytest.approx(0.0, abs=1e-9)
    assert np.dot(parts.e_interf, target) == pytest.approx(0.0, abs=1e-9)
    scores = bss_eval([target, interferer], estimate, 0)
    energy = float(np.dot(parts.s_target, parts.s_target))
    error = parts.e_interf + parts.e_artif
    expected = 10 * np.log10(energy / float(np.dot(error, error)))
    assert scores.sdr == pytest.approx(expected)


def test_bss_eval_errors():
    target = _tone(5)
    with pytest.raises(DomainError, match="at least 2"):
        bss_eval([target], target, 0)
    with pytest.raises(DomainError, match="out of range"):
        bss_eval([target, _tone(7)], target, 2)
    with pytest.raises(RankError, match="linearly dependent"):
        bss_eval([target, 2.0 * target], target, 0)
