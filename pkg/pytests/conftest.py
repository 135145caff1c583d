import numpy as np
import pytest
from click.testing import CliRunner

from audlet.audio.signal import Signal
from audlet.config.schemas import CenterSpacing
from audlet.filterbank.design import audlet_filters, select_downsampling

SMALL_RATE = 8000.0
SMALL_LENGTH = 1024
TABLE_RATE = 16000.0
TABLE_LENGTH = 60480


@pytest.fixture
def cli_runner():
    return CliRunner()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_bank():
    """ERB Hann bank at 8 kHz on 1024 bins, no downsampling."""
    return audlet_filters(SMALL_RATE, SMALL_LENGTH, density=1.0)


@pytest.fixture(scope="session")
def painless_bank(small_bank):
    return select_downsampling(small_bank, 1.0).bank


@pytest.fixture(scope="session")
def undersampled_bank(small_bank):
    return select_downsampling(small_bank, 0.5).bank


@pytest.fixture(scope="session")
def gappy_bank():
    """Filters an eighth of an ERB wide on a one-ERB grid leave bins uncovered."""
    return audlet_filters(SMALL_RATE, SMALL_LENGTH, density=1.0, bw_divisor=8.0)


@pytest.fixture(scope="session")
def table_bank():
    return audlet_filters(
        TABLE_RATE,
        TABLE_LENGTH,
        density=1.0,
        spacing=CenterSpacing.FIT,
    )


@pytest.fixture
def noise(rng):
    return Signal(samples=rng.standard_normal(SMALL_LENGTH), sample_rate=SMALL_RATE)


def harmonic_signal(
    f0: float,
    length: int,
    sample_rate: float,
    max_freq: float,
    min_freq: float = 0.0,
) -> Signal:
    """Sum of harmonics of f0 in [min_freq, max_freq] with a slow amplitude envelope."""
    t = np.arange(length) / sample_rate
    samples = np.zeros(length)
    for harmonic in np.arange(f0, max_freq, f0):
        if harmonic >= min_freq:
            samples += np.sin(2 * np.pi * harmonic * t) / np.sqrt(harmonic / f0)
    envelope = 0.6 + 0.4 * np.sin(2 * np.pi * 3.0 * t)
    samples *= envelope / np.max(np.abs(samples * envelope)) * 0.5
    return Signal(samples=samples, sample_rate=sample_rate)
