import numpy as np
import pytest

from audlet.config.schemas import BankRole
from audlet.errors import CapacityError, DomainError, FrameError
from audlet.filterbank.frame import painless_dual
from audlet.filterbank.transform import analyze, synthesize
from audlet.filterbank.uniform import (
    analyze_uniform,
    regroup,
    synthesize_uniform,
    to_uniform,
    uniform_dual,
    uniform_pr_residual,
    uniform_to_filterbank,
)
from audlet.metrics import rel_error


@pytest.fixture(scope="module")
def undersampled_uniform(undersampled_bank):
    return to_uniform(undersampled_bank)


def test_uniform_expansion_geometry(undersampled_bank, undersampled_uniform):
    ub = undersampled_uniform
    lcm = int(np.lcm.reduce(undersampled_bank.factors))
    assert ub.lcm == lcm
    assert len(ub) == sum(lcm // d for d in undersampled_bank.factors)
    assert all(channel.factor == lcm for channel in ub.channels)
    assert ub.multiplicities == [lcm // d for d in undersampled_bank.factors]
    assert ub.origins[0] == (0, 0)


def test_regrouped_uniform_analysis_equals_direct_analysis(
    undersampled_bank,
    undersampled_uniform,
    noise,
):
    sequences = analyze_uniform(noise, undersampled_uniform)
    size = noise.samples.shape[0] // undersampled_uniform.lcm
    assert all(y.shape == (size,) for y in sequences)
    regrouped = regroup(undersampled_uniform, sequences)
    direct = analyze(noise, undersampled_bank)
    assert regrouped.fingerprint == direct.fingerprint
    for got, expected in zip(regrouped.channels, direct.channels, strict=True):
        assert np.allclose(got, expected, atol=1e-10)


def test_regroup_checks_sequence_count(undersampled_uniform):
    with pytest.raises(DomainError, match="uniform sequences"):
        regroup(undersampled_uniform, [])


def test_uniform_dual_reconstructs_undersampled_bank(
    undersampled_bank,
    undersampled_uniform,
    noise,
):
    dual = uniform_dual(undersampled_uniform)
    assert dual.role == BankRole.SYNTHESIS
    assert uniform_pr_residual(undersampled_uniform, dual) < 1e-9
    restored = synthesize_uniform(analyze(noise, undersampled_bank), dual)
    assert rel_error(noise.samples, restored.samples) < 1e-9


def test_uniform_dual_of_painless_bank_is_painless_dual(painless_bank, noise):
    mapped = uniform_to_filterbank(uniform_dual(to_uniform(painless_bank)))
    expected = painless_dual(painless_bank)
    assert mapped.role == BankRole.SYNTHESIS
    assert np.allclose(mapped.dense_responses(), expected.dense_responses(), atol=1e-10)
    restored = synthesize(analyze(noise, painless_bank), mapped)
    assert rel_error(noise.samples, restored.samples) < 1e-10


def test_uncovered_bins_are_not_a_frame(gappy_bank):
    with pytest.raises(FrameError, match="not a frame"):
        uniform_dual(to_uniform(gappy_bank))


def test_capacity_limits(undersampled_bank, monkeypatch):
    monkeypatch.setenv("AUDLET_MAX_LCM", "2")
    with pytest.raises(CapacityError, match="max_lcm=2"):
        to_uniform(undersampled_bank)
    monkeypatch.setenv("AUDLET_MAX_LCM", "8192")
    monkeypatch.setenv("AUDLET_MAX_UNIFORM_CHANNELS", "3")
    with pytest.raises(CapacityError, match="max_uniform_channels=3"):
        to_uniform(undersampled_bank)


def test_uniform_synthesis_rejects_foreign_coefficients(
    small_bank,
    undersampled_uniform,
    noise,
):
    dual = uniform_dual(undersampled_uniform)
    with pytest.raises(DomainError, match="do not belong"):
        synthesize_uniform(analyze(noise, small_bank), dual)
