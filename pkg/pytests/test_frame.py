import numpy as np
import pytest

from audlet.config.schemas import BankRole
from audlet.errors import DomainError, NotPainlessError
from audlet.filterbank.design import audlet_filters, redundancy, select_downsampling
from audlet.filterbank.frame import (
    alias_terms,
    diagnostics,
    estimate_frame_bounds,
    painless_dual,
    pr_residual,
    time_reversed_dual,
)
from audlet.filterbank.transform import (
    analyze,
    apply_frame_operator,
    filterbank_response,
    synthesize,
)
from audlet.metrics import rel_error


@pytest.fixture(scope="module")
def tiny_bank():
    """Undersampled bank on 128 bins, small enough for explicit matrices."""
    bank = audlet_filters(8000.0, 128, density=1.0)
    return select_downsampling(bank, 0.5).bank


@pytest.fixture(scope="module")
def tiny_frame_matrix(tiny_bank):
    identity = np.eye(tiny_bank.signal_length)
    columns = [apply_frame_operator(e, tiny_bank).samples for e in identity]
    return np.stack(columns, axis=1)


def test_alias_terms_match_explicit_spectral_matrix(tiny_bank, tiny_frame_matrix):
    length = tiny_bank.signal_length
    terms = alias_terms(tiny_bank)
    spectral = np.fft.fft(np.fft.ifft(tiny_frame_matrix, axis=1), axis=0)
    rows = np.arange(length)
    step = length // terms.lcm

    assert terms.lcm > 1
    assert np.allclose(spectral[rows, rows], terms.diagonal, atol=1e-10)
    spread = np.zeros(length)
    covered = np.zeros((length, length), dtype=bool)
    covered[rows, rows] = True
    for n in range(1, terms.lcm):
        shifted = (rows + n * step) % length
        magnitude = np.abs(spectral[rows, shifted])
        assert np.max(magnitude) == pytest.approx(terms.alias_norms[n - 1], abs=1e-10)
        spread += magnitude
        covered[rows, shifted] = True
    assert np.allclose(spread, terms.alias_spread, atol=1e-9)
    # nothing outside the alias diagonals
    assert np.max(np.abs(spectral[~covered])) < 1e-10


def test_diagonal_term_is_filterbank_response(undersampled_bank):
    terms = alias_terms(undersampled_bank)
    assert np.allclose(terms.diagonal, filterbank_response(undersampled_bank))


def test_painless_bank_has_no_aliasing(painless_bank):
    terms = alias_terms(painless_bank)
    assert np.max(terms.alias_norms, initial=0.0) < 1e-12


def test_alias_terms_require_shared_geometry(small_bank, painless_bank):
    with pytest.raises(DomainError, match="does not share the geometry"):
        alias_terms(small_bank, painless_bank)


def test_painless_dual_reconstructs(painless_bank, noise):
    dual = painless_dual(painless_bank)
    assert dual.role == BankRole.SYNTHESIS
    assert dual.fingerprint == painless_bank.fingerprint
    assert pr_residual(painless_bank, dual) < 1e-10
    restored = synthesize(analyze(noise, painless_bank), dual)
    assert rel_error(noise.samples, restored.samples) < 1e-10


def test_painless_dual_of_dense_bank(small_bank, noise):
    restored = synthesize(analyze(noise, small_bank), painless_dual(small_bank))
    assert rel_error(noise.samples, restored.samples) < 1e-10


def test_painless_dual_responses(painless_bank):
    dual = painless_dual(painless_bank)
    response = filterbank_response(painless_bank)
    length = painless_bank.signal_length
    for ana, syn in zip(painless_bank.channels, dual.channels, strict=True):
        assert syn.start == ana.start
        expected = ana.response / response[ana.indices(length)]
        assert np.allclose(syn.response, expected)


def test_painless_dual_needs_support_condition(undersampled_bank):
    with pytest.raises(NotPainlessError, match="painless support condition"):
        painless_dual(undersampled_bank)


def test_painless_dual_needs_covered_spectrum(gappy_bank):
    with pytest.raises(NotPainlessError, match="uncovered"):
        painless_dual(gappy_bank)


def test_pr_residual_of_bank_with_itself_is_large(painless_bank):
    assert pr_residual(painless_bank, painless_bank) > 0.1


def test_diagnostics_of_painless_bank(painless_bank):
    report = diagnostics(painless_bank)
    response = filterbank_response(painless_bank)
    assert report.painless
    assert report.diag_dominant
    assert report.lower_bound == pytest.approx(float(np.min(response)))
    assert report.upper_bound == pytest.approx(float(np.max(response)))
    assert report.redundancy == pytest.approx(redundancy(painless_bank))
    assert report.channel_multiplicities == [
        report.lcm // d for d in painless_bank.factors
    ]
    assert not report.bounds_estimated


def test_diagnostics_of_gappy_bank(gappy_bank):
    report = diagnostics(gappy_bank)
    assert not report.painless
    assert not report.diag_dominant
    assert report.lower_bound == 0.0


def test_dominance_bounds_contain_frame_inequality(undersampled_bank, rng):
    report = diagnostics(undersampled_bank)
    assert not report.painless
    for _ in range(20):
        x = rng.standard_normal(undersampled_bank.signal_length)
        c = analyze(x, undersampled_bank)
        energy = c.weighted_energy(undersampled_bank.weights)
        norm = float(np.dot(x, x))
        assert report.lower_bound * norm <= energy * (1 + 1e-9)
        assert energy <= report.upper_bound * norm * (1 + 1e-9)


def test_estimated_bounds_match_eigenvalues(tiny_bank, tiny_frame_matrix):
    eigenvalues = np.linalg.eigvalsh((tiny_frame_matrix + tiny_frame_matrix.T) / 2)
    estimate = estimate_frame_bounds(tiny_bank, seed=3)
    assert 0.0 < estimate.lower <= estimate.upper
    assert eigenvalues[-1] * 0.9 <= estimate.upper <= eigenvalues[-1] * (1 + 1e-8)
    assert eigenvalues[0] * (1 - 1e-6) <= estimate.lower <= eigenvalues[0] * 1.1
    assert estimate.iterations >= 1


def test_diagnostics_with_estimated_bounds(tiny_bank):
    report = diagnostics(tiny_bank, estimate_bounds=True)
    assert report.bounds_estimated
    assert 0.0 < report.lower_bound <= report.upper_bound


def test_time_reversed_dual_scales_the_analysis_bank(painless_bank, noise):
    reversed_bank = time_reversed_dual(painless_bank)
    response = filterbank_response(painless_bank)
    gain = np.sum(response) / np.sum(response**2)
    assert reversed_bank.role == BankRole.SYNTHESIS
    for ana, syn in zip(painless_bank.channels, reversed_bank.channels, strict=True):
        assert np.allclose(syn.response, gain * ana.response)

    restored = synthesize(analyze(noise, painless_bank), reversed_bank)
    expected = gain * apply_frame_operator(noise, painless_bank).samples
    assert np.allclose(restored.samples, expected)
