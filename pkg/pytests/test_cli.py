import numpy as np
import pytest

from audlet.audio.signal import Signal
from audlet.audio.wav import read_wav, write_wav
from audlet.cli import manager
from audlet.errors import EXIT_FORMAT, EXIT_NUMERICAL, EXIT_USAGE
from audlet.metrics import rel_error
from pytests.conftest import harmonic_signal

RATE = 8000
LENGTH = 1024


@pytest.fixture
def bank_file(cli_runner, tmp_path):
    path = tmp_path / "bank.json"
    result = cli_runner.invoke(
        manager,
        ["design", "--fs", str(RATE), "--len", str(LENGTH), "-o", str(path)],
    )
    assert result.exit_code == 0, result.output
    return path


@pytest.fixture
def wav_file(tmp_path, rng):
    path = tmp_path / "noise.wav"
    write_wav(path, Signal(samples=0.1 * rng.standard_normal(LENGTH), sample_rate=RATE))
    return path


@pytest.fixture
def coefficient_file(cli_runner, tmp_path, bank_file, wav_file):
    path = tmp_path / "noise.audc"
    result = cli_runner.invoke(
        manager,
        ["analyze", "-b", str(bank_file), "-i", str(wav_file), "-o", str(path)],
    )
    assert result.exit_code == 0, result.output
    return path


def _synthesize(cli_runner, bank_file, coefficient_file, output, *options):
    return cli_runner.invoke(
        manager,
        [
            "synthesize",
            "-b",
            str(bank_file),
            "-c",
            str(coefficient_file),
            "-o",
            str(output),
            *options,
        ],
    )


def test_design_reports_bank(cli_runner, tmp_path):
    path = tmp_path / "bank.json"
    result = cli_runner.invoke(
        manager,
        ["design", "--fs", "8000", "--len", "1024", "--redfac", "1", "-o", str(path)],
    )
    assert result.exit_code == 0, result.output
    assert "channels (K+1):" in result.output
    assert "redundancy R:" in result.output
    assert "painless:       True" in result.output
    assert "frame bounds:" in result.output
    assert path.exists()


@pytest.mark.parametrize("method", ["painless", "uniform", "cg"])
def test_round_trip(
    cli_runner,
    tmp_path,
    bank_file,
    coefficient_file,
    wav_file,
    method,
):
    output = tmp_path / f"restored_{method}.wav"
    result = _synthesize(
        cli_runner,
        bank_file,
        coefficient_file,
        output,
        "--method",
        method,
    )
    assert result.exit_code == 0, result.output
    original = read_wav(wav_file)
    restored = read_wav(output)
    assert rel_error(original, restored) < 1e-6
    if method == "cg":
        assert "CG iterations:" in result.output


def test_reversed_synthesis_runs(cli_runner, tmp_path, bank_file, coefficient_file):
    output = tmp_path / "reversed.wav"
    result = _synthesize(
        cli_runner,
        bank_file,
        coefficient_file,
        output,
        "--method",
        "reversed",
    )
    assert result.exit_code == 0, result.output
    assert len(read_wav(output)) == LENGTH


def test_unconverged_cg_exits_with_numerical_failure(
    cli_runner,
    tmp_path,
    bank_file,
    coefficient_file,
):
    output = tmp_path / "best.wav"
    result = _synthesize(
        cli_runner,
        bank_file,
        coefficient_file,
        output,
        "--method",
        "cg",
        "--maxit",
        "0",
    )
    assert result.exit_code == EXIT_NUMERICAL
    assert "did not converge" in result.output
    assert output.exists()


def test_length_mismatch_is_a_usage_error(cli_runner, tmp_path, bank_file):
    wav = tmp_path / "short.wav"
    write_wav(wav, Signal(samples=np.zeros(LENGTH // 2), sample_rate=RATE))
    result = cli_runner.invoke(
        manager,
        ["analyze", "-b", str(bank_file), "-i", str(wav), "-o", str(tmp_path / "c")],
    )
    assert result.exit_code == EXIT_USAGE
    assert "does not match the bank length" in result.output


def test_fit_length_pads_the_input(cli_runner, tmp_path, bank_file):
    wav = tmp_path / "short.wav"
    write_wav(wav, Signal(samples=np.ones(LENGTH // 2), sample_rate=RATE))
    result = cli_runner.invoke(
        manager,
        [
            "analyze",
            "-b",
            str(bank_file),
            "-i",
            str(wav),
            "-o",
            str(tmp_path / "c.audc"),
            "--fit-length",
            "--single",
        ],
    )
    assert result.exit_code == 0, result.output


def test_corrupt_descriptor_is_a_format_error(cli_runner, tmp_path, wav_file):
    bank = tmp_path / "bank.json"
    bank.write_text("{}", encoding="utf-8")
    result = cli_runner.invoke(
        manager,
        ["analyze", "-b", str(bank), "-i", str(wav_file), "-o", str(tmp_path / "c")],
    )
    assert result.exit_code == EXIT_FORMAT


def test_domain_errors_are_usage_errors(cli_runner, tmp_path):
    result = cli_runner.invoke(
        manager,
        ["design", "--fs", "16000", "--len", "16", "-o", str(tmp_path / "b.json")],
    )
    assert result.exit_code == EXIT_USAGE
    assert "zero support" in result.output


def test_density_and_count_are_exclusive(cli_runner, tmp_path):
    result = cli_runner.invoke(
        manager,
        ["design", "--len", "1024", "--v", "1", "--k", "8", "-o", str(tmp_path / "b")],
    )
    assert result.exit_code == EXIT_USAGE


def test_respond_writes_csv(cli_runner, tmp_path, bank_file):
    output = tmp_path / "response.csv"
    result = cli_runner.invoke(
        manager,
        ["respond", "-b", str(bank_file), "-o", str(output)],
    )
    assert result.exit_code == 0, result.output
    assert output.read_text(encoding="utf-8").startswith("freq_hz,H0,")


def test_spectrogram_writes_csv(cli_runner, tmp_path, coefficient_file):
    output = tmp_path / "spectrogram.csv"
    result = cli_runner.invoke(
        manager,
        ["spectrogram", "-c", str(coefficient_file), "-o", str(output)],
    )
    assert result.exit_code == 0, result.output
    assert output.read_text(encoding="utf-8").startswith("time_s,")


def test_compare_gammatone(cli_runner):
    result = cli_runner.invoke(
        manager,
        [
            "compare-gammatone",
            "--fs",
            "8000",
            "--len",
            "5040",
            "--redfac",
            "1",
            "--no-roex",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "Relative reconstruction errors" in result.output
    assert "gammatone" in result.output
    assert "roex" not in result.output


def test_mask_separate_writes_outputs(cli_runner, tmp_path):
    target = harmonic_signal(125.0, 5040, 8000.0, 1000.0)
    interferer = harmonic_signal(310.0, 5040, 8000.0, 3900.0, min_freq=2000.0)
    write_wav(tmp_path / "target.wav", target.with_samples(0.3 * target.samples))
    write_wav(
        tmp_path / "interferer.wav",
        interferer.with_samples(0.3 * interferer.samples),
    )
    output_dir = tmp_path / "separated"
    result = cli_runner.invoke(
        manager,
        [
            "mask-separate",
            "--target",
            str(tmp_path / "target.wav"),
            "--interferer",
            str(tmp_path / "interferer.wav"),
            "--fs",
            "8000",
            "--v",
            "1",
            "--bwdiv",
            "1",
            "--redfac",
            "1",
            "--output-dir",
            str(output_dir),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "audlet SDR" in result.output
    assert len(read_wav(output_dir / "audlet_redfac1.wav")) == 5040
    spectrogram = output_dir / "gammatone_redfac1_spectrogram.csv"
    assert spectrogram.read_text(encoding="utf-8").startswith("time_s,")


def test_design_is_deterministic(cli_runner, tmp_path):
    outputs = [tmp_path / "first.json", tmp_path / "second.json"]
    for output in outputs:
        result = cli_runner.invoke(
            manager,
            ["design", "--fs", str(RATE), "--len", str(LENGTH), "-o", str(output)],
        )
        assert result.exit_code == 0, result.output
    assert outputs[0].read_bytes() == outputs[1].read_bytes()


def test_analyze_is_deterministic(cli_runner, tmp_path, bank_file, wav_file):
    outputs = [tmp_path / "first.audc", tmp_path / "second.audc"]
    for output in outputs:
        result = cli_runner.invoke(
            manager,
            ["analyze", "-b", str(bank_file), "-i", str(wav_file), "-o", str(output)],
        )
        assert result.exit_code == 0, result.output
    assert outputs[0].read_bytes() == outputs[1].read_bytes()
