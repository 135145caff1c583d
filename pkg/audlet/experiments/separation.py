"""Source separation by masking sub-band coefficients of a two-source mixture."""

import logging
import math
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from audlet.audio.signal import Signal
from audlet.audio.wav import write_wav
from audlet.config.schemas import SeparationExperimentSchema, SynthesisMethod
from audlet.errors import DomainError
from audlet.experiments.common import (
    BankPair,
    audlet_bank,
    audlet_pair,
    audlet_pair_for_factors,
    gammatone_bank,
    load_signal,
    reference_pair,
)
from audlet.experiments.tables import render_table
from audlet.filterbank.bank import Coefficients, FilterBank
from audlet.filterbank.design import redundancy
from audlet.filterbank.transform import analyze
from audlet.io.containers import read_mask
from audlet.io.exports import export_spectrogram_csv
from audlet.metrics import bss_eval, snr
from audlet.processing import Mask, apply_mask

logger = logging.getLogger(__name__)


class SeparationRow(BaseModel):
    bank: str
    method: SynthesisMethod
    redfac: float | None
    redundancy: float
    sdr: float
    sir: float
    sar: float
    snr: float
    capped: tuple[str, ...] = ()


class SeparationResult(BaseModel):
    target_name: str
    rows: list[SeparationRow]

    def scores(self, bank: str) -> list[SeparationRow]:
        return [row for row in self.rows if row.bank == bank]

    @property
    def mean_audlet_sdr(self) -> float:
        return float(np.mean([row.sdr for row in self.scores("audlet")]))

    def to_table(self) -> str:
        audlet_rows = self.scores("audlet")
        columns = [f"R={row.redundancy:.2f}" for row in audlet_rows]
        rows: list[tuple[str, list[float | None]]] = []
        for bank in ("audlet", "gammatone"):
            scores = self.scores(bank)
            for measure in ("sdr", "sir", "sar", "snr"):
                values = [getattr(r, measure) for r in scores]
                rows.append((f"{bank} {measure.upper()}", values))
        title = f"Separation of {self.target_name} (dB)"
        return render_table(title, columns, rows, decibels=True)


def ideal_binary_mask(target: Coefficients, interferer: Coefficients) -> Mask:
    """1 where the target dominates the interferer, 0 elsewhere."""
    return Mask(
        channels=[
            (np.abs(t) >= np.abs(i)).astype(np.float64)
            for t, i in zip(target.channels, interferer.channels, strict=True)
        ],
    )


def separate(
    mixture: Signal,
    pair: BankPair,
    mask: Mask,
    schema: SeparationExperimentSchema,
) -> Signal:
    masked = apply_mask(analyze(mixture, pair.analysis), mask)
    return pair.reconstruct(masked, schema.cg_tol, schema.cg_max_iter).signal


def _score(
    pair: BankPair,
    estimate: Signal,
    stems: tuple[Signal, Signal],
    redfac: float | None,
) -> SeparationRow:
    scores = bss_eval(list(stems), estimate, target_index=0)
    return SeparationRow(
        bank=pair.name,
        method=pair.method,
        redfac=redfac,
        redundancy=redundancy(pair.analysis),
        sdr=scores.sdr,
        sir=scores.sir,
        sar=scores.sar,
        snr=snr(stems[0], estimate),
        capped=scores.capped,
    )


def _write_estimate(
    output_dir: Path,
    pair: BankPair,
    estimate: Signal,
    label: str,
) -> None:
    """Write the separated signal and the spectrogram of its re-analysis."""
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{pair.name}_{label}"
    write_wav(output_dir / f"{stem}.wav", estimate)
    export_spectrogram_csv(
        output_dir / f"{stem}_spectrogram.csv",
        analyze(estimate, pair.analysis),
    )
    logger.debug("Wrote %s outputs to %s", stem, output_dir)


def _mask_pairs(
    paths: list[Path],
    bank: FilterBank,
) -> list[tuple[BankPair, Mask, float | None]]:
    pairs = []
    for path in paths:
        mask_file = read_mask(path)
        geometry = mask_file.geometry
        if (
            geometry.signal_length != bank.signal_length
            or not math.isclose(geometry.sample_rate, bank.sample_rate)
            or not np.allclose(geometry.centers, bank.centers)
        ):
            msg = f"Mask {path} was not made for {bank}"
            raise DomainError(msg)
        pair = audlet_pair_for_factors(bank, geometry.factors)
        pairs.append((pair, mask_file.mask, None))
    return pairs


def _load_stems(schema: SeparationExperimentSchema) -> tuple[Signal, Signal, Signal]:
    target = load_signal(schema.target_path, schema.sample_rate)
    interferer = load_signal(schema.interferer_path, schema.sample_rate, len(target))
    if schema.mixture_path is None:
        mixture = target.with_samples(target.samples + interferer.samples)
    else:
        mixture = load_signal(schema.mixture_path, schema.sample_rate, len(target))
    return mixture, target, interferer


def run_separation(
    schema: SeparationExperimentSchema,
    stems: tuple[Signal, Signal] | None = None,
) -> SeparationResult:
    """Separate the target with AUDlet and gammatone banks sharing one mask.

    ``stems`` (target, interferer) replaces the WAV inputs; the mixture is then
    their sum.
    """
    if stems is None:
        mixture, target, interferer = _load_stems(schema)
    else:
        target, interferer = stems
        mixture = target.with_samples(target.samples + interferer.samples)
    length = len(mixture)
    bank = audlet_bank(schema, length)
    gammatone = gammatone_bank(schema, length, bank.centers)

    if schema.mask_paths:
        runs = _mask_pairs(schema.mask_paths, bank)
    else:
        runs = []
        for redfac in schema.redfacs:
            pair = audlet_pair(bank, redfac)
            mask = ideal_binary_mask(
                analyze(target, pair.analysis),
                analyze(interferer, pair.analysis),
            )
            runs.append((pair, mask, redfac))

    rows = []
    for pair, mask, redfac in runs:
        reference = reference_pair("gammatone", gammatone, pair.analysis.factors)
        for current in (pair, reference):
            estimate = separate(mixture, current, mask, schema)
            row = _score(current, estimate, (target, interferer), redfac)
            logger.info(
                "%s R=%.2f SDR=%.2f SIR=%.2f SAR=%.2f",
                current.name,
                row.redundancy,
                row.sdr,
                row.sir,
                row.sar,
            )
            rows.append(row)
            if schema.output_dir is not None:
                label = (
                    f"redfac{redfac:g}"
                    if redfac is not None
                    else f"R{row.redundancy:.2f}"
                )
                _write_estimate(schema.output_dir, current, estimate, label)
    return SeparationResult(target_name=schema.target_name, rows=rows)
