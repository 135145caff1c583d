"""White-noise removal by soft thresholding sub-band coefficients."""

import logging
import math

import numpy as np
from pydantic import BaseModel

from audlet.audio.signal import Signal
from audlet.audio.wav import write_wav
from audlet.config.schemas import DenoisingExperimentSchema, SynthesisMethod
from audlet.experiments.common import (
    BankPair,
    audlet_bank,
    audlet_pair,
    gammatone_bank,
    load_signal,
    reference_pair,
)
from audlet.experiments.tables import render_table
from audlet.filterbank.design import redundancy
from audlet.filterbank.transform import analyze
from audlet.metrics import segsnr, snr
from audlet.processing import soft_threshold

logger = logging.getLogger(__name__)


class DenoisingRow(BaseModel):
    bank: str
    method: SynthesisMethod
    sigma: float
    input_snr: float
    redfac: float
    redundancy: float
    eta: float
    snr: float
    segsnr: float


class DenoisingResult(BaseModel):
    rows: list[DenoisingRow]

    def scores(self, bank: str) -> list[DenoisingRow]:
        return [row for row in self.rows if row.bank == bank]

    @property
    def mean_audlet_snr(self) -> float:
        return float(np.mean([row.snr for row in self.scores("audlet")]))

    def to_table(self) -> str:
        redfacs = sorted({row.redfac for row in self.rows})
        levels = sorted({row.input_snr for row in self.rows})
        rows: list[tuple[str, list[float | None]]] = []
        for level in levels:
            for bank in ("audlet", "gammatone"):
                for measure in ("snr", "segsnr"):
                    values: list[float | None] = []
                    for redfac in redfacs:
                        match = [
                            getattr(r, measure)
                            for r in self.scores(bank)
                            if r.redfac == redfac and r.input_snr == level
                        ]
                        values.append(match[0] if match else None)
                    rows.append((f"{level:+.0f}dB {bank[:5]} {measure}", values))
        return render_table(
            "Denoising output (dB)",
            [f"redfac {r:g}" for r in redfacs],
            rows,
            decibels=True,
        )


def noise_level(clean: Signal, input_snr_db: float) -> float:
    """Standard deviation of white noise giving ``input_snr_db`` against ``clean``."""
    power = clean.energy / len(clean)
    return math.sqrt(power / 10.0 ** (input_snr_db / 10.0))


def denoise(
    noisy: Signal,
    pair: BankPair,
    eta: float,
    schema: DenoisingExperimentSchema,
) -> Signal:
    thresholded = soft_threshold(analyze(noisy, pair.analysis), eta)
    return pair.reconstruct(thresholded, schema.cg_tol, schema.cg_max_iter).signal


def run_denoising(
    schema: DenoisingExperimentSchema,
    clean: Signal | None = None,
) -> DenoisingResult:
    if clean is None:
        clean = load_signal(schema.input_path, schema.sample_rate)
    length = len(clean)
    rng = np.random.default_rng(schema.seed)

    if schema.sigmas is not None:
        levels = [
            (sigma, 10.0 * math.log10(clean.energy / (length * sigma**2)))
            for sigma in schema.sigmas
        ]
    else:
        levels = [(noise_level(clean, level), level) for level in schema.input_snrs]

    bank = audlet_bank(schema, length)
    gammatone = gammatone_bank(schema, length, bank.centers)
    pairs = []
    for redfac in schema.redfacs:
        pair = audlet_pair(bank, redfac)
        reference = reference_pair("gammatone", gammatone, pair.analysis.factors)
        pairs.append((redfac, pair, reference))

    rows = []
    for sigma, level in levels:
        noisy = clean.with_samples(clean.samples + sigma * rng.standard_normal(length))
        eta = schema.eta if schema.eta is not None else schema.eta_factor * sigma
        for redfac, *bank_pairs in pairs:
            for pair in bank_pairs:
                estimate = denoise(noisy, pair, eta, schema)
                row = DenoisingRow(
                    bank=pair.name,
                    method=pair.method,
                    sigma=sigma,
                    input_snr=level,
                    redfac=redfac,
                    redundancy=redundancy(pair.analysis),
                    eta=eta,
                    snr=snr(clean, estimate),
                    segsnr=segsnr(clean, estimate),
                )
                logger.info(
                    "%s input=%.1f dB redfac=%g -> SNR %.2f dB, segSNR %.2f dB",
                    pair.name,
                    level,
                    redfac,
                    row.snr,
                    row.segsnr,
                )
                rows.append(row)
                if schema.output_dir is not None:
                    schema.output_dir.mkdir(parents=True, exist_ok=True)
                    write_wav(
                        schema.output_dir
                        / f"{pair.name}_snr{level:+.0f}_redfac{redfac:g}.wav",
                        estimate,
                    )
    return DenoisingResult(rows=rows)
