"""Reconstruction error of AUDlet, gammatone and roex banks over redundancies."""

import logging

import numpy as np
from pydantic import BaseModel

from audlet.audio.signal import Signal
from audlet.config.schemas import ComparisonExperimentSchema, SynthesisMethod
from audlet.experiments.common import (
    BankPair,
    audlet_bank,
    audlet_pair,
    gammatone_bank,
    load_signal,
    reference_pair,
    roex_bank,
)
from audlet.experiments.tables import render_table
from audlet.filterbank.design import redundancy
from audlet.filterbank.transform import analyze
from audlet.metrics import rel_error

logger = logging.getLogger(__name__)


class ComparisonRow(BaseModel):
    redfac: float
    redundancy: float
    audlet_method: SynthesisMethod
    audlet_error: float
    cg_iterations: int | None = None
    gammatone_error: float
    roex_error: float | None = None


class ComparisonResult(BaseModel):
    sample_rate: float
    signal_length: int
    channel_count: int
    rows: list[ComparisonRow]

    @property
    def worst_audlet_error(self) -> float:
        return max(row.audlet_error for row in self.rows)

    def to_table(self) -> str:
        rows: list[tuple[str, list[float | None]]] = [
            ("R", [row.redundancy for row in self.rows]),
            ("audlet", [row.audlet_error for row in self.rows]),
        ]
        if any(row.roex_error is not None for row in self.rows):
            rows.append(("roex", [row.roex_error for row in self.rows]))
        rows.append(("gammatone", [row.gammatone_error for row in self.rows]))
        return render_table(
            f"Relative reconstruction errors ({self.channel_count} channels, "
            f"L={self.signal_length})",
            [f"redfac {row.redfac:g}" for row in self.rows],
            rows,
        )


def _round_trip_error(
    pair: BankPair,
    signal: Signal,
    schema: ComparisonExperimentSchema,
) -> tuple[float, int | None]:
    c = analyze(signal, pair.analysis)
    reconstruction = pair.reconstruct(c, schema.cg_tol, schema.cg_max_iter)
    return rel_error(signal, reconstruction.signal), reconstruction.cg_iterations


def run_comparison(
    schema: ComparisonExperimentSchema,
    signal: Signal | None = None,
) -> ComparisonResult:
    if signal is None:
        if schema.input_path is not None:
            signal = load_signal(
                schema.input_path,
                schema.sample_rate,
                schema.signal_length,
            )
        else:
            rng = np.random.default_rng(schema.seed)
            signal = Signal(
                samples=rng.standard_normal(schema.signal_length),
                sample_rate=schema.sample_rate,
            )
    length = len(signal)

    bank = audlet_bank(schema, length)
    gammatone = gammatone_bank(schema, length, bank.centers)
    roex = roex_bank(schema, length, bank.centers) if schema.include_roex else None

    rows = []
    for redfac in schema.redfacs:
        pair = audlet_pair(bank, redfac)
        audlet_error, iterations = _round_trip_error(pair, signal, schema)
        gammatone_error, _ = _round_trip_error(
            reference_pair("gammatone", gammatone, pair.analysis.factors),
            signal,
            schema,
        )
        roex_error = None
        if roex is not None:
            roex_error, _ = _round_trip_error(
                reference_pair("roex", roex, pair.analysis.factors),
                signal,
                schema,
            )
        row = ComparisonRow(
            redfac=redfac,
            redundancy=redundancy(pair.analysis),
            audlet_method=pair.method,
            audlet_error=audlet_error,
            cg_iterations=iterations,
            gammatone_error=gammatone_error,
            roex_error=roex_error,
        )
        logger.info(
            "redfac=%g R=%.3f audlet(%s)=%.2e gammatone=%.3f",
            redfac,
            row.redundancy,
            pair.method.value,
            audlet_error,
            gammatone_error,
        )
        rows.append(row)
    return ComparisonResult(
        sample_rate=schema.sample_rate,
        signal_length=length,
        channel_count=len(bank),
        rows=rows,
    )
