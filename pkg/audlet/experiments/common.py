"""Shared steps of the experiment recipes: signals, bank pairs, reconstruction."""

import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from audlet.audio.signal import Signal
from audlet.audio.wav import read_wav
from audlet.config.schemas import BaseExperimentSchema, SynthesisMethod
from audlet.errors import DomainError, NotPainlessError
from audlet.filterbank.bank import Coefficients, FilterBank
from audlet.filterbank.design import (
    audlet_filters,
    gammatone_filters,
    roex_filters,
    select_downsampling,
    with_downsampling,
)
from audlet.filterbank.frame import painless_dual, time_reversed_dual
from audlet.filterbank.solver import cg_synthesize
from audlet.filterbank.transform import synthesize

# experiment signals are cut to a multiple of this so L has many divisors
LENGTH_BLOCK = 5040

logger = logging.getLogger(__name__)


class Reconstruction(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    signal: Signal
    method: SynthesisMethod
    cg_iterations: int | None = None
    cg_converged: bool = True


class BankPair(BaseModel):
    """Analysis bank with the synthesis route used to invert it."""

    model_config = ConfigDict(frozen=True)

    name: str
    analysis: FilterBank
    # None: invert through CG on the analysis bank
    synthesis: FilterBank | None
    method: SynthesisMethod

    def reconstruct(self, c: Coefficients, tol: float, max_iter: int) -> Reconstruction:
        if self.synthesis is not None:
            return Reconstruction(
                signal=synthesize(c, self.synthesis),
                method=self.method,
            )
        result = cg_synthesize(c, self.analysis, tol, max_iter)
        return Reconstruction(
            signal=result.signal,
            method=self.method,
            cg_iterations=result.report.iterations,
            cg_converged=result.report.converged,
        )


def usable_length(samples: int, block: int = LENGTH_BLOCK) -> int:
    length = samples - samples % block
    if length == 0:
        msg = f"Signal of {samples} samples is shorter than one {block}-sample block"
        raise DomainError(msg)
    return length


def load_signal(path: Path, sample_rate: float, length: int | None = None) -> Signal:
    """Read, resample and cut a WAV file to ``length`` or to a usable length."""
    signal = read_wav(path, target_rate=sample_rate)
    target = usable_length(len(signal)) if length is None else length
    if len(signal) < target:
        samples = np.pad(signal.samples, (0, target - len(signal)))
    else:
        samples = signal.samples[:target]
    return signal.with_samples(samples)


def audlet_bank(schema: BaseExperimentSchema, signal_length: int) -> FilterBank:
    return audlet_filters(
        schema.sample_rate,
        signal_length,
        scale=schema.scale,
        density=schema.density,
        bw_divisor=schema.bw_divisor,
        spacing=schema.spacing,
    )


def audlet_pair_for_factors(bank: FilterBank, factors: tuple[int, ...]) -> BankPair:
    """Painless dual when the factors allow it, CG otherwise."""
    analysis = with_downsampling(bank, factors)
    try:
        synthesis = painless_dual(analysis)
    except NotPainlessError:
        return BankPair(
            name="audlet",
            analysis=analysis,
            synthesis=None,
            method=SynthesisMethod.CG,
        )
    return BankPair(
        name="audlet",
        analysis=analysis,
        synthesis=synthesis,
        method=SynthesisMethod.PAINLESS,
    )


def audlet_pair(bank: FilterBank, redfac: float) -> BankPair:
    return audlet_pair_for_factors(bank, select_downsampling(bank, redfac).bank.factors)


def reference_pair(name: str, bank: FilterBank, factors: tuple[int, ...]) -> BankPair:
    """Gammatone / roex bank with the AUDlet factors and time-reversed synthesis."""
    analysis = with_downsampling(bank, factors)
    return BankPair(
        name=name,
        analysis=analysis,
        synthesis=time_reversed_dual(analysis),
        method=SynthesisMethod.REVERSED,
    )


def gammatone_bank(
    schema: BaseExperimentSchema,
    signal_length: int,
    centers: np.ndarray,
) -> FilterBank:
    return gammatone_filters(
        schema.sample_rate,
        signal_length,
        centers,
        ir_length=min(schema.ir_length, signal_length),
        bw_divisor=schema.bw_divisor,
    )


def roex_bank(
    schema: BaseExperimentSchema,
    signal_length: int,
    centers: np.ndarray,
) -> FilterBank:
    return roex_filters(
        schema.sample_rate,
        signal_length,
        centers,
        bw_divisor=schema.bw_divisor,
        scale=schema.scale,
    )
