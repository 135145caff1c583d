"""Frame diagnostics and explicit dual banks."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from audlet.config.commons import FRAME_BOUND_ITERATIONS, FRAME_BOUND_RTOL
from audlet.config.schemas import BankRole
from audlet.config.settings import get_settings
from audlet.errors import NotPainlessError
from audlet.filterbank.aliasing import AliasTerms, alias_terms
from audlet.filterbank.bank import FilterBank
from audlet.filterbank.design import redundancy
from audlet.filterbank.solver import conjugate_gradient, frame_preconditioner
from audlet.filterbank.transform import apply_frame_operator, filterbank_response

__all__ = [
    "AliasTerms",
    "FrameBoundEstimate",
    "FrameDiagnostics",
    "alias_terms",
    "apply_frame_operator",
    "diagnostics",
    "estimate_frame_bounds",
    "painless_dual",
    "pr_residual",
    "time_reversed_dual",
]

logger = logging.getLogger(__name__)


class FrameBoundEstimate(BaseModel):
    lower: float
    upper: float
    lower_converged: bool
    upper_converged: bool
    iterations: int


class FrameDiagnostics(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    response: np.ndarray
    alias_norms: np.ndarray
    lower_bound: float
    upper_bound: float
    dominance_lower: float
    dominance_upper: float
    painless: bool
    diag_dominant: bool
    redundancy: float
    lcm: int
    channel_multiplicities: list[int]
    bounds_estimated: bool = False
    bounds_converged: bool = True


def pr_residual(fb_ana: FilterBank, fb_syn: FilterBank) -> float:
    """max over bins and shifts of |T_n - delta_n|; 0 for perfect reconstruction."""
    terms = alias_terms(fb_ana, fb_syn)
    residual = float(np.max(np.abs(terms.diagonal - 1.0)))
    if terms.alias_norms.size:
        residual = max(residual, float(np.max(terms.alias_norms)))
    logger.debug("PR residual of %s / %s: %.3e", fb_ana, fb_syn, residual)
    return residual


def estimate_frame_bounds(
    fb: FilterBank,
    n_iter: int = FRAME_BOUND_ITERATIONS,
    seed: int = 0,
    rtol: float = FRAME_BOUND_RTOL,
) -> FrameBoundEstimate:
    """Largest and smallest eigenvalue of S by (inverse) power iteration."""
    rng = np.random.default_rng(seed)
    settings = get_settings()
    length = fb.signal_length

    x = rng.standard_normal(length)
    x /= np.linalg.norm(x)
    upper = 0.0
    upper_converged = False
    iterations = 0
    for iterations in range(1, n_iter + 1):  # noqa: B007
        y = apply_frame_operator(x, fb).samples
        estimate = float(np.dot(x, y))
        x = y / np.linalg.norm(y)
        if abs(estimate - upper) <= rtol * abs(estimate):
            upper = estimate
            upper_converged = True
            break
        upper = estimate

    x = rng.standard_normal(length)
    x /= np.linalg.norm(x)
    inverse = 0.0
    lower_converged = False
    pre_op = frame_preconditioner(fb)

    def frame_operator(v: np.ndarray) -> np.ndarray:
        return apply_frame_operator(v, fb).samples

    for _ in range(n_iter):
        z, report = conjugate_gradient(
            x,
            frame_operator,
            pre_op,
            settings.cg_tol,
            settings.cg_max_iter,
        )
        if not report.converged:
            # S is (numerically) singular on this direction
            logger.warning("Inner CG solve failed while estimating the lower bound")
            break
        estimate = float(np.dot(x, z))
        x = z / np.linalg.norm(z)
        if abs(estimate - inverse) <= rtol * abs(estimate):
            inverse = estimate
            lower_converged = True
            break
        inverse = estimate
    lower = 1.0 / inverse if inverse > 0 else 0.0
    return FrameBoundEstimate(
        lower=lower,
        upper=upper,
        lower_converged=lower_converged,
        upper_converged=upper_converged,
        iterations=iterations,
    )


def diagnostics(fb: FilterBank, *, estimate_bounds: bool = False) -> FrameDiagnostics:
    response = filterbank_response(fb)
    terms = alias_terms(fb)
    painless = fb.is_painless_supported and float(np.min(response)) > 0.0
    dominance_lower = float(np.min(response - terms.alias_spread))
    dominance_upper = float(np.max(response + terms.alias_spread))

    bounds_converged = True
    if painless:
        lower, upper = float(np.min(response)), float(np.max(response))
    elif estimate_bounds:
        estimate = estimate_frame_bounds(fb)
        lower, upper = estimate.lower, estimate.upper
        bounds_converged = estimate.lower_converged and estimate.upper_converged
    else:
        lower, upper = max(dominance_lower, 0.0), dominance_upper

    result = FrameDiagnostics(
        response=response,
        alias_norms=terms.alias_norms,
        lower_bound=lower,
        upper_bound=upper,
        dominance_lower=dominance_lower,
        dominance_upper=dominance_upper,
        painless=painless,
        diag_dominant=dominance_lower > 0.0,
        redundancy=redundancy(fb),
        lcm=terms.lcm,
        channel_multiplicities=[terms.lcm // d for d in fb.factors],
        bounds_estimated=estimate_bounds and not painless,
        bounds_converged=bounds_converged,
    )
    logger.info(
        "%s: painless=%s diag_dominant=%s A=%.4g B=%.4g R=%.3f",
        fb,
        result.painless,
        result.diag_dominant,
        lower,
        upper,
        result.redundancy,
    )
    return result


def painless_dual(fb: FilterBank) -> FilterBank:
    """G_k = H_k / H0 on each support."""
    if not fb.is_painless_supported:
        msg = (
            f"{fb} violates the painless support condition; "
            "use cg_synthesize or the uniform dual instead"
        )
        raise NotPainlessError(msg)
    response = filterbank_response(fb)
    if float(np.min(response)) <= 0.0:
        msg = f"{fb} leaves frequencies uncovered; use cg_synthesize instead"
        raise NotPainlessError(msg)
    length = fb.signal_length
    channels = [
        channel.with_response(channel.response / response[channel.indices(length)])
        for channel in fb.channels
    ]
    role = BankRole.ANALYSIS if fb.role == BankRole.SYNTHESIS else BankRole.SYNTHESIS
    return fb.with_channels(channels, role)


def time_reversed_dual(fb: FilterBank) -> FilterBank:
    """Synthesis with the time-reversed conjugate filters scaled by s.

    s minimises ||s H0 - 1|| over all bins.
    """
    response = filterbank_response(fb)
    gain = float(np.sum(response) / np.sum(response**2))
    channels = [
        channel.with_response(gain * channel.response) for channel in fb.channels
    ]
    logger.debug("Time-reversed synthesis gain %.6g for %s", gain, fb)
    return fb.with_channels(channels, BankRole.SYNTHESIS)
