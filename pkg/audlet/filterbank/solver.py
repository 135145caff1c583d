"""Preconditioned conjugate gradients for the frame operator."""

import logging
from collections.abc import Callable, Iterator

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from audlet.audio.signal import Signal
from audlet.config.commons import CG_ROUNDOFF
from audlet.config.settings import get_settings
from audlet.errors import DomainError
from audlet.filterbank.aliasing import alias_terms
from audlet.filterbank.bank import Coefficients, FilterBank
from audlet.filterbank.transform import (
    apply_frame_operator,
    filterbank_response,
    synthesize,
)

# response values below this fraction of the peak are clipped in the preconditioner
_PRECONDITIONER_FLOOR = 1e-12

logger = logging.getLogger(__name__)

Operator = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class CGReport(BaseModel):
    iterations: int
    converged: bool
    preconditioned: bool
    tolerance: float
    # relative residual ||S x - b|| / ||b|| after each iteration, index 0 = start
    residuals: list[float] = Field(default_factory=list)

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else 0.0


class CGResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    signal: Signal
    report: CGReport


def cg_iterator(
    x: NDArray[np.float64],
    b: NDArray[np.float64],
    fwd_op: Operator,
    pre_op: Operator,
    roundoff: int = CG_ROUNDOFF,
) -> Iterator[NDArray[np.float64]]:
    """Yield the residual b - A x after each update of ``x`` (updated in place)."""
    residual = b - fwd_op(x)
    direction = pre_op(residual)
    delta = float(np.dot(residual, direction))

    iteration = 0
    while True:
        yield residual
        if delta <= 0.0:
            return
        searched = fwd_op(direction)
        curvature = float(np.dot(direction, searched))
        if curvature <= 0.0:
            return
        alpha = delta / curvature
        x += alpha * direction

        iteration += 1
        if iteration % roundoff == 0:
            residual = b - fwd_op(x)
        else:
            residual = residual - alpha * searched

        preconditioned = pre_op(residual)
        new_delta = float(np.dot(residual, preconditioned))
        direction = preconditioned + (new_delta / delta) * direction
        delta = new_delta


def conjugate_gradient(  # noqa: PLR0913
    b: NDArray[np.float64],
    fwd_op: Operator,
    pre_op: Operator | None,
    tol: float,
    max_iter: int,
    x0: NDArray[np.float64] | None = None,
) -> tuple[NDArray[np.float64], CGReport]:
    """Solve A x = b for a symmetric positive (semi)definite ``fwd_op``.

    Stops once ||r|| / ||b|| <= tol; on failure the iterate with the smallest
    residual is returned and the report says so.
    """
    if tol <= 0:
        msg = f"CG tolerance must be positive, got {tol}"
        raise DomainError(msg)
    if max_iter < 0:
        msg = f"CG iteration limit must be non-negative, got {max_iter}"
        raise DomainError(msg)

    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=np.float64)
    b_norm = float(np.linalg.norm(b))
    report = CGReport(
        iterations=0,
        converged=False,
        preconditioned=pre_op is not None,
        tolerance=tol,
    )
    if b_norm == 0.0:
        report.converged = True
        report.residuals.append(0.0)
        return np.zeros_like(b), report

    best = x.copy()
    best_residual = np.inf
    iterations = cg_iterator(x, b, fwd_op, pre_op or (lambda r: r.copy()))
    for iteration, residual in enumerate(iterations):
        relative = float(np.linalg.norm(residual)) / b_norm
        report.residuals.append(relative)
        report.iterations = iteration
        logger.debug("CG iteration %d, relative residual %.3e", iteration, relative)
        if relative < best_residual:
            best_residual = relative
            best = x.copy()
        if relative <= tol:
            report.converged = True
            break
        if iteration >= max_iter:
            break
    return best, report


def frame_preconditioner(fb: FilterBank) -> Operator:
    """Approximate inverse of S built around its diagonal H0.

    With S = H0 + E (E the alias part), a diagonally dominant bank gets the
    two-term Neumann expansion P = 2 H0^-1 - H0^-1 S H0^-1 of S^-1; P S is then
    similar to I - (H0^-1/2 E H0^-1/2)^2. Otherwise P = H0^-1 per DFT bin.
    """
    response = filterbank_response(fb)
    floor = _PRECONDITIONER_FLOOR * float(np.max(response))
    inverse = 1.0 / np.maximum(response, floor)

    def diagonal_inverse(r: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.fft.ifft(np.fft.fft(r) * inverse).real

    # eigenvalues of H0^-1 S lie in [1 - spread, 1 + spread], P is SPD below 1
    spread = float(np.max(alias_terms(fb).alias_spread * inverse))
    if spread <= _PRECONDITIONER_FLOOR or spread >= 1.0:
        logger.debug("Diagonal preconditioner (relative spread %.3g)", spread)
        return diagonal_inverse

    logger.debug("Neumann preconditioner (relative spread %.3g)", spread)

    def precondition(r: NDArray[np.float64]) -> NDArray[np.float64]:
        z = diagonal_inverse(r)
        return 2.0 * z - diagonal_inverse(apply_frame_operator(z, fb).samples)

    return precondition


def solve_frame_system(
    b: NDArray[np.float64],
    fb: FilterBank,
    tol: float,
    max_iter: int,
    *,
    precondition: bool = True,
) -> tuple[NDArray[np.float64], CGReport]:
    """x with S x = b, S the frame operator of ``fb``."""

    def frame_operator(x: NDArray[np.float64]) -> NDArray[np.float64]:
        return apply_frame_operator(x, fb).samples

    pre_op = frame_preconditioner(fb) if precondition else None
    return conjugate_gradient(b, frame_operator, pre_op, tol, max_iter)


def cg_synthesize(
    c: Coefficients,
    fb: FilterBank,
    tol: float | None = None,
    max_iter: int | None = None,
    *,
    precondition: bool = True,
) -> CGResult:
    """Reconstruct x from its coefficients by solving S x = synthesize(c, fb)."""
    settings = get_settings()
    tol = settings.cg_tol if tol is None else tol
    max_iter = settings.cg_max_iter if max_iter is None else max_iter

    rhs = synthesize(c, fb).samples
    samples, report = solve_frame_system(
        rhs,
        fb,
        tol,
        max_iter,
        precondition=precondition,
    )
    if report.converged:
        logger.info(
            "CG synthesis with %s converged after %d iterations",
            fb,
            report.iterations,
        )
    else:
        logger.warning(
            "CG synthesis with %s did not reach tol=%g in %d iterations "
            "(best residual %.3e)",
            fb,
            tol,
            max_iter,
            min(report.residuals),
        )
    return CGResult(
        signal=Signal(samples=samples, sample_rate=fb.sample_rate),
        report=report,
    )
