"""Prototype shapes w(xi) with unit equivalent rectangular bandwidth."""

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.signal.windows import get_window

from audlet.config.schemas import PrototypeKind, PrototypeSpec
from audlet.errors import DomainError

HANN_SUPPORT = 8.0 / 3.0
GAUSS_SIGMA = 1.0 / math.sqrt(math.pi)
GAUSS_TRUNCATION_SIGMAS = 4.0
ROEX_HALF_SUPPORT = 8.0
FIR_SHAPE_LENGTH = 64
_ERB_GRID_POINTS = 40001

logger = logging.getLogger(__name__)


def roex_shape(offset: ArrayLike, p: float, r: float) -> NDArray[np.float64]:
    """Rounded exponential (1 - r)(1 + p|g|)exp(-p|g|) + r of a normalised offset g."""
    g = np.abs(np.asarray(offset, dtype=np.float64))
    return (1.0 - r) * (1.0 + p * g) * np.exp(-p * g) + r


def _roex_unit_p(r: float) -> float:
    """Slope p giving the truncated roex shape an ERB of exactly 1."""
    if r == 0.0:
        # ERB of the untruncated shape is 2.5/p
        return 2.5

    def erb_mismatch(p: float) -> float:
        area, _ = quad(lambda g: roex_shape(g, p, r) ** 2, 0.0, ROEX_HALF_SUPPORT)
        return 2.0 * area - 1.0

    floor_area = 2.0 * ROEX_HALF_SUPPORT * r**2
    if floor_area >= 1.0:
        msg = f"Roex floor r={r} alone exceeds the unit bandwidth"
        raise DomainError(msg)
    return float(brentq(erb_mismatch, 1e-3, 1e3))


class PrototypeWindow(BaseModel):
    """Even frequency-domain shape centered at 0 with w(0) = 1 and ERB 1.

    ``support`` is the full width, in nominal bandwidths, outside of which the
    shape is zero (shapes with infinite tails are truncated).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: PrototypeKind
    support: float
    roex_p: float = 0.0
    roex_r: float = 0.0
    # FIR prototypes: peak-normalised taps spread over the support
    taps: np.ndarray | None = None

    @classmethod
    def from_spec(cls, spec: PrototypeSpec) -> "PrototypeWindow":
        if spec.kind == PrototypeKind.HANN:
            return cls(kind=spec.kind, support=HANN_SUPPORT)
        if spec.kind == PrototypeKind.GAUSS:
            return cls(
                kind=spec.kind,
                support=2.0 * GAUSS_TRUNCATION_SIGMAS * GAUSS_SIGMA,
            )
        if spec.kind == PrototypeKind.ROEX:
            return cls(
                kind=spec.kind,
                support=2.0 * ROEX_HALF_SUPPORT,
                roex_p=_roex_unit_p(spec.roex_r),
                roex_r=spec.roex_r,
            )
        return cls._from_taps(spec)

    @classmethod
    def _from_taps(cls, spec: PrototypeSpec) -> "PrototypeWindow":
        if spec.taps:
            taps = np.abs(np.asarray(spec.taps, dtype=np.float64))
        else:
            taps = get_window(spec.window, FIR_SHAPE_LENGTH, fftbins=False)
            taps = np.abs(np.asarray(taps, dtype=np.float64))
        peak = float(np.max(taps)) if taps.size else 0.0
        if peak <= 0.0:
            msg = "Prototype with zero support: all FIR taps are zero"
            raise DomainError(msg)
        taps = taps / peak
        # unit-width shape first, then stretch it to unit ERB
        grid = np.linspace(-0.5, 0.5, _ERB_GRID_POINTS)
        unit_shape = np.interp(grid, np.linspace(-0.5, 0.5, taps.size), taps)
        unit_erb = float(np.trapezoid(unit_shape**2, grid))
        logger.debug("FIR prototype with %d taps, unit ERB %.6f", taps.size, unit_erb)
        return cls(kind=PrototypeKind.FIR, support=1.0 / unit_erb, taps=taps)

    @property
    def half_support(self) -> float:
        return self.support / 2.0

    def __call__(self, xi: ArrayLike) -> NDArray[np.float64]:
        xi = np.asarray(xi, dtype=np.float64)
        inside = np.abs(xi) <= self.half_support
        if self.kind == PrototypeKind.HANN:
            values = np.cos(np.pi * xi / self.support) ** 2
        elif self.kind == PrototypeKind.GAUSS:
            values = np.exp(-(xi**2) / (2.0 * GAUSS_SIGMA**2))
        elif self.kind == PrototypeKind.ROEX:
            values = roex_shape(xi, self.roex_p, self.roex_r)
        elif self.taps is not None:
            knots = np.linspace(-self.half_support, self.half_support, self.taps.size)
            values = np.interp(xi, knots, self.taps, left=0.0, right=0.0)
        else:
            values = np.zeros_like(xi)
        return np.where(inside, values, 0.0)

    def erb(self) -> float:
        grid = np.linspace(-self.half_support, self.half_support, _ERB_GRID_POINTS)
        values = self(grid)
        return float(np.trapezoid(values**2, grid) / np.max(values) ** 2)

    def width_at(self, level_db: float) -> float:
        """Full width of the main lobe at ``level_db`` below the peak."""
        level = 10.0 ** (level_db / 20.0)
        grid = np.linspace(0.0, self.half_support, _ERB_GRID_POINTS)
        below = np.nonzero(self(grid) < level)[0]
        if below.size == 0:
            return self.support
        upper = grid[below[0]]
        lower = grid[below[0] - 1]
        crossing = brentq(lambda g: float(self(g)) - level, lower, upper)
        return 2.0 * float(crossing)
