"""Filter bank construction: AUDlet, gammatone and roex banks, downsampling."""

import logging
import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, ValidationError
from scipy.optimize import brentq

from audlet.config.commons import (
    GAMMATONE_BETA,
    GAMMATONE_IR_LENGTH,
    GAMMATONE_ORDER,
)
from audlet.config.schemas import (
    BankDesign,
    BankFamily,
    CenterSpacing,
    PrototypeKind,
    PrototypeSpec,
    ScaleKind,
)
from audlet.errors import DomainError
from audlet.filterbank.bank import BankDescriptor, Channel, FilterBank
from audlet.filterbank.prototypes import PrototypeWindow, roex_shape
from audlet.filterbank.scales import (
    aud_bandwidth,
    aud_forward,
    aud_space,
    aud_space_fit,
    grid_bandwidths,
)

ROEX_MAX_ITERATIONS = 50
_EDGE_RTOL = 1e-9
_COUNT_SLACK = 1e-9

logger = logging.getLogger(__name__)


class DownsamplingChoice(BaseModel):
    model_config = ConfigDict(frozen=True)

    bank: FilterBank
    painless_possible: bool
    # channels whose support spans the whole band and fell back to d = 1
    fallback_channels: list[int]


class RoexTuning(BaseModel):
    slope: float
    iterations: int
    erb_hz: float


def _make_design(**kwargs: object) -> BankDesign:
    try:
        return BankDesign.model_validate(kwargs)
    except ValidationError as e:
        msg = f"Invalid bank parameters: {e}"
        raise DomainError(msg) from e


def _check_band(design: BankDesign) -> tuple[float, float]:
    nyquist = design.sample_rate / 2
    fmax = design.upper_frequency
    if fmax > nyquist * (1.0 + _EDGE_RTOL):
        msg = f"fmax={fmax:g} Hz exceeds the Nyquist frequency {nyquist:g} Hz"
        raise DomainError(msg)
    if design.fmin >= fmax:
        msg = f"fmin={design.fmin:g} Hz must be below fmax={fmax:g} Hz"
        raise DomainError(msg)
    return design.fmin, min(fmax, nyquist)


def _grid_density(design: BankDesign, span: float) -> float:
    if design.count is not None:
        return design.count / span
    return design.density if design.density is not None else 1.0


def designed_centers(design: BankDesign) -> NDArray[np.float64]:
    """Centers placed on the auditory scale, before DC / Nyquist channels are added."""
    if design.centers is not None:
        centers = np.asarray(design.centers, dtype=np.float64)
        nyquist = design.sample_rate / 2
        if np.any(np.diff(centers) <= 0):
            msg = "Explicit centers must be strictly increasing"
            raise DomainError(msg)
        if centers[0] < 0 or centers[-1] > nyquist * (1.0 + _EDGE_RTOL):
            msg = f"Explicit centers must lie within [0, {nyquist:g}] Hz"
            raise DomainError(msg)
        return centers

    fmin, fmax = _check_band(design)
    span = float(aud_forward(design.scale, fmax)) - float(
        aud_forward(design.scale, fmin),
    )
    if design.spacing == CenterSpacing.FIT:
        count = design.count or math.ceil(
            _grid_density(design, span) * span - _COUNT_SLACK,
        )
        return aud_space_fit(design.scale, fmin, fmax, max(count, 1))
    return aud_space(design.scale, fmin, fmax, _grid_density(design, span))


def channel_layout(
    design: BankDesign,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Centers and bandwidths of every channel, DC and Nyquist channels included.

    Edge channels take the bandwidth of the nearest designed center.
    """
    grid = designed_centers(design)
    if design.centers is None:
        fmin, fmax = _check_band(design)
        span = float(aud_forward(design.scale, fmax)) - float(
            aud_forward(design.scale, fmin),
        )
        density = _grid_density(design, span)
    else:
        density = design.density or 1.0
    bandwidths = grid_bandwidths(design.scale, grid, density) / design.bw_divisor

    nyquist = design.sample_rate / 2
    tol = _EDGE_RTOL * design.sample_rate
    centers = list(grid)
    widths = list(bandwidths)
    if centers[0] > tol:
        centers.insert(0, 0.0)
        widths.insert(0, widths[0])
    else:
        centers[0] = 0.0
    if centers[-1] < nyquist - tol:
        centers.append(nyquist)
        widths.append(widths[-1])
    else:
        centers[-1] = nyquist
    return np.array(centers), np.array(widths)


def _circular_offsets(
    center: float,
    sample_rate: float,
    signal_length: int,
) -> NDArray[np.float64]:
    """Signed distance in Hz from ``center`` to every DFT bin, wrapped to +-fs/2."""
    freqs = np.arange(signal_length) * (sample_rate / signal_length)
    return np.mod(freqs - center + sample_rate / 2, sample_rate) - sample_rate / 2


def _unit_energy(values: NDArray, signal_length: int) -> NDArray:
    # sum |H|^2 = L, i.e. unit energy of the impulse response
    energy = float(np.sum(np.abs(values) ** 2))
    return values * math.sqrt(signal_length / energy)


def _bump_channel(
    window: PrototypeWindow,
    center: float,
    bandwidth: float,
    sample_rate: float,
    signal_length: int,
) -> Channel:
    bin_width = sample_rate / signal_length
    half_bins = window.half_support * bandwidth / bin_width
    # open support: bins exactly at the edge are excluded
    lo = math.floor(center / bin_width - half_bins) + 1
    hi = math.ceil(center / bin_width + half_bins) - 1
    count = hi - lo + 1
    if count <= 0:
        msg = (
            f"Prototype with zero support: channel at {center:g} Hz with bandwidth "
            f"{bandwidth:g} Hz covers no DFT bin"
        )
        raise DomainError(msg)

    if count >= signal_length:
        offsets = _circular_offsets(center, sample_rate, signal_length)
        start = 0
    else:
        offsets = (lo + np.arange(count)) * bin_width - center
        start = lo % signal_length
    values = window(offsets / bandwidth)
    if not np.any(values):
        msg = f"Prototype with zero support at {center:g} Hz"
        raise DomainError(msg)
    return Channel(
        center=center,
        bandwidth=bandwidth,
        start=start,
        response=_unit_energy(values, signal_length),
    )


def audlet_filters(  # noqa: PLR0913
    sample_rate: float,
    signal_length: int,
    *,
    scale: ScaleKind = ScaleKind.ERB,
    fmin: float = 0.0,
    fmax: float | None = None,
    density: float | None = 1.0,
    count: int | None = None,
    prototype: PrototypeSpec | None = None,
    bw_divisor: float = 1.0,
    spacing: CenterSpacing = CenterSpacing.EXACT,
) -> FilterBank:
    """Frequency-domain filters w((xi - xi_k) / Gamma_k) on an auditory scale."""
    design = _make_design(
        family=BankFamily.AUDLET,
        scale=scale,
        sample_rate=sample_rate,
        signal_length=signal_length,
        fmin=fmin,
        fmax=fmax,
        density=density,
        count=count,
        prototype=prototype or PrototypeSpec(),
        bw_divisor=bw_divisor,
        spacing=spacing,
    )
    return _build_audlet(design)


def _build_audlet(design: BankDesign) -> FilterBank:
    window = PrototypeWindow.from_spec(design.prototype)
    centers, bandwidths = channel_layout(design)
    channels = [
        _bump_channel(
            window,
            center,
            bandwidth,
            design.sample_rate,
            design.signal_length,
        )
        for center, bandwidth in zip(centers, bandwidths, strict=True)
    ]
    bank = FilterBank(
        channels=channels,
        sample_rate=design.sample_rate,
        signal_length=design.signal_length,
        scale=design.scale,
        design=design,
    )
    logger.info("Designed %s with %s prototype", bank, design.prototype.kind.value)
    return bank


def gammatone_filters(  # noqa: PLR0913
    sample_rate: float,
    signal_length: int,
    centers: list[float] | NDArray[np.float64],
    *,
    beta: float = GAMMATONE_BETA,
    order: int = GAMMATONE_ORDER,
    ir_length: int = GAMMATONE_IR_LENGTH,
    bw_divisor: float = 1.0,
) -> FilterBank:
    """FIR gammatone bank t^(order-1) exp(2 pi t (i xi_k - lambda_k)), unit energy."""
    design = _make_design(
        family=BankFamily.GAMMATONE,
        scale=ScaleKind.ERB,
        sample_rate=sample_rate,
        signal_length=signal_length,
        centers=tuple(float(c) for c in centers),
        beta=beta,
        order=order,
        ir_length=ir_length,
        bw_divisor=bw_divisor,
    )
    return _build_gammatone(design)


def _build_gammatone(design: BankDesign) -> FilterBank:
    length = design.signal_length
    if design.ir_length > length:
        msg = f"Impulse response length {design.ir_length} exceeds L={length}"
        raise DomainError(msg)
    centers, _ = channel_layout(design)
    t = np.arange(design.ir_length) / design.sample_rate
    channels = []
    for center in centers:
        erb = float(aud_bandwidth(ScaleKind.ERB, center))
        decay = design.beta / design.bw_divisor * erb
        impulse = t ** (design.order - 1) * np.exp(
            2j * np.pi * t * center - 2 * np.pi * decay * t,
        )
        impulse /= np.linalg.norm(impulse)
        channels.append(
            Channel(
                center=center,
                bandwidth=erb / design.bw_divisor,
                response=np.fft.fft(impulse, n=length),
            ),
        )
    bank = FilterBank(
        channels=channels,
        sample_rate=design.sample_rate,
        signal_length=length,
        scale=ScaleKind.ERB,
        design=design,
    )
    logger.info(
        "Designed %s, order %d, %d-tap IRs",
        bank,
        design.order,
        design.ir_length,
    )
    return bank


def response_erb(response: NDArray, bin_width: float) -> float:
    """Equivalent rectangular bandwidth in Hz of a sampled magnitude response."""
    power = np.abs(response) ** 2
    return float(bin_width * np.sum(power) / np.max(power))


def response_width(response: NDArray, bin_width: float, level_db: float) -> float:
    """Width in Hz of the region within ``level_db`` of the response peak."""
    magnitude = np.abs(response)
    level = np.max(magnitude) * 10.0 ** (level_db / 20.0)
    return float(bin_width * np.count_nonzero(magnitude >= level))


def tune_roex_slope(
    center: float,
    target_erb: float,
    sample_rate: float,
    signal_length: int,
    r: float = 0.0,
) -> RoexTuning:
    """Find p_k so the sampled roex response has the requested ERB."""
    bin_width = sample_rate / signal_length
    relative = np.abs(_circular_offsets(center, sample_rate, signal_length)) / center

    def erb_mismatch(slope: float) -> float:
        return response_erb(roex_shape(relative, slope, r), bin_width) - target_erb

    guess = 4.0 * center / target_erb
    try:
        slope, result = brentq(
            erb_mismatch,
            guess / 16.0,
            guess * 4.0,
            maxiter=ROEX_MAX_ITERATIONS,
            full_output=True,
        )
    except (ValueError, RuntimeError) as e:
        msg = (
            f"Cannot tune the roex slope at {center:g} Hz to an ERB of "
            f"{target_erb:g} Hz on a {bin_width:g} Hz grid: {e}"
        )
        raise DomainError(msg) from e
    logger.debug(
        "Roex slope %.4f at %.1f Hz after %d iterations",
        slope,
        center,
        result.iterations,
    )
    return RoexTuning(
        slope=float(slope),
        iterations=int(result.iterations),
        erb_hz=target_erb + erb_mismatch(slope),
    )


def roex_filters(  # noqa: PLR0913
    sample_rate: float,
    signal_length: int,
    centers: list[float] | NDArray[np.float64],
    *,
    r: float = 0.0,
    bw_divisor: float = 1.0,
    scale: ScaleKind = ScaleKind.ERB,
) -> FilterBank:
    """Rounded-exponential bank with slopes tuned to the auditory bandwidths."""
    design = _make_design(
        family=BankFamily.ROEX,
        scale=scale,
        sample_rate=sample_rate,
        signal_length=signal_length,
        centers=tuple(float(c) for c in centers),
        roex_r=r,
        bw_divisor=bw_divisor,
    )
    return _build_roex(design)


def _build_roex(design: BankDesign) -> FilterBank:
    centers, bandwidths = channel_layout(design)
    length = design.signal_length
    dc_window = PrototypeWindow.from_spec(PrototypeSpec(kind=PrototypeKind.HANN))
    channels = []
    for center, bandwidth in zip(centers, bandwidths, strict=True):
        if center <= _EDGE_RTOL * design.sample_rate:
            # the roex formula divides by the center frequency
            channels.append(
                _bump_channel(dc_window, 0.0, bandwidth, design.sample_rate, length),
            )
            continue
        tuning = tune_roex_slope(
            center,
            bandwidth,
            design.sample_rate,
            length,
            design.roex_r,
        )
        offsets = _circular_offsets(center, design.sample_rate, length)
        values = roex_shape(offsets / center, tuning.slope, design.roex_r)
        channels.append(
            Channel(
                center=center,
                bandwidth=bandwidth,
                response=_unit_energy(values, length),
            ),
        )
    bank = FilterBank(
        channels=channels,
        sample_rate=design.sample_rate,
        signal_length=length,
        scale=design.scale,
        design=design,
    )
    logger.info("Designed %s with r=%g", bank, design.roex_r)
    return bank


def _divisors(n: int) -> NDArray[np.int64]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return np.array(sorted(set(small + [n // d for d in small])), dtype=np.int64)


def select_downsampling(fb: FilterBank, redfac: float) -> DownsamplingChoice:
    """Pick d_k among the divisors of L nearest (largest painless d) / redfac."""
    if redfac <= 0:
        msg = f"Redundancy factor must be positive, got {redfac}"
        raise DomainError(msg)
    length = fb.signal_length
    divisors = _divisors(length)
    factors: list[int] = []
    fallback: list[int] = []
    for k, channel in enumerate(fb.channels):
        support = channel.support_size
        if support >= length:
            fallback.append(k)
            factors.append(1)
            continue
        painless = int(divisors[divisors * support <= length].max())
        target = painless / redfac
        factors.append(int(divisors[np.argmin(np.abs(divisors - target))]))

    if fallback:
        logger.warning(
            "%d channels of %s span the whole band, using d=1 for them",
            len(fallback),
            fb,
        )
    bank = fb.with_factors(factors)
    painless_possible = redfac >= 1 and bank.is_painless_supported
    logger.debug("Downsampling factors for redfac=%g: %s", redfac, factors)
    return DownsamplingChoice(
        bank=bank,
        painless_possible=painless_possible,
        fallback_channels=fallback,
    )


def with_downsampling(
    fb: FilterBank,
    factors: list[int] | tuple[int, ...],
) -> FilterBank:
    """Apply explicit factors, e.g. to decimate a reference bank like an AUDlet one."""
    try:
        return fb.with_factors(list(factors))
    except (ValueError, ValidationError) as e:
        msg = f"Cannot apply factors to {fb}: {e}"
        raise DomainError(msg) from e


def redundancy(fb: FilterBank) -> float:
    """R = 1/d_0 + 2 sum 1/d_k + 1/d_K for a real-signal bank."""
    factors = np.asarray(fb.factors, dtype=np.float64)
    return float(np.sum(fb.weights / factors))


def build_bank(descriptor: BankDescriptor) -> FilterBank:
    builders = {
        BankFamily.AUDLET: _build_audlet,
        BankFamily.GAMMATONE: _build_gammatone,
        BankFamily.ROEX: _build_roex,
    }
    bank = builders[descriptor.design.family](descriptor.design)
    if descriptor.factors is not None:
        bank = with_downsampling(bank, descriptor.factors)
    return bank
