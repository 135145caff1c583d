"""Alias transfer functions of an analysis / synthesis bank pair."""

import math
from collections import defaultdict
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from audlet.errors import DomainError
from audlet.filterbank.bank import FilterBank


class AliasTerms(BaseModel):
    """Transfer functions of analysis followed by synthesis.

    The output spectrum is sum_n T_n[j] X[j + n L / D]; ``diagonal`` is T_0,
    ``alias_norms[n - 1]`` is max_j |T_n[j]| and ``alias_spread`` is
    sum_{n >= 1} |T_n[j]| per bin.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    diagonal: np.ndarray
    alias_norms: np.ndarray
    alias_spread: np.ndarray
    lcm: int



class _Term(NamedTuple):
    # synthesis support bins and omega / d * conj(G) on them
    bins: NDArray[np.int64]
    synthesis: NDArray[np.complex128]
    # analysis support, looked up at shifted bins
    start: int
    analysis: NDArray[np.complex128]
    factor: int


def _lookup(
    start: int,
    response: NDArray[np.complex128],
    bins: NDArray[np.int64],
    length: int,
) -> NDArray[np.complex128]:
    offsets = (bins - start) % length
    size = response.shape[0]
    inside = offsets < size
    return np.where(inside, response[np.minimum(offsets, size - 1)], 0.0)


def _terms(fb_ana: FilterBank, fb_syn: FilterBank) -> list[_Term]:
    """One term per channel and one for its mirror image at negative frequencies."""
    length = fb_ana.signal_length
    terms = []
    for weight, ana, syn in zip(
        fb_syn.weights,
        fb_ana.channels,
        fb_syn.channels,
        strict=True,
    ):
        scale = weight / 2.0 / ana.factor
        bins = syn.indices(length)
        conj_syn = scale * np.conj(syn.response)
        terms.append(_Term(bins, conj_syn, ana.start, ana.response, ana.factor))
        mirrored_start = (-(ana.start + ana.support_size - 1)) % length
        terms.append(
            _Term(
                (-bins) % length,
                scale * syn.response,
                mirrored_start,
                np.conj(ana.response[::-1]),
                ana.factor,
            ),
        )
    return terms


def _check_compatible(fb_ana: FilterBank, fb_syn: FilterBank) -> None:
    if (
        fb_ana.signal_length != fb_syn.signal_length
        or fb_ana.factors != fb_syn.factors
    ):
        msg = f"{fb_syn} does not share the geometry of {fb_ana}"
        raise DomainError(msg)


def _summed(
    bins: list[NDArray[np.int64]],
    values: list[NDArray[np.complex128]],
    length: int,
) -> tuple[NDArray[np.int64], NDArray[np.complex128]]:
    """Add values landing on the same bin, returning only the touched bins."""
    all_bins = np.concatenate(bins)
    all_values = np.concatenate(values)
    if all_bins.shape[0] >= length // 4:
        dense = np.zeros(length, dtype=np.complex128)
        for member_bins, member_values in zip(bins, values, strict=True):
            dense[member_bins] += member_values
        touched = np.zeros(length, dtype=bool)
        touched[all_bins] = True
        unique = np.flatnonzero(touched)
        return unique, dense[unique]
    unique, inverse = np.unique(all_bins, return_inverse=True)
    summed = np.bincount(
        inverse,
        weights=all_values.real,
        minlength=unique.shape[0],
    ) + 1j * np.bincount(inverse, weights=all_values.imag, minlength=unique.shape[0])
    return unique, summed


def alias_terms(fb_ana: FilterBank, fb_syn: FilterBank | None = None) -> AliasTerms:
    """T_0 and the aliasing transfer functions T_1 .. T_{D-1} of a bank pair."""
    fb_syn = fb_ana if fb_syn is None else fb_syn
    _check_compatible(fb_ana, fb_syn)
    length = fb_ana.signal_length
    lcm = math.lcm(*fb_ana.factors)
    terms = _terms(fb_ana, fb_syn)

    diagonal = np.zeros(length, dtype=np.complex128)
    shifts: defaultdict[int, list[tuple[int, int]]] = defaultdict(list)
    for e, term in enumerate(terms):
        diagonal[term.bins] += term.synthesis * _lookup(
            term.start,
            term.analysis,
            term.bins,
            length,
        )
        multiplicity = lcm // term.factor
        for a in range(1, term.factor):
            shifts[a * multiplicity].append((e, a))

    alias_norms = np.zeros(max(lcm - 1, 0))
    alias_spread = np.zeros(length)
    for n, members in sorted(shifts.items()):
        bins = []
        values = []
        for e, a in members:
            term = terms[e]
            shifted = (term.bins + a * (length // term.factor)) % length
            bins.append(term.bins)
            values.append(
                term.synthesis * _lookup(term.start, term.analysis, shifted, length),
            )
        unique, summed = _summed(bins, values, length)
        magnitude = np.abs(summed)
        alias_norms[n - 1] = float(np.max(magnitude)) if magnitude.size else 0.0
        alias_spread[unique] += magnitude
    return AliasTerms(
        diagonal=diagonal,
        alias_norms=alias_norms,
        alias_spread=alias_spread,
        lcm=lcm,
    )
