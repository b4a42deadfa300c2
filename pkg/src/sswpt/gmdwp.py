"""Mode reconstruction from classified supports, with amplitude and shape."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage
from scipy.interpolate import CubicSpline, PchipInterpolator

from .ridges import IFCurve, RidgeSupport
from .signal import SampledSignal
from .squeeze import SqueezedPlane
from .wavepacket import WavePacketPlane, dual_reconstruct

SHAPE_POINTS = 1024
DEFAULT_SPREAD = 4


class NonMonotonePhaseError(ValueError):
    pass


@dataclass
class ModeEstimate:
    signal: SampledSignal
    amplitude: np.ndarray
    fundamental: IFCurve | None = None
    phase: np.ndarray | None = None
    per_term: list[SampledSignal] = field(default_factory=list)


@dataclass
class ShapeEstimate:
    samples: np.ndarray
    normalization: float

    @property
    def u(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.samples.size) / self.samples.size

    def coefficients(self) -> np.ndarray:
        """Discrete Fourier coefficients c[n] with s(u) = sum c[n] e^{inu}."""
        return np.fft.fft(self.samples) / self.samples.size


def claim_map(sq: SqueezedPlane, supports: Sequence[RidgeSupport], spread: int = DEFAULT_SPREAD) -> np.ndarray:
    """Owner label of every squeezed cell, -1 where unclaimed.

    Each support also claims the cells within ``spread`` frequency bins of
    it, which recovers the ridge flanks that fall below the support level.
    A flank cell near two supports stays unclaimed.
    """
    shape = sq.energy.shape
    owner = np.full(shape, -1, dtype=np.int64)
    if spread > 0:
        st = np.ones((2 * spread + 1, 1), dtype=bool)
        count = np.zeros(shape, dtype=np.int64)
        grown = []
        for S in supports:
            g = ndimage.binary_dilation(S.mask(shape), st)
            count += g
            grown.append(g)
        for S, g in zip(supports, grown):
            owner[g & (count == 1)] = S.label
    for S in supports:
        owner[S.vbins, S.cols] = S.label
    return owner


def support_mask(sq: SqueezedPlane, supports: Sequence[RidgeSupport],
                 claims: np.ndarray | None = None) -> np.ndarray:
    """Wave packet cells whose squeezed bin falls inside the supports.

    With ``claims`` (from ``claim_map``) a support covers every cell it
    claimed, not just its own thresholded cells.
    """
    if claims is None:
        hit = np.zeros(sq.energy.shape, dtype=bool)
        for S in supports:
            hit[S.vbins, S.cols] = True
    else:
        hit = np.isin(claims, [S.label for S in supports])
    cols = np.broadcast_to(np.arange(sq.L), sq.bins.shape)
    ok = sq.bins >= 0
    mask = np.zeros(sq.bins.shape, dtype=bool)
    mask[ok] = hit[sq.bins[ok], cols[ok]]
    return mask


def reconstruct_mode(plane: WavePacketPlane, sq: SqueezedPlane,
                     supports: Sequence[RidgeSupport], claims: np.ndarray | None = None) -> SampledSignal:
    mask = support_mask(sq, supports, claims)
    if not mask.any():
        warnings.warn("empty support union; returning a zero mode", stacklevel=2)
        return SampledSignal(np.zeros(plane.L, dtype=complex))
    return dual_reconstruct(plane, mask)


def amplitude_estimate(per_term: Sequence[SampledSignal | np.ndarray]) -> np.ndarray:
    """Pointwise root-sum-square of the term moduli."""
    if len(per_term) == 0:
        raise ValueError("need at least one term")
    acc = 0.0
    for x in per_term:
        x = x.samples if isinstance(x, SampledSignal) else np.asarray(x)
        acc = acc + np.abs(x) ** 2
    return np.sqrt(acc)


def integrate_phase(freq: np.ndarray) -> np.ndarray:
    """2 pi times the cumulative trapezoid integral of freq over t_j = j/L."""
    freq = np.asarray(freq, dtype=float)
    L = freq.size
    steps = (freq[1:] + freq[:-1]) / (2 * L)
    return 2 * np.pi * np.concatenate([[0.0], np.cumsum(steps)])


def build_mode(plane: WavePacketPlane, sq: SqueezedPlane, supports: Sequence[RidgeSupport],
               fundamental: IFCurve | None = None, claims: np.ndarray | None = None) -> ModeEstimate:
    terms = [reconstruct_mode(plane, sq, [S], claims) for S in supports]
    signal = reconstruct_mode(plane, sq, supports, claims)
    amp = amplitude_estimate(terms) if terms else np.zeros(plane.L)
    phase = integrate_phase(fundamental.values) if fundamental is not None else None
    return ModeEstimate(signal, amp, fundamental, phase, terms)


def shape_estimate(mode: ModeEstimate, n_points: int = SHAPE_POINTS,
                   amp_floor: float = 1e-6) -> ShapeEstimate:
    """Fold f_k / amplitude onto one period of the fundamental phase.

    Every complete cycle of the phase contributes, so the estimate is the
    average waveform over the whole record.
    """
    if mode.fundamental is None and mode.phase is None:
        raise ValueError("mode has no fundamental curve")
    phase = mode.phase if mode.phase is not None else integrate_phase(mode.fundamental.values)
    if np.any(np.diff(phase) <= 0):
        raise NonMonotonePhaseError("integrated phase is not increasing; smooth the fundamental first")
    x = mode.signal.samples
    L = x.size
    amp = np.asarray(mode.amplitude, dtype=float)
    amp = np.maximum(amp, amp_floor * amp.max())
    g = x / amp
    t = np.arange(L) / L
    cycles = int(np.floor((phase[-1] - phase[0]) / (2 * np.pi)))
    if cycles < 1:
        raise ValueError("record holds less than one period of the fundamental")
    u = 2 * np.pi * np.arange(n_points) / n_points
    targets = phase[0] + (u[None, :] + 2 * np.pi * np.arange(cycles)[:, None]).ravel()
    t_at = PchipInterpolator(phase, t)(targets)
    re = CubicSpline(t, g.real)(t_at)
    im = CubicSpline(t, g.imag)(t_at)
    folded = (re + 1j * im).reshape(cycles, n_points).mean(axis=0)
    return normalize_shape(folded)


def normalize_shape(samples: np.ndarray) -> ShapeEstimate:
    """Unit RMS norm, largest harmonic rotated to zero phase."""
    samples = np.asarray(samples, dtype=complex)
    samples = samples - samples.mean()
    norm = np.sqrt(np.mean(np.abs(samples) ** 2))
    if norm == 0:
        raise ValueError("shape estimate vanished")
    out = samples / norm
    c = np.fft.fft(out)
    k = int(np.argmax(np.abs(c)))
    rot = np.exp(-1j * np.angle(c[k]))
    return ShapeEstimate(out * rot, float(norm))


def shape_correlation(a, b) -> float:
    """max over circular shifts of |<a, shift(b)>| / (|a| |b|).

    The phase origin of a recovered shape is arbitrary, so shapes are only
    compared up to a time shift and a unimodular factor.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        raise ValueError("shapes must have the same length")
    xc = np.fft.ifft(np.fft.fft(a) * np.conj(np.fft.fft(b)))
    return float(np.max(np.abs(xc)) / (np.linalg.norm(a) * np.linalg.norm(b)))
