"""Greedy pursuit over warped Fourier atoms.

Each mode k is described by a phase profile p_k (the integral of one of its
IF curves, scaled by a midrange constant) and an amplitude envelope. Warping
the residual by p_k^{-1} turns every harmonic of mode k into a near pure
tone, so one DFT per profile exposes the strongest remaining term.

In warped coordinates x = p(t) / p(1) on [0, 1], a harmonic that completes
an integer number of cycles over the record lands exactly on a DFT bin, and
the atom for bin k is amp(t) exp(2 pi i k x(t)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.ndimage import gaussian_filter1d

from .ridges import IFCurve
from .signal import SampledSignal, l2_norm

DEFAULT_MAX_ITER = 200
DEFAULT_REL_TOL = 1e-3
AMP_FLOOR = 1e-6


class DegenerateAtomError(ValueError):
    pass


class ConditioningError(ValueError):
    pass


@dataclass
class PhaseProfile:
    p: np.ndarray
    m: float

    @property
    def L(self) -> int:
        return self.p.size

    @property
    def total(self) -> float:
        """p(1), extrapolated one step past the last sample."""
        return float(2 * self.p[-1] - self.p[-2]) if self.p.size > 1 else float(self.p[-1])

    @property
    def warped(self) -> np.ndarray:
        """x(t) = p(t) / p(1) on the sample grid."""
        return self.p / self.total

    def p_inv(self, y) -> np.ndarray:
        """Monotone inverse of p, defined on [0, p(1)]."""
        L = self.L
        t = np.arange(L + 1) / L
        pp = np.append(self.p, self.total)
        return PchipInterpolator(pp, t, extrapolate=True)(np.asarray(y, dtype=float))


def make_profile(psi: IFCurve | np.ndarray) -> PhaseProfile:
    """p(t) = int_0^t psi / m with m the midrange of psi (trapezoid rule)."""
    psi = np.asarray(psi.values if isinstance(psi, IFCurve) else psi, dtype=float)
    if np.any(psi <= 0):
        raise ValueError("IF curve must be positive to define a phase profile")
    m = 0.5 * (psi.max() + psi.min())
    L = psi.size
    y = psi / m
    p = np.concatenate([[0.0], np.cumsum((y[1:] + y[:-1]) / (2 * L))])
    return PhaseProfile(p, float(m))


def profile_from_phase(theta: np.ndarray) -> PhaseProfile:
    """Profile from a sampled phase (radians): p = (theta - theta_0) / (2 pi m).

    m is the midrange of the phase derivative, so this matches
    ``make_profile`` applied to the exact IF curve.
    """
    theta = np.asarray(theta, dtype=float)
    L = theta.size
    rate = np.gradient(theta) * L / (2 * np.pi)
    if np.any(rate <= 0):
        raise ValueError("phase must be strictly increasing")
    m = 0.5 * (rate.max() + rate.min())
    return PhaseProfile((theta - theta[0]) / (2 * np.pi * m), float(m))


def phase_from_terms(terms: Sequence[np.ndarray], harmonics: Sequence[int], guide: np.ndarray,
                     cutoff: float = 16.0) -> np.ndarray:
    """Fundamental phase estimated jointly from the reconstructed terms.

    ``guide`` is a rough fundamental phase (e.g. the integrated IF curve).
    Each term is demodulated by h * guide, low-passed so that only the slow
    phase correction survives (no 2 pi slips from noise), and the corrected
    phases divided by h are averaged with weights (h |term|)^2.
    """
    guide = np.asarray(guide, dtype=float)
    L = guide.size
    width = L / (2 * np.pi * cutoff)
    num = np.zeros(L)
    den = 0.0
    for z, h in zip(terms, harmonics):
        z = np.asarray(z, dtype=complex)
        dem = z * np.exp(-1j * h * guide)
        lp = gaussian_filter1d(dem.real, width, mode="nearest") + 1j * gaussian_filter1d(dem.imag, width, mode="nearest")
        corr = np.unwrap(np.angle(lp))
        theta = (h * guide + corr) / h
        w = (h * np.mean(np.abs(z))) ** 2
        num += w * (theta - theta[0])
        den += w
    if den == 0:
        raise ValueError("all terms vanish")
    return num / den


def identity_profile(L: int) -> PhaseProfile:
    return PhaseProfile(np.arange(L) / L, 1.0)


def _fourier_upsample(x: np.ndarray, factor: int) -> np.ndarray:
    L = x.size
    if factor == 1:
        return x
    X = np.fft.fft(x)
    Y = np.zeros(L * factor, dtype=complex)
    half = L // 2
    Y[:half] = X[:half]
    Y[-half:] = X[-half:]
    return np.fft.ifft(Y) * factor


def inverse_warp(r: SampledSignal | np.ndarray, profile: PhaseProfile, amp: np.ndarray,
                 upsample: int = 4, amp_floor: float = AMP_FLOOR) -> np.ndarray:
    """h(x) = (r / amp)(p^{-1}(x p(1))) on x_k = k / L.

    r / amp is first refined by Fourier interpolation so the monotone cubic
    resampling sees smooth data.
    """
    x = r.samples if isinstance(r, SampledSignal) else np.asarray(r, dtype=complex)
    amp = np.asarray(amp, dtype=float)
    if amp.min() < amp_floor * amp.max() or amp.max() <= 0:
        raise ConditioningError("amplitude envelope falls below the conditioning floor")
    L = x.size
    g = x / amp
    if np.allclose(profile.p, np.arange(L) / L, rtol=0, atol=1e-15):
        return g.copy()
    fine = _fourier_upsample(g, upsample)
    tf = np.arange(fine.size + 1) / fine.size
    fine = np.append(fine, fine[0])
    t_at = profile.p_inv(np.arange(L) / L * profile.total)
    re = PchipInterpolator(tf, fine.real)(t_at)
    im = PchipInterpolator(tf, fine.imag)(t_at)
    return re + 1j * im


def atom(profile: PhaseProfile, amp: np.ndarray, k: float) -> np.ndarray:
    return np.asarray(amp, dtype=float) * np.exp(2j * np.pi * k * profile.warped)


@dataclass
class SpectrumTable:
    mode_index: int
    entries: dict = field(default_factory=dict)
    p_total: float = 1.0
    m: float = 1.0
    harmonic: int = 1
    seed: float | None = None

    def add(self, k: int, beta: complex):
        if self.seed is None:
            self.seed = k
        self.entries[k] = self.entries.get(k, 0j) + beta

    @property
    def tau(self) -> np.ndarray:
        """Atom frequencies in units of the phase profile p."""
        return np.array(sorted(self.entries), dtype=float) / self.p_total

    @property
    def beta(self) -> np.ndarray:
        return np.array([self.entries[k] for k in sorted(self.entries)], dtype=complex)

    def harmonics(self) -> np.ndarray:
        """tau rescaled by n_k / m_k to harmonic indices of the fundamental."""
        return self.tau * self.harmonic / self.m

    def rows(self) -> list[tuple[float, float, float]]:
        return [(float(t), float(abs(b)), float(np.angle(b))) for t, b in zip(self.tau, self.beta)]


@dataclass
class DsaResult:
    modes: list[SampledSignal]
    tables: list[SpectrumTable]
    residual_norm_history: np.ndarray
    residual: SampledSignal
    stop_reason: str = ""
    iterations: int = 0
    flags: list[str] = field(default_factory=list)


def pursue(f: SampledSignal | np.ndarray, profiles: Sequence[PhaseProfile], amps: Sequence[np.ndarray],
           eps: float | None = None, max_iter: int = DEFAULT_MAX_ITER, upsample: int = 4,
           noise_ratio: float | None = None, harmonics: Sequence[int] | None = None) -> DsaResult:
    """Greedy extraction of warped atoms until the residual is small.

    At every step each profile warps the residual, the largest DFT
    coefficient over all profiles selects (bin, profile), and the atom's
    gain is the least-squares projection. ``eps`` defaults to 1e-3 ||f||.
    With ``noise_ratio`` set, pursuit also stops once the selected peak is
    less than that multiple of the median DFT magnitude (a noise floor).
    """
    x = f.samples if isinstance(f, SampledSignal) else np.asarray(f, dtype=complex)
    x = x.astype(complex)
    K = len(profiles)
    if K == 0 or len(amps) != K:
        raise ValueError("need one amplitude envelope per profile")
    L = x.size
    if eps is None:
        eps = DEFAULT_REL_TOL * l2_norm(x)
    amps = [np.asarray(a, dtype=float) for a in amps]
    harmonics = list(harmonics) if harmonics is not None else [1] * K
    r = x.copy()
    modes = [np.zeros(L, dtype=complex) for _ in range(K)]
    tables = [SpectrumTable(k, p_total=profiles[k].total, m=profiles[k].m, harmonic=harmonics[k])
              for k in range(K)]
    hist = [l2_norm(r)]
    flags: list[str] = []
    reason = "max_iter"
    it = 0
    while it < max_iter:
        if hist[-1] <= eps:
            reason = "tolerance"
            break
        spectra = [np.fft.fft(inverse_warp(r, profiles[k], amps[k], upsample)) / L for k in range(K)]
        mags = np.array([np.abs(s) for s in spectra])
        j, b = np.unravel_index(np.argmax(mags), mags.shape)
        if K > 1:
            others = [np.argmax(mags[k]) for k in range(K) if k != j]
            if b in others:
                flags.append(f"shared argmax bin {b} at iteration {it}")
        if noise_ratio is not None and mags[j, b] < noise_ratio * np.median(mags[j]):
            reason = "noise_floor"
            break
        k_sig = b if b <= L // 2 else b - L
        phi = atom(profiles[j], amps[j], k_sig)
        nphi = np.vdot(phi, phi).real
        if nphi == 0:
            raise DegenerateAtomError("atom has zero norm")
        beta = np.vdot(phi, r) / nphi
        r_new = r - beta * phi
        n_new = l2_norm(r_new)
        if not n_new < hist[-1]:
            reason = "stalled"
            flags.append(f"residual did not decrease at iteration {it}")
            break
        r = r_new
        modes[j] += beta * phi
        tables[j].add(int(k_sig), complex(beta))
        hist.append(n_new)
        it += 1
    else:
        if hist[-1] <= eps:
            reason = "tolerance"
    return DsaResult([SampledSignal(m) for m in modes], tables, np.asarray(hist),
                     SampledSignal(r), reason, it, flags)


def spectrum(table: SpectrumTable) -> tuple[np.ndarray, np.ndarray]:
    """(harmonic index, |beta| / |beta_seed|) for the recorded atoms."""
    if not table.entries:
        raise ValueError("empty spectrum table")
    seed = abs(table.entries[table.seed])
    keys = sorted(table.entries)
    d = np.array([abs(table.entries[k]) for k in keys]) / (seed if seed > 0 else 1.0)
    return np.asarray(keys, dtype=float) / table.p_total * table.harmonic / table.m, d
