"""Signal model: general shape functions, GIMT modes, superpositions and noise."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Callable, Mapping, Sequence

import numpy as np

DEFAULT_SAMPLES = 2**13


class InvalidShapeError(ValueError):
    pass


class AliasingError(ValueError):
    pass


@dataclass(frozen=True)
class ShapeFunction:
    """2*pi-periodic, mean-zero shape with unit discrete Parseval norm.

    ``coeffs`` maps harmonic index n (n != 0) to the Fourier coefficient
    s_hat(n). ``gcd_factor`` records the index rescaling applied to enforce
    gcd{|n|} == 1.
    """

    coeffs: Mapping[int, complex]
    gcd_factor: int = 1

    @property
    def harmonics(self) -> np.ndarray:
        return np.array(sorted(self.coeffs), dtype=int)

    @property
    def max_harmonic(self) -> int:
        return int(max(abs(n) for n in self.coeffs))

    def coefficient(self, n: int) -> complex:
        return complex(self.coeffs.get(n, 0.0))

    def evaluate(self, u) -> np.ndarray:
        """s(u) = sum_n s_hat(n) exp(i n u)."""
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape, dtype=complex)
        for n, c in self.coeffs.items():
            out += c * np.exp(1j * n * u)
        return out

    def sup_bound(self) -> float:
        """Wiener-algebra bound sum_n |s_hat(n)|, the bound M used for the shape class."""
        return float(sum(abs(c) for c in self.coeffs.values()))


def make_shape(coeffs: Mapping[int, complex]) -> ShapeFunction:
    """Build a normalized shape function from a harmonic-coefficient map.

    Zero coefficients are dropped. If the surviving indices share a common
    divisor g > 1 they are divided by g and ``gcd_factor`` is set to g.
    """
    if 0 in coeffs and coeffs[0] != 0:
        raise InvalidShapeError("shape functions must have zero mean (no n=0 term)")
    items = {int(n): complex(c) for n, c in coeffs.items() if n != 0 and c != 0}
    if not items:
        raise InvalidShapeError("shape needs at least one nonzero coefficient")
    g = reduce(gcd, (abs(n) for n in items))
    if g > 1:
        items = {n // g: c for n, c in items.items()}
    norm = np.sqrt(sum(abs(c) ** 2 for c in items.values()))
    return ShapeFunction({n: c / norm for n, c in sorted(items.items())}, gcd_factor=g)


@dataclass
class SampledSignal:
    """Complex samples of a signal on the uniform grid t_j = j/L of [0, 1)."""

    samples: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def L(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return time_grid(self.L)

    @property
    def sample_rate(self) -> float:
        return float(self.L)

    def norm(self) -> float:
        """L2([0,1]) norm approximated by the rectangle rule."""
        return l2_norm(self.samples)

    def __add__(self, other: "SampledSignal") -> "SampledSignal":
        return superpose([self, other])

    def __neg__(self) -> "SampledSignal":
        return SampledSignal(-self.samples)


def time_grid(L: int) -> np.ndarray:
    return np.arange(L) / L


def l2_norm(x) -> float:
    x = np.asarray(x)
    return float(np.sqrt(np.mean(np.abs(x) ** 2)))


def is_power_of_two(L: int) -> bool:
    return L > 0 and (L & (L - 1)) == 0


@dataclass
class GimtSpec:
    """alpha(t) * s(2 pi N phi(t)), with alpha and phi supplied as callables.

    ``dphase`` is the derivative phi'(t); when omitted it is estimated by a
    centered difference, which is only used for reporting.
    """

    shape: ShapeFunction
    amplitude: Callable[[np.ndarray], np.ndarray]
    wavenumber: float
    phase: Callable[[np.ndarray], np.ndarray]
    dphase: Callable[[np.ndarray], np.ndarray] | None = None

    def phase_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.dphase is not None:
            return np.asarray(self.dphase(t), dtype=float) * np.ones_like(t)
        h = 1e-6
        return (self.phase(t + h) - self.phase(t - h)) / (2 * h)

    def inst_frequency(self, t, n: int = 1) -> np.ndarray:
        """n N phi'(t), the instantaneous frequency of harmonic n."""
        return n * self.wavenumber * self.phase_derivative(t)

    def empirical_M(self, L: int = 4096) -> float:
        """Smallest M with alpha, phi' in [1/M, M] on the grid (reporting only)."""
        t = time_grid(L)
        a = np.asarray(self.amplitude(t), dtype=float) * np.ones(L)
        dp = self.phase_derivative(t)
        vals = np.concatenate([a, dp])
        if np.any(vals <= 0):
            return float("inf")
        return float(max(vals.max(), 1.0 / vals.min(), self.shape.sup_bound()))


def synth(spec: GimtSpec, L: int = DEFAULT_SAMPLES) -> SampledSignal:
    """Sample alpha(t) sum_n s_hat(n) exp(2 pi i n N phi(t)) on t_j = j/L."""
    t = time_grid(L)
    top = spec.shape.max_harmonic * spec.wavenumber
    if L < 4 * top:
        raise AliasingError(f"L={L} too small for harmonic {top:g} (need L >= {4 * top:g})")
    alpha = np.asarray(spec.amplitude(t), dtype=float) * np.ones(L)
    theta = spec.wavenumber * np.asarray(spec.phase(t), dtype=float)
    out = np.zeros(L, dtype=complex)
    for n, c in spec.shape.coeffs.items():
        out += c * np.exp(2j * np.pi * n * theta)
    return SampledSignal(alpha * out)


def superpose(modes: Sequence[SampledSignal]) -> SampledSignal:
    if not modes:
        raise ValueError("nothing to superpose")
    lengths = {m.L for m in modes}
    if len(lengths) != 1:
        raise ValueError(f"length mismatch: {sorted(lengths)}")
    return SampledSignal(np.sum([m.samples for m in modes], axis=0))


def noise_variance(modes: Sequence[SampledSignal], snr_db: float) -> float:
    """sigma^2 solving SNR = min_i 10 log10(||f_i|| / sigma^2)."""
    if not modes:
        raise ValueError("need at least one mode to define the SNR")
    weakest = min(m.norm() for m in modes)
    return weakest / 10.0 ** (snr_db / 10.0)


def add_noise(
    f: SampledSignal, modes: Sequence[SampledSignal], snr_db: float, seed: int = 0
) -> SampledSignal:
    """Add circular complex Gaussian noise at the requested SNR (dB).

    ``snr_db = inf`` returns an unchanged copy.
    """
    if np.isinf(snr_db) and snr_db > 0:
        return SampledSignal(f.samples.copy())
    var = noise_variance(modes, snr_db)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(f.L) + 1j * rng.standard_normal(f.L)
    noise *= np.sqrt(var / 2.0)
    return SampledSignal(f.samples + noise, meta={"noise_variance": var, "seed": seed})
