"""Built-in synthetic test signals.

The shape functions of the two-mode example are only shown as pictures in
the literature, so concrete coefficient sets are fixed here: mode 1 has one
dominant harmonic and a few weak ones, mode 2 has six strong harmonics and a
weak tail. All shapes are analytic (positive harmonics only).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import DEFAULT_SAMPLES, GimtSpec, SampledSignal, ShapeFunction, make_shape, superpose, synth

TWO_PI = 2 * np.pi

S1 = make_shape({1: 1.0, 2: 0.05, 3: 0.04, 5: 0.03})
S2 = make_shape({1: 0.5, 2: 0.6, 3: 0.45, 4: 0.3, 5: 0.25, 6: 0.2, 7: 0.04, 8: 0.03})


@dataclass
class Fixture:
    name: str
    specs: list[GimtSpec]
    modes: list[SampledSignal]
    extra: list[SampledSignal]

    @property
    def signal(self) -> SampledSignal:
        return superpose(self.modes + self.extra)

    @property
    def L(self) -> int:
        return self.modes[0].L


def harmonic_spec(N: float, shape: ShapeFunction | None = None) -> GimtSpec:
    return GimtSpec(shape or make_shape({1: 1.0}), lambda t: np.ones_like(t), float(N),
                    lambda t: np.asarray(t, dtype=float), lambda t: np.ones_like(t))


def example1_specs() -> list[GimtSpec]:
    mode1 = GimtSpec(
        S1,
        lambda t: 1 + 0.05 * np.sin(4 * np.pi * t),
        60.0,
        lambda t: t + 0.01 * np.sin(TWO_PI * t),
        lambda t: 1 + 0.01 * TWO_PI * np.cos(TWO_PI * t),
    )
    mode2 = GimtSpec(
        S2,
        lambda t: 1 + 0.1 * np.sin(TWO_PI * t),
        90.0,
        lambda t: t + 0.01 * np.cos(TWO_PI * t),
        lambda t: 1 - 0.01 * TWO_PI * np.sin(TWO_PI * t),
    )
    return [mode1, mode2]


def example1(L: int = DEFAULT_SAMPLES) -> Fixture:
    specs = example1_specs()
    return Fixture("example1", specs, [synth(s, L) for s in specs], [])


def example2_chirp(L: int = DEFAULT_SAMPLES) -> SampledSignal:
    t = np.arange(L) / L
    return SampledSignal(np.exp(200j * np.pi * (t + 5 * t**2)))


def example2_harmonics_spec(N: float = 100.0, n_terms: int = 20) -> GimtSpec:
    shape = make_shape({n: 1.0 for n in range(1, n_terms + 1)})
    return GimtSpec(shape, lambda t: np.full_like(t, np.sqrt(n_terms)), N,
                    lambda t: t + 0.005 * np.sin(TWO_PI * t),
                    lambda t: 1 + 0.005 * TWO_PI * np.cos(TWO_PI * t))


def example2(L: int = DEFAULT_SAMPLES, N: float = 100.0) -> Fixture:
    """Chirp plus 20 unit-amplitude harmonics of a slowly warped phase."""
    spec = example2_harmonics_spec(N)
    return Fixture("example2", [spec], [synth(spec, L)], [example2_chirp(L)])


def example2_terms(L: int = DEFAULT_SAMPLES, N: float = 100.0, n_terms: int = 20) -> list[np.ndarray]:
    """Instantaneous frequencies of every oscillatory term (chirp last)."""
    t = np.arange(L) / L
    dphi = 1 + 0.005 * TWO_PI * np.cos(TWO_PI * t)
    return [n * N * dphi for n in range(1, n_terms + 1)] + [100 + 1000 * t]


def piecewise_constant_shape(levels: list[float], breaks: list[float], n_max: int) -> ShapeFunction:
    """Positive-frequency part of a piecewise constant 2*pi-periodic waveform.

    ``breaks`` are the interval start points in [0, 1) (fractions of a period),
    ``levels`` the constant values; only harmonics 1..n_max are kept.
    """
    edges = list(breaks) + [1.0]
    coeffs = {}
    for n in range(1, n_max + 1):
        c = 0.0j
        for lev, lo, hi in zip(levels, edges[:-1], edges[1:]):
            c += lev * (np.exp(-2j * np.pi * n * lo) - np.exp(-2j * np.pi * n * hi)) / (2j * np.pi * n)
        if abs(c) > 1e-12:
            coeffs[n] = c
    return make_shape(coeffs)


S3 = piecewise_constant_shape([1.0, -1.0], [0.0, 0.5], 9)
S4 = piecewise_constant_shape([1.0, 0.0, -1.0, 0.0], [0.0, 0.2, 0.45, 0.7], 9)


def example4_specs() -> list[GimtSpec]:
    mode3 = GimtSpec(S3, lambda t: 1 + 0.4 * np.sin(4 * np.pi * t), 120.0,
                     lambda t: t + 0.005 * np.sin(TWO_PI * t),
                     lambda t: 1 + 0.005 * TWO_PI * np.cos(TWO_PI * t))
    mode4 = GimtSpec(S4, lambda t: 1 - 0.3 * np.sin(TWO_PI * t), 185.0,
                     lambda t: t + 0.01 * np.cos(4 * np.pi * t),
                     lambda t: 1 - 0.04 * np.pi * np.sin(4 * np.pi * t))
    return [mode3, mode4]


def example4(L: int = DEFAULT_SAMPLES) -> Fixture:
    specs = example4_specs()
    return Fixture("example4", specs, [synth(s, L) for s in specs], [])


def harmonic(N: float = 64, L: int = DEFAULT_SAMPLES) -> Fixture:
    spec = harmonic_spec(N)
    return Fixture("harmonic", [spec], [synth(spec, L)], [])


def harmonic_sum(N: float, k: int, L: int = DEFAULT_SAMPLES) -> SampledSignal:
    """sum_{n=1}^{k} exp(2 pi i n N t)."""
    t = np.arange(L) / L
    return SampledSignal(np.sum([np.exp(2j * np.pi * n * N * t) for n in range(1, k + 1)], axis=0))


FIXTURES = {"example1": example1, "example2": example2, "example4": example4, "harmonic": harmonic}
