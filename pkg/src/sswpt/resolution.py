"""Closed-form resolution limits of the wave packet frame.

A band centred at a covers |xi - a| < d a^s. Two tones at N and lambda N
stay in disjoint bands as long as lambda < lambda0; a harmonic family
n N, n = 1..n0, keeps consecutive members apart.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy.optimize import bisect

BISECT_TOL = 1e-12


@dataclass
class ResolutionReport:
    N: float
    s: float
    d: float
    lambda0: float
    n0: int
    multiscale_gap: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def _check(N: float, d: float, s: float):
    if N < 1:
        raise ValueError("N must be at least 1")
    if not 0 < d <= 1:
        raise ValueError("d must lie in (0, 1]")
    if not 0.5 < s <= 1:
        raise ValueError("s must lie in (1/2, 1]")


def single_scale(N: float, d: float, s: float) -> float:
    """lambda0 = (2a - N) / N with a the root of N - a = d a^s on (0, N)."""
    _check(N, d, s)
    h = lambda a: N - a - d * a**s
    if h(0.0) <= 0 or h(N) >= 0:
        raise ValueError(f"no root of N - a = d a^s in (0, {N})")
    a = bisect(h, 0.0, N, xtol=BISECT_TOL, maxiter=500)
    # at s = 1, d = 1 the root sits exactly at N/2 and no ratio below 1 separates
    return min(max((2 * a - N) / N, 0.0), 1.0)


def multiscale(N: float, d: float, s: float) -> int:
    """n0 = floor(N^{1/s - 1} / (2d)^{1/s})."""
    _check(N, d, s)
    val = N ** (1 / s - 1) / (2 * d) ** (1 / s)
    near = round(val)
    # guard against 4.999999... from floating point on exact integers
    if abs(val - near) < 1e-9 * max(1.0, val):
        return int(near)
    return int(math.floor(val))


def report(N: float, d: float = 1.0, s: float = 2 / 3) -> ResolutionReport:
    n0 = multiscale(N, d, s)
    lam = single_scale(N, d, s)
    gap = 1 / ((n0 - 1) * N) - 1 / (n0 * N) if n0 >= 2 else None
    return ResolutionReport(float(N), float(s), float(d), lam, n0, gap)
