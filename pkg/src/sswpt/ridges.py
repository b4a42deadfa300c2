"""Essential supports of the squeezed plane and the IF curves they carry."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .squeeze import SqueezedPlane

DEFAULT_LEVEL = 1e-2
DEFAULT_FLOOR = 1e-3
DEFAULT_CUTOFF = 8.0


class EmptyDecompositionError(RuntimeError):
    pass


@dataclass
class RidgeSupport:
    """One 8-connected component of the thresholded squeezed plane."""

    vbins: np.ndarray
    cols: np.ndarray
    label: int
    energy: float = 0.0

    def __len__(self) -> int:
        return self.vbins.size

    @property
    def cells(self) -> set[tuple[int, int]]:
        return set(zip(self.vbins.tolist(), self.cols.tolist()))

    def mask(self, shape: tuple[int, int]) -> np.ndarray:
        m = np.zeros(shape, dtype=bool)
        m[self.vbins, self.cols] = True
        return m

    def coverage(self, L: int) -> float:
        """Fraction of time columns the support touches."""
        return np.unique(self.cols).size / L


@dataclass
class IFCurve:
    values: np.ndarray
    weights: np.ndarray
    support_label: int = -1
    gaps: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.gaps is None:
            self.gaps = self.weights <= 0

    def __len__(self) -> int:
        return self.values.size

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def scaled(self, c: float) -> "IFCurve":
        return IFCurve(self.values * c, self.weights.copy(), self.support_label, self.gaps.copy())


def extract_supports(T: SqueezedPlane, level: float = DEFAULT_LEVEL,
                     floor: float = DEFAULT_FLOOR, min_coverage: float = 0.0) -> list[RidgeSupport]:
    """Connected components of {T >= level * max T}, strongest first.

    Components holding less than ``floor`` of the total energy are dropped,
    as are components touching fewer than ``min_coverage`` of the time
    columns (short blobs are what noise leaves behind).
    """
    E = T.energy
    top = E.max() if E.size else 0.0
    if top <= 0:
        raise EmptyDecompositionError("squeezed plane carries no energy")
    lab, n = ndimage.label(E >= level * top, structure=np.ones((3, 3), dtype=int))
    if n == 0:
        raise EmptyDecompositionError("no cell passes the support threshold")
    idx = np.arange(1, n + 1)
    totals = ndimage.sum(E, lab, idx)
    keep = idx[totals >= floor * E.sum()]
    if keep.size == 0:
        raise EmptyDecompositionError("every component fell below the energy floor")
    slices = ndimage.find_objects(lab)
    out = []
    for k in keep:
        sl = slices[k - 1]
        v, c = np.nonzero(lab[sl] == k)
        S = RidgeSupport(v + sl[0].start, c + sl[1].start, int(k), float(totals[k - 1]))
        if S.coverage(T.L) >= min_coverage:
            out.append(S)
    if not out:
        raise EmptyDecompositionError("no component covers enough of the time axis")
    out.sort(key=lambda r: -r.energy)
    for i, r in enumerate(out):
        r.label = i
    return out


def condense(T: SqueezedPlane, S: RidgeSupport) -> IFCurve:
    """Per-column energy-weighted mean frequency over the support."""
    if len(S) == 0:
        raise ValueError("empty support")
    L = T.L
    e = T.energy[S.vbins, S.cols]
    w = np.bincount(S.cols, weights=e, minlength=L)
    num = np.bincount(S.cols, weights=e * T.vgrid[S.vbins], minlength=L)
    have = w > 0
    if not np.any(have):
        # zero-energy support: fall back to an unweighted average
        w1 = np.bincount(S.cols, minlength=L).astype(float)
        num = np.bincount(S.cols, weights=T.vgrid[S.vbins], minlength=L)
        have = w1 > 0
        vals = np.zeros(L)
        vals[have] = num[have] / w1[have]
    else:
        vals = np.zeros(L)
        vals[have] = num[have] / w[have]
    cols = np.arange(L)
    vals = np.interp(cols, cols[have], vals[have])
    return IFCurve(vals, w, S.label, ~have)


def smooth(curve: IFCurve, cutoff: float = DEFAULT_CUTOFF) -> IFCurve:
    """Low-pass by Fourier truncation after removing an endpoint line.

    A line joining the two ends is taken out so the remainder is close to
    periodic, then added back; the mean is kept. Each end value comes from
    a short local line fit rather than a single sample, so noise at the
    record edges does not leak into the trend.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    y = curve.values
    L = y.size
    if cutoff >= L / 2:
        return IFCurve(y.copy(), curve.weights.copy(), curve.support_label, curve.gaps.copy())
    w = int(min(L // 2, max(2, round(L / (8 * cutoff)))))
    idx = np.arange(w)
    y0 = np.polyval(np.polyfit(idx, y[:w], 1), 0)
    y1 = np.polyval(np.polyfit(idx, y[-w:], 1), w - 1)
    ramp = y0 + (y1 - y0) * np.arange(L) / (L - 1)
    spec = np.fft.rfft(y - ramp)
    freqs = np.fft.rfftfreq(L, d=1.0 / L)
    spec[freqs > cutoff] = 0
    out = np.fft.irfft(spec, n=L) + ramp
    return IFCurve(out, curve.weights.copy(), curve.support_label, curve.gaps.copy())


class RidgeCount(NamedTuple):
    count: int
    per_column: np.ndarray


def count_ridges(T: SqueezedPlane, level: float = DEFAULT_LEVEL, merge_bins: int = 10,
                 mass_fraction: float = 0.25) -> RidgeCount:
    """Number of disjoint ridges seen at a typical time instant.

    In each column, bins above ``level * max T`` are grouped when closer than
    ``merge_bins``; groups carrying at least ``mass_fraction`` of the
    column's heaviest group count as ridges. The reported count is the most
    frequent per-column value, so brief crossings do not change it.
    """
    E = T.energy
    top = E.max()
    counts = np.zeros(T.L, dtype=int)
    if top <= 0:
        return RidgeCount(0, counts)
    above = E >= level * top
    for col in range(T.L):
        idx = np.flatnonzero(above[:, col])
        if idx.size == 0:
            continue
        cut = np.flatnonzero(np.diff(idx) > merge_bins) + 1
        csum = np.concatenate([[0.0], np.cumsum(E[:, col])])
        lo = idx[np.r_[0, cut]]
        hi = idx[np.r_[cut - 1, idx.size - 1]]
        mass = csum[hi + 1] - csum[lo]
        counts[col] = int(np.sum(mass >= mass_fraction * mass.max()))
    vals, freq = np.unique(counts, return_counts=True)
    return RidgeCount(int(vals[np.argmax(freq)]), counts)
