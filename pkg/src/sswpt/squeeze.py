"""Instantaneous frequency information and synchrosqueezed energy."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .wavepacket import WavePacketPlane

DEFAULT_EPSILON = 1e-6


def if_info(plane: WavePacketPlane) -> np.ndarray:
    """v_f = dW / (2 pi i W); cells with W == 0 hold ``inf``."""
    if plane.dcoeffs is None:
        raise ValueError("plane was computed without the b-derivative")
    W = plane.coeffs
    nz = W != 0
    v = np.full(W.shape, np.inf, dtype=complex)
    v[nz] = plane.dcoeffs[nz] / (2j * np.pi * W[nz])
    return v


def default_vgrid(L: int, width: float = 1.0) -> np.ndarray:
    """Linear bin centers 0, width, ..., up to the Nyquist frequency L/2."""
    return np.arange(0.0, L / 2 + width / 2, width)


def gate(plane: WavePacketPlane, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """R_eps = {|W| >= |a|^{-s/2} sqrt(eps)}."""
    a = np.abs(plane.ladder.centers)[:, None]
    return np.abs(plane.coeffs) >= a ** (-plane.ladder.s / 2) * np.sqrt(epsilon)


@dataclass
class SqueezedPlane:
    energy: np.ndarray
    vgrid: np.ndarray
    threshold: float
    retained: np.ndarray = field(repr=False)
    bins: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)

    @property
    def bin_width(self) -> float:
        return float(self.vgrid[1] - self.vgrid[0]) if self.vgrid.size > 1 else 1.0

    @property
    def L(self) -> int:
        return self.energy.shape[1]

    def log10(self, floor: float = 1e-16) -> np.ndarray:
        return np.log10(np.maximum(self.energy, floor))


def squeeze(plane: WavePacketPlane, vf: np.ndarray | None = None,
            epsilon: float = DEFAULT_EPSILON, vgrid: np.ndarray | None = None) -> SqueezedPlane:
    """Reassign |W|^2 * da to the bin nearest Re v_f, column by column.

    ``bins`` records, for every (a_j, b_l) cell, the bin it was sent to (-1
    for cells that were gated out), which is what mode reconstruction uses
    to map supports back to wave packet cells.
    """
    if vf is None:
        vf = if_info(plane)
    L = plane.L
    if vgrid is None:
        vgrid = default_vgrid(L)
    vgrid = np.asarray(vgrid, dtype=float)
    width = vgrid[1] - vgrid[0]
    if not np.allclose(np.diff(vgrid), width):
        raise ValueError("vgrid must be linear")
    if width > plane.ladder.radii.min():
        warnings.warn("vgrid bin width exceeds the narrowest band radius", stacklevel=2)

    bins = assign_bins(vf, vgrid)
    keep = gate(plane, epsilon) & (bins >= 0)
    weights = plane.ladder.weights[:, None] * np.abs(plane.coeffs) ** 2
    nv = vgrid.size
    # flat index bin * L + column; bincount sums in a fixed order
    cols = np.broadcast_to(np.arange(L), bins.shape)
    flat = bins[keep] * L + cols[keep]
    energy = np.bincount(flat, weights=weights[keep], minlength=nv * L).reshape(nv, L)
    bins = np.where(keep, bins, -1)
    return SqueezedPlane(energy, vgrid, float(epsilon), keep, bins,
                         meta={"weights": "ladder band spacing"})


def assign_bins(vf: np.ndarray, vgrid: np.ndarray) -> np.ndarray:
    """Nearest-bin index of Re v_f, -1 when infinite or outside the grid."""
    width = vgrid[1] - vgrid[0]
    re = np.real(vf)
    finite = np.isfinite(vf)
    idx = np.full(vf.shape, -1, dtype=np.int64)
    pos = np.rint((re[finite] - vgrid[0]) / width)
    ok = (pos >= 0) & (pos < vgrid.size)
    tmp = np.full(pos.shape, -1, dtype=np.int64)
    tmp[ok] = pos[ok].astype(np.int64)
    idx[finite] = tmp
    return idx


def retained_energy(plane: WavePacketPlane, sq: SqueezedPlane) -> float:
    w = plane.ladder.weights[:, None] * np.abs(plane.coeffs) ** 2
    return float(np.sum(w[sq.retained]))
