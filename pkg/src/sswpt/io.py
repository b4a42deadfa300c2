"""CSV/JSON readers and writers for signals, planes, curves and spectra."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ridges import IFCurve
from .signal import SampledSignal
from .squeeze import SqueezedPlane
from .wavepacket import WavePacketPlane

FMT = "%.10e"


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def sidecar(path, config: dict, **extra) -> None:
    write_json(str(path) + ".json", {"config": config, **extra})


def write_signal(path, f: SampledSignal) -> None:
    x = f.samples
    L = x.size
    data = np.column_stack([np.arange(L) / L, x.real, x.imag])
    np.savetxt(path, data, delimiter=",", header="t,re,im", comments="", fmt=FMT)


def read_signal(path) -> SampledSignal:
    """Read ``t,re,im`` (or ``t,value`` for real data) CSV."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] == 2:
        return SampledSignal(data[:, 1].astype(complex))
    if data.shape[1] != 3:
        raise ValueError(f"{path}: expected columns t,re,im")
    return SampledSignal(data[:, 1] + 1j * data[:, 2])


def write_plane(path, plane: WavePacketPlane) -> None:
    """|W| as a dense matrix, one row per band."""
    np.savetxt(path, np.abs(plane.coeffs), delimiter=",", fmt="%.6e")


def write_squeezed(path, sq: SqueezedPlane, log10: bool = False) -> None:
    """Nonzero cells as ``v,b,energy`` triplets (the dense grid is mostly empty)."""
    v, b = np.nonzero(sq.energy)
    e = sq.energy[v, b]
    if log10:
        e = np.log10(e)
    data = np.column_stack([sq.vgrid[v], b / sq.L, e])
    head = "v,b,log10_energy" if log10 else "v,b,energy"
    np.savetxt(path, data, delimiter=",", header=head, comments="", fmt="%.6e")


def write_curve(path, curve: IFCurve) -> None:
    L = len(curve)
    data = np.column_stack([np.arange(L) / L, curve.values, curve.weights])
    np.savetxt(path, data, delimiter=",", header="b,psi,weight", comments="", fmt=FMT)


def write_spectrum(path, rows) -> None:
    data = np.asarray(rows, dtype=float).reshape(-1, 3)
    np.savetxt(path, data, delimiter=",", header="tau,beta_abs,beta_arg", comments="", fmt=FMT)


def write_vector(path, values, name: str) -> None:
    np.savetxt(path, np.asarray(values, dtype=float), header=name, comments="", fmt=FMT)
