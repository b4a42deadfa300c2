"""Group IF curves into modes and find each mode's fundamental frequency.

Curves of the same mode are (near) integer multiples of one another, so the
normalized ratio of two such curves is constant in time. The residual of an
affine fit to that ratio is the dissimilarity fed to spectral clustering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg
from sklearn.cluster import KMeans

from .ridges import IFCurve

DEFAULT_SEED = 0
DEFAULT_SEARCH_CAP = 32


@dataclass
class CurveClassification:
    K: int
    assignment: np.ndarray
    residual_matrix: np.ndarray
    eigenvalues: np.ndarray
    sigma: float
    meta: dict = field(default_factory=dict)

    def members(self, k: int) -> list[int]:
        return np.flatnonzero(self.assignment == k).tolist()

    def to_dict(self) -> dict:
        return {"K": self.K, "labels": self.assignment.tolist(),
                "eigenvalues": self.eigenvalues.tolist(), "sigma": self.sigma, **self.meta}


@dataclass
class FundamentalEstimate:
    n0: int
    fundamental: IFCurve
    objective: np.ndarray
    reference: int
    confidence: str = "high"


def _values(c) -> np.ndarray:
    return np.asarray(c.values if isinstance(c, IFCurve) else c, dtype=float)


def _gaps(c, L: int) -> np.ndarray:
    if isinstance(c, IFCurve) and c.gaps is not None:
        return np.asarray(c.gaps, dtype=bool)
    return np.zeros(L, dtype=bool)


def residual_matrix(curves: Sequence[IFCurve | np.ndarray]) -> np.ndarray:
    """R[k, j] = RMS residual of the affine-in-b fit to (psi_k m_j) / (psi_j m_k)."""
    vals = [_values(c) for c in curves]
    n = len(vals)
    if n < 2:
        raise ValueError("need at least two curves")
    L = vals[0].size
    sups = np.array([np.max(np.abs(v)) for v in vals])
    bad = [_gaps(c, L) | (v <= 0) for c, v in zip(curves, vals)]
    b = np.arange(L) / L
    R = np.zeros((n, n))
    for k in range(n):
        for j in range(n):
            if k == j:
                continue
            ok = ~(bad[k] | bad[j])
            if ok.sum() < 3:
                R[k, j] = np.inf
                continue
            ratio = (vals[k][ok] * sups[j]) / (vals[j][ok] * sups[k])
            A = np.column_stack([np.ones(ok.sum()), b[ok]])
            coef, *_ = np.linalg.lstsq(A, ratio, rcond=None)
            R[k, j] = np.sqrt(np.mean((ratio - A @ coef) ** 2))
    return R


def default_sigma(R: np.ndarray) -> float:
    off = R[~np.eye(R.shape[0], dtype=bool)]
    off = off[np.isfinite(off)]
    sigma = float(np.median(off)) if off.size else 0.0
    return sigma if sigma > 0 else 1.0


def affinity(R: np.ndarray, sigma: float) -> np.ndarray:
    """A = g(R) + g(R^T) with g(x) = exp(-x^2 / 2 sigma^2); self-loops kept."""
    g = np.exp(-np.square(R) / (2 * sigma**2))
    g[~np.isfinite(R)] = 0.0
    return g + g.T


def normalized_laplacian(A: np.ndarray) -> np.ndarray:
    deg = A.sum(axis=1)
    inv = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    return np.eye(A.shape[0]) - inv[:, None] * A * inv[None, :]


def classify(curves: Sequence[IFCurve | np.ndarray], sigma: float | None = None,
             seed: int = DEFAULT_SEED, max_retries: int = 5) -> CurveClassification:
    """Spectral clustering of curves with the eigen-gap choice of K."""
    R = residual_matrix(curves)
    n = R.shape[0]
    if sigma is None:
        sigma = default_sigma(R)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    A = affinity(R, sigma)
    Lap = normalized_laplacian(A)
    evals, evecs = linalg.eigh(Lap)
    desc = evals[::-1]
    gaps = desc[:-1] - desc[1:]
    K = int(n - (np.argmax(gaps) + 1))
    K = max(K, 1)
    meta = {"laplacian": "symmetric", "seed": seed, "affinity": "gaussian, self-loops kept"}
    if K == 1:
        return CurveClassification(1, np.zeros(n, dtype=int), R, desc, float(sigma), meta)
    emb = evecs[:, :K]
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    emb = emb / np.where(norms > 0, norms, 1.0)
    last = None
    for attempt in range(max_retries):
        try:
            km = KMeans(K, init="k-means++", n_init=10, random_state=seed + attempt).fit(emb)
        except Exception as exc:  # pragma: no cover - sklearn failure modes
            last = exc
            continue
        if np.unique(km.labels_).size == K:
            return CurveClassification(K, _relabel(km.labels_, curves), R, desc, float(sigma), meta)
        last = RuntimeError("k-means returned an empty cluster")
    raise RuntimeError(f"k-means failed after {max_retries} seeds") from last


def _relabel(labels: np.ndarray, curves) -> np.ndarray:
    """Order classes by the lowest mean frequency they contain."""
    means = np.array([np.mean(_values(c)) for c in curves])
    keys = sorted(np.unique(labels), key=lambda k: means[labels == k].min())
    remap = {k: i for i, k in enumerate(keys)}
    return np.array([remap[k] for k in labels], dtype=int)


def fundamental(class_curves: Sequence[IFCurve | np.ndarray], M: int = DEFAULT_SEARCH_CAP,
                tie_tol: float = 1e-9) -> FundamentalEstimate:
    """Smallest integer n0 making n * psi_i / psi_1 integral for all i.

    psi_1 is the curve with the smallest sup-norm. The objective is the
    mean over the other curves of the mean squared distance of
    n psi_i / psi_1 to the nearest integer.
    """
    if M < 1:
        raise ValueError("search cap M must be at least 1")
    curves = list(class_curves)
    if not curves:
        raise ValueError("empty class")
    vals = [_values(c) for c in curves]
    if any(np.any(v <= 0) for v in vals):
        raise ValueError("IF curves must be positive")
    ref = int(np.argmin([np.max(np.abs(v)) for v in vals]))
    base = vals[ref]
    base_curve = curves[ref] if isinstance(curves[ref], IFCurve) else IFCurve(base, np.ones_like(base))
    ns = np.arange(1, M + 1)
    if len(vals) == 1:
        return FundamentalEstimate(1, base_curve.scaled(1.0), np.zeros(M), ref, "low")
    others = [v / base for i, v in enumerate(vals) if i != ref]
    obj = np.zeros(M)
    for i, n in enumerate(ns):
        acc = 0.0
        for r in others:
            x = n * r
            acc += np.mean((x - np.floor(x + 0.5)) ** 2)
        obj[i] = acc / len(others)
    best = obj.min()
    n0 = int(ns[np.flatnonzero(obj <= best + tie_tol)[0]])
    return FundamentalEstimate(n0, base_curve.scaled(1.0 / n0), obj, ref, "high")


def harmonic_index(curve: IFCurve | np.ndarray, fund: FundamentalEstimate) -> int:
    """Nearest integer to the mean ratio curve / fundamental."""
    return max(1, int(np.rint(np.mean(_values(curve) / fund.fundamental.values))))
