"""End-to-end decomposition: transform, squeeze, ridges, classes, modes, pursuit."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import dsa as dsa_mod
from .classify import CurveClassification, FundamentalEstimate, classify, fundamental, harmonic_index
from .gmdwp import ModeEstimate, build_mode, claim_map, integrate_phase
from .ridges import IFCurve, RidgeSupport, condense, extract_supports, smooth
from .signal import DEFAULT_SAMPLES, SampledSignal, l2_norm
from .squeeze import SqueezedPlane, default_vgrid, squeeze
from .wavepacket import (DEFAULT_OVERLAP, DEFAULT_SHARPNESS, WavePacketPlane, analytic, build_mother,
                         forward, make_ladder)


@dataclass
class PipelineConfig:
    s: float = 2 / 3
    d: float = 1.0
    sharpness: float = DEFAULT_SHARPNESS
    overlap: float = DEFAULT_OVERLAP
    epsilon: float = 1e-6
    samples: int = DEFAULT_SAMPLES
    vbin_width: float = 1.0
    level: float = 1e-2
    floor: float = 1e-3
    min_coverage: float = 0.5
    mask_spread: int = 4
    smooth_cutoff: float = 8.0
    sigma: float | None = None
    search_cap: int = 32
    dsa_tol: float = 1e-3
    max_iter: int = 200
    upsample: int = 4
    noise_ratio: float | None = 5.0
    seed: int = 0
    snr_db: float | None = None
    workers: int = 1

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class ModeBundle:
    members: list[int]
    fundamental: FundamentalEstimate
    gmdwp: ModeEstimate
    seed_curve: int
    harmonic: int


@dataclass
class Decomposition:
    config: PipelineConfig
    plane: WavePacketPlane
    squeezed: SqueezedPlane
    supports: list[RidgeSupport]
    curves: list[IFCurve]
    smoothed: list[IFCurve]
    classification: CurveClassification
    modes: list[ModeBundle] = field(default_factory=list)
    dsa: dsa_mod.DsaResult | None = None

    def report(self) -> dict:
        out = {
            "config": self.config.to_dict(),
            "bands": len(self.plane.ladder),
            "supports": [{"label": S.label, "cells": len(S), "energy": S.energy} for S in self.supports],
            "classification": self.classification.to_dict(),
            "modes": [{"members": m.members, "n0": m.fundamental.n0, "confidence": m.fundamental.confidence,
                       "seed_curve": m.seed_curve, "harmonic": m.harmonic} for m in self.modes],
        }
        if self.dsa is not None:
            out["dsa"] = {"iterations": self.dsa.iterations, "stop_reason": self.dsa.stop_reason,
                          "residual_norm": float(self.dsa.residual_norm_history[-1]),
                          "flags": self.dsa.flags}
        return out


def transform(f: SampledSignal, cfg: PipelineConfig) -> tuple[WavePacketPlane, SqueezedPlane]:
    mother = build_mother(cfg.d, cfg.sharpness)
    ladder = make_ladder(f.L, cfg.s, cfg.d, cfg.overlap)
    plane = forward(f, mother, ladder, workers=cfg.workers)
    sq = squeeze(plane, epsilon=cfg.epsilon, vgrid=default_vgrid(f.L, cfg.vbin_width))
    return plane, sq


def _single(n: int) -> CurveClassification:
    return CurveClassification(1, np.zeros(n, dtype=int), np.zeros((n, n)), np.zeros(n), 1.0,
                               {"note": "single curve"})


def decompose(f: SampledSignal, cfg: PipelineConfig | None = None, run_dsa: bool = True) -> Decomposition:
    cfg = cfg or PipelineConfig()
    plane, sq = transform(f, cfg)
    supports = extract_supports(sq, cfg.level, cfg.floor, cfg.min_coverage)
    curves = [condense(sq, S) for S in supports]
    smoothed = [smooth(c, cfg.smooth_cutoff) for c in curves]
    if len(curves) == 1:
        cls = _single(1)
    else:
        cls = classify(smoothed, cfg.sigma, seed=cfg.seed)
    out = Decomposition(cfg, plane, sq, supports, curves, smoothed, cls)
    claims = claim_map(sq, supports, cfg.mask_spread)
    for k in range(cls.K):
        members = cls.members(k)
        fund = fundamental([smoothed[i] for i in members], cfg.search_cap)
        mode = build_mode(plane, sq, [supports[i] for i in members], fund.fundamental, claims)
        # supports are sorted by energy, so the first member is the strongest term
        seed = members[0]
        out.modes.append(ModeBundle(members, fund, mode, seed, harmonic_index(smoothed[seed], fund)))
    if run_dsa:
        out.dsa = run_pursuit(f, out)
    return out


def mode_profile(dec: Decomposition, m: ModeBundle) -> dsa_mod.PhaseProfile:
    """Phase profile of one mode, refined by the phases of its recovered terms.

    The integrated IF curve only fixes the phase up to a slowly accumulating
    error; the reconstructed terms carry the phase itself.
    """
    guide = integrate_phase(m.fundamental.fundamental.values)
    hs = [harmonic_index(dec.smoothed[i], m.fundamental) for i in m.members]
    terms = [t.samples for t in m.gmdwp.per_term]
    theta = dsa_mod.phase_from_terms(terms, hs, guide, dec.config.smooth_cutoff)
    return dsa_mod.profile_from_phase(m.harmonic * theta)


def run_pursuit(f: SampledSignal, dec: Decomposition) -> dsa_mod.DsaResult:
    cfg = dec.config
    x = f.samples
    if dec.plane.meta.get("analytic"):
        x = analytic(np.real(x))
    profiles, amps, harms = [], [], []
    for m in dec.modes:
        profiles.append(mode_profile(dec, m))
        term = m.gmdwp.per_term[m.members.index(m.seed_curve)]
        env = smooth(IFCurve(np.abs(term.samples), np.ones(f.L)), cfg.smooth_cutoff).values
        amps.append(np.maximum(env, 1e-3 * env.max()))
        harms.append(m.harmonic)
    return dsa_mod.pursue(x, profiles, amps, eps=cfg.dsa_tol * l2_norm(x), max_iter=cfg.max_iter,
                          upsample=cfg.upsample, noise_ratio=cfg.noise_ratio, harmonics=harms)
