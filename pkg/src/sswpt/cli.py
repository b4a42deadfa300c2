"""Command-line interface: ``sswpt <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures, io
from .pipeline import PipelineConfig, decompose, transform
from .resolution import report as resolution_report
from .signal import SampledSignal, add_noise

CONFIG_FLAGS = {
    "s": float, "d": float, "epsilon": float, "samples": int, "seed": int,
    "snr_db": float, "max_iter": int,
}


def resolve_config(args) -> PipelineConfig:
    data = {}
    if getattr(args, "config", None):
        data.update(io.read_json(args.config))
    for name in CONFIG_FLAGS:
        val = getattr(args, name, None)
        if val is not None:
            data[name] = val
    return PipelineConfig.from_dict(data)


def _add_config_flags(p):
    p.add_argument("--config", help="JSON config file; flags override it")
    for name, typ in CONFIG_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    cfg = resolve_config(args)
    name = args.fixture
    if name not in fixtures.FIXTURES:
        raise SystemExit(f"unknown fixture {name!r}; choose from {sorted(fixtures.FIXTURES)}")
    kw = {"L": cfg.samples}
    if args.N is not None:
        if name not in ("harmonic", "example2"):
            raise SystemExit(f"--N is not a parameter of {name}")
        kw["N"] = args.N
    fix = fixtures.FIXTURES[name](**kw)
    f = fix.signal
    if cfg.snr_db is not None:
        f = add_noise(f, fix.modes, cfg.snr_db, cfg.seed)
    io.write_signal(args.output, f)
    io.sidecar(args.output, cfg.to_dict(), fixture=name, N=args.N)
    return 0


def _load(args, cfg) -> SampledSignal:
    f = io.read_signal(args.signal)
    if cfg.snr_db is not None:
        f = add_noise(f, [f], cfg.snr_db, cfg.seed)
    return f


def cmd_transform(args) -> int:
    cfg = resolve_config(args)
    f = _load(args, cfg)
    plane, _ = transform(f, cfg)
    out = _outdir(args.output)
    io.write_plane(out / "plane.csv", plane)
    io.sidecar(out / "plane.csv", cfg.to_dict(), ladder=plane.ladder.to_dict(), mother=plane.mother.metadata)
    return 0


def cmd_squeeze(args) -> int:
    cfg = resolve_config(args)
    f = _load(args, cfg)
    _, sq = transform(f, cfg)
    out = _outdir(args.output)
    io.write_squeezed(out / "squeezed.csv", sq, log10=args.log10)
    io.sidecar(out / "squeezed.csv", cfg.to_dict(), vgrid={"start": float(sq.vgrid[0]),
               "width": sq.bin_width, "size": int(sq.vgrid.size)}, epsilon=sq.threshold)
    return 0


def _write_dsa(out: Path, dec, cfg) -> None:
    res = dec.dsa
    (out / "modes").mkdir(exist_ok=True)
    (out / "spectrum").mkdir(exist_ok=True)
    for k, (m, tab) in enumerate(zip(res.modes, res.tables)):
        io.write_signal(out / "modes" / f"{k}.csv", m)
        io.sidecar(out / "modes" / f"{k}.csv", cfg.to_dict(), mode=k, source="pursuit")
        io.write_spectrum(out / "spectrum" / f"{k}.csv", tab.rows())
        io.sidecar(out / "spectrum" / f"{k}.csv", cfg.to_dict(), mode=k, harmonic=tab.harmonic,
                   m=tab.m, p_total=tab.p_total)
    io.write_vector(out / "residual_history.csv", res.residual_norm_history, "residual_norm")
    io.sidecar(out / "residual_history.csv", cfg.to_dict())


def cmd_decompose(args) -> int:
    cfg = resolve_config(args)
    f = _load(args, cfg)
    dec = decompose(f, cfg)
    out = _outdir(args.output)
    conf = cfg.to_dict()
    if not args.no_planes:
        io.write_plane(out / "plane.csv", dec.plane)
        io.sidecar(out / "plane.csv", conf, ladder=dec.plane.ladder.to_dict(), mother=dec.plane.mother.metadata)
        io.write_squeezed(out / "squeezed.csv", dec.squeezed, log10=True)
        io.sidecar(out / "squeezed.csv", conf, epsilon=dec.squeezed.threshold, log10=True)
    (out / "curves").mkdir(exist_ok=True)
    for i, c in enumerate(dec.smoothed):
        io.write_curve(out / "curves" / f"{i}.csv", c)
        io.sidecar(out / "curves" / f"{i}.csv", conf, support=i, smoothed=True)
    (out / "gmdwp").mkdir(exist_ok=True)
    for k, m in enumerate(dec.modes):
        io.write_signal(out / "gmdwp" / f"{k}.csv", m.gmdwp.signal)
        io.sidecar(out / "gmdwp" / f"{k}.csv", conf, mode=k, source="mask reconstruction")
    _write_dsa(out, dec, cfg)
    io.write_json(out / "report.json", dec.report())
    return 0


def cmd_dsa(args) -> int:
    cfg = resolve_config(args)
    f = _load(args, cfg)
    dec = decompose(f, cfg)
    out = _outdir(args.output)
    _write_dsa(out, dec, cfg)
    io.write_json(out / "report.json", dec.report())
    return 0


def cmd_resolution(args) -> int:
    rep = resolution_report(args.N, args.d if args.d is not None else 1.0,
                            args.s if args.s is not None else 2 / 3)
    print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))
    return 0


def detrend(f: SampledSignal) -> tuple[SampledSignal, SampledSignal]:
    """Least-squares line removed from the samples; returns (residual, trend)."""
    x = f.samples
    L = x.size
    A = np.column_stack([np.ones(L), np.arange(L) / L])
    coef, *_ = np.linalg.lstsq(A, x, rcond=None)
    trend = A @ coef
    return SampledSignal(x - trend), SampledSignal(trend)


def cmd_detrend(args) -> int:
    f = io.read_signal(args.signal)
    resid, trend = detrend(f)
    io.write_signal(args.output, resid)
    trend_path = args.trend or str(Path(args.output).with_name(Path(args.output).stem + "_trend.csv"))
    io.write_signal(trend_path, trend)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sswpt", description="Synchrosqueezed wave packet mode decomposition")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a built-in test signal")
    p.add_argument("fixture")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--N", type=float, default=None)
    _add_config_flags(p)
    p.set_defaults(func=cmd_generate)

    for name, func, help_ in [("transform", cmd_transform, "wave packet coefficients"),
                              ("squeeze", cmd_squeeze, "synchrosqueezed energy"),
                              ("decompose", cmd_decompose, "full mode decomposition"),
                              ("dsa", cmd_dsa, "modes and spectra from the pursuit")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("signal")
        p.add_argument("-o", "--output", required=True, help="output directory")
        _add_config_flags(p)
        if name == "squeeze":
            p.add_argument("--log10", action="store_true")
        if name == "decompose":
            p.add_argument("--no-planes", action="store_true", help="skip plane.csv / squeezed.csv")
        p.set_defaults(func=func)

    p = sub.add_parser("resolution", help="resolution limits as JSON")
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.set_defaults(func=cmd_resolution)

    p = sub.add_parser("detrend", help="remove the least-squares line")
    p.add_argument("signal")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--trend", default=None)
    p.set_defaults(func=cmd_detrend)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
