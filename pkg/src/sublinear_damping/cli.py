"""Command line: run presets or config files, trace characteristics, query the oracle, analyze records."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .analysis import run_checks
from .characteristics import trace_bundle
from .companions.nls import run_nls
from .companions.viscous import run_viscous
from .companions.wave import run_wave
from .config import RunConfig, load_config
from .core import fmt
from .errors import ConfigError, InvalidArgument
from .hyperbolic import run_conservation
from .oracle import input_from_config, solve
from .presets import PRESETS, get_preset
from .record import RunRecord, read_record, write_record

RUNNERS: Dict[str, Callable[[RunConfig], RunRecord]] = {
    "conservation": run_conservation,
    "viscous": run_viscous,
    "wave": run_wave,
    "nls": run_nls,
}


def resolve_config(config: Optional[str], preset: Optional[str], coarse: int = 1) -> RunConfig:
    if (config is None) == (preset is None):
        raise ConfigError("give exactly one of --config and --preset")
    cfg = load_config(config) if config is not None else get_preset(preset).config
    return cfg.coarsened(coarse)


def execute(model: str, cfg: RunConfig, out_dir) -> Path:
    if cfg.model != model:
        raise ConfigError(f"config is for model {cfg.model!r}, not {model!r}")
    return write_record(RUNNERS[model](cfg), out_dir)


def write_key_values(pairs: dict, path=None) -> str:
    text = "".join(f"{k}={fmt(v) if isinstance(v, float) else v}\n" for k, v in pairs.items())
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def parse_seeds(text: str, cfg: RunConfig) -> np.ndarray:
    """``"12"`` gives 12 evenly spaced seeds across the domain; ``"0.1,0.5"`` gives those positions."""
    if "," not in text:
        try:
            n = int(text)
        except ValueError:
            n = None
        if n is not None:
            if n < 1:
                raise InvalidArgument("seed count must be positive")
            return cfg.origin + cfg.length * (np.arange(n) + 0.5) / n
    return np.array([float(s) for s in text.split(",") if s.strip()])


# ------------------------------------------------------------------ subcommands
def cmd_run(args) -> int:
    cfg = resolve_config(args.config, args.preset, args.coarse)
    if args.t_final is not None:
        cfg = cfg.with_(t_final=args.t_final)
    out = execute(args.model, cfg, args.out)
    print(f"wrote {out}")
    return 0


def cmd_trace(args) -> int:
    record = read_record(args.record)
    if record.config is None:
        raise InvalidArgument(f"{args.record} has no config.txt")
    seeds = parse_seeds(args.seeds, record.config)
    bundle = trace_bundle(record, seeds, t0=args.t0, store_every=args.store_every)
    bundle.write(args.out)
    print(f"wrote {args.out} ({len(bundle.seeds)} paths, {len(bundle.ordering_violations)} ordering breaks)")
    return 0


def cmd_oracle(args) -> int:
    cfg = resolve_config(args.config, args.preset)
    report = solve(input_from_config(cfg))
    summary = report.summary()
    if args.out is None:
        sys.stdout.write(write_key_values(summary))
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_key_values(summary, out / "oracle.txt")
    if report.trace is not None:
        trace = report.trace
        with open(out / "trace.csv", "w", encoding="utf-8") as fh:
            fh.write("# columns=t,u\n")
            fh.writelines(f"{fmt(t)},{fmt(u)}\n" for t, u in zip(trace.t, trace.u))
        with open(out / "death_curve.csv", "w", encoding="utf-8") as fh:
            fh.write("# columns=t,x\n")
            fh.writelines(f"{fmt(t)},{fmt(x)}\n" for t, x in trace.death_curve())
    print(f"wrote {out}")
    return 0


def _parse_window(text):
    if text is None:
        return None
    lo, hi = (float(s) for s in text.split(","))
    return lo, hi


def cmd_analyze(args) -> int:
    record = read_record(args.record)
    if args.checks:
        names = [s.strip() for s in args.checks.split(",") if s.strip()]
    elif args.preset:
        names = list(get_preset(args.preset).checks)
    else:
        raise InvalidArgument("give --checks or --preset")
    options = {}
    if args.window:
        options["window"] = _parse_window(args.window)
    results = run_checks(record, names, **options)
    pairs = {}
    for r in results:
        print(f"{r.name:<18} {'PASS' if r.passed else 'FAIL'}  {fmt(r.value)}  {r.detail}")
        pairs[f"{r.name}.passed"] = str(r.passed).lower()
        pairs[f"{r.name}.value"] = r.value
    if args.out:
        write_key_values(pairs, args.out)
    return 0 if all(r.passed for r in results) else 1


def _sweep_job(job):
    name, cfg, out = job
    execute(cfg.model, cfg, out)
    return name, out


def sweep_jobs(names: Sequence[str], configs: Sequence[str], coarse: int, out_root) -> List[tuple]:
    jobs = []
    root = Path(out_root)
    for name in names:
        jobs.append((name, get_preset(name).config.coarsened(coarse), root / name))
    for path in configs:
        jobs.append((Path(path).stem, load_config(path).coarsened(coarse), root / Path(path).stem))
    seen = set()
    for name, _, _ in jobs:
        if name in seen:
            raise ConfigError(f"two sweep jobs share the output directory {name!r}")
        seen.add(name)
    return jobs


def cmd_sweep(args) -> int:
    names = [s for s in (args.presets or "").split(",") if s]
    if names == ["all"]:
        names = list(PRESETS)
    jobs = sweep_jobs(names, args.configs or [], args.coarse, args.out)
    if not jobs:
        raise InvalidArgument("nothing to run: give --presets and/or --configs")
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        for name, out in pool.map(_sweep_job, jobs):
            print(f"{name}: wrote {out}")
    return 0


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sublinear-damping", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a model and write its record")
    run.add_argument("model", choices=sorted(RUNNERS))
    run.add_argument("--config")
    run.add_argument("--preset", choices=sorted(PRESETS))
    run.add_argument("--coarse", type=int, default=1, help="scale dx and dt together by this factor")
    run.add_argument("--t-final", type=float, help="override the final time")
    run.add_argument("--out", required=True)
    run.set_defaults(func=cmd_run)

    trace = sub.add_parser("trace", help="trace characteristics through a conservation record")
    trace.add_argument("--record", required=True)
    trace.add_argument("--seeds", required=True, help="a count or a comma-separated list of positions")
    trace.add_argument("--t0", type=float)
    trace.add_argument("--store-every", type=int, default=1)
    trace.add_argument("--out", required=True)
    trace.set_defaults(func=cmd_trace)

    oracle = sub.add_parser("oracle", help="exact boundary trace and decay bounds for a constant datum")
    oracle.add_argument("--config")
    oracle.add_argument("--preset", choices=sorted(PRESETS))
    oracle.add_argument("--out", help="directory for oracle.txt, trace.csv and death_curve.csv")
    oracle.set_defaults(func=cmd_oracle)

    analyze = sub.add_parser("analyze", help="run named checks on a record")
    analyze.add_argument("--record", required=True)
    analyze.add_argument("--checks", help="comma-separated check names")
    analyze.add_argument("--preset", choices=sorted(PRESETS), help="use this preset's expected checks")
    analyze.add_argument("--window", help="fit window lo,hi")
    analyze.add_argument("--out", help="write key=value results here")
    analyze.set_defaults(func=cmd_analyze)

    sweep = sub.add_parser("sweep", help="run several presets or configs concurrently")
    sweep.add_argument("--presets", help="comma-separated preset names, or 'all'")
    sweep.add_argument("--configs", nargs="*")
    sweep.add_argument("--coarse", type=int, default=1)
    sweep.add_argument("--jobs", type=int, default=None)
    sweep.add_argument("--out", required=True)
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
