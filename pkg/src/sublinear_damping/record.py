"""Run records: snapshots plus per-step diagnostic series, and their on-disk layout.

Directory layout written by :func:`write_record`::

    manifest.txt          key=value: model, config hash, file list
    config.txt            config echo (parseable by parse_config)
    snapshots/snap_NNNNNN.csv
    series/<name>.csv
    <extra>/snap_NNNNNN.csv   list-valued extras, e.g. wave velocities
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .config import RunConfig, parse_config
from .core import RealField, TimeSeries, fmt, read_series, read_snapshot, write_series, write_snapshot
from .errors import FormatError


@dataclass
class RunRecord:
    snapshots: List[RealField] = field(default_factory=list)
    series: Dict[str, TimeSeries] = field(default_factory=dict)
    config: Optional[RunConfig] = None
    extras: Dict[str, object] = field(default_factory=dict)

    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])

    def snapshot_at(self, t) -> RealField:
        """Stored snapshot closest to ``t``."""
        times = self.times()
        return self.snapshots[int(np.argmin(np.abs(times - t)))]

    def __getitem__(self, name) -> TimeSeries:
        return self.series[name]


class SeriesRecorder:
    """Accumulates named scalar diagnostics against time."""

    def __init__(self, names):
        self.names = list(names)
        self._t = []
        self._v = {n: [] for n in self.names}

    def add(self, t, **values):
        self._t.append(float(t))
        for n in self.names:
            self._v[n].append(float(values[n]))

    def finish(self) -> Dict[str, TimeSeries]:
        t = np.array(self._t)
        return {n: TimeSeries(n, t, np.array(self._v[n])) for n in self.names}


def write_record(record: RunRecord, out_dir) -> Path:
    out = Path(out_dir)
    (out / "snapshots").mkdir(parents=True, exist_ok=True)
    (out / "series").mkdir(parents=True, exist_ok=True)
    cfg = record.config
    meta = {}
    if cfg is not None:
        meta = {"model": cfg.model, "config_hash": cfg.content_hash()}
        (out / "config.txt").write_text(cfg.to_text(), encoding="utf-8")
    snap_files = []
    for i, snap in enumerate(record.snapshots):
        name = f"snapshots/snap_{i:06d}.csv"
        write_snapshot(snap, out / name, meta)
        snap_files.append(name)
    series_files = []
    for name in sorted(record.series):
        rel = f"series/{name}.csv"
        write_series(record.series[name], out / rel)
        series_files.append(rel)
    manifest = dict(meta)
    manifest["n_snapshots"] = len(snap_files)
    manifest["series"] = ",".join(sorted(record.series))
    for key in sorted(record.extras):
        value = record.extras[key]
        if isinstance(value, list):
            (out / key).mkdir(exist_ok=True)
            for i, snap in enumerate(value):
                write_snapshot(snap, out / key / f"snap_{i:06d}.csv", meta)
            manifest[f"fields.{key}"] = len(value)
        else:
            manifest[f"extra.{key}"] = fmt(value) if isinstance(value, float) else value
    lines = [f"{k}={v}" for k, v in manifest.items()]
    (out / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def read_manifest(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if "=" not in line:
            raise FormatError(f"manifest line is not key=value: {line!r}", lineno)
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def read_record(out_dir) -> RunRecord:
    out = Path(out_dir)
    config = None
    if (out / "config.txt").exists():
        config = parse_config((out / "config.txt").read_text(encoding="utf-8"))
    snaps = [read_snapshot(p) for p in sorted((out / "snapshots").glob("snap_*.csv"))]
    series = {}
    for p in sorted((out / "series").glob("*.csv")):
        s = read_series(p)
        series[s.name] = s
    extras = {}
    if (out / "manifest.txt").exists():
        for k, v in read_manifest(out / "manifest.txt").items():
            if k.startswith("extra."):
                extras[k[len("extra."):]] = v
            elif k.startswith("fields."):
                key = k[len("fields."):]
                extras[key] = [read_snapshot(p) for p in sorted((out / key).glob("snap_*.csv"))]
    return RunRecord(snaps, series, config, extras)
