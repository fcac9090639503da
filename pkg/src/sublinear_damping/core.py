"""Grids, field containers and the plain-text file formats.

Every number written to disk uses 17 significant digits so that a
write/read cycle reproduces the float exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import FormatError, InvalidArgument, InvalidDatum, TimeMismatch

PERIODIC = "periodic"
DIRICHLET = "dirichlet"
TOPOLOGIES = (PERIODIC, DIRICHLET)

NUMBER_FORMAT = "%.17g"


def fmt(value) -> str:
    return NUMBER_FORMAT % value


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D mesh.

    Periodic grids are cell centred, ``x_j = origin + (j + 1/2) dx`` for
    ``j < n_cells``.  Dirichlet grids are node based, ``x_j = origin + j dx``
    for ``j <= n_cells``, so both end points are carried.
    """

    n_cells: int
    length: float = 1.0
    origin: float = 0.0
    topology: str = PERIODIC

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise InvalidArgument(f"n_cells must be an integer >= 2, got {self.n_cells!r}")
        if not (self.length > 0) or not math.isfinite(self.length):
            raise InvalidArgument(f"length must be positive, got {self.length!r}")
        if not math.isfinite(self.origin):
            raise InvalidArgument("origin must be finite")
        if self.topology not in TOPOLOGIES:
            raise InvalidArgument(f"unknown topology {self.topology!r}")

    @property
    def spacing(self) -> float:
        return self.length / self.n_cells

    @property
    def n_points(self) -> int:
        return self.n_cells if self.topology == PERIODIC else self.n_cells + 1

    @property
    def x(self) -> np.ndarray:
        j = np.arange(self.n_points, dtype=float)
        if self.topology == PERIODIC:
            return self.origin + (j + 0.5) * self.spacing
        return self.origin + j * self.spacing

    @property
    def end(self) -> float:
        return self.origin + self.length

    def wrap(self, x):
        """Map positions into ``[origin, origin + length)`` (periodic only)."""
        return self.origin + np.mod(np.asarray(x, dtype=float) - self.origin, self.length)

    def interpolate(self, values, x):
        """Piecewise-linear interpolation of nodal/cell values at ``x``."""
        values = np.asarray(values)
        x = np.asarray(x, dtype=float)
        if self.topology == PERIODIC:
            return np.interp(self.wrap(x), self.x, values, period=self.length)
        return np.interp(x, self.x, values)

    def describe(self) -> dict:
        return {
            "n_cells": self.n_cells,
            "length": self.length,
            "origin": self.origin,
            "topology": self.topology,
        }


def make_grid(n_cells, length=1.0, origin=0.0, topology=PERIODIC) -> Grid1D:
    return Grid1D(int(n_cells) if float(n_cells).is_integer() else n_cells,
                  float(length), float(origin), topology)


@dataclass
class RealField:
    values: np.ndarray
    time: float
    grid: Grid1D

    _dtype = float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=self._dtype)
        if values.ndim != 1 or values.shape[0] != self.grid.n_points:
            raise InvalidArgument(
                f"expected {self.grid.n_points} values for this grid, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidDatum("field contains non-finite entries")
        self.values = values
        self.time = float(self.time)

    def with_values(self, values, time=None):
        return type(self)(values, self.time if time is None else time, self.grid)

    def copy(self):
        return type(self)(self.values.copy(), self.time, self.grid)

    def require_time(self, time, rtol=1e-12):
        if not math.isclose(self.time, time, rel_tol=rtol, abs_tol=rtol):
            raise TimeMismatch(f"field time {self.time!r} != expected {time!r}")


@dataclass
class ComplexField(RealField):
    _dtype = complex


def sample_function(grid: Grid1D, func: Callable, complex_values=False) -> RealField:
    """Evaluate ``func`` at every grid point; the result sits at time 0."""
    x = grid.x
    try:
        values = np.asarray(func(x))
        if values.shape != x.shape:
            values = np.broadcast_to(values, x.shape).copy()
    except (TypeError, ValueError):
        values = np.array([func(float(xi)) for xi in x])
    if not np.all(np.isfinite(values)):
        bad = int(np.argmin(np.isfinite(values)))
        raise InvalidDatum(f"non-finite sample at x={x[bad]!r}")
    if complex_values or np.iscomplexobj(values):
        return ComplexField(values.astype(complex), 0.0, grid)
    return RealField(values.astype(float), 0.0, grid)


# --------------------------------------------------------------- file formats

def _read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def _parse_header(lines):
    meta = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body_start = i
            break
        text = line[1:].strip()
        if not text:
            continue
        if "=" not in text:
            raise FormatError(f"header line is not key=value: {line!r}", i + 1)
        key, value = text.split("=", 1)
        meta[key.strip()] = value.strip()
    else:
        body_start = len(lines)
    return meta, body_start


def _parse_rows(lines, start, n_cols):
    rows = []
    for i in range(start, len(lines)):
        line = lines[i].strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != n_cols:
            raise FormatError(f"expected {n_cols} columns, got {len(parts)}", i + 1)
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise FormatError(f"unparseable number in {line!r}", i + 1) from None
    return np.array(rows, dtype=float).reshape(-1, n_cols)


def write_snapshot(field: RealField, path, meta: Mapping[str, object] | None = None) -> Path:
    path = Path(path)
    is_complex = isinstance(field, ComplexField)
    header = {"kind": "complex" if is_complex else "real", "time": fmt(field.time)}
    for key, value in field.grid.describe().items():
        header[key] = fmt(value) if isinstance(value, float) else value
    header["columns"] = "x,re,im" if is_complex else "x,value"
    for key, value in (meta or {}).items():
        header[key] = value
    out = [f"# {k}={v}" for k, v in header.items()]
    x = field.grid.x
    if is_complex:
        for xi, vi in zip(x, field.values):
            out.append(f"{fmt(xi)},{fmt(vi.real)},{fmt(vi.imag)}")
    else:
        for xi, vi in zip(x, field.values):
            out.append(f"{fmt(xi)},{fmt(vi)}")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path


def read_snapshot(path) -> RealField:
    lines = _read_lines(path)
    meta, start = _parse_header(lines)
    try:
        grid = Grid1D(
            int(meta["n_cells"]),
            float(meta["length"]),
            float(meta["origin"]),
            meta["topology"],
        )
        time = float(meta["time"])
        kind = meta.get("kind", "real")
    except KeyError as exc:
        raise FormatError(f"missing header key {exc.args[0]!r}", 1) from None
    except ValueError as exc:
        raise FormatError(str(exc), 1) from None
    n_cols = 3 if kind == "complex" else 2
    rows = _parse_rows(lines, start, n_cols)
    if rows.shape[0] != grid.n_points:
        raise FormatError(f"expected {grid.n_points} rows, found {rows.shape[0]}", len(lines))
    if kind == "complex":
        return ComplexField(rows[:, 1] + 1j * rows[:, 2], time, grid)
    return RealField(rows[:, 1], time, grid)


def read_snapshot_meta(path) -> dict:
    meta, _ = _parse_header(_read_lines(path))
    return meta


@dataclass
class TimeSeries:
    name: str
    t: np.ndarray
    values: np.ndarray
    meta: dict = dc_field(default_factory=dict)

    def window(self, t0, t1):
        mask = (self.t >= t0) & (self.t <= t1)
        return self.t[mask], self.values[mask]

    def at(self, t):
        return np.interp(t, self.t, self.values)


def write_series(series: TimeSeries, path) -> Path:
    path = Path(path)
    out = [f"# name={series.name}"]
    out += [f"# {k}={v}" for k, v in series.meta.items()]
    out.append("# columns=t,value")
    out += [f"{fmt(t)},{fmt(v)}" for t, v in zip(series.t, series.values)]
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path


def read_series(path) -> TimeSeries:
    lines = _read_lines(path)
    meta, start = _parse_header(lines)
    rows = _parse_rows(lines, start, 2)
    name = meta.pop("name", Path(path).stem)
    meta.pop("columns", None)
    return TimeSeries(name, rows[:, 0], rows[:, 1], meta)
