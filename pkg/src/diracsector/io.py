"""CSV formats for radial profiles and polar fields, and the JSON report envelope."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .angular import AngularGrid
from .errors import DiracSectorError
from .grid import LogGrid, RadialSample
from .partial_wave import PolarField

SCHEMA_VERSION = "1.0"
RADIAL_HEADER = ["r", "re_u1", "im_u1", "re_u2", "im_u2"]
POLAR_HEADER = ["r", "theta", "re_psi1", "im_psi1", "re_psi2", "im_psi2"]


class CSVFormatError(DiracSectorError, ValueError):
    pass


@dataclass
class ReportEnvelope:
    command: str
    parameters: dict
    results: dict
    diagnostics: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        return {
            "command": self.command,
            "parameters": _jsonable(self.parameters),
            "results": _jsonable(self.results),
            "diagnostics": _jsonable(self.diagnostics),
            "schema_version": self.schema_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def _fmt(x: float) -> str:
    return repr(float(x))


def write_radial_csv(path, sample: RadialSample) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(RADIAL_HEADER)
        for r, (u1, u2) in zip(sample.grid.nodes, sample.values):
            w.writerow([_fmt(r), _fmt(u1.real), _fmt(u1.imag), _fmt(u2.real), _fmt(u2.imag)])


def _read_rows(path, header):
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise CSVFormatError(f"{path}: cannot open ({exc.strerror})") from exc
    with fh:
        reader = csv.reader(fh)
        got = next(reader, None)
        if got is None or [h.strip() for h in got] != header:
            raise CSVFormatError(f"{path}: row 1: expected header {','.join(header)}, got {got}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CSVFormatError(f"{path}: row {lineno}: expected {len(header)} columns, got {len(row)}")
            vals = []
            for col, cell in zip(header, row):
                try:
                    v = float(cell)
                except ValueError:
                    raise CSVFormatError(f"{path}: row {lineno}, column {col}: not a number: {cell!r}") from None
                if not math.isfinite(v):
                    raise CSVFormatError(f"{path}: row {lineno}, column {col}: non-finite value")
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise CSVFormatError(f"{path}: no data rows")
    return np.array(rows)


def _grid_from_radii(path, r) -> LogGrid:
    if np.any(np.diff(r) <= 0):
        raise CSVFormatError(f"{path}: column r: radii must be strictly increasing")
    if r[0] <= 0:
        raise CSVFormatError(f"{path}: column r: radii must be positive")
    if r.size < 16:
        raise CSVFormatError(f"{path}: column r: need at least 16 radial nodes, got {r.size}")
    grid = LogGrid(r[0], r[-1], r.size)
    if not np.allclose(grid.nodes, r, rtol=1e-9, atol=0):
        bad = int(np.argmax(np.abs(grid.nodes - r) / r)) + 2
        raise CSVFormatError(f"{path}: column r near data row {bad}: radii are not a geometric progression")
    return grid


def read_radial_csv(path) -> RadialSample:
    data = _read_rows(path, RADIAL_HEADER)
    grid = _grid_from_radii(path, data[:, 0])
    vals = np.column_stack([data[:, 1] + 1j * data[:, 2], data[:, 3] + 1j * data[:, 4]])
    return RadialSample(grid, vals)


def write_polar_csv(path, field_: PolarField) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(POLAR_HEADER)
        for i, r in enumerate(field_.grid.nodes):
            for j, th in enumerate(field_.theta.nodes):
                p1, p2 = field_.values[i, j]
                w.writerow([_fmt(r), _fmt(th), _fmt(p1.real), _fmt(p1.imag), _fmt(p2.real), _fmt(p2.imag)])


def read_polar_csv(path, omega: float) -> PolarField:
    """Read a row-major (theta fastest) polar field; theta must be uniform on [0, omega]."""
    data = _read_rows(path, POLAR_HEADER)
    r_all, th_all = data[:, 0], data[:, 1]
    th = th_all[: np.argmax(r_all != r_all[0])] if np.any(r_all != r_all[0]) else th_all
    n_th = th.size
    if n_th < 2 or data.shape[0] % n_th:
        raise CSVFormatError(f"{path}: rows do not form an (r, theta) tensor grid")
    n_r = data.shape[0] // n_th
    r_grid = r_all.reshape(n_r, n_th)
    th_grid = th_all.reshape(n_r, n_th)
    if np.any(r_grid != r_grid[:, :1]):
        bad = np.argwhere(r_grid != r_grid[:, :1])[0]
        raise CSVFormatError(f"{path}: row {int(bad[0] * n_th + bad[1]) + 2}: "
                             "r must be constant within each theta sweep")
    if np.any(th_grid != th_grid[:1]):
        bad = np.argwhere(th_grid != th_grid[:1])[0]
        raise CSVFormatError(f"{path}: row {int(bad[0] * n_th + bad[1]) + 2}: theta sweep differs from the first one")
    grid = _grid_from_radii(path, r_grid[:, 0])
    theta = AngularGrid.uniform(omega, n_th)
    if not np.allclose(theta.nodes, th, rtol=0, atol=1e-9 * omega):
        raise CSVFormatError(f"{path}: column theta: expected {n_th} uniform nodes on [0, {omega!r}]")
    vals = np.stack([data[:, 2] + 1j * data[:, 3], data[:, 4] + 1j * data[:, 5]], axis=-1)
    return PolarField(grid, theta, vals.reshape(n_r, n_th, 2))
