"""File formats: CSV and JSON for states and Wigner grids, gnuplot scripts.

Floats are written with ``repr`` (shortest exact decimal), so both
formats round-trip bit-exactly and identical computations yield
byte-identical files.
"""

import csv
import json

import numpy as np

from .errors import SchemaError
from .grids import Grid1D
from .wigner import WignerGrid

__all__ = [
    "write_wigner_csv", "read_wigner_csv", "write_wigner_json",
    "read_wigner_json", "write_wavefunction_csv", "write_wavefunction_json",
    "write_gnuplot_script", "write_marginal_csv",
]


def _fmt(x) -> str:
    return repr(float(x))


def write_wigner_csv(path, grid: WignerGrid):
    """``gamma,delta,w`` rows, row-major over gamma then delta."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gamma", "delta", "w"])
        dpts = grid.delta_grid.points
        for i, g in enumerate(grid.gamma_grid.points):
            gs = _fmt(g)
            for j in range(grid.delta_grid.n_points):
                writer.writerow([gs, _fmt(dpts[j]), _fmt(grid.values[i, j])])


def _grid_from_points(pts: np.ndarray, what: str) -> Grid1D:
    grid = Grid1D(float(pts[0]), float(pts[-1]), len(pts))
    if not np.array_equal(grid.points, pts) and not np.allclose(
            grid.points, pts, rtol=0.0, atol=1e-12 * max(1.0, np.abs(pts).max())):
        raise SchemaError(f"{what} axis values are not a uniform grid")
    return grid


def read_wigner_csv(path) -> WignerGrid:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["gamma", "delta", "w"]:
            raise SchemaError(f"unexpected CSV header {header}")
        rows = [(float(a), float(b), float(c)) for a, b, c in reader]
    if not rows:
        raise SchemaError("empty Wigner CSV")
    gammas, deltas, w = (np.array(col) for col in zip(*rows))
    # row-major layout: delta cycles fastest, so the block length is the
    # distance to the first reappearance of the leading delta value
    repeats = np.nonzero(deltas[1:] == deltas[0])[0]
    n_delta = int(repeats[0] + 1) if repeats.size else len(deltas)
    if len(rows) % n_delta:
        raise SchemaError("CSV rows do not form a complete gamma x delta grid")
    n_gamma = len(rows) // n_delta
    gamma_grid = _grid_from_points(gammas[::n_delta], "gamma")
    delta_grid = _grid_from_points(deltas[:n_delta], "delta")
    return WignerGrid(gamma_grid, delta_grid, w.reshape(n_gamma, n_delta))


def write_wigner_json(path, grid: WignerGrid):
    """Envelope ``{"meta": ..., "gamma": [...], "delta": [...], "w": [[...]]}``."""
    doc = {
        "meta": grid.meta,
        "gamma": grid.gamma_grid.points.tolist(),
        "delta": grid.delta_grid.points.tolist(),
        "w": grid.values.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def read_wigner_json(path) -> WignerGrid:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("gamma", "delta", "w"):
        if key not in doc:
            raise SchemaError(f"missing field '{key}' in Wigner JSON")
    gamma_grid = _grid_from_points(np.array(doc["gamma"], dtype=float), "gamma")
    delta_grid = _grid_from_points(np.array(doc["delta"], dtype=float), "delta")
    return WignerGrid(gamma_grid, delta_grid,
                      np.array(doc["w"], dtype=float), meta=doc.get("meta"))


def write_wavefunction_csv(path, coordinates, samples):
    """``coordinate,re,im`` rows."""
    samples = np.asarray(samples, dtype=complex)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["coordinate", "re", "im"])
        for x, s in zip(np.asarray(coordinates, dtype=float), samples):
            writer.writerow([_fmt(x), _fmt(s.real), _fmt(s.imag)])


def write_wavefunction_json(path, coordinates, samples, meta=None):
    samples = np.asarray(samples, dtype=complex)
    doc = {
        "meta": dict(meta) if meta else {},
        "coordinate": np.asarray(coordinates, dtype=float).tolist(),
        "re": samples.real.tolist(),
        "im": samples.imag.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def write_marginal_csv(path, axis_name, coordinates, density):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([axis_name, "density"])
        for x, d in zip(np.asarray(coordinates, float), np.asarray(density, float)):
            writer.writerow([_fmt(x), _fmt(d)])


def write_gnuplot_script(path, data_path, title):
    """Companion heat-map script for a Wigner CSV file."""
    lines = [
        "# gnuplot script; run:  gnuplot -p <this file>",
        "set datafile separator comma",
        "set xlabel 'gamma'",
        "set ylabel 'delta'",
        f"set title '{title}'",
        "set cbrange [*:*]",
        "set palette defined (-1 'blue', 0 'white', 1 'red')",
        f"plot '{data_path}' skip 1 using 1:2:3 with image notitle",
        "",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
