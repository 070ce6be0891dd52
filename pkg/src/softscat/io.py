"""File formats: image CSV (x,y,value), binary PGM, near-field CSV bundle,
operator dumps, and the run manifest.

All floats are written with ``repr`` (shortest round-trip form), which makes
repeated runs byte-identical and files diffable.
"""

from __future__ import annotations

import os

import numpy as np

from .config import ExperimentConfig, config_lines
from .forward import NearFieldData
from .geometry import source_circle
from .imaging import ImageGrid
from .xform import OperatorMatrix


def _fmt(x) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# images
# ---------------------------------------------------------------------------
def write_image_csv(path, image: ImageGrid) -> None:
    """Rows are y-major: all x for ys[0], then ys[1], ..."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("x,y,value\n")
        for iy, y in enumerate(image.ys):
            for ix, x in enumerate(image.xs):
                handle.write(f"{_fmt(x)},{_fmt(y)},{_fmt(image.values[iy, ix])}\n")


def read_image_csv(path) -> ImageGrid:
    xs_row, ys_all, vals = [], [], []
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().strip()
        if header != "x,y,value":
            raise ValueError(f"{path}: not an image CSV (bad header {header!r})")
        for line in handle:
            x, y, v = line.strip().split(",")
            xs_row.append(float(x))
            ys_all.append(float(y))
            vals.append(float(v))
    total = len(vals)
    n = int(round(total ** 0.5))
    if n * n != total:
        raise ValueError(f"{path}: expected a square grid, got {total} rows")
    xs = np.array(xs_row[:n])
    ys = np.array(ys_all[::n])
    values = np.array(vals).reshape(n, n)
    name = os.path.splitext(os.path.basename(path))[0]
    functional = name[2:] if name.startswith("W_") else name
    return ImageGrid(xs=xs, ys=ys, values=values, functional=functional)


def write_image_pgm(path, image: ImageGrid) -> None:
    """8-bit binary PGM, value scaled by 255; top row is the largest y."""
    scaled = np.rint(np.clip(image.values, 0.0, 1.0) * 255).astype(np.uint8)
    flipped = scaled[::-1, :]
    ny, nx = flipped.shape
    with open(path, "wb") as handle:
        handle.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        handle.write(flipped.tobytes())


# ---------------------------------------------------------------------------
# near-field bundle
# ---------------------------------------------------------------------------
def _write_matrix(path, mat: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for row in mat:
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def _read_matrix(path) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                rows.append([float(v) for v in line.split(",")])
    return np.array(rows)


def write_nearfield_bundle(directory, data: NearFieldData, shape_name: str = "") -> None:
    os.makedirs(directory, exist_ok=True)
    _write_matrix(os.path.join(directory, "U_re.csv"), data.U.real)
    _write_matrix(os.path.join(directory, "U_im.csv"), data.U.imag)
    _write_matrix(os.path.join(directory, "dU_re.csv"), data.dU.real)
    _write_matrix(os.path.join(directory, "dU_im.csv"), data.dU.imag)
    meta = [
        f"k = {_fmt(data.k)}",
        f"gamma_radius = {_fmt(data.gamma.radius)}",
        f"n = {data.gamma.count}",
        f"delta = {_fmt(data.delta)}",
        f"seed = {data.seed if data.seed is not None else ''}",
        f"shape = {shape_name}",
    ]
    with open(os.path.join(directory, "meta.txt"), "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(meta) + "\n")


def read_nearfield_bundle(directory) -> NearFieldData:
    meta = {}
    with open(os.path.join(directory, "meta.txt"), "r", encoding="utf-8") as handle:
        for line in handle:
            if "=" in line:
                key, value = line.split("=", 1)
                meta[key.strip()] = value.strip()
    U = _read_matrix(os.path.join(directory, "U_re.csv")) \
        + 1j * _read_matrix(os.path.join(directory, "U_im.csv"))
    dU = _read_matrix(os.path.join(directory, "dU_re.csv")) \
        + 1j * _read_matrix(os.path.join(directory, "dU_im.csv"))
    gamma = source_circle(float(meta["gamma_radius"]), int(meta["n"]))
    seed = int(meta["seed"]) if meta.get("seed") else None
    return NearFieldData(U=U, dU=dU, gamma=gamma, k=float(meta["k"]),
                         delta=float(meta.get("delta", 0.0)), seed=seed)


# ---------------------------------------------------------------------------
# operators and manifest
# ---------------------------------------------------------------------------
def write_operator_csv(directory, op: OperatorMatrix) -> None:
    os.makedirs(directory, exist_ok=True)
    _write_matrix(os.path.join(directory, f"{op.kind}_re.csv"), op.entries.real)
    _write_matrix(os.path.join(directory, f"{op.kind}_im.csv"), op.entries.imag)


def write_manifest(path, config: ExperimentConfig, diagnostics: list[str]) -> None:
    lines = ["# softscat run manifest",
             "# config section (reloadable via --config; dotted keys are diagnostics)"]
    lines += config_lines(config)
    lines += ["# diagnostics"]
    lines += diagnostics
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
