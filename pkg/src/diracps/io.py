"""Binary field dumps with JSON sidecars.

Complex fields are written as little-endian IEEE-754 float64 pairs
(re, im) in C order, i.e. raw '<c16' bytes; real fields as plain
'<f8'.  Every dump <name> has a sidecar <name>.json recording dtype,
shape, index order and the physical grid bounds, so files are
self-describing for external consumers.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .grids import PhaseGrid


def grid_metadata(grid: PhaseGrid) -> dict:
    return {
        "n_x": grid.n_x,
        "n_p": grid.n_p,
        "x_min": grid.x_min,
        "x_max": grid.x_max,
        "p_min": grid.p_min,
        "p_max": grid.p_max,
    }


def grid_from_metadata(meta: dict) -> PhaseGrid:
    return PhaseGrid(
        int(meta["n_x"]),
        int(meta["n_p"]),
        float(meta["x_min"]),
        float(meta["x_max"]),
        float(meta["p_min"]),
        float(meta["p_max"]),
    )


def _write_sidecar(path: Path, meta: dict) -> None:
    with open(str(path) + ".json", "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _read_sidecar(path: Path) -> dict:
    sidecar = Path(str(path) + ".json")
    if not sidecar.exists():
        raise ConfigError(f"missing sidecar metadata {sidecar}")
    with open(sidecar) as fh:
        return json.load(fh)


def save_complex_field(path, values: np.ndarray, meta: dict) -> None:
    """Dump a complex array as interleaved (re, im) float64, little-endian."""
    path = Path(path)
    arr = np.ascontiguousarray(values, dtype="<c16")
    path.write_bytes(arr.tobytes())
    full = dict(meta)
    full.update(
        dtype="complex128-interleaved-float64-le",
        shape=list(arr.shape),
    )
    _write_sidecar(path, full)


def save_real_field(path, values: np.ndarray, meta: dict) -> None:
    path = Path(path)
    arr = np.ascontiguousarray(values, dtype="<f8")
    path.write_bytes(arr.tobytes())
    full = dict(meta)
    full.update(dtype="float64-le", shape=list(arr.shape))
    _write_sidecar(path, full)


def load_field(path):
    """Read a dump plus sidecar; returns (values, metadata)."""
    path = Path(path)
    meta = _read_sidecar(path)
    shape = tuple(meta["shape"])
    if meta["dtype"] == "complex128-interleaved-float64-le":
        values = np.frombuffer(path.read_bytes(), dtype="<c16").reshape(shape)
    elif meta["dtype"] == "float64-le":
        values = np.frombuffer(path.read_bytes(), dtype="<f8").reshape(shape)
    else:
        raise ConfigError(f"unknown dump dtype {meta['dtype']!r}")
    return values.copy(), meta
