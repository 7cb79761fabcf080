"""Read-only access to run directories.

Field dumps are raw little-endian binaries with a JSON sidecar
(<name>.json) describing dtype and shape; observables.csv carries the
stable leading columns time, mean_x, mean_p, norm_or_trace,
antiparticle_fraction.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import SchemaError

REQUIRED_COLUMNS = ("time", "mean_x", "mean_p", "norm_or_trace", "antiparticle_fraction")


def load_meta(run_dir) -> dict:
    path = Path(run_dir) / "meta.json"
    if not path.exists():
        raise FileNotFoundError(f"{path} not found")
    with open(path) as fh:
        return json.load(fh)


def rep_frames(meta: dict) -> list[dict]:
    """Frame entries that carry a Wigner-representation dump, step order."""
    frames = [f for f in meta.get("frames", []) if "rep" in f.get("files", {})]
    return sorted(frames, key=lambda f: f["step"])


def load_real_dump(path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    sidecar = Path(str(path) + ".json")
    if not path.exists() or not sidecar.exists():
        raise FileNotFoundError(f"missing dump or sidecar for {path}")
    with open(sidecar) as fh:
        meta = json.load(fh)
    if meta.get("dtype") != "float64-le":
        raise SchemaError(f"{path} is not a float64 dump")
    values = np.frombuffer(path.read_bytes(), dtype="<f8").reshape(tuple(meta["shape"]))
    return values, meta


def load_rep_frame(run_dir, frame_index: int) -> tuple[np.ndarray, dict]:
    """Wigner representation of the frame_index-th dumped frame (negative
    indices count from the end)."""
    run_dir = Path(run_dir)
    meta = load_meta(run_dir)
    frames = rep_frames(meta)
    if not frames:
        raise FileNotFoundError(f"{run_dir} has no representation frames")
    try:
        entry = frames[frame_index]
    except IndexError:
        raise FileNotFoundError(
            f"frame {frame_index} not in {run_dir} ({len(frames)} frames)"
        ) from None
    values, sidecar = load_real_dump(run_dir / entry["files"]["rep"])
    sidecar["time"] = entry["time"]
    sidecar["step"] = entry["step"]
    return values, sidecar


def load_observables(run_dir) -> dict[str, np.ndarray]:
    path = Path(run_dir) / "observables.csv"
    if not path.exists():
        raise FileNotFoundError(f"{path} not found")
    with open(path) as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path} is empty") from None
        rows = [[float(v) for v in row] for row in reader]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"{path} lacks required columns {missing}")
    if not rows:
        raise SchemaError(f"{path} has no data rows")
    data = np.array(rows)
    return {name: data[:, i] for i, name in enumerate(header)}


def load_particles_at(run_dir, time: float) -> np.ndarray:
    """(n, 2) array of (x, p) at the dumped time closest to `time`."""
    path = Path(run_dir) / "particles.csv"
    if not path.exists():
        raise FileNotFoundError(f"{path} not found")
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["time", "particle", "x", "p"]:
            raise SchemaError(f"{path} has unexpected columns {header}")
        rows = [(float(r[0]), float(r[2]), float(r[3])) for r in reader]
    if not rows:
        raise SchemaError(f"{path} has no data rows")
    times = np.array(sorted({r[0] for r in rows}))
    target = times[np.argmin(np.abs(times - time))]
    pts = np.array([(x, p) for t, x, p in rows if t == target])
    return pts
