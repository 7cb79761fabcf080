"""Run orchestration and command-line entry points.

A "run" is a directory with meta.json (normalized config, units,
version string, frame index), frames/ (binary field dumps per the io
module), observables.csv, and for ensembles particles.csv.  Given the
same config and seed the entire directory is bit-reproducible.

Exit codes: 0 success, 2 invalid configuration or precondition,
3 numeric integrity failure (partial outputs flagged in meta.json).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dirac import (
    DiracParams,
    gaussian_spinor_field,
    project_spinor_field,
    propagate_dirac,
    spinor_antiparticle_fraction,
)
from .ensemble import integrate_ensemble, sample_from_wigner
from .errors import ConfigError, IntegrityError, PreconditionError
from .grids import Potential, SpinorField, make_grid
from .io import (
    grid_from_metadata,
    grid_metadata,
    load_field,
    save_complex_field,
    save_real_field,
)
from .kvn import KvnParams, propagate_phase_space
from .wigner import project_state, wigner_representation, wigner_transform

SOLVERS = ("dirac", "kvn", "spohn", "ensemble")

DEFAULT_CONFIG = {
    "solver": "dirac",
    "grid": {
        "n_x": 256,
        "n_p": 256,
        "x_min": -16.0,
        "x_max": 16.0,
        "p_min": None,
        "p_max": None,
    },
    "constants": {"c": 1.0, "hbar": 1.0, "m": 1.0, "e": 1.0},
    "potential": {"kind": "free"},
    "initial_state": {
        "x0": -5.0,
        "p0": 2.0,
        "sigma": 1.0,
        "spinor": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        "pre_project": False,
    },
    "dt": 1e-3,
    "n_steps": 4000,
    "frame_stride": 100,
    "matrix_stride": 1000,
    "n_particles": 2000,
    "seed": 0,
}

CSV_COLUMNS = {
    "dirac": (
        "time",
        "mean_x",
        "mean_p",
        "norm_or_trace",
        "antiparticle_fraction",
        "velocity_mean",
        "force_mean",
    ),
    "kvn": (
        "time",
        "mean_x",
        "mean_p",
        "norm_or_trace",
        "antiparticle_fraction",
        "velocity_mean",
        "anti_mean_x",
        "anti_mean_p",
        "antiparallel_fraction",
    ),
    "ensemble": (
        "time",
        "mean_x",
        "mean_p",
        "norm_or_trace",
        "antiparticle_fraction",
    ),
}
CSV_COLUMNS["spohn"] = CSV_COLUMNS["kvn"]


def _parse_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(value[0], value[1])
    raise ConfigError(f"cannot parse complex number from {value!r}")


def normalize_config(raw: dict) -> dict:
    """Fill defaults and canonicalize; the result round-trips through JSON."""
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))
    for key, value in raw.items():
        if key not in cfg:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(cfg[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {key!r} must be an object")
            if key == "potential":
                cfg[key] = dict(value)
            else:
                for sub, subval in value.items():
                    if sub not in cfg[key]:
                        raise ConfigError(f"unknown config key {key}.{sub}")
                    cfg[key][sub] = subval
        else:
            cfg[key] = value

    if cfg["solver"] not in SOLVERS:
        raise ConfigError(f"solver must be one of {SOLVERS}, got {cfg['solver']!r}")
    for name in ("dt",):
        if not cfg[name] > 0.0:
            raise ConfigError(f"{name} must be positive")
    for name in ("n_steps", "frame_stride", "matrix_stride", "n_particles", "seed"):
        if int(cfg[name]) != cfg[name] or cfg[name] < 0:
            raise ConfigError(f"{name} must be a nonnegative integer")
        cfg[name] = int(cfg[name])
    if cfg["frame_stride"] == 0 or cfg["matrix_stride"] == 0:
        raise ConfigError("strides must be >= 1")
    spinor = cfg["initial_state"]["spinor"]
    if len(spinor) != 4:
        raise ConfigError("initial spinor must have 4 components")
    cfg["initial_state"]["spinor"] = [
        [float(_parse_complex(s).real), float(_parse_complex(s).imag)] for s in spinor
    ]
    cfg["initial_state"]["pre_project"] = bool(cfg["initial_state"]["pre_project"])
    build_potential(cfg["potential"])  # validate eagerly
    return cfg


def build_potential(spec: dict) -> Potential:
    kind = spec.get("kind", "free")
    if kind == "free":
        return Potential.free()
    if kind == "scalar-linear":
        return Potential.scalar_linear(float(spec["gradient"]))
    if kind == "scalar-quadratic":
        return Potential.scalar_quadratic(float(spec["curvature"]))
    if kind == "tabulated":
        return Potential.tabulated(
            np.asarray(spec["x"], dtype=float),
            np.asarray(spec["a"], dtype=float),
            None if spec.get("da") is None else np.asarray(spec["da"], dtype=float),
        )
    raise ConfigError(f"unknown potential kind {kind!r}")


def build_grid(cfg: dict):
    g = cfg["grid"]
    hbar = cfg["constants"]["hbar"]
    return make_grid(
        int(g["n_x"]),
        int(g["n_p"]),
        float(g["x_min"]),
        float(g["x_max"]),
        None if g["p_min"] is None else float(g["p_min"]),
        None if g["p_max"] is None else float(g["p_max"]),
        hbar=hbar,
    )


def dirac_params_from_config(cfg: dict) -> DiracParams:
    consts = cfg["constants"]
    return DiracParams(
        m=consts["m"],
        c=consts["c"],
        e=consts["e"],
        hbar=consts["hbar"],
        dt=cfg["dt"],
        potential=build_potential(cfg["potential"]),
    )


def kvn_params_from_config(cfg: dict) -> KvnParams:
    """The classical generators carry no hbar; it is dropped here."""
    consts = cfg["constants"]
    return KvnParams(
        m=consts["m"],
        c=consts["c"],
        e=consts["e"],
        dt=cfg["dt"],
        potential=build_potential(cfg["potential"]),
        mode=cfg["solver"] if cfg["solver"] in ("kvn", "spohn") else "kvn",
    )


def _config_version(cfg: dict) -> str:
    digest = hashlib.sha256(
        json.dumps(cfg, sort_keys=True).encode()
    ).hexdigest()[:10]
    return f"{__version__}+cfg.{digest}"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _initial_spinor_field(cfg: dict, grid):
    ini = cfg["initial_state"]
    consts = cfg["constants"]
    spinor = [complex(re, im) for re, im in ini["spinor"]]
    return gaussian_spinor_field(
        grid,
        x0=float(ini["x0"]),
        p0=float(ini["p0"]),
        sigma=float(ini["sigma"]),
        spinor=spinor,
        hbar=consts["hbar"],
    )


def _initial_wigner(cfg: dict, grid, potential):
    consts = cfg["constants"]
    psi = _initial_spinor_field(cfg, grid)
    w = wigner_transform(psi, hbar=consts["hbar"], grid=grid)
    if cfg["initial_state"]["pre_project"] or cfg["solver"] == "spohn":
        w = project_state(
            w, potential, m=consts["m"], c=consts["c"], e=consts["e"]
        )
    return w


def run(raw_config: dict, out_dir) -> Path:
    """Execute one simulation into out_dir; returns the run directory path."""
    cfg = normalize_config(raw_config)
    out = Path(out_dir)
    frames_dir = out / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)

    grid = build_grid(cfg)
    potential = build_potential(cfg["potential"])
    consts = cfg["constants"]
    meta = {
        "config": cfg,
        "units": dict(consts),
        "version": _config_version(cfg),
        "grid": grid_metadata(grid),
        "frames": [],
        "status": "running",
    }
    frame_entries: list[dict] = []

    def finalize(status: str, error: str | None = None):
        meta["frames"] = frame_entries
        meta["status"] = status
        if error is not None:
            meta["error"] = error
        with open(out / "meta.json", "w") as fh:
            json.dump(meta, fh, indent=1, sort_keys=True)
            fh.write("\n")

    try:
        if cfg["solver"] == "dirac":
            _run_dirac(cfg, grid, potential, frames_dir, out, frame_entries)
        elif cfg["solver"] in ("kvn", "spohn"):
            _run_phase_space(cfg, grid, potential, frames_dir, out, frame_entries)
        else:
            _run_ensemble(cfg, grid, potential, frames_dir, out, frame_entries)
    except IntegrityError as err:
        finalize("partial", str(err))
        raise
    finalize("complete")
    return out


def _run_dirac(cfg, grid, potential, frames_dir, out, frame_entries):
    consts = cfg["constants"]
    params = dirac_params_from_config(cfg)
    psi0 = _initial_spinor_field(cfg, grid)
    if cfg["initial_state"]["pre_project"]:
        psi0 = project_spinor_field(psi0, params).normalized()
    fractions = []

    def callback(step, t, psi):
        name = f"spinor_{step:06d}.bin"
        save_complex_field(
            frames_dir / name,
            psi.values,
            {
                "field": "spinor",
                "index_order": ["x", "component"],
                "grid": grid_metadata(grid),
                "time": t,
                "hbar": consts["hbar"],
            },
        )
        fractions.append(spinor_antiparticle_fraction(psi, params))
        frame_entries.append(
            {"step": step, "time": t, "files": {"spinor": f"frames/{name}"}}
        )

    traj = propagate_dirac(
        psi0,
        params,
        cfg["n_steps"],
        frame_stride=cfg["frame_stride"],
        keep_fields=False,
        frame_callback=callback,
    )
    obs = traj.observables
    rows = zip(
        obs["time"],
        obs["mean_x"],
        obs["mean_p"],
        obs["norm"],
        fractions,
        obs["velocity_mean"],
        obs["force_mean"],
    )
    _write_csv(out / "observables.csv", CSV_COLUMNS["dirac"], rows)


def _run_phase_space(cfg, grid, potential, frames_dir, out, frame_entries):
    params = kvn_params_from_config(cfg)
    w0 = _initial_wigner(cfg, grid, potential)
    n_steps = cfg["n_steps"]

    def callback(step, t, w):
        rep = wigner_representation(w)
        files = {}
        rep_name = f"rep_{step:06d}.f64"
        save_real_field(
            frames_dir / rep_name,
            rep,
            {
                "field": "wigner-representation",
                "index_order": ["x", "p"],
                "grid": grid_metadata(grid),
                "time": t,
            },
        )
        files["rep"] = f"frames/{rep_name}"
        if step % cfg["matrix_stride"] == 0 or step == n_steps:
            mat_name = f"wigner_{step:06d}.bin"
            save_complex_field(
                frames_dir / mat_name,
                w.values,
                {
                    "field": "wigner-matrix",
                    "index_order": ["x", "p", "row", "col"],
                    "grid": grid_metadata(grid),
                    "time": t,
                },
            )
            files["wigner"] = f"frames/{mat_name}"
        frame_entries.append({"step": step, "time": t, "files": files})

    traj = propagate_phase_space(
        w0,
        params,
        n_steps,
        frame_stride=cfg["frame_stride"],
        keep_fields=False,
        frame_callback=callback,
    )
    obs = traj.observables
    rows = zip(
        obs["time"],
        obs["mean_x"],
        obs["mean_p"],
        obs["total_trace"],
        obs["antiparticle_fraction"],
        obs["velocity_mean"],
        obs["anti_mean_x"],
        obs["anti_mean_p"],
        obs["antiparallel_fraction"],
    )
    _write_csv(out / "observables.csv", CSV_COLUMNS[cfg["solver"]], rows)


def _run_ensemble(cfg, grid, potential, frames_dir, out, frame_entries):
    consts = cfg["constants"]
    w0 = _initial_wigner(cfg, grid, potential)
    rep = wigner_representation(w0)
    state = sample_from_wigner(
        rep,
        grid,
        cfg["n_particles"],
        cfg["seed"],
        m=consts["m"],
        c=consts["c"],
        e=consts["e"],
        potential=potential,
    )
    traj = integrate_ensemble(
        state, cfg["dt"], cfg["n_steps"], frame_stride=cfg["frame_stride"]
    )
    with open(out / "particles.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "particle", "x", "p"])
        for fi, t in enumerate(traj.times):
            for pi in range(state.n):
                writer.writerow(
                    [_fmt(t), pi, _fmt(traj.xs[fi, pi]), _fmt(traj.ps[fi, pi])]
                )
    rows = [
        (t, traj.xs[fi].mean(), traj.ps[fi].mean(), 1.0, 0.0)
        for fi, t in enumerate(traj.times)
    ]
    _write_csv(out / "observables.csv", CSV_COLUMNS["ensemble"], rows)
    for fi, t in enumerate(traj.times):
        frame_entries.append(
            {"step": int(round(t / cfg["dt"])) if cfg["dt"] else 0, "time": t,
             "files": {"particles": "particles.csv"}}
        )


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------


def _load_observables(run_dir: Path) -> dict:
    path = run_dir / "observables.csv"
    if not path.exists():
        raise PreconditionError(f"{path} not found")
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    data = np.array(rows) if rows else np.zeros((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}


def _load_meta(run_dir: Path) -> dict:
    path = run_dir / "meta.json"
    if not path.exists():
        raise PreconditionError(f"{path} not found")
    with open(path) as fh:
        return json.load(fh)


def compare(run_a, run_b) -> dict:
    """Frame-by-frame comparison of two runs on compatible grids."""
    run_a, run_b = Path(run_a), Path(run_b)
    meta_a, meta_b = _load_meta(run_a), _load_meta(run_b)
    grid_a = grid_from_metadata(meta_a["grid"])
    grid_b = grid_from_metadata(meta_b["grid"])
    if not grid_a.compatible(grid_b):
        raise PreconditionError("runs use incompatible grids")
    obs_a, obs_b = _load_observables(run_a), _load_observables(run_b)
    n = min(len(obs_a["time"]), len(obs_b["time"]))
    if n == 0 or np.max(np.abs(obs_a["time"][:n] - obs_b["time"][:n])) > 0.0:
        raise PreconditionError("runs have mismatched frame times")

    reps_a = {f["step"]: f["files"]["rep"] for f in meta_a["frames"] if "rep" in f["files"]}
    reps_b = {f["step"]: f["files"]["rep"] for f in meta_b["frames"] if "rep" in f["files"]}
    l1 = []
    for step in sorted(set(reps_a) & set(reps_b)):
        a, _ = load_field(run_a / reps_a[step])
        b, _ = load_field(run_b / reps_b[step])
        l1.append(
            {
                "step": step,
                "l1_distance": float(np.sum(np.abs(a - b)) * grid_a.dx * grid_a.dp),
            }
        )

    frames = []
    for i in range(n):
        frames.append(
            {
                "time": float(obs_a["time"][i]),
                "centroid_dx": float(obs_a["mean_x"][i] - obs_b["mean_x"][i]),
                "centroid_dp": float(obs_a["mean_p"][i] - obs_b["mean_p"][i]),
                "fraction_a": float(obs_a.get("antiparticle_fraction", np.zeros(n))[i]),
                "fraction_b": float(obs_b.get("antiparticle_fraction", np.zeros(n))[i]),
            }
        )
    return {
        "run_a": str(run_a),
        "run_b": str(run_b),
        "frames": frames,
        "rep_l1": l1,
        "max_centroid_dx": max((abs(f["centroid_dx"]) for f in frames), default=0.0),
        "max_rep_l1": max((e["l1_distance"] for e in l1), default=0.0),
    }


# ---------------------------------------------------------------------------
# standalone file operations
# ---------------------------------------------------------------------------


def _read_config_file(path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file is not valid JSON: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    return raw


def _constants_from_config(path: str | None) -> tuple[dict, Potential]:
    cfg = normalize_config({} if path is None else _read_config_file(path))
    return cfg["constants"], build_potential(cfg["potential"])


def project_dump(input_path, output_path, config_path=None) -> None:
    consts, potential = _constants_from_config(config_path)
    values, meta = _load_wigner_dump(input_path)
    from .grids import WignerMatrixField

    grid = grid_from_metadata(meta["grid"])
    w = WignerMatrixField(values, grid)
    projected = project_state(
        w, potential, m=consts["m"], c=consts["c"], e=consts["e"]
    )
    save_complex_field(
        output_path,
        projected.values,
        {k: meta[k] for k in ("field", "index_order", "grid", "time") if k in meta},
    )


def _load_wigner_dump(path):
    values, meta = load_field(path)
    if meta.get("field") != "wigner-matrix":
        raise PreconditionError(f"{path} is not a wigner-matrix dump")
    return values, meta


def wigner_dump(input_path, output_path, config_path=None) -> None:
    consts, _ = _constants_from_config(config_path)
    values, meta = load_field(input_path)
    if meta.get("field") != "spinor":
        raise PreconditionError(f"{input_path} is not a spinor dump")
    grid = grid_from_metadata(meta["grid"])
    hbar = float(meta.get("hbar", consts["hbar"]))
    psi = SpinorField(values, grid)
    w = wigner_transform(psi, hbar=hbar, grid=grid if grid.is_wigner_paired(hbar) else None)
    save_complex_field(
        output_path,
        w.values,
        {
            "field": "wigner-matrix",
            "index_order": ["x", "p", "row", "col"],
            "grid": grid_metadata(w.grid),
            "time": meta.get("time", 0.0),
        },
    )
    rep = wigner_representation(w)
    save_real_field(
        Path(str(output_path) + ".rep.f64"),
        rep,
        {
            "field": "wigner-representation",
            "index_order": ["x", "p"],
            "grid": grid_metadata(w.grid),
            "time": meta.get("time", 0.0),
        },
    )


def wigner_run(run_dir, config_path=None) -> int:
    """Transform every spinor frame of a run into wigner/rep dumps."""
    run_dir = Path(run_dir)
    meta = _load_meta(run_dir)
    count = 0
    for entry in meta["frames"]:
        spinor_rel = entry["files"].get("spinor")
        if spinor_rel is None:
            continue
        step = entry["step"]
        out_name = f"frames/wigner_{step:06d}.bin"
        wigner_dump(run_dir / spinor_rel, run_dir / out_name, config_path)
        entry["files"]["wigner"] = out_name
        entry["files"]["rep"] = out_name + ".rep.f64"
        count += 1
    with open(run_dir / "meta.json", "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return count


def sample_dump(input_path, output_path, n: int, seed: int, config_path=None) -> None:
    consts, potential = _constants_from_config(config_path)
    values, meta = load_field(input_path)
    grid = grid_from_metadata(meta["grid"])
    if meta.get("field") == "wigner-matrix":
        from .grids import WignerMatrixField

        rep = wigner_representation(WignerMatrixField(values, grid))
    elif meta.get("field") == "wigner-representation":
        rep = values
    else:
        raise PreconditionError(f"{input_path} is not a phase-space dump")
    state = sample_from_wigner(
        rep,
        grid,
        n,
        seed,
        m=consts["m"],
        c=consts["c"],
        e=consts["e"],
        potential=potential,
    )
    with open(output_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "particle", "x", "p"])
        for pi in range(state.n):
            writer.writerow(["0", pi, _fmt(state.x[pi]), _fmt(state.p[pi])])


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracps",
        description="Dirac, Koopman-von Neumann and projected classical "
        "phase-space simulations on a periodic 1D grid.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a solver into a run directory")
    sim.add_argument("solver", choices=SOLVERS)
    sim.add_argument("--config", help="JSON config file (defaults applied)")
    sim.add_argument("--out", required=True, help="output run directory")
    sim.add_argument("--seed", type=int, help="override the config seed")
    sim.add_argument(
        "--frames", type=int, help="target number of output frames (sets the stride)"
    )

    proj = sub.add_parser("project", help="apply the positive-energy projector to a wigner dump")
    proj.add_argument("input")
    proj.add_argument("--out", required=True)
    proj.add_argument("--config")

    wig = sub.add_parser("wigner", help="wigner-transform a spinor dump or a whole run")
    wig.add_argument("input", nargs="?", help="spinor dump path")
    wig.add_argument("--run", help="transform every spinor frame of a run directory")
    wig.add_argument("--out", help="output wigner dump path (file mode)")
    wig.add_argument("--config")

    samp = sub.add_parser("sample", help="draw a particle ensemble from a wigner dump")
    samp.add_argument("input")
    samp.add_argument("--out", required=True)
    samp.add_argument("--n", type=int, default=2000)
    samp.add_argument("--seed", type=int, default=0)
    samp.add_argument("--config")

    comp = sub.add_parser("compare", help="compare two run directories")
    comp.add_argument("run_a")
    comp.add_argument("run_b")
    comp.add_argument("--out", help="write the full report as JSON")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            raw = {}
            if args.config:
                raw = _read_config_file(args.config)
            raw["solver"] = args.solver
            if args.seed is not None:
                raw["seed"] = args.seed
            if args.frames is not None:
                n_steps = raw.get("n_steps", DEFAULT_CONFIG["n_steps"])
                raw["frame_stride"] = max(1, int(n_steps) // max(1, args.frames))
            out = run(raw, args.out)
            print(out)
        elif args.command == "project":
            project_dump(args.input, args.out, args.config)
            print(args.out)
        elif args.command == "wigner":
            if args.run:
                count = wigner_run(args.run, args.config)
                print(f"transformed {count} frames in {args.run}")
            else:
                if not args.input or not args.out:
                    raise ConfigError("wigner file mode needs INPUT and --out")
                wigner_dump(args.input, args.out, args.config)
                print(args.out)
        elif args.command == "sample":
            sample_dump(args.input, args.out, args.n, args.seed, args.config)
            print(args.out)
        elif args.command == "compare":
            report = compare(args.run_a, args.run_b)
            if args.out:
                with open(args.out, "w") as fh:
                    json.dump(report, fh, indent=1, sort_keys=True)
                    fh.write("\n")
            print(
                f"frames={len(report['frames'])} "
                f"max_centroid_dx={report['max_centroid_dx']:.6g} "
                f"max_rep_l1={report['max_rep_l1']:.6g}"
            )
    except (ConfigError, PreconditionError) as err:
        print(f"error: config: {err}", file=sys.stderr)
        return 2
    except IntegrityError as err:
        print(f"error: integrity: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
