"""Classical phase-space propagation of the matrix Wigner function.

Two modes of the anticommutator flow

    i dW/dt = (1/2) [gamma^0 gamma^nu, K_nu W]_+ ,
    K_nu = -c lambda_nu - c e (d_1 A_nu) theta   (lambda_0 = 0),

are provided: plain Koopman-von Neumann transport ("kvn") and the
projected equation ("spohn") that conjugates every step with the
positive-energy projector so no antiparticle amplitude survives.

Both sub-flows are solved exactly in their own mixed representation by
a two-sided sandwich W <- E W E with E = exp(-i s M / 2): the kinetic
generator is diagonal after a Fourier transform over x (multiplier
M = c lambda gamma^0 gamma^1) and the field generator after a transform
over p (M = -c e (d_1 A_nu) theta gamma^0 gamma^nu).  A step composes
field-half / kinetic-full / field-half (Strang).  Nothing here depends
on hbar: the generators are purely classical.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .clifford import GAMMA, IDENTITY4
from .errors import ConfigError, PreconditionError
from .grids import BOUNDARY_MASS_LIMIT, PhaseGrid, Potential, WignerMatrixField
from .wigner import projector_field

_G0G = np.stack([GAMMA[0] @ GAMMA[nu] for nu in range(4)])

MODES = ("kvn", "spohn")


@dataclass(frozen=True)
class KvnParams:
    m: float = 1.0
    c: float = 1.0
    e: float = 1.0
    dt: float = 1e-3
    potential: Potential = field(default_factory=Potential.free)
    mode: str = "kvn"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("m", "c", "dt"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")


def _check_kinetic_guard(grid: PhaseGrid, params: KvnParams, dt: float) -> None:
    lam_max = float(np.max(np.abs(grid.lam)))
    if dt * params.c * lam_max >= np.pi:
        raise ConfigError(
            f"phase-sampling guard violated: dt*c*max|lambda| = "
            f"{dt * params.c * lam_max:.3g} >= pi"
        )


def _advection_multiplier(freqs: np.ndarray) -> np.ndarray:
    """FFT-ordered conjugate grid with the Nyquist bin zeroed.

    The self-conjugate Nyquist mode has no well-defined transport
    direction; leaving it static keeps the two-sided sandwich exactly
    Hermiticity-preserving for resolved fields.
    """
    out = freqs.copy()
    out[len(out) // 2] = 0.0
    return out


def _kinetic_sandwich_ops(grid: PhaseGrid, params: KvnParams, dt: float) -> np.ndarray:
    """E(lambda) = exp(-i dt/2 c lambda g0 g1), shape (n_x, 1, 4, 4)."""
    phi = 0.5 * dt * params.c * _advection_multiplier(grid.lam)
    e = (
        np.cos(phi)[:, None, None] * IDENTITY4
        - 1j * np.sin(phi)[:, None, None] * _G0G[1]
    )
    return e[:, None, :, :]


def _field_sandwich_ops(grid: PhaseGrid, params: KvnParams, dt: float):
    """Sandwich data for a field sub-step of duration dt.

    Returns ("phase", ph) with a combined scalar phase field for purely
    scalar potentials, or ("matrix", E) with E = exp(-i dt/2 M(x, theta)).
    """
    pot = params.potential
    if pot.is_free:
        return None
    if not pot.has_derivative_data:
        raise ConfigError("field step needs potential derivative data")
    da = pot.da(grid.x)  # (n_x, 4) covariant
    ce = params.c * params.e
    theta = _advection_multiplier(grid.theta)
    a_scal = -ce * da[:, 0, None] * theta[None, :]  # (n_x, n_p)
    bvec = -ce * da[:, 1:, None] * theta[None, None, :]  # (n_x, 3, n_p)
    if not np.any(bvec):
        # M = a(x, theta) * 1: both sandwich sides merge into one phase
        return ("phase", np.exp(-1j * dt * a_scal))
    bvec = np.moveaxis(bvec, 1, 2)  # (n_x, n_p, 3)
    bmag = np.linalg.norm(bvec, axis=2)
    tau = 0.5 * dt
    bmat = np.tensordot(bvec, _G0G[1:], axes=(2, 0))
    safe = np.where(bmag > 0.0, bmag, 1.0)
    e = np.exp(-1j * tau * a_scal)[..., None, None] * (
        np.cos(tau * bmag)[..., None, None] * IDENTITY4
        - 1j * (np.sin(tau * bmag) / safe)[..., None, None] * bmat
    )
    return ("matrix", e)


def _apply_kinetic(values: np.ndarray, ops: np.ndarray) -> np.ndarray:
    ft = np.fft.fft(values, axis=0)
    ft = ops @ ft @ ops
    return np.fft.ifft(ft, axis=0)


def _apply_field(values: np.ndarray, ops) -> np.ndarray:
    if ops is None:
        return values
    kind, data = ops
    ft = np.fft.fft(values, axis=1)
    if kind == "phase":
        ft = data[:, :, None, None] * ft
    else:
        ft = data @ ft @ data
    return np.fft.ifft(ft, axis=1)


def kvn_kinetic_step(w: WignerMatrixField, dt: float, params: KvnParams) -> WignerMatrixField:
    """Exact kinetic sub-flow for duration dt (Fourier over x)."""
    _check_kinetic_guard(w.grid, params, dt)
    ops = _kinetic_sandwich_ops(w.grid, params, dt)
    return WignerMatrixField(_apply_kinetic(w.values, ops), w.grid)


def kvn_field_step(w: WignerMatrixField, dt: float, params: KvnParams) -> WignerMatrixField:
    """Exact field sub-flow for duration dt (Fourier over p)."""
    ops = _field_sandwich_ops(w.grid, params, dt)
    return WignerMatrixField(_apply_field(w.values, ops), w.grid)


OBSERVABLE_COLUMNS = (
    "time",
    "mean_x",
    "mean_p",
    "total_trace",
    "antiparticle_fraction",
    "velocity_mean",
    "anti_mean_x",
    "anti_mean_p",
    "antiparallel_fraction",
    "raw_x",
    "raw_p",
    "raw_velocity",
    "raw_force",
)


@dataclass
class PhaseSpaceTrajectory:
    times: np.ndarray
    observables: dict
    fields: list | None
    final: WignerMatrixField
    params: KvnParams


class _FrameObservables:
    """Per-frame trace moments; shares the projector between diagnostics."""

    def __init__(self, grid: PhaseGrid, params: KvnParams):
        self.grid = grid
        self.params = params
        proj = projector_field(
            grid, params.potential, m=params.m, c=params.c, e=params.e
        )
        self.proj_full = np.broadcast_to(proj, (grid.n_x, grid.n_p, 4, 4))
        self.vel_matrix = params.c * _G0G[1]
        self.force_field = None
        if not params.potential.is_free:
            da = params.potential.da(grid.x)
            self.force_field = (
                params.c * params.e * np.tensordot(da, _G0G, axes=(1, 0))
            )

    def row(self, t: float, values: np.ndarray) -> tuple:
        grid = self.grid
        dxdp = grid.dx * grid.dp
        tr = np.real(np.trace(values, axis1=2, axis2=3))
        total = float(np.sum(tr)) * dxdp
        raw_x = float(np.sum(tr * grid.x[:, None])) * dxdp
        raw_p = float(np.sum(tr * grid.p[None, :])) * dxdp

        anti = np.real(np.einsum("xpab,xpba->xp", values, IDENTITY4 - self.proj_full))
        anti_total = float(np.sum(anti)) * dxdp
        frac = anti_total / total if total > 0.0 else np.nan
        if abs(anti_total) > 1e-300:
            anti_x = float(np.sum(anti * grid.x[:, None])) * dxdp / anti_total
            anti_p = float(np.sum(anti * grid.p[None, :])) * dxdp / anti_total
        else:
            anti_x = anti_p = np.nan

        # phase-space antiparticle criterion: mass moving against its momentum
        vel_density = np.real(np.einsum("xpab,ba->xp", values, self.vel_matrix))
        positive = np.clip(tr, 0.0, None)
        pos_total = float(np.sum(positive))
        if pos_total > 0.0:
            counter = float(
                np.sum(positive[(grid.p[None, :] * vel_density) < 0.0])
            )
            antiparallel = counter / pos_total
        else:
            antiparallel = np.nan

        spohn = self.params.mode == "spohn"
        if spohn:
            raw_v = float(
                np.real(
                    np.einsum(
                        "xpab,bc,xpca->", values, self.vel_matrix, self.proj_full
                    )
                )
            ) * dxdp
        else:
            raw_v = float(
                np.real(np.einsum("xpab,ba->", values, self.vel_matrix))
            ) * dxdp
        if self.force_field is None:
            raw_f = 0.0
        elif spohn:
            raw_f = -float(
                np.real(
                    np.einsum(
                        "xpab,xbc,xpca->", values, self.force_field, self.proj_full
                    )
                )
            ) * dxdp
        else:
            raw_f = -float(
                np.real(np.einsum("xpab,xba->", values, self.force_field))
            ) * dxdp

        return (
            t,
            raw_x / total if total else np.nan,
            raw_p / total if total else np.nan,
            total,
            frac,
            raw_v / total if total else np.nan,
            anti_x,
            anti_p,
            antiparallel,
            raw_x,
            raw_p,
            raw_v,
            raw_f,
        )


def propagate_phase_space(
    w0: WignerMatrixField,
    params: KvnParams,
    n_steps: int,
    frame_stride: int = 1,
    keep_fields: bool = False,
    frame_callback=None,
) -> PhaseSpaceTrajectory:
    """Evolve w0 with Strang steps field/kinetic/field; spohn mode wraps
    each full step in the pointwise projector sandwich.

    Frames are captured at step 0, every frame_stride steps, and the
    final step.  Emitted fields are copies; the propagator is the single
    writer of the evolving array.
    """
    grid = w0.grid
    scale = float(np.max(np.abs(w0.values))) or 1.0
    # transforms of states near the box edge carry a small truncation residue
    if w0.hermiticity_defect() > 1e-6 * scale:
        raise PreconditionError("initial Wigner field must be pointwise Hermitian")
    if w0.total_trace() < 0.0:
        raise PreconditionError("initial Wigner field must have nonnegative trace")
    _check_kinetic_guard(grid, params, params.dt)

    e_kin = _kinetic_sandwich_ops(grid, params, params.dt)
    e_field = _field_sandwich_ops(grid, params, 0.5 * params.dt)
    proj = None
    if params.mode == "spohn":
        proj = projector_field(
            grid, params.potential, m=params.m, c=params.c, e=params.e
        )
        projected = proj @ w0.values @ proj
        if float(np.max(np.abs(projected - w0.values))) > 1e-6 * scale:
            raise PreconditionError(
                "spohn mode expects a pre-projected initial state "
                "(apply project_state first)"
            )

    frame_obs = _FrameObservables(grid, params)
    times, rows, fields = [], [], ([] if keep_fields else None)
    warned = False

    def capture(step: int, values: np.ndarray):
        nonlocal warned
        t = step * params.dt
        times.append(t)
        rows.append(frame_obs.row(t, values))
        snapshot = None
        if fields is not None:
            snapshot = WignerMatrixField(values.copy(), grid)
            fields.append(snapshot)
        if frame_callback is not None:
            if snapshot is None:
                snapshot = WignerMatrixField(values.copy(), grid)
            frame_callback(step, t, snapshot)
        if not warned:
            bf = WignerMatrixField(values, grid).boundary_fraction()
            if bf > BOUNDARY_MASS_LIMIT:
                warnings.warn(
                    "phase-space mass reached the periodic boundary; enlarge the box",
                    stacklevel=3,
                )
                warned = True

    values = w0.values.copy()
    capture(0, values)
    for step in range(1, n_steps + 1):
        values = _apply_field(values, e_field)
        values = _apply_kinetic(values, e_kin)
        values = _apply_field(values, e_field)
        if proj is not None:
            values = proj @ values @ proj
        if step % frame_stride == 0 or step == n_steps:
            capture(step, values)

    observables = {
        name: np.array([r[i] for r in rows])
        for i, name in enumerate(OBSERVABLE_COLUMNS)
    }
    final = WignerMatrixField(values, grid)
    return PhaseSpaceTrajectory(np.array(times), observables, fields, final, params)


def phase_space_ehrenfest_residuals(trajectory: PhaseSpaceTrajectory, params: KvnParams):
    """Residuals of d/dt tr[W x] and d/dt tr[W p] against the trace-form
    right-hand sides (projected ones in spohn mode), centered differences."""
    obs = trajectory.observables
    t = trajectory.times
    if len(t) < 3:
        raise PreconditionError("need at least 3 frames for centered differences")
    span = t[2:] - t[:-2]
    dxdt = (obs["raw_x"][2:] - obs["raw_x"][:-2]) / span
    dpdt = (obs["raw_p"][2:] - obs["raw_p"][:-2]) / span
    r_x = np.abs(dxdt - obs["raw_velocity"][1:-1])
    r_p = np.abs(dpdt - obs["raw_force"][1:-1])
    return t[1:-1], r_x, r_p
