"""Split-operator propagation of the 1D Dirac equation.

The Hamiltonian acting on spinor fields is

    H = c gamma^0 gamma^1 p_hat + c e A_nu(x) gamma^0 gamma^nu + m c^2 gamma^0

with p_hat = -i hbar d/dx.  A Strang step applies half a potential
exponential pointwise in x, the exact kinetic exponential pointwise in
momentum space, and the second potential half.  Both exponentials are
closed-form 4x4 expressions, so the free sector is propagated exactly
and the scheme is unitary to round-off.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .clifford import GAMMA, IDENTITY4
from .errors import ConfigError, PreconditionError
from .grids import BOUNDARY_MASS_LIMIT, PhaseGrid, Potential, SpinorField
from .wigner import positive_energy_projector

_G0G = np.stack([GAMMA[0] @ GAMMA[nu] for nu in range(4)])

NORM_TOL = 1e-8


@dataclass(frozen=True)
class DiracParams:
    m: float = 1.0
    c: float = 1.0
    e: float = 1.0
    hbar: float = 1.0
    dt: float = 1e-3
    potential: Potential = field(default_factory=Potential.free)

    def __post_init__(self):
        for name in ("m", "c", "hbar", "dt"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")


def dirac_hamiltonian_symbol(p: float, x: float, params: DiracParams) -> np.ndarray:
    """Hermitian 4x4 symbol H(p, x); eigenvalues c e A_0 +- K(p, x)."""
    a_cov = params.potential.a(np.asarray(x, dtype=float))
    h = params.c * p * _G0G[1] + params.m * params.c**2 * GAMMA[0]
    h = h + params.c * params.e * np.tensordot(a_cov, _G0G, axes=(-1, 0))
    return h


def _kinetic_exponentials(grid: PhaseGrid, params: DiracParams, dt: float) -> np.ndarray:
    """exp(-i dt H_kin(p)/hbar) on the FFT-ordered momentum grid, (n_x, 4, 4)."""
    p = grid.momenta_conjugate_to_x(params.hbar)
    mc2 = params.m * params.c**2
    k = np.sqrt(mc2**2 + (params.c * p) ** 2)
    phi = k * dt / params.hbar
    h_over_k = (
        params.c * p[:, None, None] * _G0G[1] + mc2 * GAMMA[0]
    ) / k[:, None, None]
    return (
        np.cos(phi)[:, None, None] * IDENTITY4
        - 1j * np.sin(phi)[:, None, None] * h_over_k
    )


def _potential_exponentials(
    grid: PhaseGrid, params: DiracParams, dt_half: float
) -> np.ndarray | None:
    """exp(-i dt_half M(x)/hbar) with M = c e A_nu gamma^0 gamma^nu, or None when free."""
    pot = params.potential
    if pot.is_free:
        return None
    a_cov = pot.a(grid.x)  # (n_x, 4)
    tau = dt_half / params.hbar
    scal = params.c * params.e * a_cov[:, 0]
    bvec = params.c * params.e * a_cov[:, 1:]  # coefficients of gamma^0 gamma^k
    bmag = np.linalg.norm(bvec, axis=1)
    phase = np.exp(-1j * tau * scal)[:, None, None]
    if not np.any(bmag):
        return phase * IDENTITY4
    bmat = np.tensordot(bvec, _G0G[1:], axes=(1, 0))
    safe = np.where(bmag > 0.0, bmag, 1.0)
    return phase * (
        np.cos(tau * bmag)[:, None, None] * IDENTITY4
        - 1j * (np.sin(tau * bmag) / safe)[:, None, None] * bmat
    )


def _check_sampling_guard(grid: PhaseGrid, params: DiracParams) -> None:
    pmax = float(np.max(np.abs(grid.momenta_conjugate_to_x(params.hbar))))
    mc2 = params.m * params.c**2
    bound = np.sqrt(mc2**2 + (params.c * pmax) ** 2)
    if not params.potential.is_free:
        a_cov = params.potential.a(grid.x)
        bound += params.c * params.e * float(
            np.max(np.abs(a_cov[:, 0]) + np.linalg.norm(a_cov[:, 1:], axis=1))
        )
    if params.dt * bound >= np.pi * params.hbar:
        raise ConfigError(
            f"sampling guard violated: dt*max|H| = {params.dt * bound:.3g} "
            f">= pi*hbar = {np.pi * params.hbar:.3g}"
        )


def gaussian_spinor_field(
    grid: PhaseGrid,
    x0: float = -5.0,
    p0: float = 2.0,
    sigma: float = 1.0,
    spinor=(1.0, 0.0, 0.0, 0.0),
    hbar: float = 1.0,
) -> SpinorField:
    """Normalized Gaussian packet exp(-(x-x0)^2/(2 sigma^2) + i p0 x/hbar) w."""
    w = np.asarray(spinor, dtype=complex)
    w = w / np.linalg.norm(w)
    envelope = np.exp(
        -((grid.x - x0) ** 2) / (2.0 * sigma**2) + 1j * p0 * grid.x / hbar
    )
    return SpinorField(envelope[:, None] * w[None, :], grid).normalized()


def project_spinor_field(psi: SpinorField, params: DiracParams) -> SpinorField:
    """Apply the kinetic positive-energy projector in momentum space.

    Exact antiparticle removal for potentials without spatial components
    (the projector argument is then the plain momentum).  Returns the
    unnormalized projection.
    """
    proj = positive_energy_projector(
        psi.grid.momenta_conjugate_to_x(params.hbar),
        0.0,
        Potential.free(),
        m=params.m,
        c=params.c,
        e=params.e,
    )
    ft = np.fft.fft(psi.values, axis=0)
    ft = np.einsum("xab,xb->xa", proj, ft)
    return SpinorField(np.fft.ifft(ft, axis=0), psi.grid)


def spinor_antiparticle_fraction(psi: SpinorField, params: DiracParams) -> float:
    """Norm fraction carried by the negative-energy (kinetic) subspace."""
    plus = project_spinor_field(psi, params)
    return 1.0 - plus.norm_squared() / psi.norm_squared()


OBSERVABLE_COLUMNS = ("time", "mean_x", "mean_p", "norm", "velocity_mean", "force_mean")


@dataclass
class DiracTrajectory:
    times: np.ndarray
    observables: dict
    fields: list | None
    final: SpinorField
    params: DiracParams


def propagate_dirac(
    psi0: SpinorField,
    params: DiracParams,
    n_steps: int,
    frame_stride: int = 1,
    keep_fields: bool = True,
    frame_callback=None,
) -> DiracTrajectory:
    """Evolve psi0 for n_steps Strang steps, capturing frames every frame_stride.

    Frames (observables, optional field snapshots, callback invocations)
    are taken at step 0, every multiple of frame_stride, and the final step.
    """
    grid = psi0.grid
    if abs(psi0.norm() - 1.0) > NORM_TOL:
        raise PreconditionError(
            f"initial state must be normalized, |psi| = {psi0.norm()!r}"
        )
    _check_sampling_guard(grid, params)

    e_kin = _kinetic_exponentials(grid, params, params.dt)
    e_pot = _potential_exponentials(grid, params, 0.5 * params.dt)
    force_m = None
    if not params.potential.is_free:
        da = params.potential.da(grid.x)
        force_m = params.c * params.e * np.tensordot(da, _G0G, axes=(1, 0))

    times, rows, fields = [], [], ([] if keep_fields else None)
    vel_m = params.c * _G0G[1]
    warned = False

    def capture(step: int, psi: SpinorField):
        nonlocal warned
        t = step * params.dt
        nsq = psi.norm_squared()
        vel = float(
            np.real(np.einsum("xa,ab,xb->", np.conj(psi.values), vel_m, psi.values))
            * grid.dx
            / nsq
        )
        if force_m is None:
            force = 0.0
        else:
            force = -float(
                np.real(
                    np.einsum("xa,xab,xb->", np.conj(psi.values), force_m, psi.values)
                )
                * grid.dx
                / nsq
            )
        times.append(t)
        rows.append((t, psi.mean_x(), psi.mean_p(params.hbar), np.sqrt(nsq), vel, force))
        if fields is not None:
            fields.append(psi.copy())
        if frame_callback is not None:
            frame_callback(step, t, psi)
        if not warned and psi.boundary_fraction() > BOUNDARY_MASS_LIMIT:
            warnings.warn(
                "wave packet mass reached the periodic boundary; enlarge the box",
                stacklevel=3,
            )
            warned = True

    psi = psi0.copy()
    capture(0, psi)
    for step in range(1, n_steps + 1):
        v = psi.values
        if e_pot is not None:
            v = np.einsum("xab,xb->xa", e_pot, v)
        ft = np.fft.fft(v, axis=0)
        ft = np.einsum("xab,xb->xa", e_kin, ft)
        v = np.fft.ifft(ft, axis=0)
        if e_pot is not None:
            v = np.einsum("xab,xb->xa", e_pot, v)
        psi = SpinorField(v, grid)
        if step % frame_stride == 0 or step == n_steps:
            capture(step, psi)

    observables = {
        name: np.array([r[i] for r in rows])
        for i, name in enumerate(OBSERVABLE_COLUMNS)
    }
    return DiracTrajectory(np.array(times), observables, fields, psi, params)


def ehrenfest_residuals(trajectory: DiracTrajectory, params: DiracParams):
    """Centered-difference residuals of the expectation-value equations.

    r_x = |d<x>/dt - <c gamma^0 gamma^1>|, r_p = |d<p>/dt - force|,
    evaluated at interior frames; requires at least 3 frames.
    """
    obs = trajectory.observables
    t = trajectory.times
    if len(t) < 3:
        raise PreconditionError("need at least 3 frames for centered differences")
    span = t[2:] - t[:-2]
    dxdt = (obs["mean_x"][2:] - obs["mean_x"][:-2]) / span
    dpdt = (obs["mean_p"][2:] - obs["mean_p"][:-2]) / span
    r_x = np.abs(dxdt - obs["velocity_mean"][1:-1])
    r_p = np.abs(dpdt - obs["force_mean"][1:-1])
    return t[1:-1], r_x, r_p
