"""Relativistic point-particle ensembles in coordinate time.

Hamilton's equations for the on-shell particle, reparametrized from
proper time with dt/dtau = K/(m c^2):

    dx/dt = c^2 (p - e A^1) / K
    dp/dt = -e c^2 (d_1 A_nu)(p - e A)^nu / K

with p the physical momentum and cp^0 = K + c e A_0 derived, never
integrated.  Fixed-step RK4; particles are independent and vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import PreconditionError
from .grids import PhaseGrid, Potential, kinetic_energy


@dataclass
class EnsembleState:
    x: np.ndarray
    p: np.ndarray
    m: float = 1.0
    c: float = 1.0
    e: float = 1.0
    potential: Potential = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.potential is None:
            self.potential = Potential.free()
        self.x = np.atleast_1d(np.asarray(self.x, dtype=float))
        self.p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if self.x.shape != self.p.shape:
            raise PreconditionError("x and p arrays must have matching shapes")

    @property
    def n(self) -> int:
        return self.x.size

    def kinetic(self) -> np.ndarray:
        return kinetic_energy(
            self.p, self.x, self.potential, m=self.m, c=self.c, e=self.e
        )

    def energy(self) -> np.ndarray:
        """c p^0 = K + c e A_0 per particle (shell-mass relation)."""
        a0 = self.potential.a(self.x)[..., 0]
        return self.kinetic() + self.c * self.e * a0

    def velocity(self) -> np.ndarray:
        kin = self.p - self.e * self.potential.a1_physical(self.x)
        return self.c**2 * kin / self.kinetic()


def sample_from_wigner(
    rep: np.ndarray,
    grid: PhaseGrid,
    n: int,
    seed: int,
    *,
    m: float = 1.0,
    c: float = 1.0,
    e: float = 1.0,
    potential: Potential | None = None,
) -> EnsembleState:
    """Draw n phase-space points from a Wigner representation.

    Negative quasi-distribution values are clipped to zero, the rest is
    normalized and sampled by inverse CDF over the flattened grid with
    uniform jitter inside each cell.  Deterministic for a fixed seed.
    """
    rep = np.asarray(rep, dtype=float)
    if rep.shape != (grid.n_x, grid.n_p):
        raise PreconditionError("representation shape does not match the grid")
    weights = np.clip(rep, 0.0, None).ravel()
    total = weights.sum()
    if total <= 0.0:
        raise PreconditionError("representation has zero mass after clipping")
    cdf = np.cumsum(weights) / total
    rng = np.random.default_rng(seed)
    cells = np.searchsorted(cdf, rng.random(n), side="right")
    cells = np.minimum(cells, weights.size - 1)
    ix, ip = np.unravel_index(cells, (grid.n_x, grid.n_p))
    x = grid.x[ix] + (rng.random(n) - 0.5) * grid.dx
    p = grid.p[ip] + (rng.random(n) - 0.5) * grid.dp
    return EnsembleState(
        x, p, m=m, c=c, e=e, potential=potential or Potential.free()
    )


def _derivatives(state: EnsembleState, x: np.ndarray, p: np.ndarray):
    pot = state.potential
    c, e, m = state.c, state.e, state.m
    kin1 = p - e * pot.a1_physical(x)
    k = np.sqrt((m * c * c) ** 2 + (c * kin1) ** 2)
    dxdt = c**2 * kin1 / k
    da = pot.da(x)  # covariant d_1 A_nu
    a = pot.a(x)
    # (p - e A)^nu with p^2 = p^3 = 0: (K/c, p - e A^1, e A_2, e A_3)
    contraction = (
        da[..., 0] * (k / c)
        + da[..., 1] * kin1
        + da[..., 2] * (e * a[..., 2])
        + da[..., 3] * (e * a[..., 3])
    )
    dpdt = -e * c**2 * contraction / k
    return dxdt, dpdt


@dataclass
class EnsembleTrajectory:
    times: np.ndarray
    xs: np.ndarray  # (n_frames, n_particles)
    ps: np.ndarray
    state: EnsembleState  # final state

    def mean_x(self) -> np.ndarray:
        return self.xs.mean(axis=1)

    def mean_p(self) -> np.ndarray:
        return self.ps.mean(axis=1)


def integrate_ensemble(
    state: EnsembleState,
    dt: float,
    n_steps: int,
    frame_stride: int = 1,
    frame_callback: Callable | None = None,
) -> EnsembleTrajectory:
    """Classical RK4 with fixed step; frames at step 0, every stride, final."""
    if dt <= 0.0:
        raise PreconditionError("dt must be positive")
    x = state.x.copy()
    p = state.p.copy()
    times, xs, ps = [], [], []

    def capture(step: int):
        t = step * dt
        times.append(t)
        xs.append(x.copy())
        ps.append(p.copy())
        if frame_callback is not None:
            frame_callback(step, t, x.copy(), p.copy())

    capture(0)
    for step in range(1, n_steps + 1):
        k1x, k1p = _derivatives(state, x, p)
        k2x, k2p = _derivatives(state, x + 0.5 * dt * k1x, p + 0.5 * dt * k1p)
        k3x, k3p = _derivatives(state, x + 0.5 * dt * k2x, p + 0.5 * dt * k2p)
        k4x, k4p = _derivatives(state, x + dt * k3x, p + dt * k3p)
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        p = p + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if step % frame_stride == 0 or step == n_steps:
            capture(step)

    final = EnsembleState(
        x, p, m=state.m, c=state.c, e=state.e, potential=state.potential
    )
    return EnsembleTrajectory(np.array(times), np.array(xs), np.array(ps), final)
