"""Dense reference machinery for the phase-space propagators.

Builds the discretized anticommutator-flow generator as an explicit
matrix on vec(W) using DFT matrices and Kronecker products: a path
through plain linear algebra, independent of the FFT kernels under
test.  Ordering matches W.reshape(-1) for W of shape (n_x, n_p, 4, 4).
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import dft

from diracps.clifford import GAMMA
from diracps.kvn import _advection_multiplier
from diracps.wigner import positive_energy_projector

G0G = np.stack([GAMMA[0] @ GAMMA[nu] for nu in range(4)])
I4 = np.eye(4, dtype=complex)


def lambda_operator(grid):
    """Dense matrix of i d/dx on the x-grid (multiplier -lambda)."""
    f = dft(grid.n_x)
    finv = np.conj(f) / grid.n_x
    return finv @ np.diag(-_advection_multiplier(grid.lam)).astype(complex) @ f


def theta_operator(grid):
    """Dense matrix of -i d/dp on the p-grid (multiplier +theta)."""
    f = dft(grid.n_p)
    finv = np.conj(f) / grid.n_p
    return finv @ np.diag(_advection_multiplier(grid.theta)).astype(complex) @ f


def dense_generator(grid, params):
    """dvec(W)/dt = L vec(W) for the anticommutator flow (kvn form)."""
    nx, npts = grid.n_x, grid.n_p
    ident_x = np.eye(nx)
    ident_p = np.eye(npts)
    lam_op = lambda_operator(grid)
    theta_op = theta_operator(grid)
    da = params.potential.da(grid.x)  # (n_x, 4) covariant derivatives
    ce = params.c * params.e

    dim = nx * npts * 16
    total = np.zeros((dim, dim), dtype=complex)
    for nu in range(4):
        phase = np.zeros((nx * npts, nx * npts), dtype=complex)
        if nu == 1:
            phase += -params.c * np.kron(lam_op, ident_p)
        if np.any(da[:, nu]):
            phase += -ce * np.kron(np.diag(da[:, nu]).astype(complex), theta_op)
        if not np.any(phase):
            continue
        matrix_part = np.kron(G0G[nu], I4) + np.kron(I4, G0G[nu].T)
        total += -0.5j * np.kron(phase, matrix_part)
    return total


def dense_projector(grid, params):
    """Block-diagonal superoperator of the pointwise P+ . P+ sandwich."""
    nx, npts = grid.n_x, grid.n_p
    dim = nx * npts * 16
    proj = np.zeros((dim, dim), dtype=complex)
    for j in range(nx):
        for k in range(npts):
            p_plus = positive_energy_projector(
                grid.p[k],
                grid.x[j],
                params.potential,
                m=params.m,
                c=params.c,
                e=params.e,
            )
            block = np.kron(p_plus, p_plus.T)
            base = (j * npts + k) * 16
            proj[base : base + 16, base : base + 16] = block
    return proj


def reference_evolution(w0_values, generator, t_final, rtol=1e-12, atol=1e-13):
    """High-order dense integration of the full linear system."""
    vec0 = np.asarray(w0_values, dtype=complex).reshape(-1)
    sol = solve_ivp(
        lambda t, y: generator @ y,
        (0.0, t_final),
        vec0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    return sol.y[:, -1].reshape(w0_values.shape)
