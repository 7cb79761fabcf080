"""Classical spinor kinematics: boosts, spinor extraction, velocity recovery.

A restricted Lorentz transformation is represented by a Spin+(1,3)
element L acting on the rest-frame slashed velocity c*gamma^0.  The
Hermitian boost factor of L = B R is obtained in closed form from the
proper velocity, and the leftmost column of L stores the full kinematic
content: u^nu = Psi^dag c gamma^0 gamma^nu Psi.
"""

from __future__ import annotations

import numpy as np

from .clifford import GAMMA, IDENTITY4, lorentz_inner, slash
from .errors import PreconditionError

# gamma^0 gamma^nu for nu = 0..3; Hermitian, used for velocity extraction
G0G = np.stack([GAMMA[0] @ GAMMA[nu] for nu in range(4)])
G0G.setflags(write=False)

ON_SHELL_RTOL = 1e-9


def boost_from_velocity(u, c: float = 1.0) -> np.ndarray:
    """Hermitian boost B with c * B @ B @ gamma^0 = slash(u).

    The matrix square root of slash(u) gamma^0 / c has the closed form
    (slash(u) gamma^0 + c) / sqrt(2 c (c + u^0)) on the forward branch.
    """
    u = np.asarray(u, dtype=float)
    uu = lorentz_inner(u, u)
    if abs(uu - c * c) > ON_SHELL_RTOL * c * c:
        raise PreconditionError(
            f"proper velocity is off shell: u.u = {uu!r}, expected c^2 = {c * c!r}"
        )
    if u[0] <= 0.0:
        raise PreconditionError(
            f"direction of time not preserved: u^0 = {u[0]!r} must be positive"
        )
    num = slash(u) @ GAMMA[0] + c * IDENTITY4
    return num / np.sqrt(2.0 * c * (c + u[0]))


def spinor_from_transform(L: np.ndarray) -> np.ndarray:
    """Leftmost column of a Spin+(1,3) element."""
    return np.asarray(L, dtype=complex)[:, 0].copy()


def embed_spinor(psi) -> np.ndarray:
    """Rebuild the redundant 4x4 matrix that stores a spinor column.

    The pattern (rows) is
        psi1  -psi2*  psi3   psi4*
        psi2   psi1*  psi4  -psi3*
        psi3   psi4*  psi1  -psi2*
        psi4  -psi3*  psi2   psi1*
    and reproduces any restricted Lorentz element whose first column is psi.
    """
    p1, p2, p3, p4 = np.asarray(psi, dtype=complex)
    c = np.conj
    return np.array(
        [
            [p1, -c(p2), p3, c(p4)],
            [p2, c(p1), p4, -c(p3)],
            [p3, c(p4), p1, -c(p2)],
            [p4, -c(p3), p2, c(p1)],
        ]
    )


def velocity_from_spinor(psi, c: float = 1.0) -> np.ndarray:
    """u^nu = Psi^dag c gamma^0 gamma^nu Psi (real for Spin+ spinors)."""
    psi = np.asarray(psi, dtype=complex)
    return np.real(np.einsum("a,nab,b->n", np.conj(psi), G0G, psi)) * c


def projector_q() -> np.ndarray:
    """(1/4)(1 + gamma^0)(1 + i gamma^1 gamma^2) = diag(1, 0, 0, 0)."""
    return 0.25 * (IDENTITY4 + GAMMA[0]) @ (IDENTITY4 + 1j * GAMMA[1] @ GAMMA[2])
