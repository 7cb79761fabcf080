"""Gamma-matrix algebra in the Pauli-Dirac representation.

Minkowski metric signature (+, -, -, -).  All matrices are dense 4x4
complex arrays with exactly representable entries (0, +-1, +-i), so the
defining anticommutation relations hold without round-off.
"""

from __future__ import annotations

import numpy as np

METRIC_DIAG = np.array([1.0, -1.0, -1.0, -1.0])

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_ZERO2 = np.zeros((2, 2), dtype=complex)
_EYE2 = np.eye(2, dtype=complex)

GAMMA = np.stack(
    [np.block([[_EYE2, _ZERO2], [_ZERO2, -_EYE2]])]
    + [np.block([[_ZERO2, s], [-s, _ZERO2]]) for s in _SIGMA]
)
GAMMA.setflags(write=False)

IDENTITY4 = np.eye(4, dtype=complex)
IDENTITY4.setflags(write=False)


def gamma(mu: int) -> np.ndarray:
    """Gamma matrix with upper index mu in the Pauli-Dirac representation."""
    if mu not in (0, 1, 2, 3):
        raise ValueError(f"gamma index must be in 0..3, got {mu!r}")
    return GAMMA[mu]


def lower_index(v) -> np.ndarray:
    """v_mu = g_{mu nu} v^nu; an involution together with raise_index."""
    return METRIC_DIAG * np.asarray(v, dtype=float)


def raise_index(v) -> np.ndarray:
    """v^mu = g^{mu nu} v_nu (numerically identical to lower_index)."""
    return METRIC_DIAG * np.asarray(v, dtype=float)


def slash(v) -> np.ndarray:
    """Contract a contravariant four-vector with the gamma matrices.

    Returns v^mu gamma_mu = v^0 gamma^0 - v^k gamma^k, which squares to
    (v.v) times the identity.
    """
    v = np.asarray(v, dtype=complex)
    return np.tensordot(METRIC_DIAG * v, GAMMA, axes=(0, 0))


def lorentz_inner(p, q) -> float:
    """Minkowski inner product p^mu q_mu = p0*q0 - p.q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(np.dot(METRIC_DIAG * p, q))


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def verify_clifford() -> dict:
    """Sweep all 16 index pairs of {gamma^mu, gamma^nu} - 2 g^{mu nu} 1.

    Returns a report with the maximum entrywise deviation (exactly 0.0
    for the integer-valued Pauli-Dirac matrices) and the worst pair.
    """
    max_dev = 0.0
    worst = (0, 0)
    for mu in range(4):
        for nu in range(4):
            target = 2.0 * (METRIC_DIAG[mu] if mu == nu else 0.0) * IDENTITY4
            dev = float(np.max(np.abs(anticommutator(GAMMA[mu], GAMMA[nu]) - target)))
            if dev > max_dev:
                max_dev, worst = dev, (mu, nu)
    return {"max_deviation": max_dev, "worst_pair": worst}
