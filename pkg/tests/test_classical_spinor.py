import numpy as np
import pytest
import scipy.linalg

from diracps.clifford import GAMMA, lorentz_inner, slash
from diracps.errors import PreconditionError
from diracps.spinor import (
    boost_from_velocity,
    embed_spinor,
    projector_q,
    spinor_from_transform,
    velocity_from_spinor,
)


def random_proper_velocity(rng, c=1.0, chi_max=3.0):
    chi = rng.uniform(-chi_max, chi_max)
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    return np.concatenate(([c * np.cosh(chi)], c * np.sinh(chi) * n))


def random_rotor(rng):
    # unitary Spin+ element: exponential of a spatial bivector
    coeffs = rng.normal(size=3)
    biv = (
        coeffs[0] * GAMMA[1] @ GAMMA[2]
        + coeffs[1] * GAMMA[2] @ GAMMA[3]
        + coeffs[2] * GAMMA[3] @ GAMMA[1]
    )
    return scipy.linalg.expm(0.5 * biv)


def test_rest_frame_boost_is_identity():
    b = boost_from_velocity([1.0, 0.0, 0.0, 0.0])
    assert np.max(np.abs(b - np.eye(4))) < 1e-14


def test_boost_reproduces_slashed_velocity():
    chi = 1.0
    u = np.array([np.cosh(chi), np.sinh(chi), 0.0, 0.0])
    b = boost_from_velocity(u)
    assert np.max(np.abs(b @ b @ GAMMA[0] - slash(u))) < 1e-12


def test_boost_hermitian_for_random_velocities(rng):
    for _ in range(100):
        u = random_proper_velocity(rng)
        b = boost_from_velocity(u)
        assert np.max(np.abs(b - b.conj().T)) < 1e-12


def test_boost_preconditions():
    with pytest.raises(PreconditionError, match="off shell"):
        boost_from_velocity([1.0, 0.5, 0.0, 0.0])
    with pytest.raises(PreconditionError, match="direction of time"):
        boost_from_velocity([-1.0, 0.0, 0.0, 0.0])


def test_spinor_from_identity():
    assert np.array_equal(spinor_from_transform(np.eye(4)), [1, 0, 0, 0])


def test_rest_spinor():
    b = boost_from_velocity([1.0, 0.0, 0.0, 0.0])
    assert np.max(np.abs(spinor_from_transform(b) - [1, 0, 0, 0])) < 1e-14


def test_embed_spinor_pattern():
    ident = embed_spinor([1, 0, 0, 0])
    assert np.array_equal(ident, np.eye(4).astype(complex))
    m = embed_spinor([0, 1, 0, 0])
    assert np.array_equal(m[:, 0], [0, 1, 0, 0])
    assert np.array_equal(m[:, 1], [-1, 0, 0, 0])


def test_embed_leftmost_column_roundtrip(rng):
    for _ in range(100):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert np.array_equal(embed_spinor(psi)[:, 0], psi)


def test_embed_reproduces_spin_elements(rng):
    # boosts and boost*rotor products carry the redundant block pattern
    for _ in range(25):
        u = random_proper_velocity(rng)
        left = boost_from_velocity(u) @ random_rotor(rng)
        rebuilt = embed_spinor(spinor_from_transform(left))
        assert np.max(np.abs(rebuilt - left)) < 1e-12


def test_velocity_from_rest_spinor():
    assert np.max(np.abs(velocity_from_spinor([1, 0, 0, 0]) - [1, 0, 0, 0])) < 1e-14


def test_velocity_roundtrip_rapidity_one():
    u = np.array([np.cosh(1.0), np.sinh(1.0), 0.0, 0.0])
    psi = spinor_from_transform(boost_from_velocity(u))
    assert np.max(np.abs(velocity_from_spinor(psi) - u)) < 1e-10


def test_extracted_velocities_on_shell(rng):
    c = 2.0
    for _ in range(100):
        u = random_proper_velocity(rng, c=c)
        psi = spinor_from_transform(boost_from_velocity(u, c))
        v = velocity_from_spinor(psi, c)
        assert abs(lorentz_inner(v, v) - c * c) < 1e-9


def test_velocity_trace_identity(rng):
    # Psi^dag c g0 g^nu Psi equals (1/4) tr[c L L^dag g0 g^nu] for L = embed(Psi)
    for _ in range(50):
        u = random_proper_velocity(rng)
        left = boost_from_velocity(u) @ random_rotor(rng)
        psi = spinor_from_transform(left)
        lmat = embed_spinor(psi)
        for nu in range(4):
            tr = 0.25 * np.trace(lmat @ lmat.conj().T @ GAMMA[0] @ GAMMA[nu])
            direct = velocity_from_spinor(psi)[nu]
            assert abs(tr.real - direct) < 1e-10
            assert abs(tr.imag) < 1e-10


def test_appendix_trace_chain(rng):
    # 4 u^nu = c tr[g0 L^-1 g^nu L] for restricted Lorentz L (boost * rotor)
    for _ in range(25):
        u = random_proper_velocity(rng)
        left = boost_from_velocity(u) @ random_rotor(rng)
        psi = spinor_from_transform(left)
        v = velocity_from_spinor(psi)
        linv = np.linalg.inv(left)
        for nu in range(4):
            tr = 0.25 * np.trace(GAMMA[0] @ linv @ GAMMA[nu] @ left)
            assert abs(tr.real - v[nu]) < 1e-9
            assert abs(tr.imag) < 1e-9


def test_spinorial_lorentz_force_identity(rng):
    # c e Psi^dag g0 g^nu F_{mu nu} Psi = e F_{mu nu} u^nu, componentwise in mu
    e = 1.7
    for _ in range(25):
        u = random_proper_velocity(rng)
        psi = spinor_from_transform(boost_from_velocity(u))
        f = rng.normal(size=(4, 4))
        f = f - f.T  # antisymmetric field tensor
        v = velocity_from_spinor(psi)
        for mu in range(4):
            mat = sum(f[mu, nu] * GAMMA[0] @ GAMMA[nu] for nu in range(4))
            lhs = e * np.conj(psi) @ mat @ psi  # c = 1
            rhs = e * f[mu] @ v
            assert abs(lhs.real - rhs) < 1e-10
            assert abs(lhs.imag) < 1e-10


def test_projector_q():
    q = projector_q()
    assert np.max(np.abs(q - np.diag([1, 0, 0, 0]))) < 1e-15
    assert np.max(np.abs(q @ q - q)) < 1e-15
    assert np.max(np.abs(GAMMA[0] @ q - q)) < 1e-15
    assert np.max(np.abs(1j * GAMMA[1] @ GAMMA[2] @ q - q)) < 1e-15


def test_full_roundtrip_many(rng):
    worst = 0.0
    for _ in range(200):
        u = random_proper_velocity(rng)
        psi = spinor_from_transform(boost_from_velocity(u))
        worst = max(worst, float(np.max(np.abs(velocity_from_spinor(psi) - u))))
    assert worst < 1e-9
