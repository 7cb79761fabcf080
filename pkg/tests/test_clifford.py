import numpy as np
import pytest

from diracps.clifford import (
    METRIC_DIAG,
    anticommutator,
    gamma,
    lorentz_inner,
    lower_index,
    raise_index,
    slash,
    verify_clifford,
)


def test_gamma0_is_diag_1_1_m1_m1():
    assert np.array_equal(gamma(0), np.diag([1, 1, -1, -1]).astype(complex))


def test_gamma_hermiticity():
    assert np.array_equal(gamma(0), gamma(0).conj().T)
    for k in (1, 2, 3):
        assert np.array_equal(gamma(k), -gamma(k).conj().T)


def test_gamma_squares():
    ident = np.eye(4)
    assert np.array_equal(gamma(0) @ gamma(0), ident)
    assert np.array_equal(gamma(1) @ gamma(1), -ident)


def test_gamma_index_out_of_range():
    with pytest.raises(ValueError):
        gamma(4)
    with pytest.raises(ValueError):
        gamma(-1)


def test_anticommutators_exact():
    report = verify_clifford()
    assert report["max_deviation"] == 0.0


def test_index_raising_involution(rng):
    v = rng.normal(size=4)
    assert np.array_equal(raise_index(lower_index(v)), v)
    assert np.array_equal(lower_index(v), METRIC_DIAG * v)


def test_slash_basis_vector():
    assert np.array_equal(slash([1, 0, 0, 0]), gamma(0))


def test_slash_squares_to_inner_product():
    v = np.array([2.0, 1.0, 0.0, 0.0])
    sq = slash(v) @ slash(v)
    # direct 4x4 multiplication oracle: v.v = 4 - 1 = 3
    assert np.max(np.abs(sq - 3.0 * np.eye(4))) < 1e-14


def test_slash_linearity(rng):
    for _ in range(100):
        a, b = rng.normal(size=2)
        v, w = rng.normal(size=4), rng.normal(size=4)
        lhs = slash(a * v + b * w)
        rhs = a * slash(v) + b * slash(w)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_lorentz_inner_values():
    assert lorentz_inner([1, 0, 0, 0], [1, 0, 0, 0]) == 1.0
    assert lorentz_inner([1, 1, 0, 0], [1, 1, 0, 0]) == 0.0
    assert lorentz_inner([2, 1, 0, 0], [3, -1, 0, 0]) == 7.0


def test_trace_identity_vs_inner_product(rng):
    for _ in range(100):
        p, q = rng.normal(size=4), rng.normal(size=4)
        tr = 0.25 * np.trace(slash(p) @ slash(q))
        assert abs(tr.real - lorentz_inner(p, q)) < 1e-12
        assert abs(tr.imag) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("c", [1.0, 2.5])
def test_velocity_matrix_eigenvalues(k, c):
    vals = np.linalg.eigvalsh(c * gamma(0) @ gamma(k))
    assert np.max(np.abs(np.sort(vals) - np.array([-c, -c, c, c]))) < 1e-12


def test_shell_mass_trace_condition(rng):
    # on-shell p constructed as m*u + e*A with u.u = c^2
    m, c, e = 1.3, 2.0, 0.7
    for _ in range(20):
        chi = rng.normal() * 0.8
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        u = np.concatenate(([c * np.cosh(chi)], c * np.sinh(chi) * n))
        a = rng.normal(size=4)
        p = m * u + e * a
        op = slash(p) - e * slash(a)
        tr = np.trace((op - m * c * np.eye(4)) @ (op + m * c * np.eye(4)))
        assert abs(tr) < 1e-10


def test_anticommutator_helper():
    assert np.array_equal(
        anticommutator(gamma(0), gamma(1)), gamma(0) @ gamma(1) + gamma(1) @ gamma(0)
    )
    assert np.max(np.abs(anticommutator(gamma(0), gamma(1)))) == 0.0
