import numpy as np
import pytest

from diracps.clifford import GAMMA
from diracps.dirac import DiracParams, gaussian_spinor_field
from diracps.errors import ConfigError, IntegrityError, PreconditionError
from diracps.grids import Potential, SpinorField, WignerMatrixField, make_grid
from diracps.wigner import (
    antiparallel_mass_fraction,
    antiparticle_fraction,
    positive_energy_projector,
    project_state,
    projector_field,
    wigner_grid,
    wigner_representation,
    wigner_transform,
)

FREE = Potential.free()
G01 = GAMMA[0] @ GAMMA[1]


@pytest.fixture(scope="module")
def grid():
    return make_grid(256, 256, -16.0, 16.0)


@pytest.fixture(scope="module")
def rest_gaussian(grid):
    return gaussian_spinor_field(grid, x0=0.0, p0=0.0, sigma=1.0)


def test_gaussian_analytic_oracle(grid, rest_gaussian):
    w = wigner_transform(rest_gaussian, 1.0)
    rep = wigner_representation(w)
    xg, pg = np.meshgrid(w.grid.x, w.grid.p, indexing="ij")
    analytic = np.exp(-(xg**2) - pg**2) / np.pi
    assert np.max(np.abs(rep - analytic)) < 1e-8


def test_gaussian_peak_value(grid, rest_gaussian):
    w = wigner_transform(rest_gaussian, 1.0)
    rep = wigner_representation(w)
    i0 = np.argmin(np.abs(w.grid.x))
    k0 = np.argmin(np.abs(w.grid.p))
    assert abs(rep[i0, k0] - 1.0 / np.pi) < 1e-6


def test_trace_normalization(grid, rest_gaussian):
    w = wigner_transform(rest_gaussian, 1.0)
    assert abs(w.total_trace() - 1.0) < 1e-8


def test_pointwise_hermitian_and_real_trace(grid, rest_gaussian):
    w = wigner_transform(rest_gaussian, 1.0)
    assert w.hermiticity_defect() < 1e-10
    assert np.max(np.abs(w.trace_field().imag)) < 1e-10


def test_marginal_reproduces_density(grid):
    psi = gaussian_spinor_field(grid, x0=-3.0, p0=1.5, sigma=1.2)
    w = wigner_transform(psi, 1.0)
    marginal = wigner_representation(w).sum(axis=1) * w.grid.dp
    assert np.max(np.abs(marginal - psi.density())) < 1e-6


def test_momentum_axis_orientation(grid):
    psi = gaussian_spinor_field(grid, x0=-5.0, p0=2.0, sigma=1.0)
    w = wigner_transform(psi, 1.0)
    assert abs(w.mean_p() - 2.0) < 1e-6
    assert abs(w.mean_x() + 5.0) < 1e-6


def test_velocity_covariance_with_spinor_expectation(grid):
    psi = gaussian_spinor_field(grid, x0=-5.0, p0=2.0, sigma=1.0)
    w = wigner_transform(psi, 1.0)
    from_w = w.matrix_moment(G01)
    from_psi = psi.matrix_expectation(G01).real
    assert abs(from_w - from_psi) < 1e-8


def test_hbar_scales_momentum_grid(grid):
    psi = gaussian_spinor_field(grid, x0=0.0, p0=0.0, sigma=1.0, hbar=0.5)
    w = wigner_transform(psi, 0.5)
    assert np.isclose(w.grid.p_max, np.pi * 0.5 / grid.dx)
    assert abs(w.total_trace() - 1.0) < 1e-8


def test_grid_pairing_enforced(grid, rest_gaussian):
    bad = make_grid(256, 256, -16.0, 16.0, -10.0, 10.0)
    with pytest.raises(ConfigError):
        wigner_transform(rest_gaussian, 1.0, grid=bad)
    good = wigner_grid(grid, 1.0)
    w = wigner_transform(rest_gaussian, 1.0, grid=good)
    assert abs(w.total_trace() - 1.0) < 1e-8


def test_representation_integrity_error(grid, rest_gaussian):
    w = wigner_transform(rest_gaussian, 1.0)
    broken = w.copy()
    broken.values[10, 10, 0, 0] += 1e-3j
    with pytest.raises(IntegrityError):
        wigner_representation(broken)


def test_representation_matches_trace_pointwise(grid, rest_gaussian, rng):
    w = wigner_transform(rest_gaussian, 1.0)
    rep = wigner_representation(w)
    for _ in range(5):
        i = rng.integers(0, w.grid.n_x)
        k = rng.integers(0, w.grid.n_p)
        assert abs(rep[i, k] - np.trace(w.values[i, k]).real) < 1e-12


def test_zero_field_representation(grid):
    w = WignerMatrixField(np.zeros((256, 256, 4, 4), dtype=complex), wigner_grid(grid, 1.0))
    assert np.array_equal(wigner_representation(w), np.zeros((256, 256)))


def test_projector_rest_frame():
    p = positive_energy_projector(0.0, 0.0, FREE, m=1.0, c=1.0, e=1.0)
    assert np.max(np.abs(p - np.diag([1.0, 1.0, 0.0, 0.0]))) < 1e-14


def test_projector_identities(rng):
    p_vals = rng.uniform(-10, 10, size=100)
    x_vals = rng.uniform(-16, 16, size=100)
    proj = positive_energy_projector(p_vals, x_vals, FREE, m=1.0, c=1.0, e=1.0)
    ident = np.eye(4)
    assert np.max(np.abs(proj @ proj - proj)) < 1e-12
    assert np.max(np.abs(np.trace(proj, axis1=-2, axis2=-1) - 2.0)) < 1e-12
    p_minus = ident - proj
    assert np.max(np.abs(proj @ p_minus)) < 1e-12
    assert np.max(np.abs(proj - np.conj(proj.swapaxes(-2, -1)))) < 1e-14


def test_projector_with_spatial_potential(rng):
    # physical A^1 varies with x; projector argument is p - e A^1(x)
    xs = np.linspace(-2.0, 2.0, 33)
    table = np.zeros((33, 4))
    table[:, 1] = -0.4 * np.sin(np.pi * xs / 2.0)  # covariant A_1
    pot = Potential.tabulated(xs, table, np.zeros((33, 4)))
    p_vals = rng.uniform(-5, 5, size=50)
    x_vals = rng.uniform(-2, 2, size=50)
    proj = positive_energy_projector(p_vals, x_vals, pot, m=1.0, c=1.0, e=1.0)
    assert np.max(np.abs(proj @ proj - proj)) < 1e-12
    assert np.max(np.abs(np.trace(proj, axis1=-2, axis2=-1) - 2.0)) < 1e-12


def test_projector_commutes_with_free_symbol(rng):
    params = DiracParams()
    from diracps.dirac import dirac_hamiltonian_symbol

    for p in rng.uniform(-8, 8, size=20):
        h = dirac_hamiltonian_symbol(p, 0.0, params)
        proj = positive_energy_projector(p, 0.0, FREE, m=1.0, c=1.0, e=1.0)
        assert np.max(np.abs(h @ proj - proj @ h)) < 1e-12
        spectrum = np.sort(np.linalg.eigvalsh(proj @ h @ proj))
        k = np.sqrt(1.0 + p * p)
        assert np.max(np.abs(spectrum - np.array([0.0, 0.0, k, k]))) < 1e-10


def test_project_state_idempotent(grid, rest_gaussian):
    w = wigner_transform(rest_gaussian, 1.0)
    once = project_state(w, FREE, m=1.0, c=1.0, e=1.0)
    twice = project_state(once, FREE, m=1.0, c=1.0, e=1.0)
    assert np.max(np.abs(twice.values - once.values)) < 1e-12


def test_pure_rest_antiparticle_projected_away(grid):
    # momentum eigenstate at p = 0 with the antiparticle spinor direction
    values = np.zeros((grid.n_x, 4), dtype=complex)
    values[:, 2] = 1.0
    psi = SpinorField(values, grid).normalized()
    w = wigner_transform(psi, 1.0)
    projected = project_state(w, FREE, m=1.0, c=1.0, e=1.0)
    assert np.max(np.abs(projected.values)) < 1e-12 * np.max(np.abs(w.values))


def test_antiparticle_fraction_examples(grid):
    psi = gaussian_spinor_field(grid, x0=-5.0, p0=2.0, sigma=1.0)
    w = wigner_transform(psi, 1.0)
    projected = project_state(w, FREE, m=1.0, c=1.0, e=1.0)
    assert abs(antiparticle_fraction(projected, FREE, m=1, c=1, e=1)) < 1e-10

    # pure antiparticle packet, built per momentum mode
    ft = np.fft.fft(psi.values[:, 0])
    p_modes = grid.momenta_conjugate_to_x(1.0)
    proj_minus = np.eye(4) - positive_energy_projector(
        p_modes, 0.0, FREE, m=1.0, c=1.0, e=1.0
    )
    seed = np.zeros(4, dtype=complex)
    seed[2] = 1.0
    spinors = proj_minus @ seed
    spinors /= np.linalg.norm(spinors, axis=1, keepdims=True)
    anti = SpinorField(ft[:, None] * spinors, grid)
    anti = SpinorField(np.fft.ifft(anti.values, axis=0), grid).normalized()
    w_anti = wigner_transform(anti, 1.0)
    assert abs(antiparticle_fraction(w_anti, FREE, m=1, c=1, e=1) - 1.0) < 1e-8


def test_fraction_matches_x_space_oracle(grid, rest_gaussian):
    # independent oracle: momentum-space projection of psi, no Wigner transform
    w = wigner_transform(rest_gaussian, 1.0)
    frac_w = antiparticle_fraction(w, FREE, m=1, c=1, e=1)
    ft = np.fft.fft(rest_gaussian.values, axis=0)
    proj = positive_energy_projector(
        grid.momenta_conjugate_to_x(1.0), 0.0, FREE, m=1.0, c=1.0, e=1.0
    )
    ft_minus = ft - np.einsum("xab,xb->xa", proj, ft)
    frac_psi = np.sum(np.abs(ft_minus) ** 2) / np.sum(np.abs(ft) ** 2)
    assert frac_w > 1e-3  # rest Gaussian carries genuine antiparticle weight
    assert abs(frac_w - frac_psi) < 1e-10


def test_fraction_precondition(grid):
    w = WignerMatrixField(
        np.zeros((grid.n_x, 256, 4, 4), dtype=complex), wigner_grid(grid, 1.0)
    )
    with pytest.raises(PreconditionError):
        antiparticle_fraction(w, FREE, m=1, c=1, e=1)


def test_antiparallel_fraction_zero_for_projected(grid):
    psi = gaussian_spinor_field(grid, x0=-5.0, p0=2.0, sigma=1.0)
    w = project_state(wigner_transform(psi, 1.0), FREE, m=1, c=1, e=1)
    assert antiparallel_mass_fraction(w) == 0.0


def test_projector_rejects_massless():
    with pytest.raises(ConfigError):
        projector_field(make_grid(8, 8, -1, 1), FREE, m=0.0, c=1.0, e=1.0)
