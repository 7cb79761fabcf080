"""Matrix-valued Wigner transform and the positive-energy projector.

The transform of a spinor psi is

    W(x, p) = (1/2pi) Int e^{i p theta} psi(x - hbar theta/2)
                                        psi^dag(x + hbar theta/2) dtheta,

realized as an FFT over a shift grid with step dtheta = dx / hbar, so the
half-shifts advance in steps of dx/2 (evaluated spectrally) and the
momentum grid is pinned to p in [-pi hbar / dx, pi hbar / dx).
"""

from __future__ import annotations

import numpy as np

from .clifford import GAMMA, IDENTITY4
from .errors import ConfigError, IntegrityError, PreconditionError
from .grids import PhaseGrid, Potential, SpinorField, WignerMatrixField

_G01 = GAMMA[0] @ GAMMA[1]


def wigner_grid(spinor_grid: PhaseGrid, hbar: float, n_p: int | None = None) -> PhaseGrid:
    """Phase grid whose p-range is conjugate to the half-shift ladder."""
    n_p = spinor_grid.n_x if n_p is None else n_p
    p_max = np.pi * hbar / spinor_grid.dx
    return PhaseGrid(
        spinor_grid.n_x, n_p, spinor_grid.x_min, spinor_grid.x_max, -p_max, p_max
    )


def wigner_transform(
    psi: SpinorField, hbar: float = 1.0, grid: PhaseGrid | None = None
) -> WignerMatrixField:
    """Transform a spinor field into its matrix-valued Wigner function.

    The result is pointwise Hermitian and trace-preserving:
    sum tr W dx dp equals the squared norm of psi.
    """
    sgrid = psi.grid
    if grid is None:
        grid = wigner_grid(sgrid, hbar)
    else:
        if grid.n_x != sgrid.n_x or not grid.is_wigner_paired(hbar, rtol=1e-9):
            raise ConfigError(
                "phase grid is not paired with the spinor grid: expected "
                f"p range +-{np.pi * hbar / sgrid.dx!r} on {sgrid.n_x} x-points"
            )
    n_p = grid.n_p

    # half-shifts hbar*theta_j/2 = j*dx/2, j in FFT ordering
    shifts = 0.5 * sgrid.dx * np.fft.fftfreq(n_p, d=1.0 / n_p)
    ft = np.fft.fft(psi.values, axis=0)  # (n_x, 4)
    phase = np.exp(-1j * np.outer(sgrid.lam, shifts))  # (n_x, n_p)
    minus = np.fft.ifft(ft[:, None, :] * phase[:, :, None], axis=0)
    plus = np.fft.ifft(ft[:, None, :] * np.conj(phase)[:, :, None], axis=0)

    corr = minus[:, :, :, None] * np.conj(plus[:, :, None, :])  # (n_x, n_p, 4, 4)
    w = np.fft.ifft(corr, axis=1) / grid.dp
    w = np.fft.fftshift(w, axes=1)
    return WignerMatrixField(w, grid)


def wigner_representation(w: WignerMatrixField, imag_tol: float = 1e-8) -> np.ndarray:
    """Real scalar field tr W(x, p); the quasi-distribution shown in plots.

    Raises IntegrityError when the imaginary residue exceeds imag_tol,
    which signals a propagator that stopped preserving Hermiticity.
    """
    tr = w.trace_field()
    residue = float(np.max(np.abs(tr.imag))) if tr.size else 0.0
    if residue > imag_tol:
        raise IntegrityError(
            f"Wigner representation has imaginary residue {residue:.3e} > {imag_tol:.1e}"
        )
    return tr.real


def positive_energy_projector(
    p, x, potential: Potential, *, m: float, c: float, e: float
) -> np.ndarray:
    """Pointwise projector onto the positive-energy (particle) subspace.

    P+ = (1/2)(1 + (c (p - e A^1(x)) gamma^0 gamma^1 + m c^2 gamma^0) / K),
    Hermitian, idempotent, trace 2.  Broadcasts over arrays of p and x.
    """
    p = np.asarray(p, dtype=float)
    kin = p - e * potential.a1_physical(x)
    k_energy = np.sqrt((m * c * c) ** 2 + (c * kin) ** 2)
    shape = np.broadcast(kin, k_energy).shape
    kin = np.broadcast_to(kin, shape)[..., None, None]
    k_energy = np.broadcast_to(k_energy, shape)[..., None, None]
    num = c * kin * _G01 + (m * c * c) * GAMMA[0]
    return 0.5 * (IDENTITY4 + num / k_energy)


def projector_field(
    grid: PhaseGrid, potential: Potential, *, m: float, c: float, e: float
) -> np.ndarray:
    """P+ evaluated on the grid; shape (1, n_p, 4, 4) when the potential has
    no spatial components, (n_x, n_p, 4, 4) otherwise."""
    if m <= 0.0:
        raise ConfigError("projector requires m > 0 (K would vanish on shell)")
    if potential.has_spatial_part:
        return positive_energy_projector(
            grid.p[None, :], grid.x[:, None], potential, m=m, c=c, e=e
        )
    return positive_energy_projector(
        grid.p[None, :], np.zeros((1, 1)), potential, m=m, c=c, e=e
    )


def project_state(
    w: WignerMatrixField, potential: Potential, *, m: float, c: float, e: float
) -> WignerMatrixField:
    """W0 = P+ W P+ pointwise; removes all antiparticle amplitude."""
    proj = projector_field(w.grid, potential, m=m, c=c, e=e)
    return WignerMatrixField(proj @ w.values @ proj, w.grid)


def antiparticle_fraction(
    w: WignerMatrixField, potential: Potential, *, m: float, c: float, e: float
) -> float:
    """Trace weight of (1 - P+) W (1 - P+) relative to the total trace.

    Equals sum tr[W P-] dx dp / sum tr[W] dx dp by idempotence of P-.
    """
    total = w.total_trace()
    if total <= 0.0:
        raise PreconditionError(f"total trace must be positive, got {total!r}")
    pminus = IDENTITY4 - projector_field(w.grid, potential, m=m, c=c, e=e)
    anti = np.real(np.einsum("xpab,xpba->", w.values, np.broadcast_to(
        pminus, w.values.shape)))
    return float(anti * w.grid.dx * w.grid.dp / total)


def antiparticle_weight_field(
    w: WignerMatrixField, potential: Potential, *, m: float, c: float, e: float
) -> np.ndarray:
    """Pointwise Re tr[(1 - P+) W (1 - P+)], for lobe diagnostics."""
    pminus = IDENTITY4 - projector_field(w.grid, potential, m=m, c=c, e=e)
    return np.real(
        np.einsum("xpab,xpba->xp", w.values, np.broadcast_to(pminus, w.values.shape))
    )


def antiparallel_mass_fraction(w: WignerMatrixField, c: float = 1.0) -> float:
    """Mass fraction whose local velocity opposes its momentum.

    An antiparticle component, in phase space, is one moving against its
    own momentum.  The local velocity density is tr[W c g0 g1](x, p); the
    returned value is the positive-part trace mass on cells where
    p * velocity < 0, over the total positive-part mass.  For a state
    obeying W = P+ W P+ pointwise this is identically zero, since there
    tr[W c g0 g1] = (c^2 p / K) tr W cell by cell.
    """
    rep = np.real(w.trace_field())
    velocity = c * np.real(np.einsum("xpab,ba->xp", w.values, _G01))
    positive = np.clip(rep, 0.0, None)
    total = positive.sum()
    if total <= 0.0:
        raise PreconditionError("state has no positive trace mass")
    counter = positive[(w.grid.p[None, :] * velocity) < 0.0].sum()
    return float(counter / total)
