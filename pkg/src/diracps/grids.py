"""Periodic grids, Fourier-conjugate coordinates, field containers, potentials.

Conventions fixed here and relied on by every solver:

* forward transforms use the e^{-i lambda x} kernel (numpy's default);
* the operator i d/dx (conjugate to x) therefore acts as multiplication
  by -lambda on the transform, and -i d/dp acts as +theta;
* the scalar momentum coordinate is the physical momentum measured by
  -i hbar d/dx, i.e. the variable that the matrix Wigner transform puts
  on its second axis;
* potentials store covariant components A_nu(x), nu = 0..3; the physical
  spatial component entering kinetic momenta is A^1 = -A_1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigError, PreconditionError

BOUNDARY_MASS_LIMIT = 1e-6


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform periodic grids in x and p plus their FFT-ordered conjugates.

    lam is conjugate to x (2 pi k / (n_x dx) in FFT order) and theta is
    conjugate to p.  Endpoints are exclusive: x runs x_min .. x_max - dx.
    """

    n_x: int
    n_p: int
    x_min: float
    x_max: float
    p_min: float
    p_max: float

    def __post_init__(self):
        if not _is_power_of_two(self.n_x) or not _is_power_of_two(self.n_p):
            raise ConfigError(
                f"grid sizes must be powers of two (FFT contract), got {self.n_x}x{self.n_p}"
            )
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ConfigError("grid bounds must be ordered")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.n_p

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_x)

    @cached_property
    def p(self) -> np.ndarray:
        return self.p_min + self.dp * np.arange(self.n_p)

    @cached_property
    def lam(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_x, d=self.dx)

    @cached_property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_p, d=self.dp)

    def momenta_conjugate_to_x(self, hbar: float) -> np.ndarray:
        """Eigenvalues of -i hbar d/dx on the x-grid, FFT ordering."""
        return hbar * self.lam

    def is_wigner_paired(self, hbar: float, rtol: float = 1e-12) -> bool:
        """True when the p-range matches the Wigner half-shift pairing,
        p in [-pi hbar / dx, +pi hbar / dx)."""
        pmax = np.pi * hbar / self.dx
        return (
            abs(self.p_min + pmax) <= rtol * pmax
            and abs(self.p_max - pmax) <= rtol * pmax
        )

    def compatible(self, other: "PhaseGrid", rtol: float = 1e-12) -> bool:
        if (self.n_x, self.n_p) != (other.n_x, other.n_p):
            return False
        scale = max(abs(self.x_max - self.x_min), abs(self.p_max - self.p_min))
        return all(
            abs(a - b) <= rtol * scale
            for a, b in (
                (self.x_min, other.x_min),
                (self.x_max, other.x_max),
                (self.p_min, other.p_min),
                (self.p_max, other.p_max),
            )
        )


def make_grid(
    n_x: int,
    n_p: int,
    x_min: float,
    x_max: float,
    p_min: float | None = None,
    p_max: float | None = None,
    hbar: float = 1.0,
) -> PhaseGrid:
    """Build a phase grid; p-bounds default to the Wigner pairing of the x-grid."""
    if p_min is None or p_max is None:
        dx = (x_max - x_min) / n_x
        pmax = np.pi * hbar / dx
        p_min, p_max = -pmax, pmax
    return PhaseGrid(n_x, n_p, x_min, x_max, p_min, p_max)


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Potential:
    """Electromagnetic four-potential on the line, covariant components.

    kind is one of free / scalar-linear / scalar-quadratic / tabulated.
    a(x) returns A_nu(x) with shape x.shape + (4,); da(x) returns the
    spatial derivative d A_nu / dx.  Tabulated potentials interpolate
    linearly and require derivative data for use in field steps.
    """

    kind: str
    coeffs: tuple = ()
    table_x: np.ndarray | None = field(default=None, repr=False)
    table_a: np.ndarray | None = field(default=None, repr=False)
    table_da: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def free(cls) -> "Potential":
        return cls("free")

    @classmethod
    def scalar_linear(cls, gradient: float) -> "Potential":
        """A_0(x) = gradient * x; all spatial components zero."""
        return cls("scalar-linear", (float(gradient),))

    @classmethod
    def scalar_quadratic(cls, curvature: float) -> "Potential":
        """A_0(x) = 0.5 * curvature * x^2."""
        return cls("scalar-quadratic", (float(curvature),))

    @classmethod
    def tabulated(cls, x, a, da=None) -> "Potential":
        x = np.asarray(x, dtype=float)
        a = np.asarray(a, dtype=float)
        if a.shape != x.shape + (4,):
            raise ConfigError("tabulated potential must provide A_nu with shape (n, 4)")
        da_arr = None if da is None else np.asarray(da, dtype=float)
        if da_arr is not None and da_arr.shape != a.shape:
            raise ConfigError("tabulated derivative table must match the A table shape")
        return cls("tabulated", (), x, a, da_arr)

    @property
    def is_free(self) -> bool:
        return self.kind == "free"

    @property
    def has_spatial_part(self) -> bool:
        if self.kind in ("free", "scalar-linear", "scalar-quadratic"):
            return False
        return bool(np.any(self.table_a[:, 1:] != 0.0))

    @property
    def has_derivative_data(self) -> bool:
        return self.kind != "tabulated" or self.table_da is not None

    def a(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (4,))
        if self.kind == "free":
            pass
        elif self.kind == "scalar-linear":
            out[..., 0] = self.coeffs[0] * x
        elif self.kind == "scalar-quadratic":
            out[..., 0] = 0.5 * self.coeffs[0] * x * x
        elif self.kind == "tabulated":
            for nu in range(4):
                out[..., nu] = np.interp(x, self.table_x, self.table_a[:, nu])
        else:
            raise ConfigError(f"unknown potential kind {self.kind!r}")
        return out

    def da(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (4,))
        if self.kind == "free":
            pass
        elif self.kind == "scalar-linear":
            out[..., 0] = self.coeffs[0]
        elif self.kind == "scalar-quadratic":
            out[..., 0] = self.coeffs[0] * x
        elif self.kind == "tabulated":
            if self.table_da is None:
                raise ConfigError("tabulated potential carries no derivative data")
            for nu in range(4):
                out[..., nu] = np.interp(x, self.table_x, self.table_da[:, nu])
        else:
            raise ConfigError(f"unknown potential kind {self.kind!r}")
        return out

    def a1_physical(self, x) -> np.ndarray:
        """Contravariant spatial component A^1 = -A_1."""
        return -self.a(x)[..., 1]


def kinetic_energy(p, x, potential: Potential, *, m: float, c: float, e: float):
    """K = sqrt((m c^2)^2 + c^2 (p - e A^1(x))^2), strictly positive for m > 0."""
    p = np.asarray(p, dtype=float)
    kin = p - e * potential.a1_physical(x)
    return np.sqrt((m * c * c) ** 2 + (c * kin) ** 2)


# ---------------------------------------------------------------------------
# field containers
# ---------------------------------------------------------------------------


@dataclass
class SpinorField:
    """Four-component complex wavefunction psi(x) on the x-grid."""

    values: np.ndarray  # (n_x, 4) complex
    grid: PhaseGrid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n_x, 4):
            raise ConfigError(
                f"spinor field values must have shape ({self.grid.n_x}, 4)"
            )

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def normalized(self) -> "SpinorField":
        n = self.norm()
        if n == 0.0:
            raise PreconditionError("cannot normalize a zero field")
        return SpinorField(self.values / n, self.grid)

    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.values) ** 2, axis=1)

    def mean_x(self) -> float:
        rho = self.density()
        return float(np.sum(self.grid.x * rho) / np.sum(rho))

    def mean_p(self, hbar: float = 1.0) -> float:
        ft = np.fft.fft(self.values, axis=0)
        weight = np.sum(np.abs(ft) ** 2, axis=1)
        return float(
            np.sum(self.grid.momenta_conjugate_to_x(hbar) * weight) / np.sum(weight)
        )

    def matrix_expectation(self, m4: np.ndarray) -> complex:
        """<psi| M |psi> / <psi|psi> for a constant 4x4 matrix M."""
        num = np.einsum("xa,ab,xb->", np.conj(self.values), m4, self.values)
        return complex(num * self.grid.dx / self.norm_squared())

    def boundary_fraction(self) -> float:
        rho = self.density()
        total = float(np.sum(rho))
        if total == 0.0:
            return 0.0
        return float((rho[0] + rho[-1]) / total)

    def copy(self) -> "SpinorField":
        return SpinorField(self.values.copy(), self.grid)


@dataclass
class WignerMatrixField:
    """Matrix-valued phase-space field W(x, p), one 4x4 block per grid point."""

    values: np.ndarray  # (n_x, n_p, 4, 4) complex
    grid: PhaseGrid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        expected = (self.grid.n_x, self.grid.n_p, 4, 4)
        if self.values.shape != expected:
            raise ConfigError(f"wigner field values must have shape {expected}")

    def trace_field(self) -> np.ndarray:
        """Complex pointwise matrix trace, shape (n_x, n_p)."""
        return np.trace(self.values, axis1=2, axis2=3)

    def total_trace(self) -> float:
        return float(np.real(np.sum(self.trace_field())) * self.grid.dx * self.grid.dp)

    def raw_moment(self, weight: np.ndarray) -> float:
        """Sum of weight(x, p) * Re tr W(x, p) * dx dp (unnormalized)."""
        return float(
            np.sum(weight * np.real(self.trace_field())) * self.grid.dx * self.grid.dp
        )

    def mean_x(self) -> float:
        return self.raw_moment(self.grid.x[:, None]) / self.total_trace()

    def mean_p(self) -> float:
        return self.raw_moment(self.grid.p[None, :]) / self.total_trace()

    def matrix_moment(self, m4: np.ndarray) -> float:
        """Sum of Re tr[W(x, p) M] dx dp for a constant 4x4 matrix M."""
        val = np.einsum("xpab,ba->", self.values, m4)
        return float(np.real(val) * self.grid.dx * self.grid.dp)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.values - np.conj(self.values.swapaxes(2, 3)))))

    def boundary_fraction(self) -> float:
        rep = np.abs(np.real(self.trace_field()))
        total = float(np.sum(rep))
        if total == 0.0:
            return 0.0
        edge = float(
            np.sum(rep[0, :]) + np.sum(rep[-1, :]) + np.sum(rep[1:-1, 0]) + np.sum(rep[1:-1, -1])
        )
        return edge / total

    def copy(self) -> "WignerMatrixField":
        return WignerMatrixField(self.values.copy(), self.grid)
