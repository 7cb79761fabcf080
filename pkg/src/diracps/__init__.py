"""Spectral phase-space dynamics of a 1D relativistic spin-1/2 particle.

The library implements three dynamical models on a shared periodic
(x, p) grid:

* the Dirac equation, propagated by a Strang split-operator scheme
  with exact 4x4 kinetic exponentials,
* the classical Koopman-von Neumann evolution of the matrix-valued
  Wigner function (anticommutator flow, no antiparticle filtering),
* Spohn's projected classical equation, which removes antiparticle
  amplitude after every step,

plus the gamma-matrix algebra, classical spinor kinematics (boosts,
velocity extraction), and a relativistic point-particle ensemble
integrator used for cross-checks and figure overlays.
"""

from .clifford import (
    GAMMA,
    METRIC_DIAG,
    gamma,
    lorentz_inner,
    lower_index,
    raise_index,
    slash,
    verify_clifford,
)
from .spinor import (
    boost_from_velocity,
    embed_spinor,
    projector_q,
    spinor_from_transform,
    velocity_from_spinor,
)
from .grids import (
    PhaseGrid,
    Potential,
    SpinorField,
    WignerMatrixField,
    kinetic_energy,
    make_grid,
)
from .dirac import (
    DiracParams,
    dirac_hamiltonian_symbol,
    ehrenfest_residuals,
    gaussian_spinor_field,
    project_spinor_field,
    propagate_dirac,
)
from .wigner import (
    antiparticle_fraction,
    positive_energy_projector,
    project_state,
    wigner_grid,
    wigner_representation,
    wigner_transform,
)
from .kvn import (
    KvnParams,
    kvn_field_step,
    kvn_kinetic_step,
    phase_space_ehrenfest_residuals,
    propagate_phase_space,
)
from .ensemble import (
    EnsembleState,
    integrate_ensemble,
    sample_from_wigner,
)
from .errors import ConfigError, IntegrityError, PreconditionError

__version__ = "0.1.0"
