"""Modular-invariant modified Weierstrass functions and torus LLL wavefunctions."""

from .analysis import Census, ZeroRecord, find_completion_zeros, voronoi_comparison, winding_number
from .elliptic import SigmaEvaluator, ThetaContext, theta1, theta1_logderiv
from .errors import (
    ConvergenceFailure,
    DegenerateBasis,
    IncompleteCensus,
    ModSigmaError,
    NotCommensurate,
    NotUnimodular,
    PoleAt,
)
from .lattice import (
    Lattice,
    LatticeVector,
    eta_modified,
    eta_original,
    gamma2,
    gamma2k,
    hexagonal_lattice,
    lattice_from_basis,
    modular_transform,
    parity,
    reduce_basis,
    reduce_point,
    square_lattice,
)
from .lll import (
    ManyBodyConfig,
    WavefunctionSpec,
    boundary_residual,
    filled_state_psi,
    log_psi,
    single_particle_psi,
    slater_determinant_oracle,
    spec_from_zeros,
    zero_count,
)
from .reduce import MigrationFactor, migrate_sigma, migrate_with_known_order

__all__ = [
    "Census",
    "ConvergenceFailure",
    "DegenerateBasis",
    "IncompleteCensus",
    "Lattice",
    "LatticeVector",
    "ManyBodyConfig",
    "MigrationFactor",
    "ModSigmaError",
    "NotCommensurate",
    "NotUnimodular",
    "PoleAt",
    "SigmaEvaluator",
    "ThetaContext",
    "WavefunctionSpec",
    "ZeroRecord",
    "boundary_residual",
    "eta_modified",
    "eta_original",
    "filled_state_psi",
    "find_completion_zeros",
    "gamma2",
    "gamma2k",
    "hexagonal_lattice",
    "lattice_from_basis",
    "log_psi",
    "migrate_sigma",
    "migrate_with_known_order",
    "modular_transform",
    "parity",
    "reduce_basis",
    "reduce_point",
    "single_particle_psi",
    "slater_determinant_oracle",
    "spec_from_zeros",
    "square_lattice",
    "theta1",
    "theta1_logderiv",
    "voronoi_comparison",
    "winding_number",
    "zero_count",
]
