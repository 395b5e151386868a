"""Lattice stability of a periodic EAM chain and its Cauchy-Born local models."""

from .energetics import (
    DeadLoads,
    Deformation,
    ModelKind,
    electron_density,
    energy,
    equilibrium_solve,
    gradient,
    hessian,
)
from .errors import (
    DomainViolation,
    JacobiNoConvergence,
    NoConvergence,
    NoSignChange,
    SingularHessian,
)
from .lattice import ChainConfig, diff, fourier_modes, mode_displacement, norm_l2eps
from .potentials import (
    PotentialSet,
    ScalarFunction2,
    ToyFamilyParams,
    check_assumption_signs,
    check_derivatives,
    make_toy_potentials,
)
from .spectral import SpectrumReport, gram_du, jacobi_eigh, sym_eigen, verify_diagonalization
from .stability import (
    Case,
    Ordering,
    StabilityCoefficients,
    StabilityVerdict,
    coefficients,
    compare_recon,
    compare_volume,
    counterexample_check,
    lambda_atomistic,
    lambda_recon,
    lambda_volume,
    min_eigenvalue,
    s_star,
)
from .sweep import (
    CriticalStrainReport,
    SweepRow,
    critical_strain,
    emit_report,
    find_bracket,
    parse_report,
    sweep_strains,
)

__version__ = "0.1.0"

__all__ = [
    "ChainConfig",
    "diff",
    "fourier_modes",
    "mode_displacement",
    "norm_l2eps",
    "DeadLoads",
    "Deformation",
    "ModelKind",
    "electron_density",
    "energy",
    "equilibrium_solve",
    "gradient",
    "hessian",
    "DomainViolation",
    "JacobiNoConvergence",
    "NoConvergence",
    "NoSignChange",
    "SingularHessian",
    "PotentialSet",
    "ScalarFunction2",
    "ToyFamilyParams",
    "check_assumption_signs",
    "check_derivatives",
    "make_toy_potentials",
    "Case",
    "Ordering",
    "StabilityCoefficients",
    "StabilityVerdict",
    "coefficients",
    "compare_recon",
    "compare_volume",
    "counterexample_check",
    "lambda_atomistic",
    "lambda_recon",
    "lambda_volume",
    "min_eigenvalue",
    "s_star",
    "CriticalStrainReport",
    "SweepRow",
    "critical_strain",
    "emit_report",
    "find_bracket",
    "parse_report",
    "sweep_strains",
    "SpectrumReport",
    "gram_du",
    "jacobi_eigh",
    "sym_eigen",
    "verify_diagonalization",
]
