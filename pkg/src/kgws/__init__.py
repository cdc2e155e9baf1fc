"""Relativistic bound states in a generalized Woods-Saxon well.

Closed-form spectra and normalized eigenfunctions for a spin-zero particle
whose rest mass follows the shape of the well, checked against two
independent numerical routes (quantization-residual root finding and
Numerov shooting).
"""

from .errors import (
    CalibrationError,
    ConfigError,
    DomainError,
    KgwsError,
    MultipleRootsError,
    NoBoundStateError,
    NodeCountError,
    NoRootFoundError,
    QuadratureError,
)
from .model import (
    AMU_MEV,
    HBARC_MEV_FM,
    PekerisCoefficients,
    SystemParams,
    centrifugal_approx,
    centrifugal_exact,
    mass_energy,
    pekeris_coefficients,
    pekeris_from_shape,
    surface_profile,
    woods_saxon_potential,
)
from .oracle import (
    OracleResult,
    RadialGrid,
    ResidualReport,
    default_grid,
    shoot_approximated,
    shoot_exact_centrifugal,
    solve_eigenvalue,
    verify_state,
)
from .spectrum import (
    BoundState,
    NUQuantization,
    SpectralCoefficients,
    bound_state,
    energy_closed_form,
    energy_constant_mass,
    mass_shift_sq,
    nu_quantization,
    nu_sign_chain,
    principal_N,
    quantization_residual,
    solve_energy_by_root,
    spectral_coefficients,
)
from .wavefunction import (
    Eigenfunction,
    NormDiagnostic,
    closed_form_norm_diagnostic,
    count_sign_changes,
    eigenfunction_unnormalized,
    eigenfunction_x,
    jacobi_polynomial,
    norm_integral_gauss,
    norm_integral_quad,
    normalize,
    sample_on_r_grid,
    weight_function,
)

__version__ = "0.1.0"

__all__ = [
    "AMU_MEV",
    "BoundState",
    "CalibrationError",
    "ConfigError",
    "DomainError",
    "Eigenfunction",
    "HBARC_MEV_FM",
    "KgwsError",
    "MultipleRootsError",
    "NUQuantization",
    "NoBoundStateError",
    "NodeCountError",
    "NoRootFoundError",
    "NormDiagnostic",
    "OracleResult",
    "PekerisCoefficients",
    "QuadratureError",
    "RadialGrid",
    "ResidualReport",
    "SpectralCoefficients",
    "SystemParams",
    "bound_state",
    "centrifugal_approx",
    "centrifugal_exact",
    "closed_form_norm_diagnostic",
    "count_sign_changes",
    "default_grid",
    "eigenfunction_unnormalized",
    "eigenfunction_x",
    "energy_closed_form",
    "energy_constant_mass",
    "jacobi_polynomial",
    "mass_energy",
    "mass_shift_sq",
    "norm_integral_gauss",
    "norm_integral_quad",
    "normalize",
    "nu_quantization",
    "nu_sign_chain",
    "pekeris_coefficients",
    "pekeris_from_shape",
    "principal_N",
    "quantization_residual",
    "sample_on_r_grid",
    "shoot_approximated",
    "shoot_exact_centrifugal",
    "solve_eigenvalue",
    "solve_energy_by_root",
    "spectral_coefficients",
    "surface_profile",
    "verify_state",
    "weight_function",
    "woods_saxon_potential",
]
