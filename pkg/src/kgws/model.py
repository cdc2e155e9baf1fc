"""Generalized Woods-Saxon well with a position-dependent mass.

The potential is V(r) = -V0 / (1 + q exp(beta (r - r0))) with beta = 1/a,
where a is the surface diffuseness, r0 the well radius and q a shape
parameter. The rest energy varies across the surface in the same shape,

    m(x) c^2 = m0 c^2 (1 - (m1/m0) u),    u = 1 / (1 + q exp(beta x)),

with x = r - r0 and m0 > m1 >= 0, so the mass is m0 - m1 deep inside the
well and m0 far outside.

Everything downstream works in the variable z = 2u in (0, 2); this module
owns the transform, its inverse, and the quadratic replacement of the
centrifugal term 1/r^2 in that variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HBARC_MEV_FM = 197.3269804        # MeV fm
AMU_MEV = 931.49410242            # MeV per atomic mass unit

# Default system: a proton in a medium-size well. m0 is in amu, V0 in MeV,
# lengths in fm. The diffuseness is not fixed by the reference data and
# defaults to 0.65 fm; see kgws.cli.calibrate_diffuseness.
DEFAULT_M0_AMU = 1.007825
DEFAULT_V0_MEV = 47.78
DEFAULT_R0_FM = 4.91623
DEFAULT_A_FM = 0.65
DEFAULT_Q = 1.0


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of one well/mass configuration.

    V0 : well depth in MeV (V0 > 0, the well is attractive)
    q  : surface shape parameter (q > 0)
    r0 : well radius in fm
    a  : surface diffuseness in fm (beta = 1/a)
    m0 : asymptotic rest mass in amu
    m1 : mass depression inside the well, in amu (0 <= m1 < m0)
    """

    V0: float = DEFAULT_V0_MEV
    q: float = DEFAULT_Q
    r0: float = DEFAULT_R0_FM
    a: float = DEFAULT_A_FM
    m0: float = DEFAULT_M0_AMU
    m1: float = 0.0
    hbar_c: float = HBARC_MEV_FM
    amu_mev: float = AMU_MEV

    def __post_init__(self) -> None:
        if self.V0 <= 0.0:
            raise ValueError(f"well depth V0 must be positive, got {self.V0}")
        if self.q <= 0.0:
            raise ValueError(f"shape parameter q must be positive, got {self.q}")
        if self.r0 <= 0.0:
            raise ValueError(f"radius r0 must be positive, got {self.r0}")
        if self.a <= 0.0:
            raise ValueError(f"diffuseness a must be positive, got {self.a}")
        if self.m1 < 0.0:
            raise ValueError(f"mass depression m1 must be >= 0, got {self.m1}")
        if self.m0 <= self.m1:
            raise ValueError(
                f"need m0 > m1 for a positive asymptotic mass, got m0={self.m0}, m1={self.m1}"
            )

    @property
    def beta(self) -> float:
        """Inverse diffuseness 1/a in 1/fm."""
        return 1.0 / self.a

    @property
    def beta_r0(self) -> float:
        """Dimensionless surface steepness t = r0/a."""
        return self.r0 / self.a

    @property
    def m0c2(self) -> float:
        """Asymptotic rest energy in MeV."""
        return self.m0 * self.amu_mev

    @property
    def m1c2(self) -> float:
        """Rest-energy depression inside the well in MeV."""
        return self.m1 * self.amu_mev

    @property
    def omega1_sq(self) -> float:
        """(a/r0)^2, the scale of the centrifugal term in the z variable."""
        return 1.0 / (self.beta_r0 * self.beta_r0)

    @property
    def omega2(self) -> float:
        """a/(hbar c) in 1/MeV."""
        return self.a / self.hbar_c

    @property
    def omega2_sq(self) -> float:
        return self.omega2 * self.omega2

    @property
    def z_max(self) -> float:
        """Value of z at r = 0, the inner edge of the physical domain."""
        return 2.0 / (1.0 + self.q * math.exp(-self.beta_r0))


@dataclass(frozen=True)
class PekerisCoefficients:
    """Coefficients of the quadratic surrogate for (r0/r)^2.

    (r0/r)^2 is replaced by D0 + D1 u + D2 u^2 with u = 1/(1 + q e^{beta x}),
    matched to second order at the well radius x = 0.
    """

    D0: float
    D1: float
    D2: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.D0, self.D1, self.D2)


def woods_saxon_potential(r, p: SystemParams):
    """V(r) = -V0 / (1 + q exp((r - r0)/a)) in MeV. Accepts scalars or arrays."""
    return -p.V0 / (1.0 + p.q * np.exp((np.asarray(r, dtype=float) - p.r0) / p.a))


def surface_profile(x, p: SystemParams):
    """u(x) = 1 / (1 + q exp(beta x)); 1 deep inside, 0 far outside."""
    return 1.0 / (1.0 + p.q * np.exp(np.asarray(x, dtype=float) * p.beta))


def mass_energy(x, p: SystemParams):
    """Position-dependent rest energy m(x) c^2 = m0 c^2 - m1 c^2 u(x) in MeV."""
    return p.m0c2 - p.m1c2 * surface_profile(x, p)


def pekeris_from_shape(q: float, beta_r0: float) -> PekerisCoefficients:
    """Second-order surface-matched coefficients for given shape (q, r0/a).

    The defining conditions at x = 0, with f(x) = D0 + D1 u + D2 u^2 and
    target (1 + x/r0)^(-2), are

        f(0) = 1,    f'(0) = -2/r0,    f''(0) = +6/r0^2.

    Solving the linear system gives, with t = r0/a and Q = 1 + q,

        D2 = (Q^3 / (t q^2)) (3Q/t + 1 - q)
        D1 = (2 Q^2 / (t q^2)) (2q - 1 - 3Q/t)
        D0 = 1 - (Q / (t q^2)) (3q - 1 - 3Q/t)

    For q = 1 these reduce to the familiar symmetric-surface forms.
    """
    if q <= 0.0:
        raise ValueError(f"shape parameter q must be positive, got {q}")
    if beta_r0 <= 0.0:
        raise ValueError(f"steepness r0/a must be positive, got {beta_r0}")
    t = beta_r0
    Q = 1.0 + q
    D2 = (Q**3 / (t * q * q)) * (3.0 * Q / t + 1.0 - q)
    D1 = (2.0 * Q * Q / (t * q * q)) * (2.0 * q - 1.0 - 3.0 * Q / t)
    D0 = 1.0 - (Q / (t * q * q)) * (3.0 * q - 1.0 - 3.0 * Q / t)
    return PekerisCoefficients(D0=D0, D1=D1, D2=D2)


def pekeris_coefficients(p: SystemParams) -> PekerisCoefficients:
    """Surface-matched centrifugal coefficients for this system."""
    return pekeris_from_shape(p.q, p.beta_r0)


def centrifugal_exact(r, l: int):
    """True centrifugal term l(l+1)/r^2 in 1/fm^2."""
    r = np.asarray(r, dtype=float)
    if l < 0:
        raise ValueError(f"orbital quantum number l must be >= 0, got {l}")
    if l == 0:
        return np.zeros_like(r)
    if np.any(r <= 0.0):
        raise ValueError("exact centrifugal term needs r > 0 for l > 0")
    return l * (l + 1) / (r * r)


def centrifugal_approx(x, l: int, p: SystemParams):
    """Surface-matched centrifugal term (l(l+1)/r0^2)(D0 + D1 u + D2 u^2)."""
    if l < 0:
        raise ValueError(f"orbital quantum number l must be >= 0, got {l}")
    d = pekeris_coefficients(p)
    u = surface_profile(x, p)
    return (l * (l + 1) / (p.r0 * p.r0)) * (d.D0 + d.D1 * u + d.D2 * u * u)


def z_of_x(x, p: SystemParams):
    """Map x = r - r0 to z = 2/(1 + q exp(beta x)), a value in (0, 2)."""
    return 2.0 / (1.0 + p.q * np.exp(np.asarray(x, dtype=float) * p.beta))


def x_of_z(z, p: SystemParams):
    """Inverse map x = a ln((2 - z)/(q z)); valid for z strictly inside (0, 2)."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0) or np.any(z >= 2.0):
        raise ValueError("z must lie strictly inside (0, 2)")
    return p.a * np.log((2.0 - z) / (p.q * z))
