"""Bound-state spectrum of the radial Klein-Gordon equation in the well.

With the centrifugal term replaced by its surface-matched quadratic in
u = 1/(1 + q e^{beta x}) and the substitution z = 2u, the radial equation

    phi''(x) = W(x; E) phi(x)

becomes hypergeometric-type in z on (0, 2),

    phi_zz + [2(1-z)/(z(2-z))] phi_z - [a1s z^2 + a2s z + a3s]/(z(2-z))^2 phi = 0,

with energy-dependent coefficients (w1s = (a/r0)^2, w2s = (a/hbar c)^2,
L = l(l+1)):

    a1s = w1s L D2 + w2s (m1c2^2 - V0^2)                      (no E)
    a2s = 2 [w1s L D1 - 2 w2s (m0c2 m1c2 + E V0)]
    a3s = 4 [w1s L D0 + w2s (m0c2^2 - E^2)]

A solution decaying at both ends of (0, 2) has the form
z^{a3/2} (2-z)^{A/2} p(z) with a3 = +sqrt(a3s) and
A = sqrt(a3s + 2 a2s + 4 a1s). Requiring p to be a degree-n polynomial
(Jacobi) pins the energy through lam(E) = lam_n(E):

    lam   = -(a2s + a3s + A a3 + A + a3) / 2
    lam_n = 2 n (A/2 + a3/2 + 1) + n^2 - n

which collapses algebraically to A + a3 = N with the principal quantity

    N = -(2n + 1) + sqrt(1 + 4 a1s).

Squaring that relation twice yields an explicit quadratic in E whose roots
are returned by energy_closed_form. The squaring can introduce roots that
satisfy a sign variant of A + a3 = N instead of the relation itself;
quantization_residual and solve_energy_by_root check the unsquared
condition and are the authority on which roots are genuine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, MultipleRootsError, NoBoundStateError, NoRootFoundError
from .model import PekerisCoefficients, SystemParams, pekeris_coefficients

BRANCHES = ("+", "-")

# Fractional margin of the scan window inside (-m0c2, +m0c2).
_SCAN_MARGIN = 1e-6
_SCAN_SAMPLES = 10_000
_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class SpectralCoefficients:
    """Coefficients of the z-form radial equation at one energy."""

    a1_sq: float
    a2_sq: float
    a3_sq: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a1_sq, self.a2_sq, self.a3_sq)


@dataclass(frozen=True)
class NUQuantization:
    """Exponents and eigenvalue bookkeeping of the polynomial reduction.

    a3 and A are the decay exponents at z = 0 and z = 2. k_minus is the
    separation constant that produces that decaying pair, lam the resulting
    eigenvalue functional and lam_n its value forced by a degree-n
    polynomial. tau_slope is the slope of the induced weight-equation
    coefficient tau(z); the decaying choice always has tau_slope < 0.
    """

    a3: float
    A: float
    k_minus: float
    k_plus: float
    lam: float
    lam_n: float
    tau_slope: float

    @property
    def residual(self) -> float:
        return self.lam - self.lam_n


@dataclass(frozen=True)
class BoundState:
    """One closed-form spectrum entry together with its shape exponents.

    nu_residual stores lam - lam_n evaluated at the energy (NaN when the
    exponents leave their domain there); it is zero only when the state
    genuinely terminates the polynomial series, so reports can tell
    algebraic-continuation roots from exact ones.
    """

    n: int
    l: int
    branch: str
    energy: float
    big_n: float
    m1_tilde_sq: float
    coeffs: SpectralCoefficients
    jacobi_a3: float
    jacobi_A: float
    nu_residual: float
    params: SystemParams
    pekeris: PekerisCoefficients


def _check_quantum_numbers(n: int, l: int) -> None:
    if n < 0:
        raise ValueError(f"radial quantum number n must be >= 0, got {n}")
    if l < 0:
        raise ValueError(f"orbital quantum number l must be >= 0, got {l}")


def _check_branch(branch: str) -> None:
    if branch not in BRANCHES:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def coefficient_a1_sq(l: int, p: SystemParams, d: PekerisCoefficients | None = None) -> float:
    """The energy-independent coefficient a1s = w1s l(l+1) D2 + w2s (m1c2^2 - V0^2)."""
    if d is None:
        d = pekeris_coefficients(p)
    L = l * (l + 1)
    return p.omega1_sq * L * d.D2 + p.omega2_sq * (p.m1c2 * p.m1c2 - p.V0 * p.V0)


def spectral_coefficients(
    E: float, l: int, p: SystemParams, d: PekerisCoefficients | None = None
) -> SpectralCoefficients:
    """Coefficients (a1s, a2s, a3s) of the z-form equation at energy E (MeV)."""
    _check_quantum_numbers(0, l)
    if d is None:
        d = pekeris_coefficients(p)
    L = l * (l + 1)
    a1_sq = coefficient_a1_sq(l, p, d)
    a2_sq = 2.0 * (p.omega1_sq * L * d.D1 - 2.0 * p.omega2_sq * (p.m0c2 * p.m1c2 + E * p.V0))
    a3_sq = 4.0 * (p.omega1_sq * L * d.D0 + p.omega2_sq * (p.m0c2 * p.m0c2 - E * E))
    return SpectralCoefficients(a1_sq=a1_sq, a2_sq=a2_sq, a3_sq=a3_sq)


def nu_quantization(
    E: float, n: int, l: int, p: SystemParams, d: PekerisCoefficients | None = None
) -> NUQuantization:
    """Decay exponents and eigenvalue functionals at energy E.

    Raises DomainError when a3s < 0 (no decay at large r) or when the
    argument of A is negative (no decaying inner exponent); either case
    means no bound state can sit at this energy.
    """
    _check_quantum_numbers(n, l)
    c = spectral_coefficients(E, l, p, d)
    if c.a3_sq < 0.0:
        raise DomainError(
            f"a3^2 = {c.a3_sq:.6g} < 0 at E = {E:.6f} MeV: no decaying tail, "
            "no bound state at this energy"
        )
    a3 = math.sqrt(c.a3_sq)
    A_sq = c.a3_sq + 2.0 * c.a2_sq + 4.0 * c.a1_sq
    if A_sq < 0.0:
        raise DomainError(
            f"A^2 = {A_sq:.6g} < 0 at E = {E:.6f} MeV: no decaying inner "
            "exponent, no bound state at this energy"
        )
    A = math.sqrt(A_sq)
    k_minus = -0.5 * c.a2_sq - 0.5 * c.a3_sq - 0.5 * a3 * A
    k_plus = -0.5 * c.a2_sq - 0.5 * c.a3_sq + 0.5 * a3 * A
    lam = -0.5 * (c.a2_sq + c.a3_sq + A * a3 + A + a3)
    lam_n = 2.0 * n * (0.5 * A + 0.5 * a3 + 1.0) + n * n - n
    tau_slope = -2.0 * (0.5 * A + 0.5 * a3 + 1.0)
    return NUQuantization(
        a3=a3, A=A, k_minus=k_minus, k_plus=k_plus, lam=lam, lam_n=lam_n, tau_slope=tau_slope
    )


def quantization_residual(
    E: float, n: int, l: int, p: SystemParams, d: PekerisCoefficients | None = None
) -> float:
    """lam(E) - lam_n(E); a genuine bound-state energy is a root of this."""
    return nu_quantization(E, n, l, p, d).residual


def _residual_array(
    E: np.ndarray, n: int, l: int, p: SystemParams, d: PekerisCoefficients
) -> np.ndarray:
    """Vectorized lam - lam_n with NaN wherever the exponents leave their domain."""
    L = l * (l + 1)
    a1_sq = coefficient_a1_sq(l, p, d)
    a2_sq = 2.0 * (p.omega1_sq * L * d.D1 - 2.0 * p.omega2_sq * (p.m0c2 * p.m1c2 + E * p.V0))
    a3_sq = 4.0 * (p.omega1_sq * L * d.D0 + p.omega2_sq * (p.m0c2 * p.m0c2 - E * E))
    with np.errstate(invalid="ignore"):
        a3 = np.sqrt(np.where(a3_sq >= 0.0, a3_sq, np.nan))
        A = np.sqrt(np.where(a3_sq + 2.0 * a2_sq + 4.0 * a1_sq >= 0.0,
                             a3_sq + 2.0 * a2_sq + 4.0 * a1_sq, np.nan))
    lam = -0.5 * (a2_sq + a3_sq + A * a3 + A + a3)
    lam_n = 2.0 * n * (0.5 * A + 0.5 * a3 + 1.0) + n * n - n
    return lam - lam_n


def principal_N(n: int, a1_sq: float) -> float:
    """N = -(2n + 1) + sqrt(1 + 4 a1s).

    N equals A + a3 when the spectrum condition holds exactly, so a bound
    state with a normalizable shape requires N >= 0. The closed-form energy
    uses N algebraically for any sign.
    """
    if n < 0:
        raise ValueError(f"radial quantum number n must be >= 0, got {n}")
    rad = 1.0 + 4.0 * a1_sq
    if rad < 0.0:
        raise DomainError(f"1 + 4 a1^2 = {rad:.6g} < 0: principal quantity N is not real")
    return -(2.0 * n + 1.0) + math.sqrt(rad)


def mass_shift_sq(
    n: int, l: int, p: SystemParams, d: PekerisCoefficients | None = None
) -> float:
    """Squared mass-depression shift entering the closed-form energy.

    With S = N^2 + 4 w2s V0^2, G = w1s l(l+1)(D1 + D2) and
    M = w2s m1c2 (2 m0c2 - m1c2):

        mshift^2 = 8 M (4 G - 2 M - S) / S^2

    The value is real for either sign and vanishes exactly when m1 = 0.
    """
    _check_quantum_numbers(n, l)
    if d is None:
        d = pekeris_coefficients(p)
    if p.m1 == 0.0:
        return 0.0
    N = principal_N(n, coefficient_a1_sq(l, p, d))
    S = N * N + 4.0 * p.omega2_sq * p.V0 * p.V0
    G = p.omega1_sq * l * (l + 1) * (d.D1 + d.D2)
    M = p.omega2_sq * p.m1c2 * (2.0 * p.m0c2 - p.m1c2)
    return 8.0 * M * (4.0 * G - 2.0 * M - S) / (S * S)


def mass_shift_m1_tilde(
    n: int, l: int, p: SystemParams, d: PekerisCoefficients | None = None
) -> float:
    """sqrt of mass_shift_sq; raises DomainError when the radicand is negative.

    The energy formula only ever needs the squared quantity, which is real
    either way; this accessor exists for reporting and flags the imaginary
    case instead of returning NaN.
    """
    value = mass_shift_sq(n, l, p, d)
    if value < 0.0:
        raise DomainError(
            f"mass-shift radicand {value:.6g} < 0 for n={n}, l={l}: "
            "shift is imaginary (reported via its square)"
        )
    return math.sqrt(value)


def closed_form_terms(
    n: int, l: int, p: SystemParams, d: PekerisCoefficients | None = None
) -> tuple[float, float]:
    """Center and half-spread of the two closed-form roots.

    The quadratic in E that results from squaring A + a3 = N solves to
    E = center +/- spread with

        center = -V0 (S - 4G + 4M) / (2S)
        spread = (N / w2) sqrt( (w1s L (2 D0 + D1 + D2) + 2 w2s m0c2^2)/(2S)
                                 - (G/S)^2 - 1/16 + mshift^2 )

    using the same S, G, M as mass_shift_sq. Raises NoBoundStateError when
    the principal quantity or the spread radicand is not real.
    """
    _check_quantum_numbers(n, l)
    if d is None:
        d = pekeris_coefficients(p)
    try:
        N = principal_N(n, coefficient_a1_sq(l, p, d))
    except DomainError as exc:
        raise NoBoundStateError(str(exc)) from exc
    L = l * (l + 1)
    S = N * N + 4.0 * p.omega2_sq * p.V0 * p.V0
    G = p.omega1_sq * L * (d.D1 + d.D2)
    M = p.omega2_sq * p.m1c2 * (2.0 * p.m0c2 - p.m1c2)
    center = -p.V0 * (S - 4.0 * G + 4.0 * M) / (2.0 * S)
    arg = (
        (p.omega1_sq * L * (2.0 * d.D0 + d.D1 + d.D2) + 2.0 * p.omega2_sq * p.m0c2 * p.m0c2)
        / (2.0 * S)
        - (G / S) ** 2
        - 1.0 / 16.0
        + mass_shift_sq(n, l, p, d)
    )
    if arg < 0.0:
        raise NoBoundStateError(
            f"spread radicand {arg:.6g} < 0 for n={n}, l={l}: closed form has no real roots"
        )
    spread = (N / p.omega2) * math.sqrt(arg)
    return center, spread


def energy_closed_form(
    n: int, l: int, branch: str, p: SystemParams, d: PekerisCoefficients | None = None
) -> float:
    """Closed-form spectrum value E = center + branch * spread, in MeV.

    branch is the literal sign in front of the spread term. The spread
    carries a factor N which is negative for weakly bound configurations,
    so '+' is not always the larger root. Raises NoBoundStateError when a
    radicand is negative or |E| >= m0c2.
    """
    _check_branch(branch)
    center, spread = closed_form_terms(n, l, p, d)
    E = center + spread if branch == "+" else center - spread
    if abs(E) >= p.m0c2:
        raise NoBoundStateError(
            f"closed-form root E = {E:.6f} MeV lies outside (-m0c2, m0c2) "
            f"= (-{p.m0c2:.6f}, {p.m0c2:.6f})"
        )
    return E


def energy_constant_mass(
    n: int, l: int, branch: str, p: SystemParams, d: PekerisCoefficients | None = None
) -> float:
    """Closed-form spectrum of the constant-mass well (m1 forced to zero).

    Runs the identical arithmetic path as energy_closed_form with m1 = 0,
    so for a system that already has m1 = 0 the two agree bit for bit.
    """
    from dataclasses import replace

    p0 = replace(p, m1=0.0)
    return energy_closed_form(n, l, branch, p0, d)


def bound_state(
    n: int, l: int, branch: str, p: SystemParams, d: PekerisCoefficients | None = None
) -> BoundState:
    """Assemble the closed-form state record for (n, l, branch).

    Raises NoBoundStateError when the closed form has no real in-range root
    or when the decay exponents at that root are not both real and a3 is
    not positive (the shape would not be normalizable).
    """
    _check_branch(branch)
    if d is None:
        d = pekeris_coefficients(p)
    E = energy_closed_form(n, l, branch, p, d)
    c = spectral_coefficients(E, l, p, d)
    if c.a3_sq <= 0.0:
        raise NoBoundStateError(
            f"outer exponent a3^2 = {c.a3_sq:.6g} <= 0 at the closed-form root "
            f"E = {E:.6f} MeV: shape not normalizable"
        )
    A_sq = c.a3_sq + 2.0 * c.a2_sq + 4.0 * c.a1_sq
    if A_sq < 0.0:
        raise NoBoundStateError(
            f"inner exponent A^2 = {A_sq:.6g} < 0 at the closed-form root "
            f"E = {E:.6f} MeV: shape not normalizable"
        )
    a3 = math.sqrt(c.a3_sq)
    A = math.sqrt(A_sq)
    if a3 <= -1.0 or A <= -1.0:
        raise NoBoundStateError("decay exponents outside the Jacobi parameter domain")
    try:
        residual = quantization_residual(E, n, l, p, d)
    except DomainError:
        residual = math.nan
    return BoundState(
        n=n,
        l=l,
        branch=branch,
        energy=E,
        big_n=principal_N(n, c.a1_sq),
        m1_tilde_sq=mass_shift_sq(n, l, p, d),
        coeffs=c,
        jacobi_a3=a3,
        jacobi_A=A,
        nu_residual=residual,
        params=p,
        pekeris=d,
    )


def nu_sign_chain(
    E: float, n: int, l: int, p: SystemParams, d: PekerisCoefficients | None = None,
    tol: float = 1e-6,
) -> str:
    """Which signed relation between A, a3 and N holds at E, if any.

    Returns one of 'A+a3=+N', 'A+a3=-N', 'A-a3=+N', 'A-a3=-N' (the first
    match within tol, scaled) or '' when none holds. Only 'A+a3=+N' marks a
    genuine spectrum condition; the others identify roots introduced by
    squaring. Returns '' as well when the exponents are not real at E.
    """
    try:
        qn = nu_quantization(E, n, l, p, d)
    except DomainError:
        return ""
    N = principal_N(n, coefficient_a1_sq(l, p, d))
    scale = max(1.0, abs(N), qn.A + qn.a3)
    checks = (
        ("A+a3=+N", qn.A + qn.a3 - N),
        ("A+a3=-N", qn.A + qn.a3 + N),
        ("A-a3=+N", qn.A - qn.a3 - N),
        ("A-a3=-N", qn.A - qn.a3 + N),
    )
    for label, delta in checks:
        if abs(delta) <= tol * scale:
            return label
    return ""


def solve_energy_by_root(
    n: int,
    l: int,
    branch: str,
    p: SystemParams,
    d: PekerisCoefficients | None = None,
    samples: int = _SCAN_SAMPLES,
) -> float:
    """Find the bound-state energy as a root of the quantization residual.

    Scans the open interval (-m0c2, +m0c2), restricted to E > 0 for branch
    '+' and E < 0 for branch '-', on a uniform grid, then refines every
    sign change of lam - lam_n with Brent's method to |residual| <= 1e-12.
    Intervals where the decay exponents are not real are skipped. Raises
    NoRootFoundError when no sign change exists and MultipleRootsError when
    more than one root matches the request.
    """
    _check_branch(branch)
    _check_quantum_numbers(n, l)
    if d is None:
        d = pekeris_coefficients(p)
    eps = _SCAN_MARGIN * p.m0c2
    if branch == "+":
        lo, hi = eps, p.m0c2 - eps
    else:
        lo, hi = -p.m0c2 + eps, -eps
    grid = np.linspace(lo, hi, samples)
    res = _residual_array(grid, n, l, p, d)
    valid = np.isfinite(res)
    roots: list[float] = []
    for i in range(len(grid) - 1):
        if not (valid[i] and valid[i + 1]):
            continue
        r0, r1 = res[i], res[i + 1]
        if r0 == 0.0:
            roots.append(float(grid[i]))
            continue
        if r0 * r1 < 0.0:
            root = brentq(
                lambda E: quantization_residual(E, n, l, p, d),
                grid[i],
                grid[i + 1],
                xtol=1e-13,
                rtol=8.9e-16,
                maxiter=200,
            )
            if abs(quantization_residual(root, n, l, p, d)) <= _RESIDUAL_TOL:
                roots.append(float(root))
    # Deduplicate refinements that landed on the same root from both sides.
    deduped: list[float] = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > 1e-9 * max(1.0, abs(r)):
            deduped.append(r)
    if not deduped:
        raise NoRootFoundError(
            f"quantization residual has no root on ({lo:.6f}, {hi:.6f}) MeV "
            f"for n={n}, l={l}, branch {branch!r}: no bound state"
        )
    if len(deduped) > 1:
        raise MultipleRootsError(
            f"quantization residual has {len(deduped)} roots for n={n}, l={l}, "
            f"branch {branch!r}: ambiguous spectrum",
            candidates=deduped,
        )
    return deduped[0]
