"""Independent numerical eigenvalue solvers for the radial equation.

Two shooting solvers integrate phi'' = W(r; E) phi with a fixed-step
Numerov scheme (fourth order): one against the surface-matched quadratic
replacement of the centrifugal term (the same equation the closed form
solves), one against the true l(l+1)/r^2 term. Outward and inward sweeps
meet at r = r0 and the eigenvalue is the root of their scaled log-derivative
mismatch, located by node-counted scanning plus Brent refinement.

verify_state substitutes the analytic bound-state shape into the
surface-matched equation and reports the worst pointwise residual, which is
the direct check that a claimed closed-form state actually solves the ODE
at its quoted energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoBoundStateError, NodeCountError
from .model import PekerisCoefficients, SystemParams, pekeris_coefficients
from .spectrum import BoundState, energy_closed_form
from .wavefunction import eigenfunction_x, second_derivative_x

_BRANCH_WINDOW_MARGIN = 1e-6
_DEFAULT_POINTS = 3001
_PRESAMPLES = 192
_FAST_PRESAMPLES = 25
_FAST_HALF_WIDTH = 10.0  # MeV around the closed-form guess
_RESCALE_LIMIT = 1e250


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid with trapezoid quadrature weights."""

    r_min: float
    r_max: float
    num_points: int

    def __post_init__(self):
        if self.r_min < 0.0:
            raise ValueError(f"r_min must be >= 0, got {self.r_min}")
        if self.r_max <= self.r_min:
            raise ValueError(f"r_max must exceed r_min, got [{self.r_min}, {self.r_max}]")
        if self.num_points < 100:
            raise ValueError(f"need at least 100 points, got {self.num_points}")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.num_points - 1)

    @property
    def radii(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.num_points)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.num_points, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w

    def refined(self) -> "RadialGrid":
        """Same span at half the step (point count doubled minus one)."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.num_points - 1)


@dataclass(frozen=True)
class OracleResult:
    energy: float  # MeV
    match_residual: float  # scaled log-derivative mismatch at r0
    node_count: int
    grid_convergence: float | None = None  # |E - E_halved| when requested


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of substituting an analytic shape into the radial equation."""

    max_residual: float  # max |phi'' - W phi| / max |W phi|
    energy: float
    node_count: int
    max_abs_phi: float


def default_grid(
    p: SystemParams, exact: bool = False, num_points: int = _DEFAULT_POINTS
) -> RadialGrid:
    """Shooting grid spanning [0, r0 + 25 a].

    The exact-centrifugal equation is singular at r = 0, so that variant
    starts a hair away from the origin where phi ~ r^{l+1} seeds the sweep.
    """
    r_min = 1e-4 if exact else 0.0
    return RadialGrid(r_min, p.r0 + 25.0 * p.a, num_points)


def w_approximated(E: float, l: int, p: SystemParams, d: PekerisCoefficients, r) -> np.ndarray:
    """W(r; E) with the surface-matched quadratic centrifugal replacement."""
    r = np.asarray(r, dtype=float)
    u = 1.0 / (1.0 + p.q * np.exp(p.beta * (r - p.r0)))
    k2inv = 1.0 / (p.hbar_c * p.hbar_c)
    L = l * (l + 1)
    c1 = k2inv * (p.m0c2 * p.m0c2 - E * E) + L * d.D0 / (p.r0 * p.r0)
    c2 = 2.0 * k2inv * (E * p.V0 + p.m0c2 * p.m1c2) - L * d.D1 / (p.r0 * p.r0)
    c3 = k2inv * (p.V0 * p.V0 - p.m1c2 * p.m1c2) - L * d.D2 / (p.r0 * p.r0)
    return c1 - c2 * u - c3 * u * u


def w_exact(E: float, l: int, p: SystemParams, r) -> np.ndarray:
    """W(r; E) with the true centrifugal term and the full mass profile."""
    r = np.asarray(r, dtype=float)
    if l > 0 and np.any(r <= 0.0):
        raise DomainError("exact centrifugal term needs r > 0 for l > 0")
    u = 1.0 / (1.0 + p.q * np.exp(p.beta * (r - p.r0)))
    k2inv = 1.0 / (p.hbar_c * p.hbar_c)
    mass = p.m0c2 - p.m1c2 * u
    shifted = E + p.V0 * u  # E - V(r)
    out = k2inv * (mass * mass - shifted * shifted)
    if l > 0:
        out = out + l * (l + 1) / (r * r)
    return out


def _sweep_outward(w: np.ndarray, h: float, phi0: float, phi1: float, stop: int) -> list[float]:
    """Numerov integration left to right through index `stop` inclusive."""
    f = (1.0 - (h * h / 12.0) * w).tolist()
    phi = [0.0] * (stop + 1)
    phi[0], phi[1] = phi0, phi1
    for i in range(1, stop):
        nxt = ((12.0 - 10.0 * f[i]) * phi[i] - f[i - 1] * phi[i - 1]) / f[i + 1]
        if abs(nxt) > _RESCALE_LIMIT:
            s = 1.0 / abs(nxt)
            for j in range(i + 2):
                phi[j] *= s
            nxt *= s
        phi[i + 1] = nxt
    return phi


def _sweep_inward(w: np.ndarray, h: float, start: int) -> list[float]:
    """Numerov integration right to left down to index `start` inclusive.

    Seeds with the decaying exponential of the local wavenumber at the
    outer edge; going inward that solution grows, which keeps the sweep
    numerically dominated by the physical component.
    """
    n = len(w)
    f = (1.0 - (h * h / 12.0) * w).tolist()
    kappa = math.sqrt(max(float(w[-1]), 0.0))
    phi = [0.0] * n
    phi[n - 1] = 1e-30
    phi[n - 2] = 1e-30 * math.exp(kappa * h)
    for i in range(n - 2, start, -1):
        nxt = ((12.0 - 10.0 * f[i]) * phi[i] - f[i + 1] * phi[i + 1]) / f[i - 1]
        if abs(nxt) > _RESCALE_LIMIT:
            s = 1.0 / abs(nxt)
            for j in range(i - 1, n):
                phi[j] *= s
            nxt *= s
        phi[i - 1] = nxt
    return phi


def _count_nodes(segment) -> int:
    v = np.asarray(segment, dtype=float)
    if v.size == 0:
        return 0
    scale = np.max(np.abs(v))
    if scale == 0.0:
        return 0
    signs = np.sign(v[np.abs(v) > 1e-12 * scale])
    return int(np.sum(signs[1:] != signs[:-1]))


def _numerov_derivative(phi, f, i: int, h: float) -> float:
    """Scheme-consistent first derivative at interior index i."""
    return (f[i + 1] * phi[i + 1] - f[i - 1] * phi[i - 1]) / (2.0 * h)


@dataclass(frozen=True)
class _Probe:
    mismatch: float
    nodes: int  # sign changes inside the oscillatory region only


def _probe(w: np.ndarray, grid: RadialGrid, i_match: int, seeds: tuple[float, float]) -> _Probe:
    h = grid.h
    f = (1.0 - (h * h / 12.0) * w).tolist()
    out = _sweep_outward(w, h, seeds[0], seeds[1], min(i_match + 1, len(w) - 1))
    inw = _sweep_inward(w, h, i_match - 1)
    vo, vi = out[i_match], inw[i_match]
    do = _numerov_derivative(out, f, i_match, h)
    di = _numerov_derivative(inw, f, i_match, h)
    scale = max(abs(vo), abs(do)) * max(abs(vi), abs(di))
    mismatch = (do * vi - di * vo) / scale if scale > 0.0 else math.inf

    # Eigenfunction nodes live where W < 0; counting into the forbidden
    # region would pick up roundoff-seeded flips of the suppressed tail.
    negative = np.nonzero(w < 0.0)[0]
    i_osc = int(negative[-1]) + 1 if negative.size else 0
    nodes = _count_nodes(out[1 : min(i_osc, i_match) + 1])
    if i_osc > i_match:
        # the outward sweep stops just past the match; the inward sweep
        # covers the rest of the oscillatory region with its own scale
        nodes += _count_nodes(inw[i_match : i_osc + 1])
    return _Probe(mismatch=mismatch, nodes=nodes)


def solve_eigenvalue(
    w_of_e,
    grid: RadialGrid,
    n_target: int,
    window: tuple[float, float],
    seeds: tuple[float, float] | None = None,
    match_radius: float | None = None,
    presamples: int = _PRESAMPLES,
) -> tuple[float, float, int]:
    """Locate the eigenvalue with n_target interior nodes inside window.

    w_of_e(E) must return the W array on the grid. Returns (energy,
    mismatch, node_count). Raises NoBoundStateError when no candidate
    exists and NodeCountError when roots exist but none carries the
    requested node count.
    """
    if n_target < 0:
        raise ValueError(f"node target must be >= 0, got {n_target}")
    lo, hi = window
    if not hi > lo:
        raise ValueError(f"empty search window ({lo}, {hi})")
    h = grid.h
    if seeds is None:
        seeds = (0.0, h)
    r = grid.radii
    if match_radius is None:
        match_radius = r[0] + 0.5 * (r[-1] - r[0])
    i_match = int(np.clip(np.searchsorted(r, match_radius), 2, grid.num_points - 3))

    def probe(E: float) -> _Probe:
        return _probe(np.asarray(w_of_e(E), dtype=float), grid, i_match, seeds)

    energies = np.linspace(lo, hi, presamples)
    probes = [probe(E) for E in energies]

    wrong_counts: set[int] = set()
    for i in range(presamples - 1):
        p0, p1 = probes[i], probes[i + 1]
        if n_target not in (p0.nodes, p1.nodes):
            continue
        if not (math.isfinite(p0.mismatch) and math.isfinite(p1.mismatch)):
            continue
        if p0.mismatch == 0.0:
            root = float(energies[i])
        elif p0.mismatch * p1.mismatch < 0.0:
            root = brentq(
                lambda E: probe(E).mismatch,
                energies[i],
                energies[i + 1],
                xtol=1e-10,
                rtol=4e-15,
                maxiter=200,
            )
        else:
            continue
        found = probe(root)
        if found.nodes == n_target:
            return float(root), found.mismatch, found.nodes
        wrong_counts.add(found.nodes)
    if wrong_counts:
        raise NodeCountError(
            f"matching roots found but with node counts {sorted(wrong_counts)}, "
            f"not the requested {n_target}",
            found_nodes=min(wrong_counts),
            energy=math.nan,
        )
    raise NoBoundStateError(
        f"no eigenvalue with {n_target} nodes inside ({lo:.6f}, {hi:.6f}) MeV"
    )


def _branch_window(branch: str, p: SystemParams) -> tuple[float, float]:
    eps = _BRANCH_WINDOW_MARGIN * p.m0c2
    if branch == "+":
        return eps, p.m0c2 - eps
    if branch == "-":
        return -p.m0c2 + eps, -eps
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def _shoot(
    n: int,
    l: int,
    branch: str,
    p: SystemParams,
    w_of_e,
    grid: RadialGrid,
    seeds: tuple[float, float],
    guess: float | None,
    refine_check: bool,
) -> OracleResult:
    window = _branch_window(branch, p)

    energy = None
    if guess is not None and window[0] < guess < window[1]:
        fast = (max(window[0], guess - _FAST_HALF_WIDTH), min(window[1], guess + _FAST_HALF_WIDTH))
        try:
            energy, mismatch, nodes = solve_eigenvalue(
                w_of_e, grid, n, fast, seeds=seeds, match_radius=p.r0,
                presamples=_FAST_PRESAMPLES,
            )
        except (NoBoundStateError, NodeCountError):
            energy = None
    if energy is None:
        energy, mismatch, nodes = solve_eigenvalue(
            w_of_e, grid, n, window, seeds=seeds, match_radius=p.r0
        )

    convergence = None
    if refine_check:
        fine = grid.refined()
        lo = max(window[0], energy - 1.0)
        hi = min(window[1], energy + 1.0)
        e_fine, _m, _n = solve_eigenvalue(
            w_of_e.rebuild(fine), fine, n, (lo, hi), seeds=seeds,
            match_radius=p.r0, presamples=9,
        )
        convergence = abs(e_fine - energy)
    return OracleResult(
        energy=float(energy), match_residual=float(mismatch), node_count=int(nodes),
        grid_convergence=convergence,
    )


class _WBuilder:
    """W(E) on a fixed grid, able to re-instantiate itself on another grid."""

    def __init__(self, fn, grid: RadialGrid):
        self._fn = fn
        self._r = grid.radii

    def __call__(self, E: float) -> np.ndarray:
        return self._fn(E, self._r)

    def rebuild(self, grid: RadialGrid) -> "_WBuilder":
        return _WBuilder(self._fn, grid)


def shoot_approximated(
    n: int,
    l: int,
    branch: str,
    p: SystemParams,
    d: PekerisCoefficients | None = None,
    grid: RadialGrid | None = None,
    refine_check: bool = False,
) -> OracleResult:
    """Eigenvalue of the surface-matched equation by Numerov shooting.

    Integrates outward from r = 0 with phi(0) = 0 and inward from the far
    edge, matching at r0. The closed-form energy, when real and inside the
    branch window, seeds a narrow first scan; otherwise the full window is
    scanned with node counting.
    """
    if d is None:
        d = pekeris_coefficients(p)
    if grid is None:
        grid = default_grid(p, exact=False)

    builder = _WBuilder(lambda E, r: w_approximated(E, l, p, d, r), grid)
    try:
        guess = energy_closed_form(n, l, branch, p, d)
    except (NoBoundStateError, DomainError):
        guess = None
    return _shoot(n, l, branch, p, builder, grid, (0.0, grid.h), guess, refine_check)


def shoot_exact_centrifugal(
    n: int,
    l: int,
    branch: str,
    p: SystemParams,
    grid: RadialGrid | None = None,
    refine_check: bool = False,
) -> OracleResult:
    """Eigenvalue of the unapproximated radial equation by Numerov shooting.

    Differences from shoot_approximated quantify the quality of the
    centrifugal replacement; for l = 0 the two equations coincide.
    """
    if grid is None:
        grid = default_grid(p, exact=l > 0)
    if l > 0 and grid.r_min <= 0.0:
        grid = replace(grid, r_min=1e-4)

    builder = _WBuilder(lambda E, r: w_exact(E, l, p, r), grid)
    seed0 = grid.r_min ** (l + 1) if l > 0 else 0.0
    seed1 = (grid.r_min + grid.h) ** (l + 1) if l > 0 else grid.h
    try:
        guess = energy_closed_form(n, l, branch, p)
    except (NoBoundStateError, DomainError):
        guess = None
    return _shoot(n, l, branch, p, builder, grid, (seed0, seed1), guess, refine_check)


def verify_state(state: BoundState, grid: RadialGrid | None = None) -> ResidualReport:
    """Substitute the analytic shape into the surface-matched equation.

    Uses the exact second derivative of the shape (no finite differences),
    so the reported max |phi'' - W phi| / max |W phi| isolates how well the
    state's energy satisfies the equation. Raises DomainError when the
    shape is numerically zero on the grid.
    """
    p = state.params
    if grid is None:
        grid = default_grid(p, exact=False)
    r = grid.radii
    x = r - p.r0
    phi = np.asarray(eigenfunction_x(x, state), dtype=float)
    peak = float(np.max(np.abs(phi)))
    if peak < 1e-280:
        raise DomainError("shape is numerically zero on the grid: degenerate input")
    phi_xx = np.asarray(second_derivative_x(x, state), dtype=float)
    w = w_approximated(state.energy, state.l, p, state.pekeris, r)
    drive = w * phi
    denom = float(np.max(np.abs(drive)))
    if denom == 0.0:
        raise DomainError("W phi vanishes identically on the grid: degenerate input")
    residual = float(np.max(np.abs(phi_xx - drive))) / denom
    nodes = _count_nodes(phi[np.abs(phi) > 1e-9 * peak])
    return ResidualReport(
        max_residual=residual, energy=state.energy, node_count=nodes, max_abs_phi=peak
    )
