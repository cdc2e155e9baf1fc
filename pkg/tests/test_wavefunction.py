"""Jacobi evaluation, eigenfunction shapes, normalization, diagnostics."""

import math

import numpy as np
import pytest
from scipy.special import eval_jacobi, hyp2f1

from kgws.errors import DomainError
from kgws.model import AMU_MEV, SystemParams
from kgws.spectrum import bound_state
from kgws.wavefunction import (
    Eigenfunction,
    closed_form_norm_diagnostic,
    count_sign_changes,
    eigenfunction_unnormalized,
    eigenfunction_x,
    hyp2f1_integral,
    jacobi_derivative,
    jacobi_polynomial,
    jacobi_polynomial_series,
    norm_integral_gauss,
    norm_integral_quad,
    normalize,
    sample_on_r_grid,
    second_derivative_x,
    weight_function,
)

DEEP_WELL = SystemParams(V0=70.0, q=5.0, r0=6.0, a=2.0, m0=400.0 / AMU_MEV, m1=0.0)


@pytest.fixture(scope="module")
def deep_state():
    return bound_state(0, 2, "+", DEEP_WELL)


@pytest.fixture(scope="module")
def anchor_state():
    # closed-form continuation state of the stock geometry; its shape is
    # well defined and normalizable even though its energy is not an exact
    # root of the termination condition
    return bound_state(0, 0, "+", SystemParams())


def test_jacobi_low_orders():
    assert jacobi_polynomial(0, 0.7, 2.3, 0.4) == 1.0
    # first polynomial: (alpha + 1) + (alpha + beta + 2)(x - 1)/2
    al, be, x = 1.3, 0.2, -0.35
    assert jacobi_polynomial(1, al, be, x) == pytest.approx(
        (al + 1.0) + (al + be + 2.0) * (x - 1.0) / 2.0, rel=1e-14
    )
    # Legendre reduction
    assert jacobi_polynomial(2, 0.0, 0.0, 0.0) == pytest.approx(-0.5, rel=1e-14)


def test_jacobi_recurrence_matches_series_and_scipy():
    rng = np.random.default_rng(42)
    for _ in range(12):
        n = int(rng.integers(0, 6))
        al = float(rng.uniform(-0.9, 8.0))
        be = float(rng.uniform(-0.9, 8.0))
        x = float(rng.uniform(-1.0, 1.0))
        rec = jacobi_polynomial(n, al, be, x)
        ser = jacobi_polynomial_series(n, al, be, x)
        ref = float(eval_jacobi(n, al, be, x))
        assert rec == pytest.approx(ser, rel=1e-10, abs=1e-10)
        assert rec == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_jacobi_parameter_validation():
    with pytest.raises(ValueError):
        jacobi_polynomial(-1, 0.5, 0.5, 0.0)
    with pytest.raises(ValueError):
        jacobi_polynomial(2, -1.0, 0.5, 0.0)


def test_jacobi_derivative_matches_finite_difference():
    al, be, n = 2.1, 3.7, 4
    h = 1e-6
    for x in (-0.5, 0.1, 0.8):
        fd = (jacobi_polynomial(n, al, be, x + h) - jacobi_polynomial(n, al, be, x - h)) / (2 * h)
        assert jacobi_derivative(n, al, be, x, 1) == pytest.approx(fd, rel=1e-8)
    assert jacobi_derivative(0, al, be, 0.3, 1) == 0.0
    assert jacobi_derivative(1, al, be, 0.3, 2) == 0.0


def test_weight_function_values():
    assert weight_function(1.0, 3.3, 7.7) == 1.0
    assert weight_function(0.77, 0.0, 0.0) == 1.0
    assert weight_function(0.5, 1.0, 2.0) == pytest.approx(1.125, rel=1e-14)
    with pytest.raises(DomainError):
        weight_function(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        weight_function(2.0, 1.0, 1.0)


def test_eigenfunction_vanishes_at_small_z(deep_state):
    # power-law vanishing at the outer edge of the physical range
    vals = eigenfunction_unnormalized(np.array([1e-8, 1e-6, 1e-4]), deep_state)
    assert abs(vals[0]) < 1e-6
    assert abs(vals[0]) < abs(vals[1]) < abs(vals[2])


def test_eigenfunction_domain(deep_state):
    z_max = deep_state.params.z_max
    with pytest.raises(DomainError):
        eigenfunction_unnormalized(z_max * 1.01, deep_state)
    with pytest.raises(DomainError):
        eigenfunction_unnormalized(-0.1, deep_state)


def test_ground_state_has_no_oscillation(deep_state):
    z = np.linspace(0.0, deep_state.params.z_max, 3001)[1:]
    assert count_sign_changes(eigenfunction_unnormalized(z, deep_state)) == 0


def test_degree_two_shape_oscillates_twice():
    st = bound_state(2, 2, "+", DEEP_WELL)
    z = np.linspace(0.0, st.params.z_max, 6001)[1:]
    assert count_sign_changes(eigenfunction_unnormalized(z, st)) == 2


def test_boundary_exponent_fit(deep_state):
    # |phi| ~ z^{a3/2} near z = 0: fitted slope within 1% of a3/2
    z = np.geomspace(1e-7, 1e-4, 40)
    v = np.abs(eigenfunction_unnormalized(z, deep_state))
    slope = np.polyfit(np.log(z), np.log(v), 1)[0]
    assert slope == pytest.approx(deep_state.jacobi_a3 / 2.0, rel=0.01)


def test_normalize_unit_norm(deep_state, anchor_state):
    from scipy.integrate import quad

    for st in (deep_state, anchor_state):
        eig = normalize(st)
        total, _ = quad(
            lambda x: (eig.norm_constant * eigenfunction_x(x, st)) ** 2,
            -st.params.r0,
            np.inf,
            limit=200,
        )
        assert total == pytest.approx(1.0, abs=1e-6)
        assert isinstance(eig, Eigenfunction)
        assert eig.a3 == st.jacobi_a3 and eig.A == st.jacobi_A


def test_two_quadrature_routes_agree(deep_state, anchor_state):
    for st in (deep_state, anchor_state):
        adaptive, _err, _tail = norm_integral_quad(st)
        fixed = norm_integral_gauss(st)
        assert fixed == pytest.approx(adaptive, rel=1e-8)


def test_norm_constant_density_stability(anchor_state):
    # doubling the panel count moves the constant by < 1e-8 relative
    c1 = 1.0 / math.sqrt(norm_integral_gauss(anchor_state, panels=64))
    c2 = 1.0 / math.sqrt(norm_integral_gauss(anchor_state, panels=128))
    assert abs(c2 - c1) <= 1e-8 * c1


def test_anchor_norm_constant_regression(anchor_state):
    # frozen after first computation; guards the whole normalization path
    assert normalize(anchor_state).norm_constant == pytest.approx(1.024874076, rel=1e-8)


def test_interior_share_reported(anchor_state):
    eig = normalize(anchor_state)
    # about half the probability lives inside r < r0 for the stock well,
    # all of which a unit-z-interval truncation would discard
    assert 0.3 < eig.tail_fraction < 0.7


def test_sample_on_r_grid(deep_state):
    from kgws.oracle import RadialGrid, default_grid

    grid = default_grid(DEEP_WELL)
    eig = normalize(deep_state, grid)
    pairs = sample_on_r_grid(eig, grid)
    assert len(pairs) == grid.num_points
    r_vals = [r for r, _ in pairs]
    assert r_vals == sorted(r_vals)
    peak = max(abs(v) for _, v in pairs)
    assert abs(pairs[-1][1]) < 1e-8 * peak
    assert eig.grid is not None and len(eig.grid[0]) == grid.num_points
    # a grid landing exactly on r0 samples the shape at z = 2/(1+q)
    exact_grid = RadialGrid(0.0, 12.0, 1201)
    pairs_exact = sample_on_r_grid(eig, exact_grid)
    i0 = int(round(DEEP_WELL.r0 / exact_grid.h))
    assert pairs_exact[i0][0] == pytest.approx(DEEP_WELL.r0, abs=1e-12)
    z0 = 2.0 / (1.0 + DEEP_WELL.q)
    want = eig.norm_constant * eigenfunction_unnormalized(z0, deep_state)
    assert pairs_exact[i0][1] == pytest.approx(want, rel=1e-10)


def test_second_derivative_matches_finite_difference(deep_state):
    h = 1e-4
    for x0 in (-2.0, 0.0, 1.3, 4.0):
        fd = (
            eigenfunction_x(x0 + h, deep_state)
            - 2.0 * eigenfunction_x(x0, deep_state)
            + eigenfunction_x(x0 - h, deep_state)
        ) / (h * h)
        assert second_derivative_x(x0, deep_state) == pytest.approx(fd, rel=1e-5)


def test_hyp2f1_binomial_identity():
    # c = b collapses the hypergeometric series to (1-z)^{-a}
    for a, b, z in ((0.3, 1.2, 0.4), (1.7, 0.6, -0.8), (-1.1, 2.0, 0.25)):
        assert hyp2f1_integral(a, b, b, z) == pytest.approx((1.0 - z) ** (-a), rel=1e-6)


def test_hyp2f1_against_scipy():
    cases = ((-2.5, 1.7, 3.1, 0.5), (1.3, 0.8, 2.1, -1.0), (0.4, 2.2, 5.0, 0.9))
    for a, b, c, z in cases:
        assert hyp2f1_integral(a, b, c, z) == pytest.approx(float(hyp2f1(a, b, c, z)), rel=1e-9)
    with pytest.raises(DomainError):
        hyp2f1_integral(1.0, -0.5, 1.0, 0.3)
    with pytest.raises(DomainError):
        hyp2f1_integral(1.0, 2.0, 1.0, 0.3)


def test_closed_form_diagnostic_reports(deep_state, anchor_state):
    for st in (deep_state, anchor_state):
        quad_const = normalize(st).norm_constant
        diag = closed_form_norm_diagnostic(st, quad_const)
        assert not diag.trusted
        assert diag.measure_negative
        # the side condition the gamma-form derivation needs does not hold
        assert not diag.condition_held
        assert diag.condition_residual == pytest.approx(st.jacobi_a3 - st.jacobi_A - 2.0)
        assert diag.ratio_to_quadrature == pytest.approx(diag.value / quad_const)
        # the gamma-form shortcut for the hypergeometric factor disagrees
        # with the factor's true value, which is the broken step
        assert diag.f21_condition_value != pytest.approx(diag.f21_true, rel=1e-3)
        assert math.isfinite(diag.value) and diag.value > 0.0


def test_diagnostic_computes_quadrature_when_missing(anchor_state):
    diag = closed_form_norm_diagnostic(anchor_state)
    want = closed_form_norm_diagnostic(anchor_state, normalize(anchor_state).norm_constant)
    assert diag.ratio_to_quadrature == pytest.approx(want.ratio_to_quadrature, rel=1e-12)
