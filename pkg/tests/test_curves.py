"""Discrete curves, covariant derivatives, and Sobolev norms."""

import numpy as np
import pytest

import curveflow as cf
from curveflow.curves import spectral_antiderivative, spectral_derivative
from curveflow.errors import InvalidArgumentError

from conftest import max_node_norm, sphere_curve_from, wobbly_circle

SQRT_2PI = np.sqrt(2.0 * np.pi)


def constant_curve(grid_points=32):
    grid = cf.GridSpec(grid_points)
    pts = np.tile([0.0, 0.0, 1.0], (grid_points, 1))
    return cf.DiscreteCurve(cf.TargetManifold.sphere2(), grid, pts)


# -- grid and validation ------------------------------------------------------


def test_grid_validation():
    with pytest.raises(InvalidArgumentError):
        cf.GridSpec(15)
    with pytest.raises(InvalidArgumentError):
        cf.GridSpec(10)
    with pytest.raises(InvalidArgumentError):
        cf.GridSpec(32, dealias_fraction=0.0)
    grid = cf.GridSpec(64)
    assert grid.nodes()[1] == pytest.approx(2 * np.pi / 64)
    assert grid.mode_cutoff == 21


def test_curve_validation_rejects_off_manifold():
    grid = cf.GridSpec(32)
    pts = 1.001 * cf.great_circle(grid).points
    with pytest.raises(InvalidArgumentError):
        cf.DiscreteCurve(cf.TargetManifold.sphere2(), grid, pts)


def test_field_validation_rejects_non_tangent():
    curve = cf.great_circle(cf.GridSpec(32))
    with pytest.raises(InvalidArgumentError):
        cf.TangentField(curve, curve.points.copy())


# -- velocity field -----------------------------------------------------------


def test_velocity_of_constant_curve_is_zero():
    assert max_node_norm(cf.velocity_field(constant_curve()).vectors) == 0.0


@pytest.mark.parametrize("m", [32, 64, 128])
def test_velocity_of_great_circle_is_analytic(m):
    curve = cf.great_circle(cf.GridSpec(m))
    x = curve.grid.nodes()
    exact = np.stack([-np.sin(x), np.cos(x), np.zeros_like(x)], axis=-1)
    assert max_node_norm(cf.velocity_field(curve).vectors - exact) < 1e-12


def test_velocity_of_doubled_circle_has_speed_two():
    curve = cf.great_circle(cf.GridSpec(64), winding=2)
    speeds = cf.velocity_field(curve).node_norms()
    np.testing.assert_allclose(speeds, 2.0, atol=1e-12)


# -- covariant derivative -----------------------------------------------------


def test_geodesic_has_vanishing_covariant_acceleration():
    curve = cf.great_circle(cf.GridSpec(64))
    acc = cf.covariant_derivative(cf.velocity_field(curve))
    assert max_node_norm(acc.vectors) < 1e-10


def test_covariant_derivative_of_zero_field():
    curve = cf.great_circle(cf.GridSpec(32))
    zero = cf.TangentField(curve, np.zeros_like(curve.points))
    assert max_node_norm(cf.covariant_derivative(zero).vectors) == 0.0


def test_constant_normal_axis_field_is_parallel():
    # along the equator, J u_x is the constant north pole: nabla_x (J u_x) = 0
    curve = cf.great_circle(cf.GridSpec(64))
    ux = cf.velocity_field(curve)
    jux = cf.TangentField(curve, curve.target.apply_j_at(curve.points, ux.vectors))
    np.testing.assert_allclose(jux.vectors, np.tile([0.0, 0.0, 1.0], (64, 1)), atol=1e-12)
    assert max_node_norm(cf.covariant_derivative(jux).vectors) < 1e-10


# -- higher covariant derivatives ----------------------------------------------


def test_higher_cov_derivative_order_zero_is_velocity():
    curve = cf.perturbed_great_circle(cf.GridSpec(64), seed=2)
    np.testing.assert_array_equal(
        cf.higher_cov_derivative(curve, 0).vectors, cf.velocity_field(curve).vectors
    )


@pytest.mark.parametrize("m", [1, 2, 3])
def test_higher_cov_derivatives_vanish_on_geodesics(m):
    curve = cf.great_circle(cf.GridSpec(64))
    assert max_node_norm(cf.higher_cov_derivative(curve, m).vectors) < 1e-9


def test_higher_cov_derivative_is_iterated_composition():
    curve = cf.perturbed_great_circle(cf.GridSpec(64), seed=2)
    twice = cf.covariant_derivative(cf.covariant_derivative(cf.velocity_field(curve)))
    np.testing.assert_array_equal(cf.higher_cov_derivative(curve, 2).vectors, twice.vectors)


def test_higher_cov_derivative_rejects_negative_order():
    with pytest.raises(InvalidArgumentError):
        cf.higher_cov_derivative(constant_curve(), -1)


# -- Sobolev norms --------------------------------------------------------------


def test_sobolev_norm_of_zero_field():
    curve = cf.great_circle(cf.GridSpec(32))
    zero = cf.TangentField(curve, np.zeros_like(curve.points))
    for m in range(4):
        assert cf.sobolev_norm(curve, zero, m) == 0.0


@pytest.mark.parametrize("m", [0, 3])
def test_sobolev_norm_of_great_circle_velocity(m):
    # int |u_x|^2 dx = 2 pi and all higher terms vanish on a geodesic
    curve = cf.great_circle(cf.GridSpec(64))
    ux = cf.velocity_field(curve)
    assert cf.sobolev_norm(curve, ux, m) == pytest.approx(SQRT_2PI, abs=1e-10)


# -- discretisation invariants --------------------------------------------------


def test_integration_by_parts():
    curve = cf.perturbed_great_circle(cf.GridSpec(128), amplitude=0.05, seed=5)
    v = cf.random_tangent_field(curve, seed=1)
    w = cf.random_tangent_field(curve, seed=2)
    lhs = cf.l2_inner(cf.covariant_derivative(v), w) + cf.l2_inner(v, cf.covariant_derivative(w))
    assert abs(lhs) < 1e-8 * cf.l2_norm(v) * cf.l2_norm(w)


def test_metric_compatibility_pointwise():
    curve = cf.perturbed_great_circle(cf.GridSpec(128), amplitude=0.05, seed=5)
    v = cf.random_tangent_field(curve, seed=3)
    w = cf.random_tangent_field(curve, seed=4)
    pairing = np.sum(v.vectors * w.vectors, axis=-1, keepdims=True)
    lhs = spectral_derivative(pairing, 1, curve.grid)[:, 0]
    rhs = np.sum(cf.covariant_derivative(v).vectors * w.vectors, axis=-1)
    rhs += np.sum(v.vectors * cf.covariant_derivative(w).vectors, axis=-1)
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_complex_structure_commutes_with_covariant_derivative():
    curve = cf.perturbed_great_circle(cf.GridSpec(128), amplitude=0.05, seed=5)
    v = cf.random_tangent_field(curve, seed=1)
    jv = cf.TangentField(curve, curve.target.apply_j_at(curve.points, v.vectors))
    lhs = cf.covariant_derivative(jv).vectors
    rhs = curve.target.apply_j_at(curve.points, cf.covariant_derivative(v).vectors)
    assert max_node_norm(lhs - rhs) < 1e-8


def test_spectral_convergence_of_covariant_derivative():
    """Error against a refined reference decays faster than fourth order."""
    formula = lambda x: wobbly_circle(x, amplitude=0.4, mode=3)
    ref = sphere_curve_from(formula, 512)
    dref = cf.covariant_derivative(cf.velocity_field(ref)).vectors
    errs = []
    for m in (32, 64, 128):
        curve = sphere_curve_from(formula, m)
        d = cf.covariant_derivative(cf.velocity_field(curve)).vectors
        errs.append(max_node_norm(d - dref[:: 512 // m]))
    assert errs[1] < errs[0] / 16.0
    assert errs[2] < errs[1] / 16.0


# -- spectral helpers ------------------------------------------------------------


def test_spectral_derivative_exact_on_bandlimited_samples():
    grid = cf.GridSpec(64)
    x = grid.nodes()
    samples = np.cos(5 * x)[:, None]
    d = spectral_derivative(samples, 1, grid)[:, 0]
    np.testing.assert_allclose(d, -5 * np.sin(5 * x), atol=1e-12)


def test_spectral_antiderivative_inverts_derivative():
    grid = cf.GridSpec(64)
    x = grid.nodes()
    samples = (np.sin(3 * x) + 0.2 * np.cos(7 * x))[:, None]
    d2 = spectral_derivative(samples, 2, grid)
    back = spectral_antiderivative(d2, 2, grid)
    np.testing.assert_allclose(back, samples, atol=1e-12)


def test_spectral_antiderivative_rejects_mean():
    grid = cf.GridSpec(64)
    with pytest.raises(InvalidArgumentError):
        spectral_antiderivative(np.ones((64, 1)), 2, grid)
