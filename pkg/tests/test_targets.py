"""Pointwise geometry of the supported targets."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import curveflow as cf
from curveflow.errors import InvalidArgumentError

from conftest import ALL_TARGETS

SPHERE = cf.TargetManifold.sphere2()
NORTH = SPHERE.point([0.0, 0.0, 1.0])


def unit_tangents(target, rng, count):
    p = target.random_point(rng)
    out = []
    for _ in range(count):
        v = target.project_tangent_at(p.coords, rng.standard_normal(target.ambient_dim))
        out.append(v / np.linalg.norm(v))
    return p, out


# -- tangent projection -------------------------------------------------------


def test_project_tangent_already_tangent():
    v = SPHERE.project_tangent(NORTH, [1.0, 0.0, 0.0])
    np.testing.assert_allclose(v.coords, [1.0, 0.0, 0.0])


def test_project_tangent_purely_normal():
    v = SPHERE.project_tangent(NORTH, [0.0, 0.0, 5.0])
    np.testing.assert_allclose(v.coords, [0.0, 0.0, 0.0], atol=1e-15)


def test_project_tangent_mixed():
    # oracle: v - (v . p) p
    v = SPHERE.project_tangent(NORTH, [2.0, 3.0, 4.0])
    np.testing.assert_allclose(v.coords, [2.0, 3.0, 0.0], atol=1e-15)


def test_project_tangent_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        SPHERE.project_tangent(NORTH, [1.0, 0.0])


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_projection_idempotent_and_self_adjoint(target):
    rng = np.random.default_rng(42)
    p = target.random_point(rng).coords
    for trial in range(20):
        v = rng.standard_normal(target.ambient_dim)
        w = rng.standard_normal(target.ambient_dim)
        pv = target.project_tangent_at(p, v)
        pw = target.project_tangent_at(p, w)
        np.testing.assert_allclose(target.project_tangent_at(p, pv), pv, atol=1e-12)
        assert abs(np.dot(pv, w) - np.dot(v, pw)) < 1e-12 * (1 + np.linalg.norm(v) * np.linalg.norm(w))


# -- metric -------------------------------------------------------------------


def test_metric_examples():
    x = cf.TangentVector(NORTH, np.array([1.0, 0.0, 0.0]))
    y = cf.TangentVector(NORTH, np.array([0.0, 1.0, 0.0]))
    assert SPHERE.metric(NORTH, x, y) == 0.0
    assert SPHERE.metric(NORTH, x, x) == 1.0
    a = cf.TangentVector(NORTH, np.array([2.0, 3.0, 0.0]))
    b = cf.TangentVector(NORTH, np.array([1.0, -1.0, 0.0]))
    assert SPHERE.metric(NORTH, a, b) == pytest.approx(-1.0, abs=1e-15)


def test_metric_base_mismatch():
    other = SPHERE.point([1.0, 0.0, 0.0])
    x = cf.TangentVector(NORTH, np.array([1.0, 0.0, 0.0]))
    y = cf.TangentVector(other, np.array([0.0, 1.0, 0.0]))
    with pytest.raises(InvalidArgumentError):
        SPHERE.metric(NORTH, x, y)


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_metric_positive_definite(target):
    rng = np.random.default_rng(5)
    p, (x,) = unit_tangents(target, rng, 1)
    assert np.dot(x, x) > 0.0


# -- complex structure --------------------------------------------------------


def test_apply_J_is_quarter_turn_on_sphere():
    x = cf.TangentVector(NORTH, np.array([1.0, 0.0, 0.0]))
    jx = SPHERE.apply_J(NORTH, x)
    np.testing.assert_allclose(jx.coords, [0.0, 1.0, 0.0], atol=1e-15)


def test_apply_J_squares_to_minus_identity():
    x = cf.TangentVector(NORTH, np.array([0.0, 1.0, 0.0]))
    jjx = SPHERE.apply_J(NORTH, SPHERE.apply_J(NORTH, x))
    np.testing.assert_allclose(jjx.coords, [0.0, -1.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_apply_J_zero_and_isometry(target):
    rng = np.random.default_rng(11)
    p, (x, y) = unit_tangents(target, rng, 2)
    zero = target.apply_j_at(p.coords, np.zeros(target.ambient_dim))
    np.testing.assert_allclose(zero, 0.0, atol=1e-15)
    jx = target.apply_j_at(p.coords, x)
    jy = target.apply_j_at(p.coords, y)
    assert abs(np.dot(jx, jy) - np.dot(x, y)) < 1e-12
    np.testing.assert_allclose(target.apply_j_at(p.coords, jx), -x, atol=1e-12)


def test_apply_J_rejects_non_tangent():
    with pytest.raises(InvalidArgumentError):
        cf.TangentVector(NORTH, np.array([0.0, 0.0, 1.0]))


# -- curvature ----------------------------------------------------------------


def test_sphere_curvature_orthonormal_example():
    x = cf.TangentVector(NORTH, np.array([1.0, 0.0, 0.0]))
    y = cf.TangentVector(NORTH, np.array([0.0, 1.0, 0.0]))
    r = SPHERE.curvature(NORTH, x, y, y)
    np.testing.assert_allclose(r.coords, [1.0, 0.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_curvature_antisymmetry_diagonal(target):
    rng = np.random.default_rng(3)
    p, (x, z) = unit_tangents(target, rng, 2)
    r = target.curvature_at(p.coords, x, x, z)
    np.testing.assert_allclose(r, 0.0, atol=1e-14)


def test_cp_curvature_matches_lie_bracket_oracle():
    """Closed holomorphic-curvature form vs the projector-commutator form."""
    target = cf.TargetManifold.complex_projective(2)
    rng = np.random.default_rng(17)
    for trial in range(25):
        p, (x, y, z) = unit_tangents(target, rng, 3)
        closed = target.curvature_at(p.coords, x, y, z)
        xm, ym, zm = (target.to_matrices(v) for v in (x, y, z))
        com = xm @ ym - ym @ xm
        bracket = target.from_matrices(com @ zm - zm @ com)
        np.testing.assert_allclose(closed, bracket, atol=1e-13)


@pytest.mark.parametrize(
    "target", [cf.TargetManifold.complex_projective(1), cf.TargetManifold.complex_projective(3)], ids=str
)
def test_cp_holomorphic_sectional_curvature_is_scale(target):
    rng = np.random.default_rng(23)
    p, (x,) = unit_tangents(target, rng, 1)
    jx = target.apply_j_at(p.coords, x)
    k_hol = np.dot(target.curvature_at(p.coords, x, jx, jx), x)
    assert k_hol == pytest.approx(target.curvature_scale, abs=1e-12)


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_sectional_curvature_nonnegative(target):
    # compact type: K(X, Y) = h(R(X,Y)Y, X) >= 0
    rng = np.random.default_rng(29)
    for trial in range(10):
        p, (x, y) = unit_tangents(target, rng, 2)
        assert np.dot(target.curvature_at(p.coords, x, y, y), x) > -1e-13


# -- retraction ---------------------------------------------------------------


def test_retract_zero_is_identity():
    zero = cf.TangentVector(NORTH, np.zeros(3))
    q = SPHERE.retract(NORTH, zero)
    np.testing.assert_array_equal(q.coords, NORTH.coords)


def test_retract_is_normalisation():
    p = SPHERE.point([1.0, 0.0, 0.0])
    x = cf.TangentVector(p, np.array([0.0, 1.0, 0.0]))
    q = SPHERE.retract(p, x)
    np.testing.assert_allclose(q.coords, np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0), atol=1e-15)


def test_retract_stays_unit_norm_for_small_steps():
    p = SPHERE.point([1.0, 0.0, 0.0])
    for s in [1e-3, 1e-6, 1e-9]:
        x = cf.TangentVector(p, np.array([0.0, np.pi / 2 * s, 0.0]))
        q = SPHERE.retract(p, x)
        assert abs(np.linalg.norm(q.coords) - 1.0) < 1e-15


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_retract_first_order_accurate(target):
    """distance(retract(p, tX), geodesic-ish reference) = O(t^2)."""
    rng = np.random.default_rng(31)
    p, (x,) = unit_tangents(target, rng, 1)
    gaps = []
    for t in (1e-2, 5e-3):
        q = target.reproject_points(p.coords + t * x)
        assert target.embedding_violation(q) < 1e-12
        gaps.append(np.linalg.norm(q - (p.coords + t * x)))
    # deviation from the straight line is quadratic in the step
    assert gaps[1] < 0.35 * gaps[0]


# -- random tangents ----------------------------------------------------------


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_random_tangent_deterministic_and_tangent(target):
    rng = np.random.default_rng(37)
    p = target.random_point(rng)
    v1 = target.random_tangent(p, seed=123)
    v2 = target.random_tangent(p, seed=123)
    np.testing.assert_array_equal(v1.coords, v2.coords)
    reproj = target.project_tangent_at(p.coords, v1.coords)
    np.testing.assert_allclose(reproj, v1.coords, atol=1e-14)


@pytest.mark.parametrize("target", ALL_TARGETS, ids=str)
def test_random_tangent_chi_mean(target):
    """Empirical mean norm follows the chi law of the tangent dimension."""
    from math import gamma, sqrt

    rng = np.random.default_rng(41)
    p = target.random_point(rng)
    norms = [target.random_tangent(p, seed=s).norm() for s in range(10_000)]
    d = target.tangent_dim
    chi_mean = sqrt(2.0) * gamma((d + 1) / 2.0) / gamma(d / 2.0)
    assert abs(np.mean(norms) - chi_mean) < 0.1 * chi_mean


# -- type invariants ----------------------------------------------------------


def test_point_validation():
    with pytest.raises(InvalidArgumentError):
        SPHERE.point([1.0, 1.0, 0.0])
    target = cf.TargetManifold.grassmannian(4, 2)
    rng = np.random.default_rng(1)
    p = target.random_point(rng)
    assert target.embedding_violation(p.coords) < 1e-12
    with pytest.raises(InvalidArgumentError):
        cf.ManifoldPoint(target, 1.01 * p.coords)


@given(st.integers(min_value=1, max_value=4))
@settings(max_examples=4, deadline=None)
def test_projective_descriptor_dimensions(n):
    target = cf.TargetManifold.complex_projective(n)
    assert target.ambient_dim == 2 * (n + 1) ** 2
    assert target.tangent_dim == 2 * n


def test_kind_validation():
    with pytest.raises(InvalidArgumentError):
        cf.TargetManifold("torus")
    with pytest.raises(InvalidArgumentError):
        cf.TargetManifold.grassmannian(3, 3)
    with pytest.raises(InvalidArgumentError):
        cf.TargetManifold.complex_projective(0)
