"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

import curveflow as cf

ALL_TARGETS = (
    cf.TargetManifold.sphere2(),
    cf.TargetManifold.complex_projective(2),
    cf.TargetManifold.grassmannian(4, 2),
)


def sphere_curve_from(formula, grid_points, **kwargs):
    """Build a sphere curve from an analytic node formula x -> R^3."""
    grid = cf.GridSpec(grid_points, **kwargs)
    pts = formula(grid.nodes())
    pts = pts / np.linalg.norm(pts, axis=-1, keepdims=True)
    return cf.DiscreteCurve(cf.TargetManifold.sphere2(), grid, pts)


def wobbly_circle(x, amplitude=0.01, mode=1):
    """Great circle with a vertical trigonometric wobble (pre-normalisation)."""
    return np.stack([np.cos(x), np.sin(x), amplitude * np.sin(mode * x)], axis=-1)


def fd4_derivative(samples, h):
    """Fourth-order central finite difference on a periodic array."""
    return (
        -np.roll(samples, -2, axis=0)
        + 8.0 * np.roll(samples, -1, axis=0)
        - 8.0 * np.roll(samples, 1, axis=0)
        + np.roll(samples, 2, axis=0)
    ) / (12.0 * h)


def max_node_norm(vectors):
    return float(np.max(np.linalg.norm(vectors, axis=-1)))
