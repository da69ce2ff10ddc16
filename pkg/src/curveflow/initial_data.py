"""Shipped initial curves and random field generators.

All constructors are deterministic for a fixed seed.  Sphere curves are
built by normalising explicit trigonometric loops; projector-target
curves by conjugating a base projector with a loop of unitaries
``U(x) = exp(G(x))`` whose anti-hermitian generator is a trigonometric
polynomial, so every sample is an exact projector and the curve is
analytic in x.
"""

from __future__ import annotations

import numpy as np

from .curves import DiscreteCurve, GridSpec, TangentField, l2_norm
from .errors import InvalidArgumentError
from .targets import TargetManifold


def great_circle(grid: GridSpec, winding: int = 1) -> DiscreteCurve:
    """Equatorial circle traversed ``winding`` times; a stationary geodesic."""
    x = grid.nodes()
    pts = np.stack([np.cos(winding * x), np.sin(winding * x), np.zeros_like(x)], axis=-1)
    return DiscreteCurve(TargetManifold.sphere2(), grid, pts)


def latitude_circle(grid: GridSpec, latitude: float) -> DiscreteCurve:
    """Circle at the given latitude (radians, 0 = equator)."""
    x = grid.nodes()
    c, s = np.cos(latitude), np.sin(latitude)
    pts = np.stack([c * np.cos(x), c * np.sin(x), np.full_like(x, s)], axis=-1)
    return DiscreteCurve(TargetManifold.sphere2(), grid, pts)


def perturbed_great_circle(
    grid: GridSpec,
    amplitude: float = 0.05,
    modes: int = 3,
    seed: int = 0,
) -> DiscreteCurve:
    """Great circle plus a random trigonometric perturbation, renormalised.

    The perturbation adds, per ambient component, random combinations of
    cos(mx), sin(mx) for 1 <= m <= modes with coefficients of the given
    amplitude, then every node is pulled back to the unit sphere.
    """
    rng = np.random.default_rng(seed)
    x = grid.nodes()
    base = np.stack([np.cos(x), np.sin(x), np.zeros_like(x)], axis=-1)
    bump = np.zeros_like(base)
    for m in range(1, modes + 1):
        coeff = rng.standard_normal((2, 3)) * amplitude / m
        bump += np.outer(np.cos(m * x), coeff[0]) + np.outer(np.sin(m * x), coeff[1])
    pts = base + bump
    pts /= np.linalg.norm(pts, axis=-1, keepdims=True)
    return DiscreteCurve(TargetManifold.sphere2(), grid, pts)


def _unitary_loop(target: TargetManifold, grid: GridSpec, amplitude: float, modes: int, rng) -> np.ndarray:
    """Loop of unitaries from a random trigonometric anti-hermitian generator."""
    s = target.matrix_size
    x = grid.nodes()
    gen = np.zeros((grid.points, s, s), dtype=complex)
    for m in range(1, modes + 1):
        for wave in (np.cos(m * x), np.sin(m * x)):
            h = rng.standard_normal((s, s)) + 1j * rng.standard_normal((s, s))
            h = 0.5 * (h + np.conj(h.T)) * (amplitude / m)
            gen += wave[:, None, None] * (1j * h)
    # exp of anti-hermitian G = iH via the eigendecomposition of H
    hmat = -1j * gen
    w, v = np.linalg.eigh(hmat)
    phases = np.exp(1j * w)
    return v @ (phases[..., None] * np.conj(np.swapaxes(v, -1, -2)))


def projector_loop(
    target: TargetManifold,
    grid: GridSpec,
    amplitude: float = 0.4,
    modes: int = 2,
    seed: int = 0,
) -> DiscreteCurve:
    """Closed analytic curve of projectors: P(x) = U(x) P0 U(x)^*."""
    if not target.is_projector_model:
        raise InvalidArgumentError("projector loops need a projector-model target")
    rng = np.random.default_rng(seed)
    s, k = target.matrix_size, target.rank
    p0 = np.zeros((s, s), dtype=complex)
    p0[np.arange(k), np.arange(k)] = 1.0
    u = _unitary_loop(target, grid, amplitude, modes, rng)
    p = u @ p0 @ np.conj(np.swapaxes(u, -1, -2))
    return DiscreteCurve(target, grid, target.from_matrices(p))


def random_smooth_curve(
    target: TargetManifold,
    grid: GridSpec,
    amplitude: float = 0.05,
    modes: int = 3,
    seed: int = 0,
) -> DiscreteCurve:
    """Generic smooth closed curve on any supported target.

    Amplitudes are kept small enough that the Fourier tail of the curve is
    resolved to ~1e-9 already at M = 64 nodes.
    """
    if target.kind == "sphere2":
        return perturbed_great_circle(grid, amplitude=amplitude, modes=modes, seed=seed)
    return projector_loop(target, grid, amplitude=2.5 * amplitude, modes=modes, seed=seed)


def random_tangent_field(curve: DiscreteCurve, max_mode: int = 4, seed: int = 0) -> TangentField:
    """Band-limited random tangent field along the curve."""
    rng = np.random.default_rng(seed)
    x = curve.grid.nodes()
    d = curve.target.ambient_dim
    ambient = np.outer(np.ones_like(x), rng.standard_normal(d))
    for m in range(1, max_mode + 1):
        ambient += np.outer(np.cos(m * x), rng.standard_normal(d)) / m
        ambient += np.outer(np.sin(m * x), rng.standard_normal(d)) / m
    vecs = curve.target.project_tangent_at(curve.points, ambient)
    return TangentField(curve, vecs, check=False)


def oscillatory_probe(curve: DiscreteCurve, frequency: int, seed: int = 0) -> TangentField:
    """Mean-free tangent probe concentrated at the given frequency.

    Used by the commutator-cancellation diagnostics, which apply spectral
    antiderivatives and therefore require every ambient component of the
    probe to have vanishing mean.  The probe is normalised to unit L^2
    norm.
    """
    if frequency < 1:
        raise InvalidArgumentError("probe frequency must be a positive integer")
    if frequency >= curve.grid.mode_cutoff:
        raise InvalidArgumentError("probe frequency must sit below the dealias cutoff")
    rng = np.random.default_rng(seed)
    x = curve.grid.nodes()
    target = curve.target
    d = target.ambient_dim
    ambient = np.outer(np.cos(frequency * x), rng.standard_normal(d))
    ambient += np.outer(np.sin(frequency * x), rng.standard_normal(d))
    vecs = target.project_tangent_at(curve.points, ambient)
    # Cancel the mean exactly while staying tangent: the mean of any
    # projected field lies in the range of the node-averaged projector A,
    # so subtracting the projected constant A^+ mean removes it in one
    # least-squares solve (repeated once to clear rounding).
    avg_proj = np.stack(
        [np.mean(target.project_tangent_at(curve.points, np.tile(e, (len(x), 1))), axis=0)
         for e in np.eye(d)],
        axis=1,
    )
    for _ in range(2):
        mean = np.mean(vecs, axis=0)
        shift, *_ = np.linalg.lstsq(avg_proj, mean, rcond=None)
        vecs = vecs - target.project_tangent_at(curve.points, np.tile(shift, (len(x), 1)))
    field = TangentField(curve, vecs, check=False)
    return (1.0 / l2_norm(field)) * field
