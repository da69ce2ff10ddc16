"""Pointwise geometry of the compact Kahler targets with parallel curvature.

Three embedded models are supported:

* ``sphere2`` -- the unit two-sphere in R^3.  The complex structure is the
  quarter-turn ``J_p X = p x X`` and the curvature tensor is the constant
  sectional curvature form ``R(X,Y)Z = S(h(Y,Z)X - h(X,Z)Y)``.
* ``complex_projective`` -- CP^n realised as rank-one hermitian projectors
  acting on C^(n+1).  Ambient coordinates are the real/imaginary parts of
  the full matrix, so the Euclidean dot product of coordinate vectors is
  the Frobenius pairing tr(AB) on hermitian matrices.  With this metric the
  holomorphic sectional curvature is the constant 2, which is what
  ``curvature_scale`` records; the curvature tensor is evaluated through
  the constant-holomorphic-curvature closed form.
* ``grassmannian`` -- the compact complex Grassmannian of rank-k hermitian
  projectors on C^n with the same Frobenius embedding.  Its curvature is
  not a space form, so the tensor is evaluated directly as the double
  matrix commutator ``R(X,Y)Z = [[X,Y],Z]`` of tangent representatives
  (compact-type sign: sectional curvature = |[X,Y]|^2 >= 0).

All operations are pure functions of immutable values and safe to call
concurrently.  The ``*_at`` methods are vectorised over a leading node
axis and are the workhorses used by the curve-level discretisation; the
singular-point wrappers (`project_tangent`, `metric`, ...) validate their
inputs and operate on `ManifoldPoint` / `TangentVector` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

POINT_TOL = 1e-12
FIELD_TOL = 1e-10

_KINDS = ("sphere2", "complex_projective", "grassmannian")


@dataclass(frozen=True)
class TargetManifold:
    """Descriptor of the target manifold and its ambient embedding.

    ``matrix_size`` is the side length of the projector matrices (0 for the
    sphere), ``rank`` their trace, ``curvature_scale`` the sectional
    curvature for the sphere and the holomorphic sectional curvature of
    the Frobenius projector embedding otherwise.
    """

    kind: str
    matrix_size: int = 0
    rank: int = 0
    curvature_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidArgumentError(f"unknown target kind {self.kind!r}")
        if self.kind != "sphere2":
            if self.matrix_size < 2:
                raise InvalidArgumentError("projector targets need matrix_size >= 2")
            if not 0 < self.rank < self.matrix_size:
                raise InvalidArgumentError("projector rank must satisfy 0 < k < n")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def sphere2() -> "TargetManifold":
        """The canonical unit two-sphere (S = 1)."""
        return TargetManifold("sphere2", curvature_scale=1.0)

    @staticmethod
    def complex_projective(n: int) -> "TargetManifold":
        """CP^n as trace-one projectors on C^(n+1), Frobenius metric."""
        if n < 1:
            raise InvalidArgumentError("complex projective space needs n >= 1")
        return TargetManifold("complex_projective", n + 1, 1, curvature_scale=2.0)

    @staticmethod
    def grassmannian(n: int, k: int) -> "TargetManifold":
        """Compact Grassmannian of k-planes in C^n (trace-k projectors)."""
        if not 0 < k < n:
            raise InvalidArgumentError("grassmannian needs 0 < k < n")
        return TargetManifold("grassmannian", n, k, curvature_scale=2.0)

    # -- descriptors -------------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        """Real dimension of the ambient vector space of the embedding."""
        if self.kind == "sphere2":
            return 3
        return 2 * self.matrix_size**2

    @property
    def tangent_dim(self) -> int:
        """Real dimension of the tangent spaces."""
        if self.kind == "sphere2":
            return 2
        return 2 * self.rank * (self.matrix_size - self.rank)

    @property
    def is_projector_model(self) -> bool:
        return self.kind != "sphere2"

    def __str__(self) -> str:
        if self.kind == "sphere2":
            return "sphere2"
        if self.kind == "complex_projective":
            return f"cp{self.matrix_size - 1}"
        return f"gr{self.matrix_size}-{self.rank}"

    # -- matrix <-> coordinate packing --------------------------------------

    def to_matrices(self, coords: np.ndarray) -> np.ndarray:
        """Unpack real coordinate vectors into complex square matrices."""
        s = self.matrix_size
        lead = coords.shape[:-1]
        re = coords[..., : s * s].reshape(*lead, s, s)
        im = coords[..., s * s :].reshape(*lead, s, s)
        return re + 1j * im

    def from_matrices(self, mats: np.ndarray) -> np.ndarray:
        """Pack complex square matrices into real coordinate vectors."""
        lead = mats.shape[:-2]
        return np.concatenate(
            [mats.real.reshape(*lead, -1), mats.imag.reshape(*lead, -1)], axis=-1
        )

    # -- vectorised kernels (leading axes broadcast over nodes) -------------

    def embedding_violation(self, coords: np.ndarray) -> float:
        """Max violation of the embedding constraint over all leading axes.

        Unit norm for the sphere; ``P = P*``, ``P^2 = P`` and ``tr P = k``
        for projector targets.
        """
        coords = np.asarray(coords, dtype=float)
        if coords.shape[-1] != self.ambient_dim:
            raise InvalidArgumentError(
                f"expected ambient dimension {self.ambient_dim}, got {coords.shape[-1]}"
            )
        if self.kind == "sphere2":
            return float(np.max(np.abs(np.linalg.norm(coords, axis=-1) - 1.0)))
        p = self.to_matrices(coords)
        herm = np.max(np.abs(p - np.conj(np.swapaxes(p, -1, -2))))
        idem = np.max(np.abs(p @ p - p))
        tr = np.max(np.abs(np.trace(p, axis1=-2, axis2=-1) - self.rank))
        return float(max(herm, idem, tr))

    def reproject_points(self, coords: np.ndarray) -> np.ndarray:
        """Closest-point style reprojection onto the embedded manifold.

        Normalisation for the sphere; for projector targets the hermitian
        part is eigendecomposed and the span of the top-k eigenvectors
        re-assembled into an exact projector.
        """
        coords = np.asarray(coords, dtype=float)
        if self.kind == "sphere2":
            return coords / np.linalg.norm(coords, axis=-1, keepdims=True)
        p = self.to_matrices(coords)
        p = 0.5 * (p + np.conj(np.swapaxes(p, -1, -2)))
        _, vecs = np.linalg.eigh(p)
        top = vecs[..., :, -self.rank :]
        proj = top @ np.conj(np.swapaxes(top, -1, -2))
        return self.from_matrices(proj)

    def project_tangent_at(self, points: np.ndarray, vectors: np.ndarray) -> np.ndarray:
        """Orthogonal projection of ambient vectors onto tangent spaces."""
        points = np.asarray(points, dtype=float)
        vectors = np.asarray(vectors, dtype=float)
        if vectors.shape[-1] != self.ambient_dim:
            raise InvalidArgumentError(
                f"expected ambient dimension {self.ambient_dim}, got {vectors.shape[-1]}"
            )
        if self.kind == "sphere2":
            return vectors - np.sum(vectors * points, axis=-1, keepdims=True) * points
        p = self.to_matrices(points)
        a = self.to_matrices(vectors)
        a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
        pa = p @ a
        # P A (I-P) + (I-P) A P = PA + AP - 2 PAP
        tangent = pa + np.conj(np.swapaxes(pa, -1, -2)) - 2.0 * (pa @ p)
        return self.from_matrices(tangent)

    def apply_j_at(self, points: np.ndarray, vectors: np.ndarray) -> np.ndarray:
        """Complex structure: quarter-turn p x X on the sphere, i[P, X] else."""
        if self.kind == "sphere2":
            return np.cross(points, vectors)
        p = self.to_matrices(points)
        x = self.to_matrices(vectors)
        return self.from_matrices(1j * (p @ x - x @ p))

    def curvature_at(
        self,
        points: np.ndarray,
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ) -> np.ndarray:
        """Riemann tensor R(X,Y)Z of the target at each point."""

        def h(u, v):
            return np.sum(u * v, axis=-1, keepdims=True)

        if self.kind == "sphere2":
            s = self.curvature_scale
            return s * (h(y, z) * x - h(x, z) * y)
        if self.kind == "complex_projective":
            c = self.curvature_scale
            jx = self.apply_j_at(points, x)
            jy = self.apply_j_at(points, y)
            jz = self.apply_j_at(points, z)
            return (c / 4.0) * (
                h(y, z) * x
                - h(x, z) * y
                + h(jy, z) * jx
                - h(jx, z) * jy
                - 2.0 * h(jx, y) * jz
            )
        xm = self.to_matrices(x)
        ym = self.to_matrices(y)
        zm = self.to_matrices(z)
        com = xm @ ym - ym @ xm
        return self.from_matrices(com @ zm - zm @ com)

    # -- validated single-point operations -----------------------------------

    def point(self, coords: np.ndarray) -> "ManifoldPoint":
        return ManifoldPoint(self, np.asarray(coords, dtype=float))

    def project_tangent(self, p: "ManifoldPoint", v: np.ndarray) -> "TangentVector":
        """Project an ambient vector to the tangent space at ``p``."""
        self._check_point(p)
        v = np.asarray(v, dtype=float)
        if v.shape != (self.ambient_dim,):
            raise InvalidArgumentError(
                f"ambient vector must have shape ({self.ambient_dim},), got {v.shape}"
            )
        return TangentVector(p, self.project_tangent_at(p.coords, v))

    def metric(self, p: "ManifoldPoint", x: "TangentVector", y: "TangentVector") -> float:
        """Kahler metric h(X, Y): the ambient inner product of the embedding."""
        self._check_based(p, x, y)
        return float(np.dot(x.coords, y.coords))

    def apply_J(self, p: "ManifoldPoint", x: "TangentVector") -> "TangentVector":
        """Apply the complex structure at ``p``; J^2 = -I and h(JX,JY)=h(X,Y)."""
        self._check_based(p, x)
        return TangentVector(p, self.apply_j_at(p.coords, x.coords))

    def curvature(
        self,
        p: "ManifoldPoint",
        x: "TangentVector",
        y: "TangentVector",
        z: "TangentVector",
    ) -> "TangentVector":
        """Evaluate R(X,Y)Z at ``p``."""
        self._check_based(p, x, y, z)
        return TangentVector(p, self.curvature_at(p.coords, x.coords, y.coords, z.coords))

    def retract(self, p: "ManifoldPoint", x: "TangentVector") -> "ManifoldPoint":
        """First-order retraction: reproject p + X back onto the manifold.

        Agrees with the exponential map to O(|X|^2) and returns a point
        satisfying the embedding constraint exactly (up to rounding).
        """
        self._check_based(p, x)
        return ManifoldPoint(self, self.reproject_points(p.coords + x.coords))

    def random_tangent(self, p: "ManifoldPoint", seed: int) -> "TangentVector":
        """Standard-normal ambient vector projected to the tangent space.

        Deterministic for a fixed seed.  The orthogonal projection of an
        isotropic Gaussian is again standard normal inside the tangent
        space, so |result| follows a chi distribution with ``tangent_dim``
        degrees of freedom.
        """
        self._check_point(p)
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(self.ambient_dim)
        return TangentVector(p, self.project_tangent_at(p.coords, v))

    def random_point(self, rng: np.random.Generator) -> "ManifoldPoint":
        """Draw a random point (uniform on the sphere, Haar-rotated projector)."""
        if self.kind == "sphere2":
            v = rng.standard_normal(3)
            return ManifoldPoint(self, v / np.linalg.norm(v))
        s = self.matrix_size
        g = rng.standard_normal((s, s)) + 1j * rng.standard_normal((s, s))
        q, _ = np.linalg.qr(g)
        basis = q[:, : self.rank]
        return ManifoldPoint(self, self.from_matrices(basis @ np.conj(basis.T)))

    # -- internal checks ----------------------------------------------------

    def _check_point(self, p: "ManifoldPoint") -> None:
        if p.target != self:
            raise InvalidArgumentError("point belongs to a different target")

    def _check_based(self, p: "ManifoldPoint", *vectors: "TangentVector") -> None:
        self._check_point(p)
        for v in vectors:
            if not np.array_equal(v.base.coords, p.coords):
                raise InvalidArgumentError("tangent vectors based at different points")


@dataclass(frozen=True)
class ManifoldPoint:
    """A point of the target, stored in ambient coordinates."""

    target: TargetManifold
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", coords)
        if coords.shape != (self.target.ambient_dim,):
            raise InvalidArgumentError(
                f"point coordinates must have shape ({self.target.ambient_dim},)"
            )
        violation = self.target.embedding_violation(coords)
        if violation > POINT_TOL:
            raise InvalidArgumentError(
                f"embedding constraint violated by {violation:.3e} (tol {POINT_TOL})"
            )


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector attached to a base point."""

    base: ManifoldPoint
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", coords)
        target = self.base.target
        if coords.shape != (target.ambient_dim,):
            raise InvalidArgumentError(
                f"tangent coordinates must have shape ({target.ambient_dim},)"
            )
        resid = coords - target.project_tangent_at(self.base.coords, coords)
        if np.linalg.norm(resid) > POINT_TOL * (1.0 + np.linalg.norm(coords)):
            raise InvalidArgumentError("vector is not tangent at its base point")

    @property
    def target(self) -> TargetManifold:
        return self.base.target

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))
