"""Right-hand sides of the curve-flow equations and their parameter maps.

Three equivalent formulations are implemented:

* the covariant form
  ``u_t = a J nabla_x^3 u_x + lambda J nabla_x u_x
  + b R(nabla_x u_x, u_x) J u_x + c R(J u_x, u_x) nabla_x u_x``
  (`rhs_main`), plus its parabolically regularised variant with an extra
  ``-eps nabla_x^3 u_x`` (`rhs_regularized`);
* the Riemann-surface form with metric coefficients b1..b4 (`rhs_surface`);
* the sphere-valued spin-chain form written with flat ambient derivatives
  (`rhs_lpd`).

The `map_*` functions are the exact coefficient dictionaries connecting
the three forms and the Hamiltonian (alpha, beta, gamma) parameterisation.
Agreement of the right-hand sides under these dictionaries is a theorem
about the target geometry and is exercised by the identity suite rather
than assumed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import (
    DiscreteCurve,
    TangentField,
    covariant_derivative,
    spectral_derivative,
    velocity_field,
)
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class FlowParams:
    """Coefficients (a, b, c, lambda) of the main flow plus regularisation eps."""

    a: float
    b: float
    c: float
    lam: float
    epsilon: float = 0.0

    def __post_init__(self):
        if self.a == 0.0:
            raise InvalidArgumentError("dispersive coefficient a must be nonzero")
        if not 0.0 <= self.epsilon <= 1.0:
            raise InvalidArgumentError("epsilon must lie in [0, 1]")

    def with_epsilon(self, epsilon: float) -> "FlowParams":
        return FlowParams(self.a, self.b, self.c, self.lam, epsilon)


@dataclass(frozen=True)
class SurfaceParams:
    """Coefficients b1..b4 of the constant-curvature-surface form."""

    b1: float
    b2: float
    b3: float
    b4: float

    def __post_init__(self):
        if self.b1 == 0.0:
            raise InvalidArgumentError("leading coefficient b1 must be nonzero")


@dataclass(frozen=True)
class HamiltonianParams:
    """Weights of the combined energy alpha*E + beta*E2 + gamma*E_star.

    beta = 0 is permitted here so individual energies can be weighted in
    isolation; the flow dictionary `map_hamiltonian_params` rejects it
    (the resulting equation would not be fourth order).
    """

    alpha: float
    beta: float
    gamma: float


def derivative_frames(curve: DiscreteCurve, order: int) -> list[TangentField]:
    """[u_x, nabla_x u_x, ..., nabla_x^order u_x] computed once."""
    fields = [velocity_field(curve)]
    for _ in range(order):
        fields.append(covariant_derivative(fields[-1]))
    return fields


def _main_vectors(curve: DiscreteCurve, params: FlowParams, frames: list[TangentField]) -> np.ndarray:
    target = curve.target
    pts = curve.points
    ux, dux, d3ux = frames[0].vectors, frames[1].vectors, frames[3].vectors
    jux = target.apply_j_at(pts, ux)
    out = params.a * target.apply_j_at(pts, d3ux)
    out += params.lam * target.apply_j_at(pts, dux)
    out += params.b * target.curvature_at(pts, dux, ux, jux)
    out += params.c * target.curvature_at(pts, jux, ux, dux)
    return out


def rhs_main(curve: DiscreteCurve, params: FlowParams) -> TangentField:
    """Main flow velocity; ``params.epsilon`` is ignored here."""
    frames = derivative_frames(curve, 3)
    return TangentField(curve, _main_vectors(curve, params, frames), check=False)


def rhs_regularized(curve: DiscreteCurve, params: FlowParams) -> TangentField:
    """Main flow with the parabolic term -eps nabla_x^3 u_x added.

    Reduces exactly to `rhs_main` when eps = 0.
    """
    frames = derivative_frames(curve, 3)
    out = _main_vectors(curve, params, frames)
    if params.epsilon != 0.0:
        out = out - params.epsilon * frames[3].vectors
    return TangentField(curve, out, check=False)


def rhs_surface(curve: DiscreteCurve, sp: SurfaceParams) -> TangentField:
    """Surface form: metric contractions replace the curvature terms."""
    target = curve.target
    pts = curve.points
    frames = derivative_frames(curve, 3)
    ux, dux, d3ux = frames[0].vectors, frames[1].vectors, frames[3].vectors
    jux = target.apply_j_at(pts, ux)
    jdux = target.apply_j_at(pts, dux)
    speed2 = np.sum(ux * ux, axis=-1, keepdims=True)
    pairing = np.sum(dux * ux, axis=-1, keepdims=True)
    out = sp.b1 * target.apply_j_at(pts, d3ux)
    out += (sp.b2 + sp.b3 * speed2) * jdux
    out += sp.b4 * pairing * jux
    return TangentField(curve, out, check=False)


def rhs_lpd(curve: DiscreteCurve, a1: float, a2: float) -> TangentField:
    """Spin-chain form on the two-sphere, with flat ambient derivatives.

    Written exactly as the model equation: u ^ [a1 d_x^3 u_x
    + (1 + a2 (u_x,u_x)) d_x u_x + 2 a2 (d_x u_x, u_x) u_x], where d_x is
    the unprojected derivative of R^3-valued samples and ^ the cross
    product (so the result is automatically tangent).  The equivalence
    with `rhs_main` under `map_lpd_params` is a consequence of the sphere
    geometry, checked in the identity suite.
    """
    if curve.target.kind != "sphere2":
        raise InvalidArgumentError("the spin-chain form is defined for sphere2 targets")
    grid = curve.grid
    ux = spectral_derivative(curve.points, 1, grid)
    dux = spectral_derivative(curve.points, 2, grid)
    d3ux = spectral_derivative(curve.points, 4, grid)
    speed2 = np.sum(ux * ux, axis=-1, keepdims=True)
    pairing = np.sum(dux * ux, axis=-1, keepdims=True)
    bracket = a1 * d3ux + (1.0 + a2 * speed2) * dux + 2.0 * a2 * pairing * ux
    return TangentField(curve, np.cross(curve.points, bracket), check=False)


def map_hamiltonian_params(hp: HamiltonianParams) -> FlowParams:
    """Dictionary (alpha,beta,gamma) -> (a,lambda,b,c) = (beta,-alpha,beta+8gamma,-12gamma)."""
    return FlowParams(
        a=hp.beta,
        b=hp.beta + 8.0 * hp.gamma,
        c=-12.0 * hp.gamma,
        lam=-hp.alpha,
        epsilon=0.0,
    )


def map_surface_params(params: FlowParams, s: float) -> SurfaceParams:
    """Dictionary onto the surface form: b1=a, b2=lambda, b3=(b+c)S, b4=-bS."""
    return SurfaceParams(
        b1=params.a,
        b2=params.lam,
        b3=(params.b + params.c) * s,
        b4=-params.b * s,
    )


def map_lpd_params(a1: float, a2: float) -> FlowParams:
    """Dictionary from the spin-chain constants: a=a1, lambda=1, b=5a1-2a2, c=-6a1+3a2."""
    if a1 == 0.0:
        raise InvalidArgumentError("spin-chain leading coefficient a1 must be nonzero")
    return FlowParams(a=a1, b=5.0 * a1 - 2.0 * a2, c=-6.0 * a1 + 3.0 * a2, lam=1.0, epsilon=0.0)
