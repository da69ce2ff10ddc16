"""Run configuration: plain-text ``key = value`` files with four sections.

Sections and keys (all optional unless noted):

    [target]      kind (sphere2 | complex_projective | grassmannian),
                  n, k, curvature_scale
    [flow]        a, b, c, lambda, epsilon,
                  initial (great_circle | latitude_circle |
                  perturbed_great_circle | projector_loop),
                  amplitude, modes, latitude, winding, seed
    [integrator]  scheme (rk4 | imex_bdf2), dt, t_end, record_every,
                  k_diag, points, dealias_fraction, stability_factor
    [output]      csv, checkpoint (file paths)

Unknown sections or keys are configuration errors.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .curves import DiscreteCurve, GridSpec
from .errors import ConfigError
from .flows import FlowParams
from .initial_data import (
    great_circle,
    latitude_circle,
    perturbed_great_circle,
    projector_loop,
)
from .integrators import IntegratorConfig
from .targets import TargetManifold

_ALLOWED = {
    "target": {"kind", "n", "k", "curvature_scale"},
    "flow": {
        "a",
        "b",
        "c",
        "lambda",
        "epsilon",
        "initial",
        "amplitude",
        "modes",
        "latitude",
        "winding",
        "seed",
    },
    "integrator": {
        "scheme",
        "dt",
        "t_end",
        "record_every",
        "k_diag",
        "points",
        "dealias_fraction",
        "stability_factor",
    },
    "output": {"csv", "checkpoint"},
}

_INITIALS = ("great_circle", "latitude_circle", "perturbed_great_circle", "projector_loop")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one simulation."""

    target: TargetManifold
    grid: GridSpec
    params: FlowParams
    integrator: IntegratorConfig
    initial: str = "great_circle"
    amplitude: float = 0.05
    modes: int = 3
    latitude: float = 0.5
    winding: int = 1
    seed: int = 0
    csv_path: str | None = None
    checkpoint_path: str | None = None

    def initial_curve(self) -> DiscreteCurve:
        if self.initial == "great_circle":
            return great_circle(self.grid, winding=self.winding)
        if self.initial == "latitude_circle":
            return latitude_circle(self.grid, self.latitude)
        if self.initial == "perturbed_great_circle":
            return perturbed_great_circle(
                self.grid, amplitude=self.amplitude, modes=self.modes, seed=self.seed
            )
        if self.initial == "projector_loop":
            return projector_loop(
                self.target, self.grid, amplitude=self.amplitude, modes=self.modes, seed=self.seed
            )
        raise ConfigError(f"unknown initial data preset {self.initial!r}")


def _target_from(section: dict[str, str]) -> TargetManifold:
    kind = section.get("kind", "sphere2")
    try:
        if kind == "sphere2":
            target = TargetManifold.sphere2()
        elif kind == "complex_projective":
            target = TargetManifold.complex_projective(int(section.get("n", "1")))
        elif kind == "grassmannian":
            target = TargetManifold.grassmannian(
                int(section.get("n", "4")), int(section.get("k", "2"))
            )
        else:
            raise ConfigError(f"unknown target kind {kind!r}")
        if "curvature_scale" in section:
            target = TargetManifold(
                target.kind, target.matrix_size, target.rank, float(section["curvature_scale"])
            )
        return target
    except ValueError as exc:
        raise ConfigError(f"bad [target] section: {exc}") from exc


def _get(section: dict[str, str], key: str, cast, default):
    if key not in section:
        return default
    try:
        return cast(section[key])
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {section[key]!r}") from exc


def parse_config(path: str | Path, overrides: dict[str, str] | None = None) -> RunConfig:
    """Parse a config file; ``overrides`` are ``section.key -> value`` pairs."""
    parser = configparser.ConfigParser(interpolation=None)
    text = Path(path).read_text()
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    sections = {name: dict(parser.items(name)) for name in parser.sections()}
    for name, keys in list(sections.items()):
        if name not in _ALLOWED:
            raise ConfigError(f"unknown section [{name}]")
        unknown = set(keys) - _ALLOWED[name]
        if unknown:
            raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}")
    for override, value in (overrides or {}).items():
        section, _, key = override.partition(".")
        if section not in _ALLOWED or key not in _ALLOWED[section]:
            raise ConfigError(f"unknown override {override!r}")
        sections.setdefault(section, {})[key] = value

    target = _target_from(sections.get("target", {}))
    flow = sections.get("flow", {})
    integ = sections.get("integrator", {})
    out = sections.get("output", {})

    try:
        params = FlowParams(
            a=_get(flow, "a", float, 1.0),
            b=_get(flow, "b", float, 0.0),
            c=_get(flow, "c", float, 0.0),
            lam=_get(flow, "lambda", float, 0.0),
            epsilon=_get(flow, "epsilon", float, 0.0),
        )
        grid = GridSpec(
            points=_get(integ, "points", int, 64),
            dealias_fraction=_get(integ, "dealias_fraction", float, 2.0 / 3.0),
        )
        cfg = IntegratorConfig(
            scheme=_get(integ, "scheme", str, "rk4"),
            dt=_get(integ, "dt", float, 1e-6),
            t_end=_get(integ, "t_end", float, 1e-3),
            record_every=_get(integ, "record_every", int, 1),
            k_diag=_get(integ, "k_diag", int, 4),
            stability_factor=_get(integ, "stability_factor", float, 0.2),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    initial = flow.get("initial", "great_circle")
    if initial not in _INITIALS:
        raise ConfigError(f"unknown initial data preset {initial!r}")

    return RunConfig(
        target=target,
        grid=grid,
        params=params,
        integrator=cfg,
        initial=initial,
        amplitude=_get(flow, "amplitude", float, 0.05),
        modes=_get(flow, "modes", int, 3),
        latitude=_get(flow, "latitude", float, 0.5),
        winding=_get(flow, "winding", int, 1),
        seed=_get(flow, "seed", int, 0),
        csv_path=out.get("csv"),
        checkpoint_path=out.get("checkpoint"),
    )
