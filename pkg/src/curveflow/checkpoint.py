"""Flat binary checkpoints for curve state.

Layout (all little-endian):

    offset  size  field
    0       8     magic  b"CVFLOW01"
    8       4     version (u32, currently 1)
    12      4     target kind (u32: 0 sphere2, 1 complex projective, 2 grassmannian)
    16      4     matrix size n (u32, 0 for the sphere)
    20      4     projector rank k (u32, 0 for the sphere)
    24      4     grid points M (u32)
    28      4     ambient dimension (u32)
    32      8     curvature scale (f64)
    40      8     dealias fraction (f64)
    48      ...   body: M * ambient_dim point coordinates, row-major f64

Round trips are bit exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .curves import DiscreteCurve, GridSpec
from .errors import InvalidArgumentError
from .targets import TargetManifold

MAGIC = b"CVFLOW01"
VERSION = 1
_HEADER = struct.Struct("<8sIIIIIIdd")
_KIND_IDS = {"sphere2": 0, "complex_projective": 1, "grassmannian": 2}
_KIND_NAMES = {v: k for k, v in _KIND_IDS.items()}


def write_checkpoint(path: str | Path, curve: DiscreteCurve) -> None:
    target = curve.target
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        _KIND_IDS[target.kind],
        target.matrix_size,
        target.rank,
        curve.grid.points,
        target.ambient_dim,
        target.curvature_scale,
        curve.grid.dealias_fraction,
    )
    body = np.ascontiguousarray(curve.points, dtype="<f8").tobytes()
    Path(path).write_bytes(header + body)


def read_checkpoint(path: str | Path) -> DiscreteCurve:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise InvalidArgumentError("checkpoint file too short")
    magic, version, kind_id, size, rank, m, ambient, scale, dealias = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise InvalidArgumentError("not a curve checkpoint (bad magic)")
    if version != VERSION:
        raise InvalidArgumentError(f"unsupported checkpoint version {version}")
    if kind_id not in _KIND_NAMES:
        raise InvalidArgumentError(f"unknown target kind id {kind_id}")
    target = TargetManifold(_KIND_NAMES[kind_id], size, rank, scale)
    if target.ambient_dim != ambient:
        raise InvalidArgumentError("inconsistent ambient dimension in header")
    expected = _HEADER.size + 8 * m * ambient
    if len(raw) != expected:
        raise InvalidArgumentError(f"checkpoint body length {len(raw)} != expected {expected}")
    body = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).reshape(m, ambient)
    return DiscreteCurve(target, GridSpec(m, dealias), body.astype(float))
