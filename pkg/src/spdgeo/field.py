"""Tensor-field files and grid upsampling.

A field is a regular 3-D grid of 3x3 PSD tensors.  The on-disk format is a
single JSON object::

    {
      "dims":    [nx, ny, nz],
      "spacing": [sx, sy, sz],
      "tensors": [[xx, xy, xz, yy, yz, zz], ...]
    }

Each tensor is stored as its six upper-triangular components in the order
xx, xy, xz, yy, yz, zz; voxels are listed x-fastest (index =
ix + nx*(iy + ny*iz)).  A single tensor on its own is just the bare
6-element array.  Floats are written with ``repr`` precision, so a
load/save cycle is a fixed point.

Upsampling inserts ``factor - 1`` geodesic points between adjacent voxels
along each axis in turn (x, then y, then z, each pass operating on the
output of the previous one).  Only the two-endpoint path primitive is ever
used; no multi-point blending is invented.  Original voxels are copied
through bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, SpdGeoError, ValidationError
from .geodesics import GeodesicSpec, MetricKind, path_point
from .linalg import is_psd

__all__ = [
    "TensorField",
    "pack_tensor",
    "unpack_tensor",
    "load_tensor",
    "save_tensor",
    "load_field",
    "save_field",
    "upsample_field",
]

_UPPER = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def pack_tensor(t) -> list[float]:
    """Six upper-triangular components (xx, xy, xz, yy, yz, zz)."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValidationError(f"expected a 3x3 tensor, got shape {t.shape}")
    return [float(t[i, j]) for i, j in _UPPER]


def unpack_tensor(values) -> np.ndarray:
    """Symmetric 3x3 tensor from its six upper-triangular components."""
    v = list(values)
    if len(v) != 6:
        raise ValidationError(f"expected 6 tensor components, got {len(v)}")
    t = np.zeros((3, 3))
    for (i, j), x in zip(_UPPER, v):
        t[i, j] = t[j, i] = float(x)
    if not np.all(np.isfinite(t)):
        raise ValidationError("tensor components must be finite")
    return t


@dataclass
class TensorField:
    """A regular 3-D grid of 3x3 PSD tensors, x-fastest voxel order."""

    dims: tuple[int, int, int]
    spacing: tuple[float, float, float]
    tensors: np.ndarray  # shape (nx*ny*nz, 3, 3)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.spacing = tuple(float(s) for s in self.spacing)
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise ValidationError(f"dims must be 3 positive integers, got {self.dims}")
        if len(self.spacing) != 3 or any(s <= 0 for s in self.spacing):
            raise ValidationError(f"spacing must be 3 positive reals, got {self.spacing}")
        self.tensors = np.asarray(self.tensors, dtype=float)
        count = self.dims[0] * self.dims[1] * self.dims[2]
        if self.tensors.shape != (count, 3, 3):
            raise ValidationError(
                f"expected {count} tensors for dims {self.dims}, "
                f"got array of shape {self.tensors.shape}"
            )
        if not np.all(np.isfinite(self.tensors)):
            raise ValidationError("tensor entries must be finite")
        bad = [i for i in range(count) if not is_psd(self.tensors[i])]
        if bad:
            coords = ", ".join(str(self.voxel_coords(i)) for i in bad[:5])
            more = "" if len(bad) <= 5 else f" (+{len(bad) - 5} more)"
            raise ValidationError(f"non-PSD tensors at voxels {coords}{more}")

    @property
    def voxel_count(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    def flat_index(self, ix: int, iy: int, iz: int) -> int:
        nx, ny, _ = self.dims
        return ix + nx * (iy + ny * iz)

    def voxel_coords(self, flat: int) -> tuple[int, int, int]:
        nx, ny, _ = self.dims
        ix = flat % nx
        iy = (flat // nx) % ny
        iz = flat // (nx * ny)
        return ix, iy, iz

    def tensor_at(self, ix: int, iy: int, iz: int) -> np.ndarray:
        return self.tensors[self.flat_index(ix, iy, iz)]

    def to_payload(self) -> dict:
        return {
            "dims": list(self.dims),
            "spacing": list(self.spacing),
            "tensors": [pack_tensor(t) for t in self.tensors],
        }


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def load_field(path) -> TensorField:
    """Load and validate a tensor field; raises ParseError/ValidationError."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object at top level")
    missing = {"dims", "spacing", "tensors"} - data.keys()
    if missing:
        raise ValidationError(f"{path}: missing keys {sorted(missing)}")
    try:
        tensors = np.array([unpack_tensor(t) for t in data["tensors"]], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: malformed tensor list: {exc}") from exc
    if tensors.size == 0:
        tensors = tensors.reshape(0, 3, 3)
    try:
        return TensorField(tuple(data["dims"]), tuple(data["spacing"]), tensors)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def save_field(fld: TensorField, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fld.to_payload(), fh, indent=1)
        fh.write("\n")


def load_tensor(path) -> np.ndarray:
    """Load a single tensor stored as a bare 6-element JSON array."""
    data = _read_json(path)
    if not isinstance(data, list):
        raise ValidationError(
            f"{path}: expected a bare 6-element array for a single tensor"
        )
    return unpack_tensor(data)


def save_tensor(t, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pack_tensor(t), fh)
        fh.write("\n")


def _flat(coord, dims) -> int:
    return coord[0] + dims[0] * (coord[1] + dims[1] * coord[2])


def _upsample_axis(tensors, dims, axis, factor, metric):
    n_axis = dims[axis]
    if n_axis == 1:
        return tensors, dims
    new_dims = list(dims)
    new_dims[axis] = factor * (n_axis - 1) + 1
    new_dims = tuple(new_dims)
    out = np.empty((new_dims[0] * new_dims[1] * new_dims[2], 3, 3))
    others = [i for i in (0, 1, 2) if i != axis]
    # originals map to multiples of the factor, copied verbatim
    for iz in range(dims[2]):
        for iy in range(dims[1]):
            for ix in range(dims[0]):
                coord = [ix, iy, iz]
                src = _flat(coord, dims)
                coord[axis] *= factor
                out[_flat(coord, new_dims)] = tensors[src]
    # one geodesic per adjacent pair, evaluated at the interior fractions
    for base in range(n_axis - 1):
        for o1 in range(dims[others[1]]):
            for o0 in range(dims[others[0]]):
                coord = [0, 0, 0]
                coord[others[0]] = o0
                coord[others[1]] = o1
                coord[axis] = base
                left = tensors[_flat(coord, dims)]
                coord[axis] = base + 1
                right = tensors[_flat(coord, dims)]
                # p runs toward endpoint_a, so the right neighbour sits there
                spec = GeodesicSpec(metric, endpoint_a=right, endpoint_b=left)
                for rem in range(1, factor):
                    p = rem / factor
                    coord[axis] = base * factor + rem
                    try:
                        out[_flat(coord, new_dims)] = path_point(spec, p)
                    except SpdGeoError as exc:
                        raise type(exc)(
                            f"axis {'xyz'[axis]}, segment {base}-{base + 1}, "
                            f"voxel {tuple(coord)}: {exc}"
                        ) from exc
    return out, new_dims


def upsample_field(fld: TensorField, factor: int, metric: MetricKind) -> TensorField:
    """Insert factor-1 geodesic points between neighbours along x, y, z."""
    if int(factor) != factor or factor < 2:
        raise ValueError(f"upsampling factor must be an integer >= 2, got {factor}")
    factor = int(factor)
    tensors, dims = fld.tensors, fld.dims
    for axis in (0, 1, 2):
        tensors, dims = _upsample_axis(tensors, dims, axis, factor, metric)
    spacing = tuple(
        s / factor if dims[i] > fld.dims[i] else s for i, s in enumerate(fld.spacing)
    )
    return TensorField(dims, spacing, tensors)
