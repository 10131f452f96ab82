"""Sampling surfaces on parameter grids and writing OBJ / PLY / CSV.

Points live in R^4 with coordinate order (Re z1, Im z1, Re z2, Im z2).
Dropping one coordinate gives the projections to the four coordinate
3-spaces.  Vertex ``(i, j)`` of an ``nt x ns`` grid has flat index
``i * ns + j``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from lagstar.errors import DomainError, MeshIOError
from lagstar.geomcore import to_r4
from lagstar.star import StarSurface

WRAP_TOL = 1e-6
COORD_NAMES = ("x1", "y1", "x2", "y2")


@dataclass(frozen=True)
class MeshGrid:
    t: np.ndarray
    s: np.ndarray
    points: np.ndarray  # (nt, ns, dim)
    mask: np.ndarray  # (nt, ns), True = singular
    wrap_t: bool = False
    wrap_s: bool = False
    dropped_axis: Optional[int] = None

    def __post_init__(self):
        nt, ns = self.t.size, self.s.size
        if self.points.shape[:2] != (nt, ns) or self.mask.shape != (nt, ns):
            raise DomainError("mesh arrays have inconsistent shapes")

    @property
    def nt(self) -> int:
        return self.t.size

    @property
    def ns(self) -> int:
        return self.s.size

    @property
    def dim(self) -> int:
        return self.points.shape[-1]

    @property
    def t_range(self):
        return float(self.t[0]), float(self.t[-1])

    @property
    def s_range(self):
        return float(self.s[0]), float(self.s[-1])

    def vertices(self) -> np.ndarray:
        return self.points.reshape(-1, self.dim)

    def faces(self) -> np.ndarray:
        """Quads (0-based, counter-clockwise in (t, s)) whose four corners are unmasked."""
        nt, ns = self.nt, self.ns
        rows = np.arange(nt if self.wrap_t else nt - 1)
        cols = np.arange(ns if self.wrap_s else ns - 1)
        i, j = np.meshgrid(rows, cols, indexing="ij")
        i, j = i.ravel(), j.ravel()
        i1, j1 = (i + 1) % nt, (j + 1) % ns
        quads = np.stack([i * ns + j, i1 * ns + j, i1 * ns + j1, i * ns + j1], axis=1)
        flat = self.mask.ravel()
        keep = ~np.any(flat[quads], axis=1)
        return quads[keep]


def _wrap_residual(surf, direction, nodes, other, period):
    if direction == "t":
        a = surf.position(nodes[:, None], other[None, :])
        b = surf.position(nodes[:, None] + period, other[None, :])
    else:
        a = surf.position(other[:, None], nodes[None, :])
        b = surf.position(other[:, None], nodes[None, :] + period)
    return float(np.max(np.abs(a - b)))


def sample(surf: StarSurface, t_range=None, s_range=None, nt: int = 101, ns: int = 101,
           wrap: bool = False) -> MeshGrid:
    """Uniform grid of positions with singular nodes masked.

    With ``wrap`` set, a direction whose range spans exactly one period of
    its curve is sampled without the duplicate end row and stitched back to
    the start, provided the surface really closes up there (gap < 1e-6).
    """
    if nt < 2 or ns < 2:
        raise DomainError("need nt, ns >= 2")
    t_range = tuple(t_range) if t_range is not None else tuple(surf.alpha.window)
    s_range = tuple(s_range) if s_range is not None else tuple(surf.omega.window)
    for rng in (t_range, s_range):
        if not rng[0] < rng[1]:
            raise DomainError(f"empty parameter range {rng}")

    def stitchable(curve, rng):
        T = curve.period
        return wrap and T is not None and abs((rng[1] - rng[0]) - T) < 1e-9 * max(1.0, T)

    wrap_t = stitchable(surf.alpha, t_range)
    wrap_s = stitchable(surf.omega, s_range)
    t = np.linspace(*t_range, nt, endpoint=not wrap_t)
    s = np.linspace(*s_range, ns, endpoint=not wrap_s)
    if wrap_t:
        wrap_t = _wrap_residual(surf, "t", t, s, surf.alpha.period) < WRAP_TOL
        if not wrap_t:
            t = np.linspace(*t_range, nt)
    if wrap_s:
        wrap_s = _wrap_residual(surf, "s", s, t, surf.omega.period) < WRAP_TOL
        if not wrap_s:
            s = np.linspace(*s_range, ns)

    pts = to_r4(surf.position(t[:, None], s[None, :]))
    mask = surf.singular_mask(t[:, None], s[None, :])
    return MeshGrid(t, s, pts, np.asarray(mask, dtype=bool), wrap_t, wrap_s)


def project(mesh: MeshGrid, drop_axis: int) -> MeshGrid:
    """Drop one real coordinate of an R^4 mesh."""
    if mesh.dim != 4:
        raise DomainError("projection needs an R^4 mesh")
    if drop_axis not in (0, 1, 2, 3):
        raise DomainError(f"drop_axis must be 0..3, got {drop_axis!r}")
    pts = np.delete(mesh.points, drop_axis, axis=-1)
    return replace(mesh, points=pts, dropped_axis=drop_axis)


def _open(path):
    path = Path(path)
    try:
        return path.open("w", newline="\n")
    except OSError as exc:
        raise MeshIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _need3(mesh):
    if mesh.dim != 3:
        raise DomainError("OBJ/PLY export needs a 3-D mesh; project() first")


def write_obj(mesh: MeshGrid, path) -> Path:
    _need3(mesh)
    path = Path(path)
    faces = mesh.faces() + 1
    with _open(path) as fh:
        for x, y, z in mesh.vertices():
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c, d in faces:
            fh.write(f"f {a} {b} {c} {d}\n")
    return path


def write_ply(mesh: MeshGrid, path) -> Path:
    _need3(mesh)
    path = Path(path)
    verts = mesh.vertices()
    faces = mesh.faces()
    with _open(path) as fh:
        fh.write("ply\nformat ascii 1.0\n")
        fh.write(f"element vertex {len(verts)}\n")
        fh.write("property double x\nproperty double y\nproperty double z\n")
        fh.write(f"element face {len(faces)}\n")
        fh.write("property list uchar int vertex_indices\nend_header\n")
        for x, y, z in verts:
            fh.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c, d in faces:
            fh.write(f"4 {a} {b} {c} {d}\n")
    return path


def write_csv(mesh: MeshGrid, path) -> Path:
    """One row per grid node: t, s, the four R^4 coordinates, mask flag."""
    if mesh.dim != 4:
        raise DomainError("CSV export writes the full R^4 mesh")
    path = Path(path)
    with _open(path) as fh:
        fh.write("t,s," + ",".join(COORD_NAMES) + ",mask\n")
        for i, t in enumerate(mesh.t):
            for j, s in enumerate(mesh.s):
                p = mesh.points[i, j]
                vals = ",".join(f"{v:.17g}" for v in (t, s, *p))
                fh.write(f"{vals},{int(mesh.mask[i, j])}\n")
    return path


WRITERS = {"obj": write_obj, "ply": write_ply}
