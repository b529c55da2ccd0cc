"""Uniform rectangular meshes with per-axis periodic or wall boundaries.

Facets carry a fixed global unit normal (+x for vertical facets, +y for
horizontal ones).  Vertical facets are numbered first, then horizontal; each
interior facet stores the element on the side the normal points away from
("side 0") and the element it points into ("side 1").  Wall facets store a
single incidence with -1 in the missing slot.
"""

from dataclasses import dataclass, field

import numpy as np

PERIODIC = "periodic"
WALL = "wall"

# local face ids within an element
FACE_LEFT, FACE_RIGHT, FACE_BOTTOM, FACE_TOP = 0, 1, 2, 3


@dataclass(frozen=True)
class StructuredMesh:
    nx: int
    ny: int
    x0: float
    x1: float
    y0: float
    y1: float
    bc_x: str
    bc_y: str
    hx: float
    hy: float
    h: float
    n_elems: int
    n_vfacets: int
    n_hfacets: int
    vfacet_elems: np.ndarray = field(repr=False)  # (n_vfacets, 2): [side0, side1]
    hfacet_elems: np.ndarray = field(repr=False)
    vfacet_pos: np.ndarray = field(repr=False)    # (n_vfacets, 2): (ix_line, iy_cell)
    hfacet_pos: np.ndarray = field(repr=False)

    @property
    def n_facets(self):
        return self.n_vfacets + self.n_hfacets

    @property
    def n_wall_facets(self):
        nv = int(np.sum(self.vfacet_elems.min(axis=1) < 0))
        nh = int(np.sum(self.hfacet_elems.min(axis=1) < 0))
        return nv + nh

    def elem_index(self, ix, iy):
        return iy * self.nx + ix

    def elem_origin(self, e):
        """Lower-left corner of element e."""
        e = np.asarray(e)
        ix, iy = e % self.nx, e // self.nx
        return self.x0 + ix * self.hx, self.y0 + iy * self.hy


def build_mesh(nx, ny, bounds, bc_x=PERIODIC, bc_y=PERIODIC):
    """Build a uniform nx-by-ny mesh of the box bounds=(x0, x1, y0, y1)."""
    if nx < 1 or ny < 1:
        raise ValueError(f"element counts must be positive, got nx={nx}, ny={ny}")
    x0, x1, y0, y1 = map(float, bounds)
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"degenerate bounds {bounds}")
    for bc in (bc_x, bc_y):
        if bc not in (PERIODIC, WALL):
            raise ValueError(f"unknown boundary kind {bc!r}")
    hx = (x1 - x0) / nx
    hy = (y1 - y0) / ny
    n_elems = nx * ny

    def eid(ix, iy):
        return (iy % ny) * nx + (ix % nx)

    # vertical facets: lines x = x0 + i*hx; i in [0, nx) periodic, [0, nx] wall
    nvx = nx if bc_x == PERIODIC else nx + 1
    vfacet_elems = np.empty((nvx * ny, 2), dtype=np.int64)
    vfacet_pos = np.empty((nvx * ny, 2), dtype=np.int64)
    for iy in range(ny):
        for i in range(nvx):
            f = iy * nvx + i
            vfacet_pos[f] = (i, iy)
            left = eid(i - 1, iy) if (bc_x == PERIODIC or i > 0) else -1
            right = eid(i, iy) if (bc_x == PERIODIC or i < nx) else -1
            vfacet_elems[f] = (left, right)

    nhy = ny if bc_y == PERIODIC else ny + 1
    hfacet_elems = np.empty((nx * nhy, 2), dtype=np.int64)
    hfacet_pos = np.empty((nx * nhy, 2), dtype=np.int64)
    for j in range(nhy):
        for ix in range(nx):
            f = j * nx + ix
            hfacet_pos[f] = (ix, j)
            below = eid(ix, j - 1) if (bc_y == PERIODIC or j > 0) else -1
            above = eid(ix, j) if (bc_y == PERIODIC or j < ny) else -1
            hfacet_elems[f] = (below, above)

    return StructuredMesh(
        nx=nx, ny=ny, x0=x0, x1=x1, y0=y0, y1=y1, bc_x=bc_x, bc_y=bc_y,
        hx=hx, hy=hy, h=max(hx, hy), n_elems=n_elems,
        n_vfacets=nvx * ny, n_hfacets=nx * nhy,
        vfacet_elems=vfacet_elems, hfacet_elems=hfacet_elems,
        vfacet_pos=vfacet_pos, hfacet_pos=hfacet_pos,
    )


def facet_neighbors(mesh, facet):
    """Both (element, local-face) incidences of a facet, ordered along the normal.

    Interior/periodic facets return two incidences; wall facets return the
    single incidence with the WALL tag in the empty slot.
    """
    if not 0 <= facet < mesh.n_facets:
        raise ValueError(f"facet id {facet} out of range [0, {mesh.n_facets})")
    if facet < mesh.n_vfacets:
        side0, side1 = mesh.vfacet_elems[facet]
        faces = (FACE_RIGHT, FACE_LEFT)
    else:
        side0, side1 = mesh.hfacet_elems[facet - mesh.n_vfacets]
        faces = (FACE_TOP, FACE_BOTTOM)
    first = WALL if side0 < 0 else (int(side0), faces[0])
    second = WALL if side1 < 0 else (int(side1), faces[1])
    return first, second
