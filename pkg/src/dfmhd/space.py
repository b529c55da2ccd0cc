"""Degree-k H(div) vector space on a structured mesh.

Fields are represented by one coefficient per global DOF.  Facet DOFs
(normal-trace Legendre moments) are shared between the two incident elements,
which makes the normal component single-valued across every facet; interior
moments are private to each element.  The reference-to-physical map is
axis-aligned affine with contravariant (flux-preserving) scaling, so the
tabulated physical basis values are identical for every element of the
uniform mesh.

Global DOF layout: vertical-facet DOFs, horizontal-facet DOFs, interior DOFs.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import reference
from .mesh import StructuredMesh, WALL
from .reference import ReferenceBasis, gauss_rule, legendre_table, scalar_tensor_table, tensor_rule


@dataclass
class VolumeRule:
    pts: np.ndarray    # (nq, 2) reference points
    w: np.ndarray      # (nq,) physical weights
    phi: np.ndarray    # (nq, nloc, 2) physical values
    gphi: np.ndarray   # (nq, nloc, 2, 2), gphi[q,l,i,j] = d_j phi_i
    div: np.ndarray    # (nq, nloc)


@dataclass
class FacetRule:
    t: np.ndarray      # (m,) 1D reference points
    w1d: np.ndarray    # (m,) reference weights
    w_v: np.ndarray    # (m,) physical weights on vertical facets
    w_h: np.ndarray
    val: np.ndarray    # (4, m, nloc, 2) physical traces per local edge
    grad: np.ndarray   # (4, m, nloc, 2, 2)


@dataclass
class CoefficientVector:
    """Coefficients of a discrete vector field."""

    values: np.ndarray
    space: "RTSpace"

    def copy(self):
        return CoefficientVector(self.values.copy(), self.space)

    def __len__(self):
        return self.values.size


def coeff_values(u):
    """Unwrap a CoefficientVector (or pass an array through)."""
    return u.values if isinstance(u, CoefficientVector) else np.asarray(u)


@dataclass
class PressureSpace:
    """Discontinuous elementwise tensor-polynomial scalars of degree k."""

    mesh: StructuredMesh
    k: int

    @property
    def n_local(self):
        return (self.k + 1) ** 2

    @property
    def n_dofs(self):
        return self.mesh.n_elems * self.n_local


class RTSpace:
    """Finite element space; see build_space."""

    def __init__(self, mesh, k, strong_wall=True):
        if not 0 <= k <= 3:
            raise ValueError(f"degree k={k} not supported (expected 0 <= k <= 3)")
        self.mesh = mesh
        self.k = k
        self.strong_wall = strong_wall
        self.ref = ReferenceBasis(k)
        self.n_local = self.ref.n_local
        self.n_edge_dofs = k + 1
        self.n_interior_local = self.ref.n_interior

        self.n_facet_dofs = (mesh.n_vfacets + mesh.n_hfacets) * (k + 1)
        self.n_dofs = self.n_facet_dofs + mesh.n_elems * self.n_interior_local
        self._build_dof_map()
        self._build_rules()
        self._build_constraints()

    # ------------------------------------------------------------------ dofs

    def _build_dof_map(self):
        mesh, k = self.mesh, self.k
        nx, ny = mesh.nx, mesh.ny
        nvx = nx if mesh.bc_x == "periodic" else nx + 1
        nhy = ny if mesh.bc_y == "periodic" else ny + 1
        ix = np.arange(nx)
        iy = np.arange(ny)
        IX, IY = np.meshgrid(ix, iy)            # (ny, nx), row-major elements
        if mesh.bc_x == "periodic":
            left = IY * nvx + IX
            right = IY * nvx + (IX + 1) % nx
        else:
            left = IY * nvx + IX
            right = IY * nvx + IX + 1
        if mesh.bc_y == "periodic":
            bottom = IY * nx + IX
            top = ((IY + 1) % ny) * nx + IX
        else:
            bottom = IY * nx + IX
            top = (IY + 1) * nx + IX
        hoff = mesh.n_vfacets
        m = k + 1
        cell_facets = np.stack(
            [left.ravel(), right.ravel(), bottom.ravel() + hoff, top.ravel() + hoff], axis=1
        )  # (n_elems, 4) global facet ids in local edge order
        fd = cell_facets[:, :, None] * m + np.arange(m)[None, None, :]
        fd = fd.reshape(mesh.n_elems, 4 * m)
        nint = self.n_interior_local
        idof = self.n_facet_dofs + np.arange(mesh.n_elems)[:, None] * nint + np.arange(nint)[None, :]
        self.cell_dofs = np.concatenate([fd, idof], axis=1).astype(np.int64)
        self.cell_facets = cell_facets

    def _build_constraints(self):
        mesh, m = self.mesh, self.k + 1
        constrained = []
        if self.strong_wall:
            wall_v = np.where(mesh.vfacet_elems.min(axis=1) < 0)[0]
            wall_h = np.where(mesh.hfacet_elems.min(axis=1) < 0)[0] + mesh.n_vfacets
            for f in np.concatenate([wall_v, wall_h]):
                constrained.extend(range(f * m, (f + 1) * m))
        self.constrained_dofs = np.array(sorted(constrained), dtype=np.int64)
        self.free_mask = np.ones(self.n_dofs, dtype=bool)
        self.free_mask[self.constrained_dofs] = False
        self.n_free = int(self.free_mask.sum())

    # ----------------------------------------------------------- tabulations

    def _volume_rule(self, n):
        pts, w = tensor_rule(n)
        val, grad, div = self.ref.tabulate(pts)
        hx, hy = self.mesh.hx, self.mesh.hy
        phi = val / np.array([hy, hx])
        scale = 1.0 / np.array([[hy * hx, hy * hy], [hx * hx, hx * hy]])
        gphi = grad * scale
        return VolumeRule(pts=pts, w=w * hx * hy, phi=np.ascontiguousarray(phi),
                          gphi=np.ascontiguousarray(gphi),
                          div=np.ascontiguousarray(div / (hx * hy)))

    def _facet_rule(self, n):
        t, w = gauss_rule(n)
        hx, hy = self.mesh.hx, self.mesh.hy
        z = np.zeros(n)
        o = np.ones(n)
        edges = [np.column_stack([z, t]), np.column_stack([o, t]),
                 np.column_stack([t, z]), np.column_stack([t, o])]
        val = np.empty((4, n, self.n_local, 2))
        grad = np.empty((4, n, self.n_local, 2, 2))
        scale = 1.0 / np.array([[hy * hx, hy * hy], [hx * hx, hx * hy]])
        for e, pts in enumerate(edges):
            v, g, _ = self.ref.tabulate(pts)
            val[e] = v / np.array([hy, hx])
            grad[e] = g * scale
        return FacetRule(t=t, w1d=w, w_v=w * hy, w_h=w * hx,
                         val=np.ascontiguousarray(val), grad=np.ascontiguousarray(grad))

    def _build_rules(self):
        k = self.k
        self.vol_exact = self._volume_rule(k + 2)    # mass/divergence integrands
        self.vol_conv = self._volume_rule(k + 3)     # cubic state products
        self.vol_fine = self._volume_rule(k + 4)     # non-polynomial data
        self.facet_exact = self._facet_rule(k + 2)
        self.facet_conv = self._facet_rule(k + 3)
        self.pressure_exact = scalar_tensor_table(self.vol_exact.pts, k)

    def element_coords(self, pts_ref):
        """Physical coordinates of reference points in every element: (n_e, nq) x and y."""
        ex, ey = self.mesh.elem_origin(np.arange(self.mesh.n_elems))
        X = ex[:, None] + pts_ref[None, :, 0] * self.mesh.hx
        Y = ey[:, None] + pts_ref[None, :, 1] * self.mesh.hy
        return X, Y

    # ------------------------------------------------------------ operations

    def zero_coeffs(self):
        return CoefficientVector(np.zeros(self.n_dofs), self)

    def interior_vfacets(self):
        return np.where(self.mesh.vfacet_elems.min(axis=1) >= 0)[0]

    def interior_hfacets(self):
        return np.where(self.mesh.hfacet_elems.min(axis=1) >= 0)[0]


def build_space(mesh, k, strong_wall=True):
    """Build the degree-k H(div) space on a mesh.

    With strong_wall set, normal DOFs on wall facets are constrained to zero
    (slip condition) and removed from all solves.
    """
    return RTSpace(mesh, k, strong_wall=strong_wall)


def interpolate(space, f):
    """Canonical interpolant of a vector function f(x, y) -> (2, ...) array."""
    mesh, k = space.mesh, space.k
    m = k + 1
    nq = k + 4
    tq, wq = gauss_rule(nq)
    Lq = legendre_table(tq, k)
    coeffs = np.zeros(space.n_dofs)

    # vertical facets: moments of the x-component along the facet
    ix_line, iy_cell = mesh.vfacet_pos[:, 0], mesh.vfacet_pos[:, 1]
    X = np.repeat((mesh.x0 + ix_line * mesh.hx)[:, None], nq, axis=1)
    Y = mesh.y0 + (iy_cell[:, None] + tq[None, :]) * mesh.hy
    fx = np.asarray(f(X, Y))[0]
    vmom = mesh.hy * np.einsum("q,fq,qi->fi", wq, fx, Lq)
    coeffs[: mesh.n_vfacets * m] = vmom.ravel()

    ix_cell, iy_line = mesh.hfacet_pos[:, 0], mesh.hfacet_pos[:, 1]
    X = mesh.x0 + (ix_cell[:, None] + tq[None, :]) * mesh.hx
    Y = np.repeat((mesh.y0 + iy_line * mesh.hy)[:, None], nq, axis=1)
    fy = np.asarray(f(X, Y))[1]
    hmom = mesh.hx * np.einsum("q,fq,qi->fi", wq, fy, Lq)
    coeffs[mesh.n_vfacets * m : space.n_facet_dofs] = hmom.ravel()

    if k >= 1:
        pts, w2 = tensor_rule(nq)
        X, Y = space.element_coords(pts)
        fv = np.asarray(f(X, Y))           # (2, n_e, nq2)
        Lx = legendre_table(pts[:, 0], k)
        Ly = legendre_table(pts[:, 1], k)
        Wx = np.einsum("qi,qj->qij", Lx[:, :k], Ly).reshape(len(w2), -1)
        Wy = np.einsum("qi,qj->qij", Lx, Ly[:, :k]).reshape(len(w2), -1)
        cx = mesh.hy * np.einsum("q,eq,qm->em", w2, fv[0], Wx)
        cy = mesh.hx * np.einsum("q,eq,qm->em", w2, fv[1], Wy)
        interior = np.concatenate([cx, cy], axis=1).ravel()
        coeffs[space.n_facet_dofs :] = interior

    coeffs[space.constrained_dofs] = 0.0
    return CoefficientVector(coeffs, space)


def eval_field(space, coeffs, elem, ref_points):
    """Value, gradient and divergence of the field at reference points of an element.

    ref_points may be a single (2,) point or an (m, 2) array; results drop the
    leading axis for a single point.  gradient[i, j] is d_j of component i and
    divergence equals its trace.
    """
    if not 0 <= elem < space.mesh.n_elems:
        raise ValueError(f"element {elem} out of range")
    vals = coeff_values(coeffs)
    pts = np.asarray(ref_points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    val, grad, div = space.ref.tabulate(pts)
    hx, hy = space.mesh.hx, space.mesh.hy
    scale = 1.0 / np.array([[hy * hx, hy * hy], [hx * hx, hx * hy]])
    c = vals[space.cell_dofs[elem]]
    v = np.einsum("l,qlc->qc", c, val) / np.array([hy, hx])
    g = np.einsum("l,qlij->qij", c, grad) * scale
    d = np.einsum("l,ql->q", c, div) / (hx * hy)
    if single:
        return v[0], g[0], d[0]
    return v, g, d


def assemble_mass(space):
    """Global mass matrix (CSR), M_ij = integral of phi_i . phi_j."""
    r = space.vol_exact
    M_loc = np.einsum("q,qlc,qmc->lm", r.w, r.phi, r.phi)
    return _scatter_block(space, M_loc)


def assemble_div(space, pspace):
    """Divergence pairing (CSR, n_pressure x n_dofs): (div v, q) per pressure basis q."""
    if pspace.k != space.k or pspace.mesh is not space.mesh:
        raise ValueError("pressure space does not match the vector space")
    r = space.vol_exact
    D_loc = np.einsum("q,ql,qp->pl", r.w, r.div, space.pressure_exact)
    ne, npl, nloc = space.mesh.n_elems, pspace.n_local, space.n_local
    rows = (np.arange(ne)[:, None, None] * npl + np.arange(npl)[None, :, None])
    rows = np.broadcast_to(rows, (ne, npl, nloc)).ravel()
    cols = np.broadcast_to(space.cell_dofs[:, None, :], (ne, npl, nloc)).ravel()
    data = np.broadcast_to(D_loc[None, :, :], (ne, npl, nloc)).ravel()
    D = sp.coo_matrix((data, (rows, cols)), shape=(pspace.n_dofs, space.n_dofs))
    return D.tocsr()


def _scatter_block(space, block):
    """Scatter one element-local (nloc, nloc) block into the global sparse matrix."""
    ne, nloc = space.mesh.n_elems, space.n_local
    rows = np.broadcast_to(space.cell_dofs[:, :, None], (ne, nloc, nloc)).ravel()
    cols = np.broadcast_to(space.cell_dofs[:, None, :], (ne, nloc, nloc)).ravel()
    data = np.broadcast_to(block[None, :, :], (ne, nloc, nloc)).ravel()
    A = sp.coo_matrix((data, (rows, cols)), shape=(space.n_dofs, space.n_dofs))
    return A.tocsr()


def l2_error(space, coeffs, exact):
    """L2 distance between the discrete field and exact(x, y) -> (2, ...)."""
    vals = coeff_values(coeffs)
    r = space.vol_fine
    X, Y = space.element_coords(r.pts)
    ex = np.asarray(exact(X, Y))
    gathered = vals[space.cell_dofs]
    uh = np.einsum("el,qlc->ecq", gathered, r.phi)
    diff = uh - np.stack([ex[0], ex[1]], axis=1)
    return float(np.sqrt(np.einsum("q,ecq->", r.w, diff**2)))


def l2_norm(space, coeffs):
    vals = coeff_values(coeffs)
    r = space.vol_exact
    gathered = vals[space.cell_dofs]
    uh = np.einsum("el,qlc->ecq", gathered, r.phi)
    return float(np.sqrt(np.einsum("q,ecq->", r.w, uh**2)))
