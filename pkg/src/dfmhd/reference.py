"""Reference-element machinery: Gauss rules, shifted Legendre tables, and the
rectangular H(div) vector element of degree k.

Everything here lives on the unit square [0,1]^2.  The element couples an
x-component of bidegree (k+1, k) with a y-component of bidegree (k, k+1).
Degrees of freedom are Legendre moments of the normal trace on the four edges
(k+1 per edge) plus interior Legendre moments of each component, which makes
the normal trace on any edge single-valued once edge DOFs are shared between
neighbouring elements.
"""

import numpy as np

EDGE_LEFT, EDGE_RIGHT, EDGE_BOTTOM, EDGE_TOP = 0, 1, 2, 3


def gauss_rule(n):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def legendre_table(t, nmax):
    """Shifted Legendre values P_0..P_nmax at points t in [0,1], shape (len(t), nmax+1)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = 2.0 * t - 1.0
    out = np.empty((t.size, nmax + 1))
    out[:, 0] = 1.0
    if nmax >= 1:
        out[:, 1] = s
    for n in range(1, nmax):
        out[:, n + 1] = ((2 * n + 1) * s * out[:, n] - n * out[:, n - 1]) / (n + 1)
    return out


def legendre_deriv_table(t, nmax):
    """d/dt of the shifted Legendre polynomials, same layout as legendre_table."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    val = legendre_table(t, nmax)
    out = np.zeros((t.size, nmax + 1))
    if nmax >= 1:
        out[:, 1] = 2.0
    for n in range(1, nmax):
        # P'_{n+1} = P'_{n-1} + (2n+1) P_n, times chain factor 2 already in out[:,1]
        out[:, n + 1] = out[:, n - 1] + 2.0 * (2 * n + 1) * val[:, n]
    return out


def tensor_rule(n):
    """Tensor Gauss rule on the unit square: points (n*n, 2) and weights (n*n,)."""
    t, w = gauss_rule(n)
    X, Y = np.meshgrid(t, t, indexing="ij")
    W = np.outer(w, w)
    return np.column_stack([X.ravel(), Y.ravel()]), W.ravel()


class ReferenceBasis:
    """Nodal basis of the degree-k rectangular H(div) element on [0,1]^2.

    Local DOF order: left edge (k+1 moments), right, bottom, top, then
    interior x-component moments (k*(k+1)) and interior y-component moments
    ((k+1)*k).  Total 2*(k+1)*(k+2).
    """

    def __init__(self, k):
        if not 0 <= k <= 3:
            raise ValueError(f"degree k={k} not supported (expected 0 <= k <= 3)")
        self.k = k
        self.n_edge_dofs = k + 1
        self.n_interior = 2 * k * (k + 1)
        self.n_local = 2 * (k + 1) * (k + 2)
        # primal monomial-free basis: tensor Legendre products per component
        self._npx = (k + 2) * (k + 1)   # x-component: degree k+1 in x, k in y
        self._npy = (k + 1) * (k + 2)
        self._coeffs = self._build_coeffs()

    # -- primal tables ---------------------------------------------------

    def _primal_tables(self, pts, derivs=False):
        k = self.k
        x, y = pts[:, 0], pts[:, 1]
        Px = legendre_table(x, k + 1)
        Py = legendre_table(y, k + 1)
        # x-family: a <= k+1 (in x), b <= k (in y); y-family mirrored
        Tx = np.einsum("pa,pb->pab", Px[:, : k + 2], Py[:, : k + 1]).reshape(len(x), -1)
        Ty = np.einsum("pa,pb->pab", Px[:, : k + 1], Py[:, : k + 2]).reshape(len(x), -1)
        if not derivs:
            return Tx, Ty
        dPx = legendre_deriv_table(x, k + 1)
        dPy = legendre_deriv_table(y, k + 1)
        Tx_x = np.einsum("pa,pb->pab", dPx[:, : k + 2], Py[:, : k + 1]).reshape(len(x), -1)
        Tx_y = np.einsum("pa,pb->pab", Px[:, : k + 2], dPy[:, : k + 1]).reshape(len(x), -1)
        Ty_x = np.einsum("pa,pb->pab", dPx[:, : k + 1], Py[:, : k + 2]).reshape(len(x), -1)
        Ty_y = np.einsum("pa,pb->pab", Px[:, : k + 1], dPy[:, : k + 2]).reshape(len(x), -1)
        return Tx, Ty, Tx_x, Tx_y, Ty_x, Ty_y

    # -- DOF functionals -------------------------------------------------

    def _build_coeffs(self):
        k = self.k
        n = self.n_local
        nq = k + 2
        tq, wq = gauss_rule(nq)
        Lq = legendre_table(tq, k)          # edge moment weights
        V = np.zeros((n, n))

        def edge_points(edge):
            pts = np.empty((nq, 2))
            if edge == EDGE_LEFT:
                pts[:, 0], pts[:, 1] = 0.0, tq
            elif edge == EDGE_RIGHT:
                pts[:, 0], pts[:, 1] = 1.0, tq
            elif edge == EDGE_BOTTOM:
                pts[:, 0], pts[:, 1] = tq, 0.0
            else:
                pts[:, 0], pts[:, 1] = tq, 1.0
            return pts

        row = 0
        for edge in (EDGE_LEFT, EDGE_RIGHT, EDGE_BOTTOM, EDGE_TOP):
            Tx, Ty = self._primal_tables(edge_points(edge))
            trace = Tx if edge in (EDGE_LEFT, EDGE_RIGHT) else Ty
            block = np.einsum("q,qi,qp->ip", wq, Lq, trace)  # (k+1, nprim_component)
            if edge in (EDGE_LEFT, EDGE_RIGHT):
                V[row : row + k + 1, : self._npx] = block
            else:
                V[row : row + k + 1, self._npx :] = block
            row += k + 1

        if k >= 1:
            pts2, w2 = tensor_rule(k + 2)
            Tx, Ty = self._primal_tables(pts2)
            Lx = legendre_table(pts2[:, 0], k)
            Ly = legendre_table(pts2[:, 1], k)
            # x-component moments against degree (k-1, k) products
            for i in range(k):
                for j in range(k + 1):
                    V[row, : self._npx] = np.einsum("q,q,qp->p", w2 * Lx[:, i], Ly[:, j], Tx)
                    row += 1
            for i in range(k + 1):
                for j in range(k):
                    V[row, self._npx :] = np.einsum("q,q,qp->p", w2 * Lx[:, i], Ly[:, j], Ty)
                    row += 1
        assert row == n
        cond = np.linalg.cond(V)
        if not np.isfinite(cond) or cond > 1e12:
            raise RuntimeError(f"degenerate DOF set for k={self.k} (cond={cond:.2e})")
        return np.linalg.inv(V)

    # -- evaluation -------------------------------------------------------

    def tabulate(self, pts):
        """Values, gradients and divergence of all basis functions at reference points.

        Returns (val, grad, div) with shapes (npts, nloc, 2), (npts, nloc, 2, 2)
        and (npts, nloc); grad[p, m, i, j] is the j-derivative of component i.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        C = self._coeffs
        Cx, Cy = C[: self._npx, :], C[self._npx :, :]
        Tx, Ty, Tx_x, Tx_y, Ty_x, Ty_y = self._primal_tables(pts, derivs=True)
        npts = pts.shape[0]
        val = np.zeros((npts, self.n_local, 2))
        grad = np.zeros((npts, self.n_local, 2, 2))
        val[:, :, 0] = Tx @ Cx
        val[:, :, 1] = Ty @ Cy
        grad[:, :, 0, 0] = Tx_x @ Cx
        grad[:, :, 0, 1] = Tx_y @ Cx
        grad[:, :, 1, 0] = Ty_x @ Cy
        grad[:, :, 1, 1] = Ty_y @ Cy
        div = grad[:, :, 0, 0] + grad[:, :, 1, 1]
        return val, grad, div

    def edge_dof_slice(self, edge):
        """Local DOF indices owned by an edge."""
        m = self.n_edge_dofs
        return np.arange(edge * m, (edge + 1) * m)


def scalar_tensor_table(pts, k):
    """Tensor Legendre products L_i(x)L_j(y), i,j <= k, shape (npts, (k+1)^2)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    Lx = legendre_table(pts[:, 0], k)
    Ly = legendre_table(pts[:, 1], k)
    return np.einsum("pa,pb->pab", Lx, Ly).reshape(pts.shape[0], -1)
