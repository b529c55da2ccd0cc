"""Vectorized numpy implementation of the residual kernels.

Reference semantics for both backends.  All kernels accumulate into the
global dual vectors fu/fB passed in.

Facet convention: side 0 is the element the fixed global facet normal points
out of, side 1 the one it points into.  Jumps are side0 - side1.  The upwind
trace of a quantity transported by the field w is mean + 0.5*sign(w.n)*jump;
the stabilized fluxes of the cross-transport pair are mean - 0.5*sign(B.n)
times the jump of the partner field, which is the pointwise form of the
sign-switch flux (the two orientation flips cancel algebraically).
"""

import numpy as np

name = "numpy"


def conv_volume(cell_dofs, u, B, phi, gphi, w, fu, fB):
    gu = u[cell_dofs]
    gB = B[cell_dofs]
    uq = np.einsum("el,qlc->eqc", gu, phi)
    Bq = np.einsum("el,qlc->eqc", gB, phi)
    # S[e,q,i,j] multiplies d_j test_i: momentum gets u_i u_j - B_i B_j,
    # induction gets B_i u_j - u_i B_j
    S = uq[:, :, :, None] * uq[:, :, None, :] - Bq[:, :, :, None] * Bq[:, :, None, :]
    T = Bq[:, :, :, None] * uq[:, :, None, :] - uq[:, :, :, None] * Bq[:, :, None, :]
    ru = np.einsum("q,eqij,qlij->el", w, S, gphi)
    rB = np.einsum("q,eqij,qlij->el", w, T, gphi)
    np.add.at(fu, cell_dofs, ru)
    np.add.at(fB, cell_dofs, rB)


def conv_facet(e0, e1, cell_dofs, u, B, phi0, phi1, w, nax, fu, fB):
    d0 = cell_dofs[e0]
    d1 = cell_dofs[e1]
    u0 = np.einsum("fl,qlc->fqc", u[d0], phi0)
    u1 = np.einsum("fl,qlc->fqc", u[d1], phi1)
    B0 = np.einsum("fl,qlc->fqc", B[d0], phi0)
    B1 = np.einsum("fl,qlc->fqc", B[d1], phi1)
    un = 0.5 * (u0[:, :, nax] + u1[:, :, nax])
    bn = 0.5 * (B0[:, :, nax] + B1[:, :, nax])
    su = np.sign(un)[:, :, None]
    sb = np.sign(bn)[:, :, None]
    ju = u0 - u1
    jB = B0 - B1
    mu = 0.5 * (u0 + u1)
    mB = 0.5 * (B0 + B1)
    flux_uu = mu + 0.5 * su * ju
    flux_ub = mB + 0.5 * su * jB
    flux_bb = mB - 0.5 * sb * ju
    flux_bu = mu - 0.5 * sb * jB
    cu = w[None, :, None] * (bn[:, :, None] * flux_bb - un[:, :, None] * flux_uu)
    cB = w[None, :, None] * (bn[:, :, None] * flux_bu - un[:, :, None] * flux_ub)
    np.add.at(fu, d0, np.einsum("fqc,qlc->fl", cu, phi0))
    np.add.at(fu, d1, -np.einsum("fqc,qlc->fl", cu, phi1))
    np.add.at(fB, d0, np.einsum("fqc,qlc->fl", cB, phi0))
    np.add.at(fB, d1, -np.einsum("fqc,qlc->fl", cB, phi1))
