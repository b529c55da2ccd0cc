"""Numba-jitted residual kernels; semantics match numpy_backend exactly."""

import numpy as np
from numba import njit

name = "numba"


@njit(cache=True)
def conv_volume(cell_dofs, u, B, phi, gphi, w, fu, fB):
    ne, nloc = cell_dofs.shape
    nq = w.shape[0]
    ul = np.empty(nloc)
    Bl = np.empty(nloc)
    for e in range(ne):
        for l in range(nloc):
            g = cell_dofs[e, l]
            ul[l] = u[g]
            Bl[l] = B[g]
        for q in range(nq):
            ux = 0.0; uy = 0.0; bx = 0.0; by = 0.0
            for l in range(nloc):
                px = phi[q, l, 0]
                py = phi[q, l, 1]
                ux += ul[l] * px
                uy += ul[l] * py
                bx += Bl[l] * px
                by += Bl[l] * py
            wq = w[q]
            s00 = wq * (ux * ux - bx * bx)
            s01 = wq * (ux * uy - bx * by)
            s10 = wq * (uy * ux - by * bx)
            s11 = wq * (uy * uy - by * by)
            t01 = wq * (bx * uy - ux * by)
            t10 = -t01
            for l in range(nloc):
                g = cell_dofs[e, l]
                fu[g] += (s00 * gphi[q, l, 0, 0] + s01 * gphi[q, l, 0, 1]
                          + s10 * gphi[q, l, 1, 0] + s11 * gphi[q, l, 1, 1])
                fB[g] += t01 * gphi[q, l, 0, 1] + t10 * gphi[q, l, 1, 0]


@njit(cache=True)
def conv_facet(e0, e1, cell_dofs, u, B, phi0, phi1, w, nax, fu, fB):
    nf = e0.shape[0]
    nq, nloc = phi0.shape[0], phi0.shape[1]
    u0l = np.empty(nloc)
    u1l = np.empty(nloc)
    B0l = np.empty(nloc)
    B1l = np.empty(nloc)
    for f in range(nf):
        a0 = e0[f]
        a1 = e1[f]
        for l in range(nloc):
            g0 = cell_dofs[a0, l]
            g1 = cell_dofs[a1, l]
            u0l[l] = u[g0]
            u1l[l] = u[g1]
            B0l[l] = B[g0]
            B1l[l] = B[g1]
        for q in range(nq):
            u0x = 0.0; u0y = 0.0; u1x = 0.0; u1y = 0.0
            b0x = 0.0; b0y = 0.0; b1x = 0.0; b1y = 0.0
            for l in range(nloc):
                p0x = phi0[q, l, 0]; p0y = phi0[q, l, 1]
                p1x = phi1[q, l, 0]; p1y = phi1[q, l, 1]
                u0x += u0l[l] * p0x; u0y += u0l[l] * p0y
                u1x += u1l[l] * p1x; u1y += u1l[l] * p1y
                b0x += B0l[l] * p0x; b0y += B0l[l] * p0y
                b1x += B1l[l] * p1x; b1y += B1l[l] * p1y
            if nax == 0:
                un = 0.5 * (u0x + u1x)
                bn = 0.5 * (b0x + b1x)
            else:
                un = 0.5 * (u0y + u1y)
                bn = 0.5 * (b0y + b1y)
            su = np.sign(un)
            sb = np.sign(bn)
            jux = u0x - u1x; juy = u0y - u1y
            jbx = b0x - b1x; jby = b0y - b1y
            mux = 0.5 * (u0x + u1x); muy = 0.5 * (u0y + u1y)
            mbx = 0.5 * (b0x + b1x); mby = 0.5 * (b0y + b1y)
            wq = w[q]
            cux = wq * (bn * (mbx - 0.5 * sb * jux) - un * (mux + 0.5 * su * jux))
            cuy = wq * (bn * (mby - 0.5 * sb * juy) - un * (muy + 0.5 * su * juy))
            cBx = wq * (bn * (mux - 0.5 * sb * jbx) - un * (mbx + 0.5 * su * jbx))
            cBy = wq * (bn * (muy - 0.5 * sb * jby) - un * (mby + 0.5 * su * jby))
            for l in range(nloc):
                g0 = cell_dofs[a0, l]
                g1 = cell_dofs[a1, l]
                fu[g0] += cux * phi0[q, l, 0] + cuy * phi0[q, l, 1]
                fu[g1] -= cux * phi1[q, l, 0] + cuy * phi1[q, l, 1]
                fB[g0] += cBx * phi0[q, l, 0] + cBy * phi0[q, l, 1]
                fB[g1] -= cBx * phi1[q, l, 0] + cBy * phi1[q, l, 1]
