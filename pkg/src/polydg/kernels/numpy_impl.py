"""Vectorized-numpy predictor backend.

Cells are grouped by face count so that every group shares its DoF maps
and array shapes; within a group all cells are advanced together with
batched einsum contractions.  This is the fallback path when numba is
unavailable (or disabled via POLYDG_BACKEND=numpy) and the reference
the numba kernels are tested against.
"""

import numpy as np

from .. import physics

STATUS_OK = 0
STATUS_INADMISSIBLE = 1
STATUS_DIVERGED = 2


class Context:
    def __init__(self, disc):
        ops = disc.ops
        self.disc = disc
        self.N = disc.N
        self.nt = len(ops.w_tau)
        self.M = ops.M
        self.c0 = ops.A_time_inv @ ops.psi0
        # combined back-propagation weights: B[a, b] = A_inv[a, b] * w_tau[b]
        self.B = ops.A_time_inv * ops.w_tau[None, :]
        self.groups = []
        nfs = np.unique(disc.cell_nf)
        for nf in nfs:
            cells = np.where(disc.cell_nf == nf)[0]
            nd = int(disc.dof_n[cells[0]])
            subs = disc.sub_off[cells]          # first subcell of each cell
            minv = np.stack([
                disc.minv_flat[disc.minv_off[c]:disc.minv_off[c] + nd * nd]
                .reshape(nd, nd) for c in cells])
            self.groups.append({
                "nf": int(nf), "nd": nd, "cells": cells,
                "doff": disc.dof_off[cells],
                "minv": minv,
                "detJ": np.stack([disc.sub_detJ[s:s + nf] for s in subs]),
                "inv": np.stack([disc.sub_inv[s:s + nf] for s in subs]),
                "submap": disc.sub_map[subs[0]:subs[0] + nf].copy(),
                "trmap": disc.tr_map[subs[0]:subs[0] + nf].copy(),
                "subs": subs,
            })


def prepare(disc):
    return Context(disc)


def _flux(q, gx, gy, gas, mu, kap):
    """Physical flux tensor at nodal states with per-cell viscosity."""
    grad = np.stack([gx, gy], axis=-1)
    F = physics.advective_flux(q, gas)
    if np.any(mu > 0) or np.any(kap > 0):
        F = F + physics.viscous_flux(q, grad, gas, mu=mu, kappa=kap)
    return F


def predict(ctx: Context, U, dt, mu_eff, kap_eff, gas, max_iter, tol):
    """Element-local space-time predictor for all cells.

    Returns (vol_rhs, tr_q, tr_Fn, qbar, iters, resid, status); the trace
    and flux outputs are time-integrated (they carry the factor dt).
    """
    disc = ctx.disc
    ops = disc.ops
    nt, M = ctx.nt, ctx.M
    nt1 = disc.gtr.shape[1]
    ndof = disc.n_dof_total
    nsub = len(disc.sub_detJ)

    vol_rhs = np.zeros((ndof, 4))
    qbar = np.zeros((ndof, 4))
    tr_q = np.zeros((nsub, nt1, 4))
    tr_Fn = np.zeros((nsub, nt1, 4))
    iters = np.zeros(disc.n_cells, dtype=np.int64)
    resid = np.zeros(disc.n_cells)
    status = np.zeros(disc.n_cells, dtype=np.int64)

    for g in ctx.groups:
        nf, nd, cells = g["nf"], g["nd"], g["cells"]
        C = len(cells)
        Ug = np.stack([U[o:o + nd] for o in g["doff"]])      # (C, nd, 4)
        mu = mu_eff[cells][:, None, None]
        kap = kap_eff[cells][:, None, None]
        scale = 1.0 + np.abs(Ug).max() if C else 1.0

        qhat = np.repeat(Ug[:, None], nt, axis=1)            # (C, nt, nd, 4)
        # nodal fluxes of the last Picard sweep, reused for the
        # time-integrated outputs below
        Fs = np.empty((C, nt, nf, M, 4, 2))
        it_g = 0
        res_g = np.full(C, np.inf)
        for it in range(max_iter):
            S = np.zeros((C, nt, nd, 4))
            bad = False
            for f in range(nf):
                sm = g["submap"][f]
                ql = qhat[:, :, sm, :]                        # (C, nt, M, 4)
                dxi = np.einsum("mk,ctkv->ctmv", ops.D_xi, ql)
                det = np.einsum("mk,ctkv->ctmv", ops.D_eta, ql)
                iv = g["inv"][:, f]                           # (C, 2, 2)
                gx = iv[:, None, None, 0, 0, None] * dxi + iv[:, None, None, 1, 0, None] * det
                gy = iv[:, None, None, 0, 1, None] * dxi + iv[:, None, None, 1, 1, None] * det
                rho = ql[..., 0]
                p = (gas.gamma - 1.0) * (ql[..., 3] - 0.5 * (ql[..., 1] ** 2 + ql[..., 2] ** 2) / rho)
                if np.any(rho <= 0) or np.any(p <= 0) or not np.isfinite(p).all():
                    badmask = ((rho <= 0) | (p <= 0) | ~np.isfinite(p)).any(axis=(1, 2))
                    status[cells[badmask]] = STATUS_INADMISSIBLE
                    bad = True
                F = _flux(ql, gx, gy, gas, mu, kap)           # (C, nt, M, 4, 2)
                Fs[:, :, f] = F
                fs_f = dt * (iv[:, None, None, 0, 0, None] * F[..., 0]
                             + iv[:, None, None, 0, 1, None] * F[..., 1])
                gs_f = dt * (iv[:, None, None, 1, 0, None] * F[..., 0]
                             + iv[:, None, None, 1, 1, None] * F[..., 1])
                Sf = (np.einsum("lk,ctkv->ctlv", ops.Kx_space, fs_f)
                      + np.einsum("lk,ctkv->ctlv", ops.Ky_space, gs_f))
                S[:, :, sm, :] += g["detJ"][:, f, None, None, None] * Sf
            if bad:
                break
            X = np.einsum("cij,ctjv->ctiv", g["minv"], S)
            qnew = (ctx.c0[None, :, None, None] * Ug[:, None]
                    - np.einsum("ab,cbiv->caiv", ctx.B, X))
            res_g = np.abs(qnew - qhat).max(axis=(1, 2, 3)) / scale
            qhat = qnew
            it_g = it + 1
            if res_g.max() <= tol:
                break
        iters[cells] = it_g
        resid[cells] = res_g
        diverged = (res_g > 1e-6) & (status[cells] == STATUS_OK)
        status[cells[diverged]] = STATUS_DIVERGED
        if np.any(status[cells] != STATUS_OK):
            continue

        qbar_g = dt * np.einsum("t,ctiv->civ", ops.w_tau, qhat)
        for c, o in enumerate(g["doff"]):
            qbar[o:o + nd] = qbar_g[c]

        # time-integrated outputs from the stored last-sweep fluxes (their
        # state differs from the converged one by at most the tolerance)
        vol_g = np.zeros((C, nd, 4))
        eref = ops.edge_ref
        for f in range(nf):
            sm = g["submap"][f]
            iv = g["inv"][:, f]
            F = Fs[:, :, f]
            fbar = dt * np.einsum("t,ctmv->cmv", ops.w_tau,
                                  iv[:, None, None, 0, 0, None] * F[..., 0]
                                  + iv[:, None, None, 0, 1, None] * F[..., 1])
            gbar = dt * np.einsum("t,ctmv->cmv", ops.w_tau,
                                  iv[:, None, None, 1, 0, None] * F[..., 0]
                                  + iv[:, None, None, 1, 1, None] * F[..., 1])
            Vf = (np.einsum("lk,ckv->clv", ops.V_xi, fbar)
                  + np.einsum("lk,ckv->clv", ops.V_eta, gbar))
            vol_g[:, sm, :] += g["detJ"][:, f, None, None] * Vf

            sidx = g["subs"] + f
            nrm = disc.face_nrm[sidx]                          # (C, 2)
            Fbar_e = dt * np.einsum("t,ctrvd->crvd", ops.w_tau, F[:, :, eref])
            tr_Fn[sidx] = (nrm[:, None, None, 0] * Fbar_e[..., 0]
                           + nrm[:, None, None, 1] * Fbar_e[..., 1])
            tr_q[sidx] = dt * np.einsum("t,ctrv->crv", ops.w_tau,
                                        qhat[:, :, g["trmap"][f], :])
        for c, o in enumerate(g["doff"]):
            vol_rhs[o:o + nd] = vol_g[c]

    return vol_rhs, tr_q, tr_Fn, qbar, iters, resid, status
