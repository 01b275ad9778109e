"""Numba-compiled predictor backend: scalar loops over cells and nodes."""

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_INADMISSIBLE = 1
STATUS_DIVERGED = 2


class Context:
    def __init__(self, disc):
        ops = disc.ops
        self.disc = disc
        self.c0 = ops.A_time_inv @ ops.psi0
        self.B = np.ascontiguousarray(ops.A_time_inv * ops.w_tau[None, :])
        self.args = (
            disc.dof_off, disc.dof_n, disc.cell_nf, disc.sub_off,
            disc.sub_detJ, disc.sub_inv, disc.sub_map, disc.tr_map,
            disc.face_nrm, disc.minv_off, disc.minv_flat,
            np.ascontiguousarray(ops.D_xi), np.ascontiguousarray(ops.D_eta),
            np.ascontiguousarray(ops.Kx_space), np.ascontiguousarray(ops.Ky_space),
            np.ascontiguousarray(ops.V_xi), np.ascontiguousarray(ops.V_eta),
            ops.w_tau, self.c0, self.B, ops.edge_ref)


def prepare(disc):
    return Context(disc)


@njit(cache=True, fastmath=True, inline="always")
def _node_flux(q, gx, gy, gamma, cv, mu, kap, Fx, Fy):
    """Physical flux columns at one nodal state; returns 0 if admissible."""
    rho = q[0]
    if rho <= 0.0 or not np.isfinite(rho):
        return 1
    u = q[1] / rho
    v = q[2] / rho
    p = (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v))
    if p <= 0.0 or not np.isfinite(p):
        return 1
    Fx[0] = q[1]
    Fx[1] = q[1] * u + p
    Fx[2] = q[2] * u
    Fx[3] = u * (q[3] + p)
    Fy[0] = q[2]
    Fy[1] = q[1] * v
    Fy[2] = q[2] * v + p
    Fy[3] = v * (q[3] + p)
    if mu > 0.0 or kap > 0.0:
        ux = (gx[1] - u * gx[0]) / rho
        vx = (gx[2] - v * gx[0]) / rho
        uy = (gy[1] - u * gy[0]) / rho
        vy = (gy[2] - v * gy[0]) / rho
        div = ux + vy
        txx = mu * ((2.0 / 3.0) * div - 2.0 * ux)
        tyy = mu * ((2.0 / 3.0) * div - 2.0 * vy)
        txy = -mu * (uy + vx)
        Es = q[3] / rho
        gEx = (gx[3] - Es * gx[0]) / rho
        gEy = (gy[3] - Es * gy[0]) / rho
        Tx = (gEx - (u * ux + v * vx)) / cv
        Ty = (gEy - (u * uy + v * vy)) / cv
        Fx[1] += txx
        Fx[2] += txy
        Fx[3] += u * txx + v * txy - kap * Tx
        Fy[1] += txy
        Fy[2] += tyy
        Fy[3] += u * txy + v * tyy - kap * Ty
    return 0


@njit(cache=True, fastmath=True)
def _predict_kernel(U, dt, mu_eff, kap_eff, gamma, cv,
                    dof_off, dof_n, cell_nf, sub_off, sub_detJ, sub_inv,
                    sub_map, tr_map, face_nrm, minv_off, minv_flat,
                    D_xi, D_eta, Kx, Ky, V_xi, V_eta, w_tau, c0, B, edge_ref,
                    max_iter, tol,
                    vol_rhs, tr_q, tr_Fn, qbar, iters, resid, status):
    nc = dof_off.shape[0]
    nt = w_tau.shape[0]
    M = D_xi.shape[0]
    nt1 = edge_ref.shape[0]

    for i in range(nc):
        nd = dof_n[i]
        off = dof_off[i]
        nf = cell_nf[i]
        s0 = sub_off[i]
        mu = mu_eff[i]
        kap = kap_eff[i]

        visc = mu > 0.0 or kap > 0.0

        qh = np.empty((nt, nd, 4))
        scale = 1.0
        for l in range(nd):
            for v in range(4):
                x = U[off + l, v]
                for a in range(nt):
                    qh[a, l, v] = x
                if abs(x) + 1.0 > scale:
                    scale = abs(x) + 1.0

        S = np.empty((nt, nd, 4))
        fsA = np.empty((M, 4))
        gsA = np.empty((M, 4))
        ql = np.empty((M, 4))
        gxk = np.zeros((M, 4))
        gyk = np.zeros((M, 4))
        Fx = np.empty(4)
        Fy = np.empty(4)
        # nodal fluxes of the last Picard sweep, kept for the final pass
        FxS = np.empty((nf, nt, M, 4))
        FyS = np.empty((nf, nt, M, 4))
        Minv = minv_flat[minv_off[i]:minv_off[i] + nd * nd].reshape(nd, nd)

        res = 1e30
        nit = 0
        for it in range(max_iter):
            for a in range(nt):
                for l in range(nd):
                    for v in range(4):
                        S[a, l, v] = 0.0
            for f in range(nf):
                s = s0 + f
                detJ = sub_detJ[s]
                i00 = sub_inv[s, 0, 0]
                i01 = sub_inv[s, 0, 1]
                i10 = sub_inv[s, 1, 0]
                i11 = sub_inv[s, 1, 1]
                for a in range(nt):
                    for m in range(M):
                        lm = sub_map[s, m]
                        for v in range(4):
                            ql[m, v] = qh[a, lm, v]
                    if visc:
                        for m in range(M):
                            for v in range(4):
                                dx = 0.0
                                de = 0.0
                                for k in range(M):
                                    dx += D_xi[m, k] * ql[k, v]
                                    de += D_eta[m, k] * ql[k, v]
                                gxk[m, v] = i00 * dx + i10 * de
                                gyk[m, v] = i01 * dx + i11 * de
                    for m in range(M):
                        bad = _node_flux(ql[m], gxk[m], gyk[m], gamma, cv,
                                         mu, kap, Fx, Fy)
                        if bad != 0:
                            status[i] = STATUS_INADMISSIBLE
                        for v in range(4):
                            FxS[f, a, m, v] = Fx[v]
                            FyS[f, a, m, v] = Fy[v]
                            fsA[m, v] = dt * (i00 * Fx[v] + i01 * Fy[v])
                            gsA[m, v] = dt * (i10 * Fx[v] + i11 * Fy[v])
                    if status[i] != STATUS_OK:
                        break
                    for l in range(M):
                        gl = sub_map[s, l]
                        for k in range(M):
                            cx = detJ * Kx[l, k]
                            cy = detJ * Ky[l, k]
                            for v in range(4):
                                S[a, gl, v] += cx * fsA[k, v] + cy * gsA[k, v]
                if status[i] != STATUS_OK:
                    break
            if status[i] != STATUS_OK:
                break
            # qnew = c0 x U - B (Minv S), with the residual tracked in place
            res = 0.0
            X = np.empty((nt, nd, 4))
            for a in range(nt):
                for l in range(nd):
                    for v in range(4):
                        acc = 0.0
                        for j in range(nd):
                            acc += Minv[l, j] * S[a, j, v]
                        X[a, l, v] = acc
            for a in range(nt):
                for l in range(nd):
                    for v in range(4):
                        acc = c0[a] * U[off + l, v]
                        for b in range(nt):
                            acc -= B[a, b] * X[b, l, v]
                        d = abs(acc - qh[a, l, v])
                        if d > res:
                            res = d
                        qh[a, l, v] = acc
            res /= scale
            nit = it + 1
            if res <= tol:
                break
        iters[i] = nit
        resid[i] = res
        if status[i] == STATUS_OK and res > 1e-6:
            status[i] = STATUS_DIVERGED
        if status[i] != STATUS_OK:
            continue

        for l in range(nd):
            for v in range(4):
                acc = 0.0
                for a in range(nt):
                    acc += w_tau[a] * qh[a, l, v]
                qbar[off + l, v] = dt * acc

        # final pass: time-integrated volume terms and face traces, using
        # the nodal fluxes stored by the last Picard sweep (their state
        # differs from the converged one by at most the Picard tolerance)
        fbar = np.empty((M, 4))
        gbar = np.empty((M, 4))
        Fbar = np.empty((M, 4, 2))
        for f in range(nf):
            s = s0 + f
            detJ = sub_detJ[s]
            i00 = sub_inv[s, 0, 0]
            i01 = sub_inv[s, 0, 1]
            i10 = sub_inv[s, 1, 0]
            i11 = sub_inv[s, 1, 1]
            for m in range(M):
                for v in range(4):
                    fbar[m, v] = 0.0
                    gbar[m, v] = 0.0
                    Fbar[m, v, 0] = 0.0
                    Fbar[m, v, 1] = 0.0
            for a in range(nt):
                wa = dt * w_tau[a]
                for m in range(M):
                    for v in range(4):
                        fx = FxS[f, a, m, v]
                        fy = FyS[f, a, m, v]
                        fbar[m, v] += wa * (i00 * fx + i01 * fy)
                        gbar[m, v] += wa * (i10 * fx + i11 * fy)
                        Fbar[m, v, 0] += wa * fx
                        Fbar[m, v, 1] += wa * fy
            for l in range(M):
                gl = sub_map[s, l]
                for k in range(M):
                    cx = detJ * V_xi[l, k]
                    cy = detJ * V_eta[l, k]
                    for v in range(4):
                        vol_rhs[off + gl, v] += cx * fbar[k, v] + cy * gbar[k, v]
            nx = face_nrm[s, 0]
            ny = face_nrm[s, 1]
            for r in range(nt1):
                m = edge_ref[r]
                lt = tr_map[s, r]
                for v in range(4):
                    tr_Fn[s, r, v] = nx * Fbar[m, v, 0] + ny * Fbar[m, v, 1]
                    acc = 0.0
                    for a in range(nt):
                        acc += w_tau[a] * qh[a, lt, v]
                    tr_q[s, r, v] = dt * acc


def predict(ctx: Context, U, dt, mu_eff, kap_eff, gas, max_iter, tol):
    disc = ctx.disc
    nsub = len(disc.sub_detJ)
    nt1 = disc.gtr.shape[1]
    ndof = disc.n_dof_total
    vol_rhs = np.zeros((ndof, 4))
    tr_q = np.zeros((nsub, nt1, 4))
    tr_Fn = np.zeros((nsub, nt1, 4))
    qbar = np.zeros((ndof, 4))
    iters = np.zeros(disc.n_cells, dtype=np.int64)
    resid = np.zeros(disc.n_cells)
    status = np.zeros(disc.n_cells, dtype=np.int64)
    _predict_kernel(U, dt, mu_eff, kap_eff, gas.gamma, gas.cv, *ctx.args,
                    max_iter, tol, vol_rhs, tr_q, tr_Fn, qbar,
                    iters, resid, status)
    return vol_rhs, tr_q, tr_Fn, qbar, iters, resid, status
