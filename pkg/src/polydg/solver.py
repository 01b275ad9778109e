"""One-step solver: CFL time step, predictor dispatch, face fluxes, update.

The per-cell space-time predictor runs in the selected kernel backend;
everything face- and update-related here is cheap and stays vectorized
numpy shared by both backends.
"""

from dataclasses import dataclass, field

import numpy as np

from . import discretization, kernels, limiter, physics
from .errors import (ConfigurationError, InadmissibleStateError,
                     NumericalFailureError, PredictorDivergenceError)

PICARD_TOL = 1e-12


@dataclass
class Transmissive:
    """Zero-gradient boundary: exterior trace copies the interior one.

    A pure copy carries no downstream information, which is fine for waves
    leaving through the boundary but admits a slowly growing spurious mode
    when a subsonic *sheared* stream crosses the boundary (the face flux
    degenerates to the interior flux with zero dissipation).  Setting
    ``p_out`` anchors the exterior pressure to the known far-field value
    while density and velocity stay extrapolated, which restores the
    missing incoming characteristic for subsonic outflow.
    """

    p_out: float = None


@dataclass
class Dirichlet:
    """Prescribed exterior state q(x, y, t); optional gradient for viscous flux."""

    evaluator: callable
    gradient: callable = None


@dataclass
class StepInfo:
    dt: float
    t_new: float
    min_rho: float
    min_p: float
    limited_fraction: float
    max_picard_iters: int
    max_picard_residual: float


class Solver:
    def __init__(self, disc, gas, boundary=None, cfl=0.5, limiter_on=False,
                 backend=None):
        self.disc = disc
        self.gas = gas
        self.cfl = cfl
        self.limiter_on = limiter_on
        self.backend_name, self.ctx = kernels.predictor_context(disc, backend)
        self.backend = kernels.get_backend(self.backend_name)
        self.groups = discretization.mass_groups(disc)
        self.max_iter = 2 * (disc.N + 1) + 4
        self.eps_const = (2 * disc.N + 1) / np.sqrt(np.pi / 2.0)

        boundary = boundary or {}
        # group boundary faces by side tag
        self.bgroups = []
        sides_present = set()
        for g, rec in enumerate(disc.mesh.faces):
            if disc.fc_ext[g] >= 0:
                sides_present.add(rec.kind)
        for side in sorted(sides_present):
            if side not in boundary:
                raise ConfigurationError(f"no boundary condition for side {side}")
            gids = np.array([g for g, rec in enumerate(disc.mesh.faces)
                             if disc.fc_ext[g] >= 0 and rec.kind == side],
                            dtype=np.int64)
            self.bgroups.append((boundary[side], disc.fc_ext[gids],
                                 disc.fc_lsub[gids]))

    # ------------------------------------------------------------------
    def compute_dt(self, U, mu_eff=None, kap_eff=None, t=None, t_end=None):
        disc, gas = self.disc, self.gas
        if mu_eff is None:
            mu_eff = np.full(disc.n_cells, gas.mu)
        if kap_eff is None:
            kap_eff = np.full(disc.n_cells, gas.kappa)
        rho = U[:, 0]
        u = U[:, 1] / rho
        v = U[:, 2] / rho
        p = (gas.gamma - 1.0) * (U[:, 3] - 0.5 * rho * (u * u + v * v))
        if np.any(rho <= 0) or np.any(p <= 0):
            raise InadmissibleStateError("inadmissible state in time-step bound")
        lam = np.sqrt(u * u + v * v) + np.sqrt(gas.gamma * p / rho)
        mu_n = mu_eff[disc.node_cell]
        kap_n = kap_eff[disc.node_cell]
        lamv = np.maximum(4.0 * mu_n / (3.0 * rho), kap_n / (gas.cv * rho))
        lam_c = np.maximum.reduceat(lam, disc.dof_off)
        lamv_c = np.maximum.reduceat(lamv, disc.dof_off)
        k = 2 * disc.N + 1
        denom = k * (lam_c + 2.0 * lamv_c * k / disc.cell_h)
        dt = self.cfl * np.min(disc.cell_h / denom)
        if not np.isfinite(dt) or dt <= 0:
            raise NumericalFailureError(f"invalid time step {dt}")
        if t is not None and t_end is not None and t + dt > t_end:
            dt = t_end - t
        return float(dt)

    # ------------------------------------------------------------------
    def _boundary_fill(self, t, dt, tr_q, tr_Fn):
        disc, gas = self.disc, self.gas
        nt1 = disc.gtr.shape[1]
        nb = disc.n_boundary
        ext_q = np.zeros((nb, nt1, 4))
        ext_Fn = np.zeros((nb, nt1, 4))
        w = disc.ops.w_tau
        taus = disc.ops.tau_nodes
        for bc, slots, subs in self.bgroups:
            if isinstance(bc, Transmissive):
                if bc.p_out is None:
                    ext_q[slots] = tr_q[subs]
                    ext_Fn[slots] = tr_Fn[subs]
                else:
                    # time-averaged interior trace with the pressure
                    # replaced by the prescribed outlet value (viscous
                    # stress at the outlet is the usual do-nothing zero)
                    q = tr_q[subs] / dt
                    qm = q.copy()
                    rho = q[..., 0]
                    ke = 0.5 * (q[..., 1] ** 2 + q[..., 2] ** 2) / rho
                    qm[..., 3] = bc.p_out / (gas.gamma - 1.0) + ke
                    F = physics.full_flux(qm, np.zeros(qm.shape + (2,)), gas)
                    nrm = disc.face_nrm[subs]
                    ext_q[slots] = dt * qm
                    ext_Fn[slots] = dt * (nrm[:, None, None, 0] * F[..., 0]
                                          + nrm[:, None, None, 1] * F[..., 1])
                continue
            if not isinstance(bc, Dirichlet):
                raise ConfigurationError(f"unsupported boundary object {bc!r}")
            pos = disc.tr_pos[subs]          # (nb_s, nt1, 2)
            nrm = disc.face_nrm[subs]
            qa = np.zeros((len(subs), nt1, 4))
            Fa = np.zeros((len(subs), nt1, 4, 2))
            for a, tau in enumerate(taus):
                ta = t + tau * dt
                q = np.asarray(bc.evaluator(pos[..., 0], pos[..., 1], ta))
                if bc.gradient is not None:
                    gr = np.asarray(bc.gradient(pos[..., 0], pos[..., 1], ta))
                else:
                    gr = np.zeros(q.shape + (2,))
                F = physics.full_flux(q, gr, gas)
                qa += w[a] * q
                Fa += w[a] * F
            ext_q[slots] = dt * qa
            ext_Fn[slots] = dt * (nrm[:, None, None, 0] * Fa[..., 0]
                                  + nrm[:, None, None, 1] * Fa[..., 1])
        return ext_q, ext_Fn

    # ------------------------------------------------------------------
    def _face_flux(self, dt, tr_q, tr_Fn, ext_q, ext_Fn, mu_eff, kap_eff):
        disc, gas = self.disc, self.gas
        ls, rs, xt = disc.fc_lsub, disc.fc_rsub, disc.fc_ext
        inner = rs >= 0
        qL = tr_q[ls]
        FL = tr_Fn[ls]
        qR = np.empty_like(qL)
        FnR = np.empty_like(FL)        # flux along the left outward normal
        qR[inner] = tr_q[rs[inner]][:, ::-1]
        FnR[inner] = -tr_Fn[rs[inner]][:, ::-1]
        qR[~inner] = ext_q[xt[~inner]]
        FnR[~inner] = ext_Fn[xt[~inner]]

        nrm = disc.face_nrm[ls]

        def side_speeds(qbar, mu, kap):
            q = qbar / dt
            rho = q[..., 0]
            u = q[..., 1] / rho
            v = q[..., 2] / rho
            p = (gas.gamma - 1.0) * (q[..., 3] - 0.5 * rho * (u * u + v * v))
            bad = (rho <= 0) | (p <= 0) | ~np.isfinite(p)
            if np.any(bad):
                faces = np.where(bad.any(axis=1))[0]
                raise InadmissibleStateError(
                    f"inadmissible face trace at faces {faces[:5]}",
                    face=int(faces[0]))
            # convective eigenvalue projected onto the face normal
            un = u * nrm[:, None, 0] + v * nrm[:, None, 1]
            lam = (np.abs(un) + np.sqrt(gas.gamma * p / rho)).max(axis=1)
            lamv = np.maximum(4.0 * mu / (3.0 * rho.min(axis=1)),
                              kap / (gas.cv * rho.min(axis=1)))
            return lam, lamv

        cl = disc.fc_left
        cr = np.where(inner, disc.sub_cell[np.maximum(rs, 0)], cl)
        lamL, lamvL = side_speeds(qL, mu_eff[cl], kap_eff[cl])
        lamR, lamvR = side_speeds(qR, mu_eff[cr], kap_eff[cr])
        lam = np.maximum(lamL, lamR)
        lamv = np.maximum(lamvL, lamvR)
        h_sum = disc.cell_h[cl] + disc.cell_h[cr]
        eps = self.eps_const / h_sum
        s = lam + 2.0 * eps * lamv
        return 0.5 * (FL + FnR) + 0.5 * s[:, None, None] * (qL - qR)

    # ------------------------------------------------------------------
    def _update(self, U, vol_rhs, G):
        disc = self.disc
        T1d = disc.ops.T1d
        ls, rs = disc.fc_lsub, disc.fc_rsub
        inner = rs >= 0
        nsub = len(disc.sub_detJ)
        nt1 = G.shape[1]
        Sbuf = np.zeros((nsub, nt1, 4))
        TG = np.einsum("rk,fkv->frv", T1d, G)
        Sbuf[ls] = disc.face_len[ls][:, None, None] * TG
        TGr = np.einsum("rk,fkv->frv", T1d, G[inner][:, ::-1])
        Sbuf[rs[inner]] = -disc.face_len[rs[inner]][:, None, None] * TGr
        rhs = vol_rhs.copy()
        np.subtract.at(rhs, disc.gtr, Sbuf)
        return U + discretization.apply_mass_inverse(self.groups, rhs)

    # ------------------------------------------------------------------
    def step(self, U, t, dt=None, t_end=None):
        disc, gas = self.disc, self.gas
        lim = limiter.detect(disc, U, gas, self.limiter_on)
        if dt is None:
            dt = self.compute_dt(U, lim.mu_eff, lim.kap_eff, t=t, t_end=t_end)
        out = self.backend.predict(self.ctx, U, dt, lim.mu_eff, lim.kap_eff,
                                   gas, self.max_iter, PICARD_TOL)
        vol_rhs, tr_q, tr_Fn, qbar, iters, resid, status = out
        if np.any(status == kernels.STATUS_INADMISSIBLE):
            cell = int(np.where(status == kernels.STATUS_INADMISSIBLE)[0][0])
            raise InadmissibleStateError(
                f"inadmissible state in predictor, cell {cell}", cell=cell)
        if np.any(status == kernels.STATUS_DIVERGED):
            cell = int(np.where(status == kernels.STATUS_DIVERGED)[0][0])
            raise PredictorDivergenceError(
                f"predictor failed to converge in cell {cell}",
                cell=cell, residual=float(resid[cell]))
        ext_q, ext_Fn = self._boundary_fill(t, dt, tr_q, tr_Fn)
        G = self._face_flux(dt, tr_q, tr_Fn, ext_q, ext_Fn,
                            lim.mu_eff, lim.kap_eff)
        U_new = self._update(U, vol_rhs, G)

        rho = U_new[:, 0]
        p = (gas.gamma - 1.0) * (U_new[:, 3]
                                 - 0.5 * (U_new[:, 1] ** 2 + U_new[:, 2] ** 2) / rho)
        if np.any(rho <= 0) or np.any(p <= 0) or not np.isfinite(p).all():
            bad = np.unique(disc.node_cell[(rho <= 0) | (p <= 0) | ~np.isfinite(p)])
            raise InadmissibleStateError(
                f"inadmissible update in cells {bad[:10]}", cell=int(bad[0]))
        info = StepInfo(dt=dt, t_new=t + dt,
                        min_rho=float(rho.min()), min_p=float(p.min()),
                        limited_fraction=float(lim.troubled.mean()),
                        max_picard_iters=int(iters.max()),
                        max_picard_residual=float(resid.max()))
        return U_new, info
