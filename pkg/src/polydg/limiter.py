"""Shock detection (flattener variable) and element-local artificial viscosity."""

from dataclasses import dataclass

import numpy as np

from .discretization import Discretization
from .physics import GasParams

M1 = 0.1
# positivity guard: a cell whose minimum nodal pressure or density drops
# below this fraction of its cell mean is treated as troubled even when
# the divergence sensor stays quiet (e.g. the expansion-side undershoot
# ahead of a shock crossing a small boundary cell, which a compression-
# only sensor cannot see)
POS_FRAC = 0.2


@dataclass
class LimiterState:
    beta: np.ndarray        # (nc,) flattener in [0, 1]
    mu_add: np.ndarray      # (nc,) artificial viscosity
    kap_add: np.ndarray     # (nc,) artificial heat conduction
    troubled: np.ndarray    # (nc,) bool
    mu_eff: np.ndarray      # (nc,) physical + artificial
    kap_eff: np.ndarray


def _face_midstates(disc: Discretization, U, gas: GasParams):
    """(rho, u, v, c) at every cell-face midpoint, own-side trace."""
    w = disc.ops.edge_mid
    q = np.einsum("r,srv->sv", w, U[disc.gtr])
    rho = q[:, 0]
    u = q[:, 1] / rho
    v = q[:, 2] / rho
    p = (gas.gamma - 1.0) * (q[:, 3] - 0.5 * rho * (u * u + v * v))
    c = np.sqrt(np.maximum(gas.gamma * p / rho, 0.0))
    return rho, u, v, c


def detect(disc: Discretization, U, gas: GasParams, enabled=True) -> LimiterState:
    nc = disc.n_cells
    beta = np.zeros(nc)
    mu_add = np.zeros(nc)
    kap_add = np.zeros(nc)
    mu_eff = np.full(nc, gas.mu)
    kap_eff = np.full(nc, gas.kappa)
    if not enabled:
        return LimiterState(beta, mu_add, kap_add, beta > 0, mu_eff, kap_eff)

    rho, u, v, c = _face_midstates(disc, U, gas)
    ls, rs = disc.fc_lsub, disc.fc_rsub
    inner = rs >= 0
    # own-side (minus) and neighbor (plus) midpoint values per cell face
    nsub = len(disc.sub_detJ)
    vp_u = u.copy()
    vp_v = v.copy()
    cp = c.copy()
    vp_u[ls[inner]] = u[rs[inner]]
    vp_v[ls[inner]] = v[rs[inner]]
    cp[ls[inner]] = c[rs[inner]]
    vp_u[rs[inner]] = u[ls[inner]]
    vp_v[rs[inner]] = v[ls[inner]]
    cp[rs[inner]] = c[ls[inner]]

    jump = ((vp_u - u) * disc.face_nrm[:, 0] + (vp_v - v) * disc.face_nrm[:, 1])
    contrib = disc.face_len * jump
    div = np.zeros(nc)
    np.add.at(div, disc.sub_cell, contrib)
    div /= disc.cell_area

    cs_min = np.full(nc, np.inf)
    np.minimum.at(cs_min, disc.sub_cell, np.minimum(c, cp))

    beta = np.minimum(1.0, np.maximum(0.0, -(div + M1 * cs_min) / (M1 * cs_min)))

    rho_n = U[:, 0]
    uu = U[:, 1] / rho_n
    vv = U[:, 2] / rho_n
    p = (gas.gamma - 1.0) * (U[:, 3] - 0.5 * rho_n * (uu * uu + vv * vv))
    rho_mean = np.zeros(nc)
    np.add.at(rho_mean, disc.node_cell, rho_n * disc.node_wsum)
    rho_mean /= disc.cell_area
    p_mean = np.zeros(nc)
    np.add.at(p_mean, disc.node_cell, p * disc.node_wsum)
    p_mean /= disc.cell_area
    pos_bad = ((np.minimum.reduceat(p, disc.dof_off) < POS_FRAC * p_mean)
               | (np.minimum.reduceat(rho_n, disc.dof_off)
                  < POS_FRAC * rho_mean))
    beta = np.maximum(beta, pos_bad.astype(float))

    troubled = beta > 0.0
    if np.any(troubled):
        # max convective eigenvalue over the nodes
        lam = np.sqrt(uu * uu + vv * vv) + np.sqrt(
            np.maximum(gas.gamma * p / rho_n, 0.0))
        lam_cell = np.maximum.reduceat(lam, disc.dof_off)
        h_s = disc.cell_h / (2 * disc.N + 1)
        mu_target = rho_mean * lam_cell * h_s
        mu_add = np.where(troubled, np.maximum(mu_target - gas.mu, 0.0), 0.0)
        mu_eff = gas.mu + mu_add
        # Pr_i = 1 on troubled cells
        kap_troubled = mu_eff * gas.gamma * gas.cv
        kap_eff = np.where(troubled & (mu_add > 0), kap_troubled, kap_eff)
        kap_add = np.maximum(kap_eff - gas.kappa, 0.0)
    return LimiterState(beta, mu_add, kap_add, troubled, mu_eff, kap_eff)
