"""Run orchestration: time loop, error norms, outputs, convergence studies."""

import csv
import os
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import basis, cases, discretization, limiter as limiter_mod, physics
from .errors import InvalidParameterError

VARIABLE_NAMES = ("rho", "u", "v", "p")


@dataclass
class RunReport:
    case: str
    N: int
    h_mesh: float            # h(Omega) = max_i h_i
    h_mean: float
    n_cells: int
    n_steps: int
    t_final: float
    wall_time: float
    phase_times: dict
    errors_l2: dict = None   # per primitive variable, when exact available
    errors_linf: dict = None
    completed: bool = True   # False when a deadline stopped the run early


@dataclass
class ConvergenceTable:
    case: str
    N: int
    rows: list               # (h, {var: L2}, order or None, cpu seconds)

    def orders(self, var="rho"):
        out = []
        for r0, r1 in zip(self.rows[:-1], self.rows[1:]):
            out.append(np.log(r0[1][var] / r1[1][var]) / np.log(r0[0] / r1[0]))
        return out

    def fit_order(self, var="rho"):
        h = np.log([r[0] for r in self.rows])
        e = np.log([r[1][var] for r in self.rows])
        return float(np.polyfit(h, e, 1)[0])

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["h"] + [f"L2_{v}" for v in VARIABLE_NAMES]
                       + ["order_rho", "cpu_s"])
            orders = [""] + [f"{o:.3f}" for o in self.orders()]
            for r, o in zip(self.rows, orders):
                w.writerow([f"{r[0]:.6e}"]
                           + [f"{r[1][v]:.6e}" for v in VARIABLE_NAMES]
                           + [o, f"{r[3]:.2f}"])


def primitive_fields(U, gas):
    rho = U[..., 0]
    u = U[..., 1] / rho
    v = U[..., 2] / rho
    p = (gas.gamma - 1.0) * (U[..., 3] - 0.5 * rho * (u * u + v * v))
    return rho, u, v, p


def error_norms(disc, U, exact, gas, t):
    """(L2, Linf) per primitive variable against `exact(x, y, t)` conserved."""
    ops = disc.ops
    phi = basis.lagrange_eval(disc.N, ops.quad_pts)
    l2 = {v: 0.0 for v in VARIABLE_NAMES}
    linf = {v: 0.0 for v in VARIABLE_NAMES}
    for i, cell in enumerate(disc.mesh.cells):
        xc = cell.vertices.mean(axis=0)
        s0 = disc.sub_off[i]
        for f in range(cell.n_faces):
            pts = xc[None, :] + ops.quad_pts @ cell.jac[f].T
            qex = np.asarray(exact(pts[:, 0], pts[:, 1], t))
            qh = phi @ U[disc.dof_off[i] + disc.sub_map[s0 + f]]
            w = disc.sub_detJ[s0 + f] * ops.quad_wts
            pex = primitive_fields(qex, gas)
            pnum = primitive_fields(qh, gas)
            for k, name in enumerate(VARIABLE_NAMES):
                d = pnum[k] - pex[k]
                l2[name] += np.sum(w * d * d)
                linf[name] = max(linf[name], np.abs(d).max())
    for name in VARIABLE_NAMES:
        l2[name] = float(np.sqrt(l2[name]))
    return l2, linf


# ----------------------------------------------------------------------
# point sampling inside the DG polynomials
# ----------------------------------------------------------------------
class FieldSampler:
    def __init__(self, disc):
        self.disc = disc
        self._tree = cKDTree(np.array([c.barycenter for c in disc.mesh.cells]))

    def locate(self, pts, k=12):
        """(cell, subcell, xi, eta) per point; nearest subcell if outside."""
        disc = self.disc
        pts = np.atleast_2d(pts)
        _, cand = self._tree.query(pts, k=min(k, disc.n_cells))
        out = []
        for p, cells in zip(pts, np.atleast_2d(cand)):
            best = None
            for i in cells:
                cell = disc.mesh.cells[i]
                s0 = disc.sub_off[i]
                xc = cell.vertices.mean(axis=0)
                for f in range(cell.n_faces):
                    xi, eta = disc.sub_inv[s0 + f] @ (p - xc)
                    slack = -min(xi, eta, 1.0 - xi - eta)
                    if best is None or slack < best[0]:
                        best = (slack, i, f, xi, eta)
                if best[0] <= 1e-12:
                    break
            out.append(best[1:])
        return out

    def sample(self, U, pts):
        disc = self.disc
        vals = np.empty((len(np.atleast_2d(pts)), U.shape[1]))
        for n, (i, f, xi, eta) in enumerate(self.locate(pts)):
            phi = basis.lagrange_eval(disc.N, [[xi, eta]])[0]
            loc = U[disc.dof_off[i] + disc.sub_map[disc.sub_off[i] + f]]
            vals[n] = phi @ loc
        return vals


def write_cut(disc, U, gas, start, end, n, path, exact=None, t=0.0):
    """CSV cut (s, x, y, rho, u, v, p [, exact_*]) of n equidistant samples."""
    start = np.asarray(start, float)
    end = np.asarray(end, float)
    s = np.linspace(0.0, 1.0, n)
    pts = start[None, :] + s[:, None] * (end - start)[None, :]
    vals = FieldSampler(disc).sample(U, pts)
    prim = np.column_stack(primitive_fields(vals, gas))
    cols = ["s", "x", "y", "rho", "u", "v", "p"]
    data = [s, pts[:, 0], pts[:, 1]] + [prim[:, k] for k in range(4)]
    if exact is not None:
        qex = np.asarray(exact(pts[:, 0], pts[:, 1], t))
        pex = np.column_stack(primitive_fields(qex, gas))
        cols += [f"exact_{v}" for v in VARIABLE_NAMES]
        data += [pex[:, k] for k in range(4)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in zip(*data):
            w.writerow([f"{x:.10e}" for x in row])


def write_vtk(disc, U, gas, path, beta=None):
    """Legacy ASCII VTK of the subcell triangulation with nodal point data.

    Points are the per-cell DoF nodes (shared within a cell, duplicated
    across cell boundaries so that inter-cell jumps survive).
    """
    rho, u, v, p = primitive_fields(U, gas)
    # vorticity from the owning subcell's gradient (last writer wins on
    # shared nodes)
    ops = disc.ops
    vort = np.zeros(disc.n_dof_total)
    for s in range(len(disc.sub_detJ)):
        i = disc.sub_cell[s]
        idx = disc.dof_off[i] + disc.sub_map[s]
        loc_u = u[idx]
        loc_v = v[idx]
        iv = disc.sub_inv[s]
        du_dxi = ops.D_xi @ loc_u
        du_deta = ops.D_eta @ loc_u
        dv_dxi = ops.D_xi @ loc_v
        dv_deta = ops.D_eta @ loc_v
        du_dy = iv[0, 1] * du_dxi + iv[1, 1] * du_deta
        dv_dx = iv[0, 0] * dv_dxi + iv[1, 0] * dv_deta
        vort[idx] = np.abs(dv_dx - du_dy)
    beta_n = np.zeros(disc.n_dof_total)
    if beta is not None:
        beta_n = np.asarray(beta)[disc.node_cell]

    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\npolydg solution\nASCII\n")
        fh.write("DATASET UNSTRUCTURED_GRID\n")
        fh.write(f"POINTS {disc.n_dof_total} double\n")
        for x, y in disc.node_pos:
            fh.write(f"{x} {y} 0.0\n")
        # subcell triangulation of each polygon at the subgrid resolution
        tris = []
        N = disc.N
        mi = basis.triangle_multi_indices(max(N, 1))
        pos = {m: k for k, m in enumerate(mi)}
        ref_tris = []
        n_ = max(N, 1)
        for k2 in range(n_):
            for k1 in range(n_ - k2):
                ref_tris.append((pos[(k1, k2)], pos[(k1 + 1, k2)], pos[(k1, k2 + 1)]))
                if k1 + k2 < n_ - 1:
                    ref_tris.append((pos[(k1 + 1, k2)], pos[(k1 + 1, k2 + 1)],
                                     pos[(k1, k2 + 1)]))
        for s in range(len(disc.sub_detJ)):
            i = disc.sub_cell[s]
            gmap = disc.dof_off[i] + disc.sub_map[s]
            if N == 0:
                # single node per cell: draw the subcell with its node thrice
                tris.append((gmap[0], gmap[0], gmap[0]))
            else:
                for (a, b, c) in ref_tris:
                    tris.append((gmap[a], gmap[b], gmap[c]))
        fh.write(f"CELLS {len(tris)} {4 * len(tris)}\n")
        for t3 in tris:
            fh.write(f"3 {t3[0]} {t3[1]} {t3[2]}\n")
        fh.write(f"CELL_TYPES {len(tris)}\n")
        fh.write("\n".join(["5"] * len(tris)) + "\n")
        fh.write(f"POINT_DATA {disc.n_dof_total}\n")
        for name, arr in (("rho", rho), ("u", u), ("v", v), ("p", p),
                          ("vorticity", vort), ("beta", beta_n)):
            fh.write(f"SCALARS {name} double 1\nLOOKUP_TABLE default\n")
            fh.write("\n".join(f"{x:.12e}" for x in arr) + "\n")


def write_troubled_csv(disc, lim, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cell", "beta", "mu_add"])
        for i in range(disc.n_cells):
            w.writerow([i, f"{lim.beta[i]:.6e}", f"{lim.mu_add[i]:.6e}"])


# ----------------------------------------------------------------------
def run(cfg: cases.CaseConfig, target_h=None, N=None, seed=None, t_final=None,
        cfl=None, out_dir=None, backend=None, output_every=0,
        log_stream=None, max_steps=None, deadline_s=None) -> RunReport:
    """Advance a case to its final time, writing outputs on schedule.

    When ``deadline_s`` is given and the wall clock exceeds it, the run
    stops where it is and the report carries ``completed=False`` (with the
    time actually reached in ``t_final``).
    """
    mesh, disc, sol, U = cfg.build(target_h=target_h, N=N, seed=seed,
                                   backend=backend)
    if cfl is not None:
        sol.cfl = cfl
    tf = t_final if t_final is not None else cfg.t_final
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)

    phase = {"limiter": 0.0, "predictor_update": 0.0, "output": 0.0}
    t = 0.0
    nstep = 0
    log_rows = []
    wall0 = time.perf_counter()
    while t < tf - 1e-12 * max(1.0, tf):
        t0 = time.perf_counter()
        U, info = sol.step(U, t, t_end=tf)
        phase["predictor_update"] += time.perf_counter() - t0
        t = info.t_new
        nstep += 1
        row = (nstep, t, info.dt, info.min_rho, info.min_p,
               info.limited_fraction)
        log_rows.append(row)
        if log_stream is not None:
            print("step=%d t=%.6e dt=%.3e min_rho=%.3e min_p=%.3e "
                  "limited=%.3f" % row, file=log_stream)
        if out_dir and output_every and nstep % output_every == 0:
            t0 = time.perf_counter()
            write_vtk(disc, U, cfg.gas, os.path.join(
                out_dir, f"{cfg.case}_{nstep:06d}.vtk"))
            phase["output"] += time.perf_counter() - t0
        if max_steps and nstep >= max_steps:
            break
        if deadline_s is not None and time.perf_counter() - wall0 > deadline_s:
            break
    wall = time.perf_counter() - wall0
    completed = t >= tf - 1e-12 * max(1.0, tf)

    h_all = np.array([c.h for c in mesh.cells])
    report = RunReport(case=cfg.case, N=disc.N, h_mesh=float(h_all.max()),
                       h_mean=float(h_all.mean()), n_cells=mesh.n_cells,
                       n_steps=nstep, t_final=t, wall_time=wall,
                       phase_times=phase, completed=completed)
    if cfg.exact is not None:
        l2, linf = error_norms(disc, U, cfg.exact, cfg.gas, t)
        report.errors_l2 = l2
        report.errors_linf = linf
    if out_dir:
        write_vtk(disc, U, cfg.gas, os.path.join(out_dir, f"{cfg.case}_final.vtk"))
        with open(os.path.join(out_dir, f"{cfg.case}_steps.csv"), "w",
                  newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "t", "dt", "min_rho", "min_p", "limited_fraction"])
            for row in log_rows:
                w.writerow(row)
    # keep the final state reachable for callers needing more than the report
    report.final_state = (disc, U, sol)
    return report


def convergence_study(case_id, N, targets=(10 / 12, 10 / 18, 10 / 24),
                      t_final=None, seed=0, out_csv=None,
                      backend=None) -> ConvergenceTable:
    cfg = cases.get_case(case_id)
    if cfg.exact is None:
        raise InvalidParameterError(f"case {case_id} has no exact solution")
    rows = []
    for th in targets:
        t0 = time.perf_counter()
        rep = run(cfg, target_h=th, N=N, seed=seed, t_final=t_final,
                  backend=backend)
        cpu = time.perf_counter() - t0
        rows.append((rep.h_mesh, rep.errors_l2, None, cpu))
    table = ConvergenceTable(case=case_id, N=N, rows=rows)
    if out_csv:
        table.write_csv(out_csv)
    return table
