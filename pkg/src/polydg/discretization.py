"""Packed, array-of-struct-free solver data for a polygonal DG field.

Everything the hot kernels need is flattened into contiguous numpy
arrays here: per-cell DoF offsets, per-subcell metric terms and scatter
maps, per-face connectivity, and the factorized per-cell mass inverses.
Cells have a variable number of faces, so all per-cell and per-subcell
data is indexed through explicit offset arrays.
"""

from dataclasses import dataclass

import numpy as np

from . import basis
from .errors import AssemblyError
from .mesh import VoronoiMesh

BKIND_INTERIOR = 0
BKIND_BOUNDARY = 1


@dataclass
class Discretization:
    """Reference operators plus packed mesh-dependent arrays."""

    mesh: VoronoiMesh
    N: int
    ops: basis.ReferenceOperators

    # per cell
    cell_nf: np.ndarray       # (nc,) faces per cell
    dof_off: np.ndarray       # (nc,)
    dof_n: np.ndarray         # (nc,)
    cell_h: np.ndarray
    cell_area: np.ndarray
    minv_off: np.ndarray
    minv_flat: np.ndarray     # concatenated per-cell inverse mass matrices
    # per subcell (global subcell id = sub_off[i] + f)
    sub_off: np.ndarray       # (nc,)
    sub_detJ: np.ndarray      # (nsub,)
    sub_inv: np.ndarray       # (nsub, 2, 2) inverse Jacobians
    sub_map: np.ndarray       # (nsub, M) cell-local dof ids
    tr_map: np.ndarray        # (nsub, nt1) cell-local trace dof ids
    tr_pos: np.ndarray        # (nsub, nt1, 2) physical trace node positions
    face_len: np.ndarray      # (nsub,)
    face_nrm: np.ndarray      # (nsub, 2) outward normals
    # per global face
    fc_left: np.ndarray
    fc_lsub: np.ndarray       # global subcell id of the left side
    fc_right: np.ndarray      # -1 for boundary faces
    fc_rsub: np.ndarray
    fc_ext: np.ndarray        # index into the boundary-exterior buffers, -1 inside
    n_boundary: int
    # node geometry
    node_pos: np.ndarray      # (ndof_tot, 2)
    node_wsum: np.ndarray     # (ndof_tot,) lumped-mass weights (diagnostics)
    # derived index maps
    sub_cell: np.ndarray      # (nsub,) owning cell of each subcell
    node_cell: np.ndarray     # (ndof_tot,) owning cell of each dof
    gtr: np.ndarray           # (nsub, nt1) global dof ids of the trace nodes

    @property
    def n_cells(self):
        return len(self.cell_nf)

    @property
    def n_dof_total(self):
        return int(self.dof_off[-1] + self.dof_n[-1]) if len(self.dof_n) else 0

    @property
    def n_faces(self):
        return len(self.fc_left)


def build(mesh: VoronoiMesh, N: int) -> Discretization:
    ops = basis.assemble_universal(N)
    M = ops.M
    nt1 = len(ops.edge_ref)
    nc = mesh.n_cells

    cell_nf = np.array([c.n_faces for c in mesh.cells], dtype=np.int64)
    dof_n = np.array([basis.n_cell_dofs(nf, N) for nf in cell_nf], dtype=np.int64)
    dof_off = np.concatenate([[0], np.cumsum(dof_n)[:-1]]).astype(np.int64)
    sub_off = np.concatenate([[0], np.cumsum(cell_nf)[:-1]]).astype(np.int64)
    nsub = int(cell_nf.sum())
    cell_h = np.array([c.h for c in mesh.cells])
    cell_area = np.array([c.area for c in mesh.cells])

    sub_detJ = np.empty(nsub)
    sub_inv = np.empty((nsub, 2, 2))
    sub_map = np.empty((nsub, M), dtype=np.int64)
    tr_map = np.empty((nsub, nt1), dtype=np.int64)
    tr_pos = np.empty((nsub, nt1, 2))
    face_len = np.empty(nsub)
    face_nrm = np.empty((nsub, 2))

    minv_off = np.concatenate([[0], np.cumsum(dof_n ** 2)[:-1]]).astype(np.int64)
    minv_flat = np.empty(int((dof_n ** 2).sum()))
    node_pos = np.zeros((int(dof_n.sum()), 2))
    node_wsum = np.zeros(int(dof_n.sum()))

    s_edge = basis.edge_param_nodes(N)
    dofmap_cache = {}
    for i, cell in enumerate(mesh.cells):
        nf = cell.n_faces
        if nf not in dofmap_cache:
            dofmap_cache[nf] = basis.build_dof_maps(nf, N)
        sub, trace, ndofs = dofmap_cache[nf]
        s0 = sub_off[i]
        sub_map[s0:s0 + nf] = sub
        tr_map[s0:s0 + nf] = trace
        sub_inv[s0:s0 + nf] = cell.jac_inv
        sub_detJ[s0:s0 + nf] = cell.jac_det
        face_len[s0:s0 + nf] = cell.face_lengths
        face_nrm[s0:s0 + nf] = cell.normals
        va = cell.vertices
        vb = np.roll(va, -1, axis=0)
        for f in range(nf):
            tr_pos[s0 + f] = va[f] + s_edge[:, None] * (vb[f] - va[f])

        # assembled mass matrix and node positions
        Mi = np.zeros((ndofs, ndofs))
        xc = cell.vertices.mean(axis=0)
        for f in range(nf):
            idx = sub[f]
            Mi[np.ix_(idx, idx)] += cell.jac_det[f] * ops.mass
            pts = xc[None, :] + ops.nodes @ cell.jac[f].T
            node_pos[dof_off[i] + idx] = pts
            np.add.at(node_wsum, dof_off[i] + idx,
                      cell.jac_det[f] * ops.mass.sum(axis=1))
        try:
            Mi_inv = np.linalg.inv(Mi)
        except np.linalg.LinAlgError as exc:
            raise AssemblyError(f"singular mass matrix in cell {i}") from exc
        if not np.all(np.isfinite(Mi_inv)):
            raise AssemblyError(f"non-finite mass inverse in cell {i}")
        minv_flat[minv_off[i]:minv_off[i] + ndofs * ndofs] = Mi_inv.ravel()

    # global faces
    nfg = len(mesh.faces)
    fc_left = np.empty(nfg, dtype=np.int64)
    fc_lsub = np.empty(nfg, dtype=np.int64)
    fc_right = np.full(nfg, -1, dtype=np.int64)
    fc_rsub = np.full(nfg, -1, dtype=np.int64)
    fc_ext = np.full(nfg, -1, dtype=np.int64)
    n_boundary = 0
    for g, rec in enumerate(mesh.faces):
        fc_left[g] = rec.left_cell
        fc_lsub[g] = sub_off[rec.left_cell] + rec.left_local
        if rec.right_cell >= 0:
            fc_right[g] = rec.right_cell
            fc_rsub[g] = sub_off[rec.right_cell] + rec.right_local
        else:
            fc_ext[g] = n_boundary
            n_boundary += 1

    sub_cell = np.repeat(np.arange(nc, dtype=np.int64), cell_nf)
    node_cell = np.repeat(np.arange(nc, dtype=np.int64), dof_n)
    gtr = dof_off[sub_cell][:, None] + tr_map

    return Discretization(
        mesh=mesh, N=N, ops=ops,
        cell_nf=cell_nf, dof_off=dof_off, dof_n=dof_n,
        cell_h=cell_h, cell_area=cell_area,
        minv_off=minv_off, minv_flat=minv_flat,
        sub_off=sub_off, sub_detJ=sub_detJ, sub_inv=sub_inv,
        sub_map=sub_map, tr_map=tr_map, tr_pos=tr_pos,
        face_len=face_len, face_nrm=face_nrm,
        fc_left=fc_left, fc_lsub=fc_lsub,
        fc_right=fc_right, fc_rsub=fc_rsub,
        fc_ext=fc_ext, n_boundary=n_boundary,
        node_pos=node_pos, node_wsum=node_wsum,
        sub_cell=sub_cell, node_cell=node_cell, gtr=gtr)


def mass_groups(disc: Discretization):
    """Cells grouped by face count with their inverse mass matrices stacked.

    Enables batched mass solves over all same-shape cells at once.
    """
    groups = []
    for nf in np.unique(disc.cell_nf):
        cells = np.where(disc.cell_nf == nf)[0]
        nd = int(disc.dof_n[cells[0]])
        minv = np.stack([
            disc.minv_flat[disc.minv_off[c]:disc.minv_off[c] + nd * nd]
            .reshape(nd, nd) for c in cells])
        groups.append({"cells": cells, "doff": disc.dof_off[cells],
                       "nd": nd, "minv": minv})
    return groups


def apply_mass_inverse(groups, rhs):
    """out = M^{-1} rhs per cell, batched over the precomputed groups."""
    out = np.empty_like(rhs)
    for g in groups:
        nd = g["nd"]
        block = np.stack([rhs[o:o + nd] for o in g["doff"]])
        res = np.einsum("cij,cjv->civ", g["minv"], block)
        for c, o in enumerate(g["doff"]):
            out[o:o + nd] = res[c]
    return out


def project(disc: Discretization, func) -> np.ndarray:
    """L2-project `func(x, y) -> (..., 4)` onto the subgrid basis."""
    ops = disc.ops
    nc = disc.n_cells
    U = np.zeros((disc.n_dof_total, 4))
    phi = basis.lagrange_eval(disc.N, ops.quad_pts)    # (nq, M)
    for i, cell in enumerate(disc.mesh.cells):
        nd = disc.dof_n[i]
        rhs = np.zeros((nd, 4))
        xc = cell.vertices.mean(axis=0)
        s0 = disc.sub_off[i]
        for f in range(cell.n_faces):
            pts = xc[None, :] + ops.quad_pts @ cell.jac[f].T
            vals = np.asarray(func(pts[:, 0], pts[:, 1]))
            w = disc.sub_detJ[s0 + f] * ops.quad_wts
            contrib = (phi * w[:, None]).T @ vals
            np.add.at(rhs, disc.sub_map[s0 + f], contrib)
        Mi_inv = disc.minv_flat[disc.minv_off[i]:
                                disc.minv_off[i] + nd * nd].reshape(nd, nd)
        U[disc.dof_off[i]:disc.dof_off[i] + nd] = Mi_inv @ rhs
    return U


def interpolate(disc: Discretization, func) -> np.ndarray:
    """Nodal interpolation of `func(x, y) -> (..., 4)` (no mass solve)."""
    vals = np.asarray(func(disc.node_pos[:, 0], disc.node_pos[:, 1]))
    return vals.reshape(disc.n_dof_total, -1)


def cell_averages(disc: Discretization, U) -> np.ndarray:
    """Area-weighted cell means of the nodal field, shape (nc, nvar)."""
    ops = disc.ops
    col = ops.mass.sum(axis=1)     # int phi_m over the reference triangle
    out = np.zeros((disc.n_cells, U.shape[1]))
    for i in range(disc.n_cells):
        s0 = disc.sub_off[i]
        acc = np.zeros(U.shape[1])
        for f in range(disc.cell_nf[i]):
            loc = U[disc.dof_off[i] + disc.sub_map[s0 + f]]
            acc += disc.sub_detJ[s0 + f] * (col @ loc)
        out[i] = acc / disc.cell_area[i]
    return out


def error_norms(disc: Discretization, U, exact, var=0):
    """(L1, L2, Linf) of component `var` against `exact(x, y) -> (...,4)`."""
    ops = disc.ops
    phi = basis.lagrange_eval(disc.N, ops.quad_pts)
    l1 = l2 = 0.0
    linf = 0.0
    for i, cell in enumerate(disc.mesh.cells):
        xc = cell.vertices.mean(axis=0)
        s0 = disc.sub_off[i]
        for f in range(cell.n_faces):
            pts = xc[None, :] + ops.quad_pts @ cell.jac[f].T
            ex = np.asarray(exact(pts[:, 0], pts[:, 1]))[..., var]
            num = phi @ U[disc.dof_off[i] + disc.sub_map[s0 + f], var]
            w = disc.sub_detJ[s0 + f] * ops.quad_wts
            d = num - ex
            l1 += np.sum(w * np.abs(d))
            l2 += np.sum(w * d * d)
            linf = max(linf, np.abs(d).max())
    return l1, np.sqrt(l2), linf
