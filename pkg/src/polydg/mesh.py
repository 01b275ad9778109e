"""Voronoi-dual mesh generation on rectangular domains.

The primal mesh is a Delaunay triangulation of a quasi-uniform generator
set; the solver mesh is its barycenter dual: every generator owns the
polygon obtained by connecting, counterclockwise, the barycenters of all
incident triangles.  Boundary cells are closed by inserting the midpoints
of the incident boundary edges (and the domain corners), which keeps the
tiling of the rectangle exact.  Periodic directions are handled by ghost
tiling of the generator set.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay as _SciPyDelaunay
from scipy.spatial import QhullError

from .errors import (DegenerateInputError, InvalidParameterError,
                     MeshQualityError, TopologyError)

# Lattice spacing per unit target length, calibrated so that the realized
# mean cell size h_i tracks the h(Omega) of meshes produced by a generic
# frontal triangulator with the same characteristic length input.
SPACING_FACTOR = 0.56
JITTER_FACTOR = 0.2

# Minimum distance (in lattice spacings) between interior generators and a
# non-periodic wall.  The dual cell of a wall generator only reaches a third
# of the way to the nearest interior generator, so a generous clearance keeps
# wall cells from degenerating into slivers that would strangle the viscous
# time-step limit (dt ~ h_min^2 / mu).
WALL_CLEARANCE = 0.75

# Spacing of the wall point chains relative to the interior lattice
# spacing.  A wall generator's dual cell only reaches a third of the way
# to the first interior row, so chains at the interior spacing produce
# thin high-aspect slivers (h about 3x below the median); stretching the
# chains makes wall cells wider and restores h within ~2x of the median.
WALL_SPACING_FACTOR = 1.4

BOUNDARY_SIDES = ("xmin", "xmax", "ymin", "ymax")


@dataclass
class DelaunayTriangulation:
    """Primal triangulation; triangles are counterclockwise index triples."""

    points: np.ndarray
    triangles: np.ndarray


@dataclass
class FaceRecord:
    """One mesh face; `normal` points out of the left cell."""

    left_cell: int
    left_local: int
    right_cell: int = -1
    right_local: int = -1
    normal: np.ndarray = None
    length: float = 0.0
    kind: str = "interior"        # interior | periodic | xmin/xmax/ymin/ymax
    shift: np.ndarray = None      # right-cell coords = left coords - shift


@dataclass
class VoronoiCell:
    generator: np.ndarray
    vertices: np.ndarray          # (NR, 2) counterclockwise
    barycenter: np.ndarray = None
    area: float = 0.0
    h: float = 0.0
    face_lengths: np.ndarray = None
    normals: np.ndarray = None    # (NR, 2) outward unit normals
    jac: np.ndarray = None        # (NR, 2, 2) subcell Jacobians
    jac_det: np.ndarray = None
    jac_inv: np.ndarray = None

    @property
    def n_faces(self):
        return len(self.vertices)


@dataclass
class VoronoiMesh:
    domain: tuple                 # (x0, y0, x1, y1)
    periodic: tuple               # (bool, bool)
    cells: list
    faces: list
    cell_faces: list = field(default=None)  # per cell: (face_id, side) pairs

    @property
    def n_cells(self):
        return len(self.cells)

    def content_hash(self):
        """Stable hash of the mesh geometry, used to key operator caches."""
        m = hashlib.sha256()
        m.update(np.asarray(self.domain, dtype=np.float64).tobytes())
        m.update(np.asarray(self.periodic, dtype=np.int64).tobytes())
        for c in self.cells:
            m.update(c.vertices.tobytes())
        return m.hexdigest()


def _polygon_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def generate_points(domain, target_h, seed, periodic=(False, False)):
    """Quasi-uniform generator set: jittered hexagonal lattice.

    Non-periodic sides get an exact chain of boundary points (plus the
    domain corners) so that the primal triangulation conforms to the
    rectangle and the dual tiles it exactly.
    """
    x0, y0, x1, y1 = map(float, domain)
    Lx, Ly = x1 - x0, y1 - y0
    if Lx <= 0 or Ly <= 0:
        raise InvalidParameterError("degenerate domain")
    if target_h <= 0 or target_h > max(Lx, Ly):
        raise InvalidParameterError(
            f"target_h={target_h} out of range for domain extent {(Lx, Ly)}")
    per_x, per_y = periodic

    a = SPACING_FACTOR * target_h
    amp = JITTER_FACTOR * target_h
    rng = np.random.default_rng(seed)

    nx = max(2, round(Lx / a))
    dx = Lx / nx
    dyt = a * np.sqrt(3.0) / 2.0
    ny = max(2, round(Ly / dyt))
    if per_y and ny % 2:
        ny += 1
    dy = Ly / ny

    pts = []
    for j in range(ny):
        y = y0 + (j + 0.5) * dy
        for i in range(nx):
            x = x0 + (i + 0.25 + 0.5 * (j % 2)) * dx
            jx, jy = rng.uniform(-amp, amp, 2)
            px, py = x + jx, y + jy
            if not per_x:
                px = min(max(px, x0 + WALL_CLEARANCE * dx),
                         x1 - WALL_CLEARANCE * dx)
            else:
                px = x0 + (px - x0) % Lx
            if not per_y:
                py = min(max(py, y0 + WALL_CLEARANCE * dy),
                         y1 - WALL_CLEARANCE * dy)
            else:
                py = y0 + (py - y0) % Ly
            pts.append((px, py))

    def _chain(n, lo, hi, wrap):
        step = (hi - lo) / n
        vals = []
        for k in range(n):
            t = lo + (k + 0.5) * step + rng.uniform(-amp, amp)
            if wrap:
                t = lo + (t - lo) % (hi - lo)
            else:
                t = min(max(t, lo + 0.3 * step), hi - 0.3 * step)
            vals.append(t)
        return vals

    if not per_x:
        nb = max(2, round(Ly / (WALL_SPACING_FACTOR * a)))
        for x in (x0, x1):
            for y in _chain(nb, y0, y1, per_y):
                pts.append((x, y))
    if not per_y:
        nb = max(2, round(Lx / (WALL_SPACING_FACTOR * a)))
        for y in (y0, y1):
            for x in _chain(nb, x0, x1, per_x):
                pts.append((x, y))
    if not per_x and not per_y:
        pts.extend([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    return np.asarray(pts, dtype=np.float64)


def delaunay(points) -> DelaunayTriangulation:
    """Delaunay triangulation with counterclockwise triangles."""
    points = np.asarray(points, dtype=np.float64)
    if len(points) < 3:
        raise DegenerateInputError("need at least 3 points")
    try:
        tri = _SciPyDelaunay(points)
    except QhullError as exc:
        raise DegenerateInputError(f"triangulation failed: {exc}") from exc
    simplices = tri.simplices.copy()
    if simplices.size == 0:
        raise DegenerateInputError("all points collinear")
    p = points[simplices]
    det = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
           - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
    flip = det < 0
    simplices[flip] = simplices[flip][:, [0, 2, 1]]
    keep = np.abs(det) > 1e-14 * np.abs(det).max()
    return DelaunayTriangulation(points=points, triangles=simplices[keep])


def in_circle_determinant(a, b, c, d):
    """Positive when d lies inside the circumcircle of ccw triangle (a,b,c)."""
    rows = []
    for p in (a, b, c):
        rows.append([p[0] - d[0], p[1] - d[1],
                     (p[0] - d[0]) ** 2 + (p[1] - d[1]) ** 2])
    return np.linalg.det(np.array(rows))


def _periodic_offsets(domain, periodic):
    x0, y0, x1, y1 = domain
    ox = [0.0, x1 - x0, x0 - x1] if periodic[0] else [0.0]
    oy = [0.0, y1 - y0, y0 - y1] if periodic[1] else [0.0]
    offsets = []
    for sy in oy:
        for sx in ox:
            offsets.append((sx, sy))
    # ensure the identity offset is first
    offsets.sort(key=lambda s: (abs(s[0]) + abs(s[1]), s))
    return offsets


def _on_side(p, side, domain, tol):
    x0, y0, x1, y1 = domain
    if side == "xmin":
        return abs(p[0] - x0) <= tol
    if side == "xmax":
        return abs(p[0] - x1) <= tol
    if side == "ymin":
        return abs(p[1] - y0) <= tol
    return abs(p[1] - y1) <= tol


def build_voronoi_dual(tri: DelaunayTriangulation, domain,
                       periodic=(False, False), n_base=None,
                       offsets=None) -> VoronoiMesh:
    """Barycenter dual of a (possibly ghost-tiled) triangulation.

    `n_base` is the number of base generators when the point set contains
    periodic ghost copies; `offsets` lists the tiling translations with
    the identity first.
    """
    pts = tri.points
    tris = tri.triangles
    if n_base is None:
        n_base = len(pts)
    if offsets is None:
        offsets = [(0.0, 0.0)]
    x0, y0, x1, y1 = domain
    diam = max(x1 - x0, y1 - y0)
    tol = 1e-9 * diam

    bary = pts[tris].mean(axis=1)

    # connectivity: vertex -> incident triangles, undirected edge -> triangles
    vert_tris = [[] for _ in range(len(pts))]
    edge_tris = {}
    for t, (ia, ib, ic) in enumerate(tris):
        for v in (ia, ib, ic):
            vert_tris[v].append(t)
        for (u, v) in ((ia, ib), (ib, ic), (ic, ia)):
            key = (u, v) if u < v else (v, u)
            edge_tris.setdefault(key, []).append(t)

    def edge_key(u, v):
        return (u, v) if u < v else (v, u)

    corner_ids = {}
    if not periodic[0] and not periodic[1]:
        for cid, (cx, cy) in enumerate([(x0, y0), (x1, y0), (x1, y1), (x0, y1)]):
            corner_ids[cid] = np.array([cx, cy])

    cells = []
    cell_neighbors = []   # per cell, per local face: ('cell', ext_gen) or side
    for g in range(n_base):
        inc = vert_tris[g]
        if len(inc) == 0:
            raise MeshQualityError(f"generator {g} has no incident triangles")

        def succ_pair(t):
            tv = tris[t]
            k = int(np.where(tv == g)[0][0])
            return tv[(k + 1) % 3], tv[(k + 2) % 3]

        # find boundary start (edge (g, p) with a single triangle)
        start = None
        for t in inc:
            p, _q = succ_pair(t)
            if len(edge_tris[edge_key(g, p)]) == 1:
                start = t
                break
        is_boundary = start is not None
        if start is None:
            start = inc[0]

        fan = []
        t = start
        while True:
            fan.append(t)
            _p, q = succ_pair(t)
            adj = edge_tris[edge_key(g, q)]
            if len(adj) == 1:
                break
            t = adj[0] if adj[1] == fan[-1] else adj[1]
            if t == start:
                break
            if len(fan) > len(inc):
                raise TopologyError(f"broken triangle fan around generator {g}")

        verts = []
        nbrs = []
        if is_boundary:
            p0, _ = succ_pair(fan[0])
            _, q_last = succ_pair(fan[-1])
            mid_in = 0.5 * (pts[g] + pts[p0])
            mid_out = 0.5 * (pts[g] + pts[q_last])
            verts.append(mid_in)
            nbrs.append(("cell", p0))
            for k, t in enumerate(fan):
                verts.append(bary[t])
                if k < len(fan) - 1:
                    _, q = succ_pair(t)
                    nbrs.append(("cell", q))
            nbrs.append(("cell", q_last))
            verts.append(mid_out)
            # boundary closure: straight arc back to mid_in, via corners
            side_out = next(s for s in BOUNDARY_SIDES
                            if _on_side(mid_out, s, domain, tol))
            side_in = next(s for s in BOUNDARY_SIDES
                           if _on_side(mid_in, s, domain, tol))
            if side_out != side_in:
                # generator sits on a domain corner
                verts.append(pts[g].copy())
                nbrs.append((side_out,))
                nbrs.append((side_in,))
            else:
                nbrs.append((side_out,))
        else:
            for k, t in enumerate(fan):
                verts.append(bary[t])
                _, q = succ_pair(t)
                nbrs.append(("cell", q))

        verts = np.asarray(verts)
        if len(verts) < 3:
            raise MeshQualityError(f"degenerate cell around generator {g}")
        area = _polygon_area(verts)
        if area <= 0:
            raise MeshQualityError(
                f"non-positively-oriented cell around generator {g}")
        cells.append(_finish_cell(pts[g].copy(), verts, g))
        cell_neighbors.append(nbrs)

    return _build_faces(cells, cell_neighbors, domain, periodic,
                        n_base, offsets, tol)


def _finish_cell(gen, verts, g):
    area = _polygon_area(verts)
    nr = len(verts)
    edges = np.roll(verts, -1, axis=0) - verts
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    if lengths.min() <= 0:
        raise MeshQualityError(f"zero-length face in cell {g}")
    normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
    h = 2.0 * area / lengths.sum()
    if lengths.min() < 1e-8 * h:
        raise MeshQualityError(
            f"cell {g}: face shorter than 1e-8 h_i, mesh too degenerate")
    xc = verts.mean(axis=0)
    jac = np.empty((nr, 2, 2))
    jac[:, :, 0] = verts - xc
    jac[:, :, 1] = np.roll(verts, -1, axis=0) - xc
    det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
    if det.min() <= 0:
        raise MeshQualityError(f"cell {g}: inverted sub-triangle")
    inv = np.empty_like(jac)
    inv[:, 0, 0] = jac[:, 1, 1] / det
    inv[:, 0, 1] = -jac[:, 0, 1] / det
    inv[:, 1, 0] = -jac[:, 1, 0] / det
    inv[:, 1, 1] = jac[:, 0, 0] / det
    return VoronoiCell(generator=gen, vertices=verts, barycenter=xc,
                       area=area, h=h, face_lengths=lengths, normals=normals,
                       jac=jac, jac_det=det, jac_inv=inv)


def _build_faces(cells, cell_neighbors, domain, periodic, n_base,
                 offsets, tol):
    x0, y0, x1, y1 = domain
    faces = []
    pending = {}
    offset_index = {tuple(np.round(o, 12)): k for k, o in enumerate(offsets)}

    def copy_of(shift):
        key = tuple(np.round(shift, 12))
        if key not in offset_index:
            raise TopologyError(f"unknown periodic shift {shift}")
        return offset_index[key]

    for i, nbrs in enumerate(cell_neighbors):
        cell = cells[i]
        for f, nb in enumerate(nbrs):
            if nb[0] != "cell":
                faces.append(FaceRecord(
                    left_cell=i, left_local=f,
                    normal=cell.normals[f].copy(),
                    length=float(cell.face_lengths[f]), kind=nb[0],
                    shift=np.zeros(2)))
                continue
            ext = nb[1]
            j = ext % n_base
            shift = np.asarray(offsets[ext // n_base])
            # combinatorial pairing key, symmetric under side exchange
            me = (i, copy_of(-shift))
            other = (j, copy_of(shift))
            key = (min(me, other), max(me, other))
            if key in pending:
                fid = pending.pop(key)
                rec = faces[fid]
                rec.right_cell = i
                rec.right_local = f
                # partner geometry must agree after translation
                if abs(rec.length - cell.face_lengths[f]) > 1e-10 * max(1.0, rec.length):
                    raise TopologyError(
                        f"face length mismatch between cells {rec.left_cell} and {i}")
            else:
                kind = "interior" if np.all(shift == 0.0) else "periodic"
                fid = len(faces)
                faces.append(FaceRecord(
                    left_cell=i, left_local=f,
                    normal=cell.normals[f].copy(),
                    length=float(cell.face_lengths[f]),
                    kind=kind, shift=shift))
                pending[key] = fid

    if pending:
        raise TopologyError(f"{len(pending)} unmatched interior/periodic faces")

    cell_faces = [[None] * c.n_faces for c in cells]
    for fid, rec in enumerate(faces):
        cell_faces[rec.left_cell][rec.left_local] = (fid, 0)
        if rec.right_cell >= 0:
            cell_faces[rec.right_cell][rec.right_local] = (fid, 1)
    for i, lst in enumerate(cell_faces):
        if any(e is None for e in lst):
            raise TopologyError(f"cell {i} has an unassigned face")

    return VoronoiMesh(domain=tuple(domain), periodic=tuple(periodic),
                       cells=cells, faces=faces, cell_faces=cell_faces)


def voronoi_from_points(points, domain, periodic=(False, False)) -> VoronoiMesh:
    """Triangulate a generator set (ghost-tiled if periodic) and build the dual."""
    points = np.asarray(points, dtype=np.float64)
    offsets = _periodic_offsets(domain, periodic)
    if len(offsets) > 1:
        ext = np.concatenate([points + np.asarray(o) for o in offsets])
    else:
        ext = points
    tri = delaunay(ext)
    return build_voronoi_dual(tri, domain, periodic, n_base=len(points),
                              offsets=offsets)


def voronoi_from_triangulation(tri: DelaunayTriangulation, domain) -> VoronoiMesh:
    """Dual of an externally supplied (conforming, non-periodic) triangulation."""
    return build_voronoi_dual(tri, domain, (False, False))


def _area_centroids(mesh: VoronoiMesh):
    out = np.empty((mesh.n_cells, 2))
    for i, c in enumerate(mesh.cells):
        v = c.vertices
        v2 = np.roll(v, -1, axis=0)
        cross = v[:, 0] * v2[:, 1] - v2[:, 0] * v[:, 1]
        out[i, 0] = np.sum((v[:, 0] + v2[:, 0]) * cross) / (6.0 * c.area)
        out[i, 1] = np.sum((v[:, 1] + v2[:, 1]) * cross) / (6.0 * c.area)
    return out


def relax_points(pts, domain, periodic, iterations, spacing):
    """Lloyd relaxation: move generators to their dual-cell area centroids.

    Wall-chain generators slide only along their wall; corner generators
    stay fixed.  Equalizing the cell sizes matters beyond aesthetics: the
    viscous time-step limit scales with min_i h_i^2, so a single sliver
    cell can inflate the step count of a diffusion-dominated run by an
    order of magnitude.
    """
    x0, y0, x1, y1 = map(float, domain)
    Lx, Ly = x1 - x0, y1 - y0
    tol = 1e-9 * max(Lx, Ly)
    pts = np.array(pts, dtype=np.float64)
    on_xlo = np.abs(pts[:, 0] - x0) <= tol
    on_xhi = np.abs(pts[:, 0] - x1) <= tol
    on_ylo = np.abs(pts[:, 1] - y0) <= tol
    on_yhi = np.abs(pts[:, 1] - y1) <= tol
    on_x = on_xlo | on_xhi
    on_y = on_ylo | on_yhi
    corner = on_x & on_y
    margin = 0.25 * spacing

    for _ in range(iterations):
        cen = _area_centroids(voronoi_from_points(pts, domain, periodic))
        new = cen
        # wall points keep their fixed coordinate and slide tangentially
        new[on_x, 0] = pts[on_x, 0]
        new[on_y, 1] = pts[on_y, 1]
        new[corner] = pts[corner]
        if periodic[0]:
            new[:, 0] = x0 + (new[:, 0] - x0) % Lx
        else:
            slide = on_x & ~corner
            new[slide, 1] = np.clip(new[slide, 1], y0 + margin, y1 - margin)
        if periodic[1]:
            new[:, 1] = y0 + (new[:, 1] - y0) % Ly
        else:
            slide = on_y & ~corner
            new[slide, 0] = np.clip(new[slide, 0], x0 + margin, x1 - margin)
        pts = new
    return pts


def generate_mesh(domain, target_h, seed=0, periodic=(False, False),
                  lloyd=None) -> VoronoiMesh:
    """Jittered-lattice Voronoi mesh, relaxed when the domain has walls.

    ``lloyd`` is the number of Lloyd relaxation sweeps; the default
    applies 4 sweeps only to wall-bounded domains, where unrelaxed
    boundary cells can come out several times smaller than the median
    (which shrinks the stable time step quadratically for viscous runs).
    Fully periodic meshes keep the plain jittered lattice.
    """
    if lloyd is None:
        lloyd = 0 if (periodic[0] and periodic[1]) else 4
    pts = generate_points(domain, target_h, seed, periodic)
    if lloyd:
        pts = relax_points(pts, domain, periodic, lloyd,
                           SPACING_FACTOR * target_h)
    return voronoi_from_points(pts, domain, periodic)


def pair_periodic_faces(mesh: VoronoiMesh, domain=None) -> VoronoiMesh:
    """Validate the periodic face pairing of a mesh built with ghost tiling."""
    domain = domain or mesh.domain
    x0, y0, x1, y1 = domain
    per = mesh.periodic
    for fid, rec in enumerate(mesh.faces):
        if rec.kind == "periodic":
            if rec.right_cell < 0:
                raise TopologyError(f"periodic face {fid} has no partner")
            right = mesh.cells[rec.right_cell]
            rl = right.face_lengths[rec.right_local]
            if abs(rl - rec.length) > 1e-10 * max(1.0, rec.length):
                raise TopologyError(f"periodic face {fid}: length mismatch")
            rn = right.normals[rec.right_local]
            if np.abs(rn + rec.normal).max() > 1e-10:
                raise TopologyError(f"periodic face {fid}: normals not opposite")
        elif rec.kind in ("xmin", "xmax") and per[0]:
            raise TopologyError(f"unpaired boundary face {fid} on periodic side")
        elif rec.kind in ("ymin", "ymax") and per[1]:
            raise TopologyError(f"unpaired boundary face {fid} on periodic side")
    return mesh


def read_primal_ascii(path) -> DelaunayTriangulation:
    """Read a primal mesh: node count, x y lines; triangle count, 1-based ijk."""
    with open(path) as fh:
        tokens = fh.read().split()
    it = iter(tokens)
    try:
        npts = int(next(it))
        pts = np.array([[float(next(it)), float(next(it))] for _ in range(npts)])
        ntri = int(next(it))
        tris = np.array([[int(next(it)) - 1, int(next(it)) - 1, int(next(it)) - 1]
                         for _ in range(ntri)], dtype=np.int64)
    except StopIteration as exc:
        raise DegenerateInputError("truncated primal mesh file") from exc
    # enforce ccw orientation
    p = pts[tris]
    det = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
           - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
    tris[det < 0] = tris[det < 0][:, [0, 2, 1]]
    return DelaunayTriangulation(points=pts, triangles=tris)


def write_primal_ascii(tri: DelaunayTriangulation, path):
    with open(path, "w") as fh:
        fh.write(f"{len(tri.points)}\n")
        for x, y in tri.points:
            fh.write(f"{x:.17g} {y:.17g}\n")
        fh.write(f"{len(tri.triangles)}\n")
        for a, b, c in tri.triangles:
            fh.write(f"{a + 1} {b + 1} {c + 1}\n")


def write_mesh_vtk(mesh: VoronoiMesh, path):
    """Legacy ASCII VTK with both polygon outlines and the subcell triangles."""
    pts = []
    polys = []
    tris = []
    for c in mesh.cells:
        base = len(pts)
        pts.append(c.barycenter)
        pts.extend(c.vertices)
        nr = c.n_faces
        polys.append([base + 1 + k for k in range(nr)])
        for f in range(nr):
            tris.append([base, base + 1 + f, base + 1 + (f + 1) % nr])
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\npolydg mesh\nASCII\n")
        fh.write("DATASET UNSTRUCTURED_GRID\n")
        fh.write(f"POINTS {len(pts)} double\n")
        for x, y in pts:
            fh.write(f"{x} {y} 0.0\n")
        ncell = len(polys) + len(tris)
        sz = sum(len(p) + 1 for p in polys) + 4 * len(tris)
        fh.write(f"CELLS {ncell} {sz}\n")
        for p in polys:
            fh.write(" ".join(map(str, [len(p)] + p)) + "\n")
        for t in tris:
            fh.write(" ".join(map(str, [3] + t)) + "\n")
        fh.write(f"CELL_TYPES {ncell}\n")
        fh.write("\n".join(["7"] * len(polys) + ["5"] * len(tris)) + "\n")


def mesh_statistics(mesh: VoronoiMesh):
    h = np.array([c.h for c in mesh.cells])
    area = np.array([c.area for c in mesh.cells])
    return {"n_cells": mesh.n_cells, "h_mean": float(h.mean()),
            "h_min": float(h.min()), "h_max": float(h.max()),
            "area_total": float(area.sum())}
