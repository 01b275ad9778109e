"""Nodal basis on the reference triangle and precomputed reference operators.

The discrete solution inside each polygonal cell lives on a triangular
subgrid; every sub-triangle is mapped to the unit reference triangle
T_e = {(xi, eta): xi >= 0, eta >= 0, xi + eta <= 1}.  All mass, stiffness
and flux matrices are computed once on T_e (and on the reference
space-time prism T_e x [0, 1]) so that the solver never performs runtime
quadrature.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .errors import InvalidParameterError

MAX_DEGREE = 3


def ndof(N: int, d: int) -> int:
    """Number of coefficients of a polynomial of total degree N in d dims."""
    if N < 0 or d not in (1, 2, 3):
        raise InvalidParameterError(f"ndof: bad arguments N={N}, d={d}")
    out = 1
    for m in range(1, d + 1):
        out = out * (N + m) // m
    return out


def _check_degree(N):
    if not 0 <= N <= MAX_DEGREE:
        raise InvalidParameterError(f"unsupported polynomial degree N={N}")


def triangle_multi_indices(N):
    """Node multi-indices (k1, k2), rows of increasing k2, then k1."""
    return [(k1, k2) for k2 in range(N + 1) for k1 in range(N + 1 - k2)]


def triangle_nodes(N):
    """Nodal points on the reference triangle, shape (M, 2).

    For N = 0 the single node sits at the centroid; the basis is the
    constant function and the node location only fixes where collocated
    quantities are evaluated.
    """
    _check_degree(N)
    if N == 0:
        return np.array([[1.0 / 3.0, 1.0 / 3.0]])
    return np.array([(k1 / N, k2 / N) for (k1, k2) in triangle_multi_indices(N)])


def _monomials(N, pts):
    pts = np.atleast_2d(pts)
    cols = [pts[:, 0] ** p * pts[:, 1] ** q
            for (p, q) in triangle_multi_indices(N)]
    return np.column_stack(cols)


def _monomial_grads(N, pts):
    pts = np.atleast_2d(pts)
    xi, eta = pts[:, 0], pts[:, 1]
    gx, gy = [], []
    for (p, q) in triangle_multi_indices(N):
        gx.append(p * xi ** max(p - 1, 0) * eta ** q if p else np.zeros_like(xi))
        gy.append(q * xi ** p * eta ** max(q - 1, 0) if q else np.zeros_like(xi))
    return np.stack(gx, axis=1), np.stack(gy, axis=1)


def _vandermonde_inverse(N):
    V = _monomials(N, triangle_nodes(N))
    return np.linalg.inv(V)


def lagrange_eval(N, pts):
    """Values of the M nodal basis functions at pts, shape (npts, M)."""
    _check_degree(N)
    return _monomials(N, pts) @ _vandermonde_inverse(N)


def lagrange_grad(N, pts):
    """Gradients of the nodal basis at pts, two arrays of shape (npts, M)."""
    _check_degree(N)
    C = _vandermonde_inverse(N)
    gx, gy = _monomial_grads(N, pts)
    return gx @ C, gy @ C


def edge_param_nodes(N):
    """Arc parameters s of the trace nodes along one reference edge."""
    if N == 0:
        return np.array([0.5])
    return np.arange(N + 1) / N


def edge_lagrange_eval(N, s):
    """1D nodal basis on [0, 1] at the equispaced trace nodes."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    nodes = edge_param_nodes(N)
    V = np.vander(nodes, N + 1, increasing=True)
    P = np.vander(s, N + 1, increasing=True)
    return P @ np.linalg.inv(V)


def diagonal_edge_ref_indices(N):
    """Reference-node indices lying on the edge from (1,0) to (0,1), in s order."""
    if N == 0:
        return [0]
    mi = triangle_multi_indices(N)
    idx = [i for i, (k1, k2) in enumerate(mi) if k1 + k2 == N]
    idx.sort(key=lambda i: mi[i][1])
    return idx


def time_nodes(N):
    """Gauss-Legendre points of the degree-N time basis, rescaled to [0, 1]."""
    x, _ = np.polynomial.legendre.leggauss(N + 1)
    return 0.5 * (x + 1.0)


def time_weights(N):
    _, w = np.polynomial.legendre.leggauss(N + 1)
    return 0.5 * w


def time_lagrange_eval(N, tau):
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    nodes = time_nodes(N)
    V = np.vander(nodes, N + 1, increasing=True)
    P = np.vander(tau, N + 1, increasing=True)
    return P @ np.linalg.inv(V)


def time_lagrange_deriv(N, tau):
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    nodes = time_nodes(N)
    V = np.vander(nodes, N + 1, increasing=True)
    D = np.zeros((len(tau), N + 1))
    for j in range(1, N + 1):
        D[:, j] = j * tau ** (j - 1)
    return D @ np.linalg.inv(V)


def spacetime_nodes(N):
    """Tensor-product space-time nodes (xi, eta, tau), time-major ordering."""
    _check_degree(N)
    xy = triangle_nodes(N)
    taus = time_nodes(N)
    out = []
    for t in taus:
        for (x, y) in xy:
            out.append((x, y, t))
    return np.array(out)


def gauss_legendre_01(n):
    """n-point Gauss-Legendre rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def triangle_quadrature(degree):
    """Quadrature on T_e exact for total degree `degree`.

    Collapsed (Duffy) rule: Gauss-Legendre in the first direction and
    Gauss-Jacobi (weight 1-b) in the second, so the map Jacobian is
    absorbed exactly.
    """
    n = degree // 2 + 1
    ga, wa = gauss_legendre_01(n)
    xb, wb = roots_jacobi(n, 1.0, 0.0)
    # map [-1,1] with weight (1-x) onto [0,1] with weight (1-b):
    # x = 2b-1  =>  (1-x) = 2(1-b), dx = 2 db
    gb = 0.5 * (xb + 1.0)
    wb = wb / 4.0
    pts, wts = [], []
    for b, w2 in zip(gb, wb):
        for a, w1 in zip(ga, wa):
            pts.append((a * (1.0 - b), b))
            wts.append(w1 * w2)
    return np.array(pts), np.array(wts)


@dataclass
class ReferenceOperators:
    """Universal matrices on the reference triangle and space-time prism.

    Space-time indices are time-major: st = a * M + k with a the time
    level and k the spatial node.
    """

    N: int
    M: int                      # spatial nodes per sub-triangle
    T: int                      # space-time nodes per sub-triangle
    nodes: np.ndarray           # (M, 2) spatial reference nodes
    tau_nodes: np.ndarray       # (N+1,) time nodes
    mass: np.ndarray            # (M, M)   int_Te phi_k phi_l
    K_xi: np.ndarray            # (T, T)   int theta_k d theta_l / d xi
    K_eta: np.ndarray           # (T, T)
    F0: np.ndarray              # (T, M)   theta_k(., 0) phi_l
    K1_ref: np.ndarray          # (T, T)   upwind time block (per unit |J|)
    T_tau: np.ndarray           # (N+1,)   int_0^1 of the time basis
    T_xi: np.ndarray            # (M, M)   edge mass along the outer edge
    V_xi: np.ndarray            # (M, M)   int d phi_k / d xi  phi_l
    V_eta: np.ndarray           # (M, M)
    # factored pieces used by the kernels
    D_xi: np.ndarray = field(default=None)    # (M, M) nodal differentiation
    D_eta: np.ndarray = field(default=None)
    Kx_space: np.ndarray = field(default=None)  # (M, M) int phi_k d phi_l/d xi
    Ky_space: np.ndarray = field(default=None)
    w_tau: np.ndarray = field(default=None)     # (N+1,) GL weights
    psi0: np.ndarray = field(default=None)      # (N+1,) time basis at tau=0
    A_time: np.ndarray = field(default=None)    # (N+1, N+1) upwind time block
    A_time_inv: np.ndarray = field(default=None)
    T1d: np.ndarray = field(default=None)       # (N+1, N+1) edge mass in s
    edge_ref: np.ndarray = field(default=None)  # (N+1,) ref indices on the edge
    edge_mid: np.ndarray = field(default=None)  # (N+1,) edge basis at s = 1/2
    quad_pts: np.ndarray = field(default=None)
    quad_wts: np.ndarray = field(default=None)


def assemble_universal(N) -> ReferenceOperators:
    """Build every universal reference matrix for degree N."""
    _check_degree(N)
    M = ndof(N, 2)
    nt = N + 1
    T = M * nt

    qp, qw = triangle_quadrature(2 * N + 2)
    phi = lagrange_eval(N, qp)               # (nq, M)
    dphix, dphiy = lagrange_grad(N, qp)

    mass = (phi * qw[:, None]).T @ phi
    Kx_space = (phi * qw[:, None]).T @ dphix
    Ky_space = (phi * qw[:, None]).T @ dphiy
    V_xi = (dphix * qw[:, None]).T @ phi
    V_eta = (dphiy * qw[:, None]).T @ phi

    # time blocks, quadrature with margin
    tq, tw = gauss_legendre_01(N + 2)
    psi = time_lagrange_eval(N, tq)          # (nq, nt)
    dpsi = time_lagrange_deriv(N, tq)
    psi0 = time_lagrange_eval(N, [0.0])[0]
    psi1 = time_lagrange_eval(N, [1.0])[0]
    Mtau = (psi * tw[:, None]).T @ psi
    Dtau = (dpsi * tw[:, None]).T @ psi      # int psi_a' psi_b
    A_time = np.outer(psi1, psi1) - Dtau
    w_tau = time_weights(N)
    T_tau = w_tau.copy()                     # exact for the GL nodal basis

    # edge mass along the outer edge, unit arc parameter s in [0, 1]
    sq, sw = gauss_legendre_01(N + 2)
    edge_pts = np.column_stack([1.0 - sq, sq])
    phie = lagrange_eval(N, edge_pts)
    T_xi = (phie * sw[:, None]).T @ phie
    phis = edge_lagrange_eval(N, sq)
    T1d = (phis * sw[:, None]).T @ phis

    # full space-time matrices (time-major Kronecker layout)
    K_xi = np.kron(Mtau, Kx_space)
    K_eta = np.kron(Mtau, Ky_space)
    K1_ref = np.kron(A_time, mass)
    F0 = np.kron(psi0[:, None], mass)

    nodes = triangle_nodes(N)
    D_xi, D_eta = lagrange_grad(N, nodes)

    return ReferenceOperators(
        N=N, M=M, T=T,
        nodes=nodes, tau_nodes=time_nodes(N),
        mass=mass, K_xi=K_xi, K_eta=K_eta, F0=F0, K1_ref=K1_ref,
        T_tau=T_tau, T_xi=T_xi, V_xi=V_xi, V_eta=V_eta,
        D_xi=D_xi, D_eta=D_eta, Kx_space=Kx_space, Ky_space=Ky_space,
        w_tau=w_tau, psi0=psi0, A_time=A_time,
        A_time_inv=np.linalg.inv(A_time),
        T1d=T1d,
        edge_ref=np.array(diagonal_edge_ref_indices(N), dtype=np.int64),
        edge_mid=edge_lagrange_eval(N, [0.5])[0],
        quad_pts=qp, quad_wts=qw,
    )


def n_cell_dofs(n_faces, N):
    """Unique subgrid nodes of a polygonal cell with n_faces faces."""
    return n_faces * (ndof(N, 2) - N - 1) + 1


def build_dof_maps(cell_or_nfaces, N):
    """Sub-triangle and face-trace maps into the cell-global node numbering.

    Global order: barycenter node, the polygon vertices, the interior
    nodes of each spoke (barycenter-to-vertex edge), the interior nodes
    of each polygon face, then the strictly interior nodes per subcell.

    Returns (sub_dofmap (NR, M), trace (NR, N+1), n_dofs).
    """
    _check_degree(N)
    if hasattr(cell_or_nfaces, "vertices"):
        NR = len(cell_or_nfaces.vertices)
    else:
        NR = int(cell_or_nfaces)
    M = ndof(N, 2)
    n_int = (N - 1) * (N - 2) // 2
    base_spoke = 1 + NR
    base_face = base_spoke + NR * max(N - 1, 0)
    base_int = base_face + NR * max(N - 1, 0)
    ndofs = n_cell_dofs(NR, N)

    mi = triangle_multi_indices(N)
    sub = np.empty((NR, M), dtype=np.int64)
    for f in range(NR):
        fn = (f + 1) % NR
        interior_local = 0
        for m, (k1, k2) in enumerate(mi):
            if N == 0:
                g = 0
            elif k1 == 0 and k2 == 0:
                g = 0
            elif k1 == N:
                g = 1 + f
            elif k2 == N:
                g = 1 + fn
            elif k2 == 0:
                g = base_spoke + f * (N - 1) + (k1 - 1)
            elif k1 == 0:
                g = base_spoke + fn * (N - 1) + (k2 - 1)
            elif k1 + k2 == N:
                g = base_face + f * (N - 1) + (k2 - 1)
            else:
                g = base_int + f * n_int + interior_local
                interior_local += 1
            sub[f, m] = g

    edge_ref = diagonal_edge_ref_indices(N)
    trace = np.empty((NR, N + 1 if N > 0 else 1), dtype=np.int64)
    for f in range(NR):
        trace[f] = sub[f, edge_ref]
    return sub, trace, ndofs
