"""Reference-element operators against analytic and quadrature oracles."""

import math

import numpy as np
import pytest

from polydg import basis
from polydg.errors import InvalidParameterError

DEGREES = [0, 1, 2, 3]


def monomial_integral_triangle(p, q):
    """Exact integral of xi^p eta^q over the unit reference triangle."""
    return math.factorial(p) * math.factorial(q) / math.factorial(p + q + 2)


def independent_triangle_rule(n):
    """Tensorized Gauss rule on the collapsed square, explicit Jacobian.

    Independent of basis.triangle_quadrature: maps (u, v) in [0,1]^2 to
    (u (1-v), v) with Jacobian (1-v) carried in the weights.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (x + 1.0)
    wu = 0.5 * w
    pts, wts = [], []
    for b, w2 in zip(u, wu):
        for a, w1 in zip(u, wu):
            pts.append((a * (1.0 - b), b))
            wts.append(w1 * w2 * (1.0 - b))
    return np.array(pts), np.array(wts)


# ----------------------------------------------------------------------
def test_ndof_examples():
    assert basis.ndof(0, 2) == 1
    assert basis.ndof(2, 3) == 10
    assert basis.ndof(3, 2) == 10
    assert basis.ndof(1, 1) == 2


def test_ndof_invalid():
    with pytest.raises(InvalidParameterError):
        basis.ndof(-1, 2)
    with pytest.raises(InvalidParameterError):
        basis.ndof(2, 5)


def test_degree_cap():
    with pytest.raises(InvalidParameterError):
        basis.triangle_nodes(4)
    with pytest.raises(InvalidParameterError):
        basis.assemble_universal(-1)


@pytest.mark.parametrize("N", DEGREES)
def test_lagrange_delta_property(N):
    vals = basis.lagrange_eval(N, basis.triangle_nodes(N))
    assert np.allclose(vals, np.eye(basis.ndof(N, 2)), atol=1e-12)


def test_lagrange_node1_values():
    vals = basis.lagrange_eval(2, [[0.0, 0.0]])[0]
    expect = np.zeros(6)
    expect[0] = 1.0
    assert np.allclose(vals, expect, atol=1e-13)


@pytest.mark.parametrize("N", DEGREES)
def test_partition_of_unity(N):
    rng = np.random.default_rng(3)
    pts = rng.random((50, 2)) * 0.5
    vals = basis.lagrange_eval(N, pts)
    assert np.allclose(vals.sum(axis=1), 1.0, atol=1e-14)
    gx, gy = basis.lagrange_grad(N, pts)
    assert np.allclose(gx.sum(axis=1), 0.0, atol=1e-12)
    assert np.allclose(gy.sum(axis=1), 0.0, atol=1e-12)


def test_linear_basis_explicit():
    pts = np.array([[0.3, 0.2]])
    vals = basis.lagrange_eval(1, pts)[0]
    assert np.allclose(vals, [1 - 0.3 - 0.2, 0.3, 0.2], atol=1e-14)
    gx, gy = basis.lagrange_grad(1, pts)
    assert np.allclose([gx[0, 1], gy[0, 1]], [1.0, 0.0], atol=1e-14)


def test_time_nodes_examples():
    assert np.allclose(basis.time_nodes(0), [0.5])
    ref = [(1 - 1 / np.sqrt(3)) / 2, (1 + 1 / np.sqrt(3)) / 2]
    assert np.allclose(basis.time_nodes(1), ref, atol=1e-14)
    assert np.allclose(basis.time_weights(1), [0.5, 0.5], atol=1e-14)


def test_spacetime_node_count():
    assert len(basis.spacetime_nodes(3)) == 10 * 4
    assert len(basis.spacetime_nodes(0)) == 1


@pytest.mark.parametrize("degree", [1, 3, 5, 8, 12])
def test_triangle_quadrature_polynomial_exactness(degree):
    pts, wts = basis.triangle_quadrature(degree)
    for p in range(degree + 1):
        for q in range(degree + 1 - p):
            val = np.sum(wts * pts[:, 0] ** p * pts[:, 1] ** q)
            assert val == pytest.approx(monomial_integral_triangle(p, q),
                                        abs=1e-14)


@pytest.mark.parametrize("N", DEGREES)
def test_mass_matrix_analytic_oracle(N):
    """Mass matrix against exact monomial integrals via the Vandermonde."""
    ops = basis.assemble_universal(N)
    mi = basis.triangle_multi_indices(N)
    Mmono = np.array([[monomial_integral_triangle(p1 + p2, q1 + q2)
                       for (p2, q2) in mi] for (p1, q1) in mi])
    C = np.linalg.inv(np.column_stack(
        [basis.triangle_nodes(N)[:, 0] ** p * basis.triangle_nodes(N)[:, 1] ** q
         for (p, q) in mi]))
    assert np.allclose(ops.mass, C.T @ Mmono @ C, atol=1e-12)


@pytest.mark.parametrize("N", DEGREES)
def test_stiffness_matrices_quadrature_oracle(N):
    ops = basis.assemble_universal(N)
    pts, wts = independent_triangle_rule(8)
    phi = basis.lagrange_eval(N, pts)
    gx, gy = basis.lagrange_grad(N, pts)
    assert np.allclose(ops.Kx_space, (phi * wts[:, None]).T @ gx, atol=1e-12)
    assert np.allclose(ops.Ky_space, (phi * wts[:, None]).T @ gy, atol=1e-12)
    assert np.allclose(ops.V_xi, (gx * wts[:, None]).T @ phi, atol=1e-12)
    assert np.allclose(ops.V_eta, (gy * wts[:, None]).T @ phi, atol=1e-12)


@pytest.mark.parametrize("N", DEGREES)
def test_integration_by_parts_identity(N):
    """V_xi + Kx^T equals the boundary term of the reference triangle."""
    ops = basis.assemble_universal(N)
    # int dphi_l/dxi phi_k + int phi_l dphi_k/dxi = oint phi_l phi_k n_xi
    lhs = ops.V_xi + ops.Kx_space
    sq, sw = basis.gauss_legendre_01(2 * N + 2)
    bnd = np.zeros_like(lhs)
    # edge xi=0 (n_xi=-1), diagonal (n_xi = 1/sqrt2, ds = sqrt2 dsigma)
    for pts, nx, scale in (
            (np.column_stack([np.zeros_like(sq), sq]), -1.0, 1.0),
            (np.column_stack([1 - sq, sq]), 1.0 / np.sqrt(2), np.sqrt(2))):
        ph = basis.lagrange_eval(N, pts)
        bnd += nx * scale * (ph * sw[:, None]).T @ ph
    assert np.allclose(lhs, bnd, atol=1e-12)


def test_degenerate_operators_N0():
    ops = basis.assemble_universal(0)
    assert np.allclose(ops.T_tau, [1.0])
    assert np.allclose(ops.V_xi, [[0.0]])
    assert np.allclose(ops.V_eta, [[0.0]])
    assert np.allclose(ops.mass, [[0.5]])


def test_time_quadrature_weights_as_integrals():
    # nodal time basis at Gauss points: integral of each basis function
    # equals its Gauss weight
    for N in DEGREES:
        tq, tw = basis.gauss_legendre_01(N + 3)
        psi = basis.time_lagrange_eval(N, tq)
        ints = tw @ psi
        assert np.allclose(ints, basis.time_weights(N), atol=1e-14)
    assert np.allclose(basis.assemble_universal(1).T_tau, [0.5, 0.5])


def test_edge_mass_block_linear():
    """1D linear edge mass matrix has the analytic [[1/3,1/6],[1/6,1/3]]."""
    ops = basis.assemble_universal(1)
    assert np.allclose(ops.T1d, [[1 / 3, 1 / 6], [1 / 6, 1 / 3]], atol=1e-13)
    # and the full edge mass restricted to the two edge nodes matches
    er = ops.edge_ref
    assert np.allclose(ops.T_xi[np.ix_(er, er)], ops.T1d, atol=1e-13)


@pytest.mark.parametrize("N", DEGREES)
def test_edge_mass_analytic_oracle(N):
    nodes = basis.edge_param_nodes(N)
    V = np.vander(nodes, len(nodes), increasing=True)
    k = np.arange(len(nodes))
    Mmono = 1.0 / (k[:, None] + k[None, :] + 1.0)
    oracle = np.linalg.inv(V).T @ Mmono @ np.linalg.inv(V)
    assert np.allclose(basis.assemble_universal(N).T1d, oracle, atol=1e-12)


@pytest.mark.parametrize("N", DEGREES)
def test_time_block_galerkin_oracle(N):
    """Upwind time block against analytic monomial integrals."""
    ops = basis.assemble_universal(N)
    nodes = basis.time_nodes(N)
    V = np.vander(nodes, N + 1, increasing=True)
    Vi = np.linalg.inv(V)
    # D[a,b] = int psi_a' psi_b via monomials: int (t^i)' t^j = i/(i+j)
    n = N + 1
    Dm = np.zeros((n, n))
    for i in range(1, n):
        for j in range(n):
            Dm[i, j] = i / (i + j)
    D = Vi.T @ Dm @ Vi
    psi1 = basis.time_lagrange_eval(N, [1.0])[0]
    assert np.allclose(ops.A_time, np.outer(psi1, psi1) - D, atol=1e-12)
    assert np.allclose(ops.A_time_inv @ ops.A_time, np.eye(n), atol=1e-12)


@pytest.mark.parametrize("N", DEGREES)
def test_spacetime_kron_layout(N):
    ops = basis.assemble_universal(N)
    assert ops.K1_ref.shape == (ops.T, ops.T)
    assert np.allclose(ops.K1_ref, np.kron(ops.A_time, ops.mass), atol=1e-14)
    psi0 = basis.time_lagrange_eval(N, [0.0])[0]
    assert np.allclose(ops.F0, np.kron(psi0[:, None], ops.mass), atol=1e-14)


def test_cell_dof_count_examples():
    assert basis.n_cell_dofs(6, 3) == 6 * (10 - 4) + 1 == 37
    assert basis.n_cell_dofs(5, 0) == 1
    assert basis.n_cell_dofs(5, 1) == 6
    assert basis.n_cell_dofs(7, 2) == 7 * 3 + 1


@pytest.mark.parametrize("N", DEGREES)
@pytest.mark.parametrize("nf", [3, 5, 6, 8])
def test_dof_maps_consistency(N, nf):
    sub, trace, ndofs = basis.build_dof_maps(nf, N)
    assert ndofs == basis.n_cell_dofs(nf, N)
    # every global node appears, all indices in range
    assert set(sub.ravel()) == set(range(ndofs))
    # spoke continuity: nodes shared by adjacent subcells coincide
    nodes = basis.triangle_nodes(N)
    for f in range(nf):
        fn = (f + 1) % nf
        # the eta-axis of subcell f is the xi-axis of subcell f+1... the
        # shared spoke runs from barycenter to vertex fn
        shared_f = {sub[f, m] for m, (k1, k2) in
                    enumerate(basis.triangle_multi_indices(N)) if k1 == 0}
        shared_fn = {sub[fn, m] for m, (k1, k2) in
                     enumerate(basis.triangle_multi_indices(N)) if k2 == 0}
        if N > 0:
            assert shared_f == shared_fn
    # trace nodes lie on the outer edge in arc order (N=0 collocates the
    # single constant node at the centroid instead)
    if N > 0:
        er = basis.diagonal_edge_ref_indices(N)
        s = basis.edge_param_nodes(N)
        edge_nodes = nodes[er]
        expect = np.column_stack([1 - s, s])
        assert np.allclose(edge_nodes, expect, atol=1e-14)


def test_dof_maps_shared_vertices():
    sub, trace, _ = basis.build_dof_maps(6, 2)
    for f in range(6):
        assert trace[f, 0] == 1 + f            # vertex f
        assert trace[f, -1] == 1 + (f + 1) % 6  # vertex f+1
