import numpy as np
import pytest

from polydg import cases, discretization, mesh as meshmod


@pytest.fixture(scope="session")
def small_periodic_mesh():
    """Coarse doubly periodic mesh on the unit-vortex domain."""
    return meshmod.generate_mesh((0, 0, 10, 10), 1.4, seed=0,
                                 periodic=(True, True))


@pytest.fixture(scope="session")
def small_wall_mesh():
    return meshmod.generate_mesh((0, 0, 1, 1), 0.22, seed=1,
                                 periodic=(False, False))


@pytest.fixture(scope="session")
def disc_n2(small_periodic_mesh):
    return discretization.build(small_periodic_mesh, 2)


@pytest.fixture(scope="session")
def vortex_case():
    return cases.get_case("vortex")


def brute_force_cell_quadrature(cell, func, degree=12):
    """Integrate func(x, y) over a polygonal cell by dense subcell rules."""
    from polydg import basis
    pts, wts = basis.triangle_quadrature(degree)
    xc = cell.vertices.mean(axis=0)
    total = 0.0
    for f in range(cell.n_faces):
        phys = xc[None, :] + pts @ cell.jac[f].T
        total += cell.jac_det[f] * np.sum(wts * func(phys[:, 0], phys[:, 1]))
    return total
