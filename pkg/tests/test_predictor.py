"""Element-local space-time predictor: fixed point, locality, ODE accuracy."""

import numpy as np
import pytest

from polydg import cases, discretization, kernels, mesh as meshmod, physics

GAS = physics.GasParams()


def _predict(disc, U, dt, backend="numpy", max_iter=None, tol=1e-12):
    name, ctx = kernels.predictor_context(disc, backend)
    be = kernels.get_backend(name)
    mu = np.zeros(disc.n_cells)
    kap = np.zeros(disc.n_cells)
    if max_iter is None:
        max_iter = 2 * (disc.N + 1) + 4
    return be.predict(ctx, U, dt, mu, kap, GAS, max_iter, tol)


@pytest.fixture(scope="module")
def vortex_setup():
    m = meshmod.generate_mesh((0, 0, 10, 10), 1.4, seed=0, periodic=(True, True))
    disc = discretization.build(m, 2)
    cfg = cases.get_case("vortex")
    U = discretization.project(disc, cfg.initial)
    return disc, U


def test_freestream_one_iteration(disc_n2):
    q0 = physics.conserved(1.0, 1.0, 1.0, 1.0, GAS)
    U = np.tile(q0, (disc_n2.n_dof_total, 1))
    dt = 0.01
    vol_rhs, tr_q, tr_Fn, qbar, iters, resid, status = _predict(disc_n2, U, dt)
    assert np.all(status == 0)
    assert iters.max() == 1
    # constant in time: time-integrated trace is dt * nodal state
    assert np.allclose(tr_q, dt * q0[None, None, :], atol=1e-14)
    assert np.allclose(qbar, dt * U, atol=1e-14)


def test_constant_time_average(disc_n2):
    """Constant data, dt=0.3: the time integral is 0.3 times the state."""
    q0 = physics.conserved(1.2, 0.3, -0.5, 2.0, GAS)
    U = np.tile(q0, (disc_n2.n_dof_total, 1))
    out = _predict(disc_n2, U, 0.3)
    qbar = out[3]
    assert np.allclose(qbar, 0.3 * U, atol=5e-13)


def test_vortex_converges_quickly(vortex_setup):
    disc, U = vortex_setup
    dt = 2e-3
    out = _predict(disc, U, dt, max_iter=2 * (disc.N + 1))
    _, _, _, _, iters, resid, status = out
    assert np.all(status == 0)
    assert iters.max() <= 2 * (disc.N + 1)
    assert resid.max() <= 1e-12


def test_vortex_residual_monotone(vortex_setup):
    """Picard residual decreases over the first three sweeps."""
    disc, U = vortex_setup
    dt = 5e-3
    hist = []
    for k in (1, 2, 3):
        out = _predict(disc, U, dt, max_iter=k, tol=0.0)
        hist.append(out[5].max())
    assert hist[0] > hist[1] > hist[2]


def test_predictor_locality(vortex_setup):
    """Perturbing one cell leaves every other cell's outputs untouched."""
    disc, U = vortex_setup
    dt = 5e-3
    base = _predict(disc, U, dt)
    target = disc.n_cells // 2
    U2 = U.copy()
    sl = slice(disc.dof_off[target], disc.dof_off[target] + disc.dof_n[target])
    U2[sl] *= 1.01
    pert = _predict(disc, U2, dt)
    mask = np.ones(disc.n_dof_total, dtype=bool)
    mask[sl] = False
    assert np.array_equal(base[0][mask], pert[0][mask])       # vol_rhs
    smask = disc.sub_cell != target
    assert np.array_equal(base[1][smask], pert[1][smask])     # tr_q
    assert not np.allclose(base[1][~smask], pert[1][~smask])


def test_inadmissible_cell_flagged(vortex_setup):
    disc, U = vortex_setup
    U2 = U.copy()
    U2[disc.dof_off[3], 0] = -1.0          # negative density node in cell 3
    out = _predict(disc, U2, 5e-3)
    status = out[6]
    assert status[3] == kernels.STATUS_INADMISSIBLE


def _local_ode_rhs(disc, cell, u_loc, gas):
    """Element-local semi-discrete operator du/dt for one cell (oracle).

    Same operator the predictor discretizes in time: nodal flux
    interpolation differentiated through the basis, tested against phi.
    """
    ops = disc.ops
    s0 = disc.sub_off[cell]
    nd = disc.dof_n[cell]
    S = np.zeros((nd, 4))
    for f in range(disc.cell_nf[cell]):
        sm = disc.sub_map[s0 + f]
        ql = u_loc[sm]
        iv = disc.sub_inv[s0 + f]
        dxi = ops.D_xi @ ql
        det = ops.D_eta @ ql
        gx = iv[0, 0] * dxi + iv[1, 0] * det
        gy = iv[0, 1] * dxi + iv[1, 1] * det
        F = physics.advective_flux(ql, gas)
        fstar = iv[0, 0] * F[..., 0] + iv[0, 1] * F[..., 1]
        gstar = iv[1, 0] * F[..., 0] + iv[1, 1] * F[..., 1]
        S[sm] += disc.sub_detJ[s0 + f] * (ops.Kx_space @ fstar
                                          + ops.Ky_space @ gstar)
    Minv = disc.minv_flat[disc.minv_off[cell]:
                          disc.minv_off[cell] + nd * nd].reshape(nd, nd)
    return -(Minv @ S)


@pytest.mark.parametrize("N", [1, 2])
def test_predictor_matches_ode_oracle(N):
    """Time-integrated predictor vs RK4 integration of the same local ODE.

    Error must shrink at least like dt^{N+1} under halving (ratio 2^N
    with margin for the asymptotic regime).
    """
    m = meshmod.generate_mesh((0, 0, 10, 10), 1.4, seed=0,
                              periodic=(True, True))
    disc = discretization.build(m, N)
    cfg = cases.get_case("vortex")
    U = discretization.project(disc, cfg.initial)
    cell = disc.n_cells // 3
    sl = slice(disc.dof_off[cell], disc.dof_off[cell] + disc.dof_n[cell])

    def oracle_average(dt, nsteps=400):
        u = U[sl].copy()
        h = dt / nsteps
        acc = 0.5 * u.copy()
        for k in range(nsteps):
            k1 = _local_ode_rhs(disc, cell, u, GAS)
            k2 = _local_ode_rhs(disc, cell, u + 0.5 * h * k1, GAS)
            k3 = _local_ode_rhs(disc, cell, u + 0.5 * h * k2, GAS)
            k4 = _local_ode_rhs(disc, cell, u + h * k3, GAS)
            u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            acc += u if k < nsteps - 1 else 0.5 * u
        return acc / nsteps          # trapezoid average over [0, dt]

    errs = []
    for dt in (2e-2, 1e-2):
        qbar = _predict(disc, U, dt, max_iter=40)[3]
        pred_avg = qbar[sl] / dt
        errs.append(np.abs(pred_avg - oracle_average(dt)).max())
    ratio = errs[0] / errs[1]
    assert ratio >= 2.0 ** N


def test_backend_default_selection(disc_n2, monkeypatch):
    monkeypatch.setenv("POLYDG_BACKEND", "numpy")
    assert kernels.backend_name() == "numpy"
    monkeypatch.delenv("POLYDG_BACKEND")
    assert kernels.backend_name() in ("numba", "numpy")
