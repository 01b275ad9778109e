"""Gas model, fluxes, and wave speeds against analytic oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polydg import physics
from polydg.errors import InadmissibleStateError, InvalidParameterError

GAS = physics.GasParams()


def test_gas_parameter_validation():
    with pytest.raises(InvalidParameterError):
        physics.GasParams(gamma=1.0)
    with pytest.raises(InvalidParameterError):
        physics.GasParams(mu=-1.0)
    with pytest.raises(InvalidParameterError):
        physics.GasParams(kappa_override=-0.1)


def test_derived_gas_constants():
    assert GAS.cv == pytest.approx(2.5)
    assert GAS.cp == pytest.approx(3.5)
    g = physics.GasParams(mu=0.75, Pr=0.75)
    assert g.kappa == pytest.approx(0.75 * 1.4 * 2.5 / 0.75)
    assert physics.GasParams(mu=1.0, kappa_override=0.0).kappa == 0.0


def test_eos_rest_state():
    q = physics.conserved(1.0, 0.0, 0.0, 1.0, GAS)
    assert q[3] == pytest.approx(2.5)            # rho E = p/(gamma-1)
    assert physics.pressure(q, GAS) == pytest.approx(1.0)
    assert physics.temperature(q, GAS) == pytest.approx(1.0)


def test_eos_kinetic_split():
    gamma = GAS.gamma
    q = physics.conserved(1.0, 1.0, 1.0, 1.0 / gamma, GAS)
    e = 1.0 / (gamma * (gamma - 1.0))
    assert q[3] == pytest.approx(e + 1.0, rel=1e-14)


@given(st.floats(0.1, 10), st.floats(-5, 5), st.floats(-5, 5),
       st.floats(0.01, 10))
@settings(max_examples=200, deadline=None)
def test_primitive_conserved_roundtrip(rho, u, v, p):
    q = physics.conserved(rho, u, v, p, GAS)
    r2, u2, v2, p2 = physics.primitive(q, GAS)
    assert np.allclose([r2, u2, v2, p2], [rho, u, v, p],
                       rtol=1e-12, atol=1e-12)


def test_check_admissible_raises():
    q = physics.conserved(1.0, 0.0, 0.0, 1.0, GAS)
    physics.check_admissible(q, GAS)
    bad = q.copy()
    bad[3] = 0.0        # negative pressure
    with pytest.raises(InadmissibleStateError):
        physics.check_admissible(bad, GAS)


def test_advective_flux_rest_state():
    q = physics.conserved(1.0, 0.0, 0.0, 1.0, GAS)
    F = physics.advective_flux(q, GAS)
    assert np.allclose(F[..., 0], [0, 1, 0, 0], atol=1e-14)   # x-flux
    assert np.allclose(F[..., 1], [0, 0, 1, 0], atol=1e-14)   # y-flux


def test_viscous_flux_pure_shear():
    """du/dy = s with v = 0 must give sigma_xy = mu s, i.e. flux -mu s."""
    mu, s = 0.3, 2.0
    gas = physics.GasParams(mu=mu, kappa_override=0.0)
    q = physics.conserved(1.0, 0.0, 0.0, 1.0, gas)
    grad = np.zeros((4, 2))
    grad[1, 1] = s                    # d(rho u)/dy at rho = 1, u = 0
    F = physics.viscous_flux(q, grad, gas)
    assert F[1, 1] == pytest.approx(-mu * s, rel=1e-13)
    assert F[2, 0] == pytest.approx(-mu * s, rel=1e-13)
    assert F[0].max() == 0.0          # no mass diffusion


def test_viscous_flux_isothermal_no_heat():
    """Uniform temperature: the Fourier term vanishes even with kappa > 0."""
    gas = physics.GasParams(mu=0.1, Pr=0.75)
    rho = 2.0
    p = 2.0            # T = p/(rho R) = 1 matches the T of (rho=1, p=1)
    q = physics.conserved(rho, 0.0, 0.0, p, gas)
    grad = np.zeros((4, 2))
    grad[0, 0] = 1.0                  # density gradient at constant T
    grad[3, 0] = physics.GasParams().cv * 1.0   # rho e tracks rho: e = cv T
    F = physics.viscous_flux(q, grad, gas)
    assert np.allclose(F[3], 0.0, atol=1e-12)


def test_wave_speed_examples():
    q = physics.conserved(1.0, 0.0, 0.0, 1.0, GAS)
    assert physics.max_wave_speed(q, GAS) == pytest.approx(np.sqrt(1.4))
    gas = physics.GasParams(mu=0.75, Pr=0.75)
    lv = physics.max_viscous_speed(q, gas)
    # components: 4 mu / 3 rho = 1 and gamma mu / (Pr rho) = 1.4
    assert lv == pytest.approx(1.4, rel=1e-14)
    assert physics.max_viscous_speed(q, GAS) == 0.0


def _rotate_state(q, ang):
    c, s = np.cos(ang), np.sin(ang)
    out = np.array(q, dtype=float)
    out[1] = c * q[1] - s * q[2]
    out[2] = s * q[1] + c * q[2]
    return out


@pytest.mark.parametrize("ang", [0.3, 1.2, 2.9, -0.7])
def test_advective_flux_rotational_consistency(ang):
    """Rotating the state rotates the flux tensor: F(Rq) = R F(q) R^T
    acting on momentum rows and flux columns."""
    rng = np.random.default_rng(0)
    rho, u, v, p = 1.3, 0.7, -0.4, 2.1
    q = physics.conserved(rho, u, v, p, GAS)
    F = physics.advective_flux(q, GAS)
    qr = _rotate_state(q, ang)
    Fr = physics.advective_flux(qr, GAS)
    c, s = np.cos(ang), np.sin(ang)
    R = np.array([[c, -s], [s, c]])
    T = np.eye(4)
    T[1:3, 1:3] = R
    assert np.allclose(Fr, T @ F @ R.T, atol=1e-12)


def test_velocity_gradient_chain_rule():
    rng = np.random.default_rng(5)
    rho, u, v = 1.7, 0.3, -0.8
    q = physics.conserved(rho, u, v, 1.0, GAS)
    grad = rng.normal(size=(4, 2))
    gv = physics.velocity_gradient(q, grad)
    # finite-difference oracle through the conserved variables
    eps = 1e-7
    for j in range(2):
        qp = np.array(q) + eps * grad[:, j]
        up = qp[1] / qp[0]
        vp = qp[2] / qp[0]
        assert gv[0, j] == pytest.approx((up - u) / eps, abs=1e-5)
        assert gv[1, j] == pytest.approx((vp - v) / eps, abs=1e-5)


def test_temperature_gradient_fd_oracle():
    rng = np.random.default_rng(6)
    q = physics.conserved(1.4, 0.5, -0.2, 2.0, GAS)
    grad = rng.normal(size=(4, 2))
    gT = physics.temperature_gradient(q, grad, GAS)
    eps = 1e-7
    for j in range(2):
        qp = np.array(q) + eps * grad[:, j]
        dT = (physics.temperature(qp, GAS) - physics.temperature(q, GAS)) / eps
        assert gT[j] == pytest.approx(dT, abs=1e-5)


def test_full_flux_combines():
    gas = physics.GasParams(mu=0.2, Pr=0.75)
    q = physics.conserved(1.0, 0.4, 0.1, 1.0, gas)
    grad = np.ones((4, 2)) * 0.3
    F = physics.full_flux(q, grad, gas)
    expect = physics.advective_flux(q, gas) + physics.viscous_flux(q, grad, gas)
    assert np.allclose(F, expect, atol=1e-14)
    # inviscid gas short-circuits to the advective flux
    F0 = physics.full_flux(q, grad, GAS)
    assert np.allclose(F0, physics.advective_flux(q, GAS), atol=1e-14)


def test_vectorized_shapes():
    q = np.tile(physics.conserved(1.0, 0.2, 0.1, 1.0, GAS), (5, 7, 1))
    assert physics.advective_flux(q, GAS).shape == (5, 7, 4, 2)
    grad = np.zeros((5, 7, 4, 2))
    gas = physics.GasParams(mu=0.1)
    assert physics.viscous_flux(q, grad, gas).shape == (5, 7, 4, 2)
    assert physics.max_wave_speed(q, GAS).shape == (5, 7)
