"""Compressible Euler / Navier-Stokes physics: EOS, fluxes, wave speeds.

Conserved state ordering is q = (rho, rho u, rho v, rho E).  All routines
are vectorized over arbitrary leading axes with the state in the last
axis; gradients carry a trailing axis of length 2 for (d/dx, d/dy).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleStateError, InvalidParameterError

N_VARS = 4


@dataclass(frozen=True)
class GasParams:
    """Ideal-gas and transport parameters."""

    gamma: float = 1.4
    R: float = 1.0
    mu: float = 0.0
    Pr: float = 0.75
    kappa_override: float = None   # explicit heat conductivity (e.g. 0)

    def __post_init__(self):
        if self.gamma <= 1.0 or self.R <= 0.0 or self.Pr <= 0.0 or self.mu < 0.0:
            raise InvalidParameterError(f"invalid gas parameters {self}")
        if self.kappa_override is not None and self.kappa_override < 0.0:
            raise InvalidParameterError("negative heat conductivity")

    @property
    def cv(self):
        return self.R / (self.gamma - 1.0)

    @property
    def cp(self):
        return self.gamma * self.cv

    @property
    def kappa(self):
        """Heat conductivity, from the Prandtl number unless overridden."""
        if self.kappa_override is not None:
            return self.kappa_override
        return self.mu * self.gamma * self.cv / self.Pr


def primitive(q, gas: GasParams):
    """(rho, u, v, p) from conserved variables."""
    q = np.asarray(q, dtype=np.float64)
    rho = q[..., 0]
    u = q[..., 1] / rho
    v = q[..., 2] / rho
    p = (gas.gamma - 1.0) * (q[..., 3] - 0.5 * rho * (u * u + v * v))
    return rho, u, v, p


def conserved(rho, u, v, p, gas: GasParams):
    rho, u, v, p = np.broadcast_arrays(*map(np.asarray, (rho, u, v, p)))
    q = np.empty(rho.shape + (N_VARS,))
    q[..., 0] = rho
    q[..., 1] = rho * u
    q[..., 2] = rho * v
    q[..., 3] = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return q


def pressure(q, gas: GasParams):
    return primitive(q, gas)[3]


def temperature(q, gas: GasParams):
    rho, _, _, p = primitive(q, gas)
    return p / (rho * gas.R)


def sound_speed(q, gas: GasParams):
    rho, _, _, p = primitive(q, gas)
    return np.sqrt(gas.gamma * p / rho)


def check_admissible(q, gas: GasParams, cell=None):
    rho, _, _, p = primitive(q, gas)
    if np.any(rho <= 0.0) or np.any(p <= 0.0) or not (
            np.all(np.isfinite(rho)) and np.all(np.isfinite(p))):
        raise InadmissibleStateError(
            f"inadmissible state: min rho={np.min(rho)}, min p={np.min(p)}",
            cell=cell)


def advective_flux(q, gas: GasParams):
    """Euler flux tensor, shape (..., 4, 2)."""
    rho, u, v, p = primitive(q, gas)
    F = np.empty(np.shape(rho) + (N_VARS, 2))
    F[..., 0, 0] = rho * u
    F[..., 0, 1] = rho * v
    F[..., 1, 0] = rho * u * u + p
    F[..., 1, 1] = rho * u * v
    F[..., 2, 0] = rho * u * v
    F[..., 2, 1] = rho * v * v + p
    F[..., 3, 0] = u * (np.asarray(q)[..., 3] + p)
    F[..., 3, 1] = v * (np.asarray(q)[..., 3] + p)
    return F


def velocity_gradient(q, grad_q):
    """(du_i/dx_j) from conserved gradients; shapes (...,4) and (...,4,2)."""
    q = np.asarray(q)
    grad_q = np.asarray(grad_q)
    rho = q[..., 0:1]
    u = q[..., 1:3] / rho
    # d(rho u_i)/dx_j = rho du_i/dx_j + u_i drho/dx_j
    return (grad_q[..., 1:3, :] - u[..., :, None] * grad_q[..., 0:1, :]) / rho[..., None]


def temperature_gradient(q, grad_q, gas: GasParams):
    q = np.asarray(q)
    grad_q = np.asarray(grad_q)
    rho = q[..., 0]
    u = q[..., 1] / rho
    v = q[..., 2] / rho
    E = q[..., 3] / rho
    gE = (grad_q[..., 3, :] - E[..., None] * grad_q[..., 0, :]) / rho[..., None]
    gv = velocity_gradient(q, grad_q)
    gk = u[..., None] * gv[..., 0, :] + v[..., None] * gv[..., 1, :]
    return (gE - gk) / gas.cv


def viscous_flux(q, grad_q, gas: GasParams, mu=None, kappa=None):
    """Viscous contribution (negative of the diffusive tensor), shape (...,4,2).

    The full flux is advective_flux + viscous_flux; the momentum part is
    (2/3) mu (div v) I - mu (grad v + grad v^T) and the energy part adds
    the work of that tensor and the Fourier heat flux.
    """
    if mu is None:
        mu = gas.mu
        if kappa is None:
            kappa = gas.kappa
    elif kappa is None:
        kappa = np.asarray(mu) * gas.gamma * gas.cv / gas.Pr
    q = np.asarray(q)
    gv = velocity_gradient(q, grad_q)
    div = gv[..., 0, 0] + gv[..., 1, 1]
    mu = np.asarray(mu)
    tau = np.empty(np.shape(q[..., 0]) + (2, 2))
    tau[..., 0, 0] = mu * ((2.0 / 3.0) * div - 2.0 * gv[..., 0, 0])
    tau[..., 1, 1] = mu * ((2.0 / 3.0) * div - 2.0 * gv[..., 1, 1])
    tau[..., 0, 1] = -mu * (gv[..., 0, 1] + gv[..., 1, 0])
    tau[..., 1, 0] = tau[..., 0, 1]
    u = q[..., 1] / q[..., 0]
    v = q[..., 2] / q[..., 0]
    gT = temperature_gradient(q, grad_q, gas)
    F = np.zeros(np.shape(q[..., 0]) + (N_VARS, 2))
    F[..., 1, :] = tau[..., 0, :]
    F[..., 2, :] = tau[..., 1, :]
    F[..., 3, :] = (u[..., None] * tau[..., 0, :] + v[..., None] * tau[..., 1, :]
                    - np.asarray(kappa)[..., None] * gT)
    return F


def full_flux(q, grad_q, gas: GasParams, mu=None, kappa=None):
    F = advective_flux(q, gas)
    if (mu is not None and np.any(np.asarray(mu) > 0)) or gas.mu > 0:
        F = F + viscous_flux(q, grad_q, gas, mu=mu, kappa=kappa)
    return F


def max_wave_speed(q, gas: GasParams):
    """|v| + c, the largest advective signal speed."""
    rho, u, v, p = primitive(q, gas)
    return np.sqrt(u * u + v * v) + np.sqrt(gas.gamma * p / rho)


def max_viscous_speed(q, gas: GasParams, mu=None):
    """Largest diffusive eigenvalue max(4 mu / 3 rho, gamma mu / (Pr rho))."""
    if mu is None:
        mu = gas.mu
    rho = np.asarray(q)[..., 0]
    mu = np.asarray(mu)
    return np.maximum(4.0 * mu / (3.0 * rho), gas.gamma * mu / (gas.Pr * rho))
