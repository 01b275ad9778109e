"""Benchmark case definitions: ICs, BCs, exact solutions, default meshes."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from . import discretization, mesh as meshmod, physics, solver
from .errors import ConfigurationError, InvalidParameterError

CASE_IDS = ("freestream", "vortex", "explosion", "stokes", "viscous_shock",
            "taylor_green", "mixing_layer")


# ----------------------------------------------------------------------
# Becker's exact steady viscous shock profile (Pr = 3/4, constant mu)
# ----------------------------------------------------------------------
def becker_kappa2(Ms, gamma=1.4):
    return (1.0 + 0.5 * (gamma - 1.0) * Ms * Ms) / (0.5 * (gamma + 1.0) * Ms * Ms)


def becker_ubar(x, Ms=2.0, Re_s=100.0, gamma=1.4):
    """Dimensionless velocity of the stationary shock at positions x.

    Solves  |u-1| / |u-k2|^k2 = |(1-k2)/2|^(1-k2) exp(a x)  for u in
    (k2, 1) by bisection in log form; the equation is monotone there.
    """
    x = np.asarray(x, dtype=np.float64)
    k2 = becker_kappa2(Ms, gamma)
    a = 0.75 * Re_s * (Ms * Ms - 1.0) / (gamma * Ms * Ms)
    target = (1.0 - k2) * math.log(0.5 * (1.0 - k2)) + a * x

    def g(u):
        return np.log1p(-u) - k2 * np.log(u - k2)

    lo = np.full(x.shape, k2 * (1 + 1e-15))
    hi = np.full(x.shape, 1.0 - 1e-16)
    # 64 halvings shrink the bracket to ~5e-21, far below one ulp of u,
    # so the midpoint is bit-exact; more iterations are pure waste
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        high = gm > target          # g decreasing: root above mid
        lo = np.where(high, mid, lo)
        hi = np.where(high, hi, mid)
    return 0.5 * (lo + hi)


def becker_pbar(ubar, Ms=2.0, gamma=1.4):
    k2 = becker_kappa2(Ms, gamma)
    return (1.0 - ubar + (0.5 / gamma) * (gamma + 1.0) / (gamma - 1.0)
            * (ubar - 1.0) / ubar * (ubar - k2))


def becker_residual(ubar, x, Ms=2.0, Re_s=100.0, gamma=1.4):
    """Residual of the implicit profile equation (for verification)."""
    k2 = becker_kappa2(Ms, gamma)
    a = 0.75 * Re_s * (Ms * Ms - 1.0) / (gamma * Ms * Ms)
    lhs = np.abs(ubar - 1.0) / np.abs(ubar - k2) ** k2
    rhs = np.abs(0.5 * (1.0 - k2)) ** (1.0 - k2) * np.exp(a * np.asarray(x))
    return lhs - rhs


def becker_state(x, t, Ms=2.0, Re_s=100.0, gamma=1.4, rho0=1.0, p0=None,
                 x0=0.25):
    """Lab-frame primitive state of the traveling viscous shock."""
    if p0 is None:
        p0 = rho0 / gamma
    c0 = math.sqrt(gamma * p0 / rho0)
    # in the profile's own coordinate the upstream state lies at -inf,
    # while the traveling shock runs into fluid at rest on the right
    xs = -(np.asarray(x) - x0 - Ms * c0 * t)
    ub = becker_ubar(xs, Ms, Re_s, gamma)
    rho = rho0 / ub
    u = Ms * c0 * (1.0 - ub)
    p = p0 + rho0 * c0 * c0 * Ms * Ms * becker_pbar(ub, Ms, gamma)
    return rho, u, np.zeros_like(rho), p


# ----------------------------------------------------------------------
@dataclass
class CaseConfig:
    case: str
    domain: tuple
    periodic: tuple
    gas: physics.GasParams
    t_final: float
    target_h: float
    N: int = 3
    seed: int = 0
    cfl: float = 0.5
    limiter_on: bool = False
    initial: callable = None              # (x, y) -> conserved (, 4)
    exact: callable = None                # (x, y, t) -> conserved
    boundary_factory: callable = None     # (gas) -> {side: BC}
    notes: str = ""

    def build(self, target_h=None, N=None, seed=None, backend=None):
        """Mesh + discretization + solver + projected initial condition."""
        th = target_h if target_h is not None else self.target_h
        m = meshmod.generate_mesh(self.domain, th,
                                  seed if seed is not None else self.seed,
                                  self.periodic)
        disc = discretization.build(m, N if N is not None else self.N)
        bcs = self.boundary_factory(self.gas) if self.boundary_factory else {}
        sol = solver.Solver(disc, self.gas, boundary=bcs, cfl=self.cfl,
                            limiter_on=self.limiter_on, backend=backend)
        U0 = discretization.project(disc, self.initial)
        return m, disc, sol, U0


def _vortex_fields(gas, eps=5.0, center=(5.0, 5.0), vel=(1.0, 1.0)):
    def prim(x, y, t):
        xr = x - center[0] - vel[0] * t
        yr = y - center[1] - vel[1] * t
        r2 = xr * xr + yr * yr
        dT = -(gas.gamma - 1.0) * eps ** 2 / (8.0 * gas.gamma * np.pi ** 2) * np.exp(1.0 - r2)
        T = 1.0 + dT
        rho = T ** (1.0 / (gas.gamma - 1.0))
        u = vel[0] - eps / (2.0 * np.pi) * np.exp(0.5 * (1.0 - r2)) * yr
        v = vel[1] + eps / (2.0 * np.pi) * np.exp(0.5 * (1.0 - r2)) * xr
        return rho, u, v, rho * T
    return prim


def _fd_gradient(evaluator, h=1e-6):
    """Central-difference spatial gradient of a (x, y, t) state evaluator."""
    def grad(x, y, t):
        gx = (np.asarray(evaluator(x + h, y, t)) - np.asarray(evaluator(x - h, y, t))) / (2 * h)
        gy = (np.asarray(evaluator(x, y + h, t)) - np.asarray(evaluator(x, y - h, t))) / (2 * h)
        return np.stack([gx, gy], axis=-1)
    return grad


def get_case(case_id, mu=None, reduced=False) -> CaseConfig:
    if case_id not in CASE_IDS:
        raise InvalidParameterError(f"unknown case {case_id!r}")

    if case_id == "freestream":
        gas = physics.GasParams()
        q0 = physics.conserved(1.0, 1.0, 1.0, 1.0, gas)

        def ic(x, y):
            return np.broadcast_to(q0, np.shape(x) + (4,)).copy()

        return CaseConfig(
            case=case_id, domain=(0, 0, 10, 10), periodic=(True, True),
            gas=gas, t_final=1.0, target_h=10 / 12, N=2,
            initial=ic, exact=lambda x, y, t: ic(x, y))

    if case_id == "vortex":
        gas = physics.GasParams()
        prim = _vortex_fields(gas)

        def conv(x, y, t=0.0):
            return physics.conserved(*prim(x, y, t), gas)

        return CaseConfig(
            case=case_id, domain=(0, 0, 10, 10), periodic=(True, True),
            gas=gas, t_final=1.0, target_h=10 / 12, N=2,
            initial=lambda x, y: conv(x, y, 0.0), exact=conv)

    if case_id == "explosion":
        gas = physics.GasParams()
        R0, alpha0 = 0.5, 2e-2

        def ic(x, y):
            r = np.sqrt(x * x + y * y)
            s = erf((r - R0) / alpha0)
            rho = 0.5 * (1.0 + 0.125) + 0.5 * (0.125 - 1.0) * s
            p = 0.5 * (1.0 + 0.1) + 0.5 * (0.1 - 1.0) * s
            return physics.conserved(rho, 0.0, 0.0, p, gas)

        return CaseConfig(
            case=case_id, domain=(-1, -1, 1, 1), periodic=(False, False),
            gas=gas, t_final=0.25, target_h=0.050 if reduced else 0.0243,
            N=2, limiter_on=True, initial=ic,
            # the shock stays inside the domain until after t_final, so
            # the far field is the undisturbed ambient state throughout
            boundary_factory=lambda g: {s: solver.Transmissive(p_out=0.1)
                                        for s in meshmod.BOUNDARY_SIDES})

    if case_id == "stokes":
        mu = 1e-2 if mu is None else mu
        gas = physics.GasParams(mu=mu, Pr=0.75, kappa_override=0.0)
        v0 = 0.1

        def exact(x, y, t):
            if t <= 0:
                v = np.where(np.asarray(x) > 0, v0, -v0)
            else:
                v = v0 * erf(0.5 * np.asarray(x) / np.sqrt(mu * t))
            return physics.conserved(np.ones_like(v), 0.0, v, 1.0 / gas.gamma, gas)

        # the channel ends hold the (saturated) initial profile for all t
        bc = solver.Dirichlet(lambda x, y, t: exact(x, y, 0.0))
        return CaseConfig(
            case=case_id, domain=(-0.5, -0.05, 0.5, 0.05),
            periodic=(False, True), gas=gas, t_final=1.0, target_h=0.0325,
            N=3, initial=lambda x, y: exact(x, y, 0.0), exact=exact,
            boundary_factory=lambda g: {"xmin": bc, "xmax": bc},
            notes="heat conduction disabled; exact profile is the erf solution")

    if case_id == "viscous_shock":
        Ms, Re_s = 2.0, 100.0
        gas = physics.GasParams(mu=2e-2, Pr=0.75)

        def exact(x, y, t):
            rho, u, v, p = becker_state(x, t, Ms=Ms, Re_s=Re_s,
                                        gamma=gas.gamma)
            return physics.conserved(rho, u, np.broadcast_to(v, np.shape(rho)), p, gas)

        inflow = solver.Dirichlet(lambda x, y, t: exact(x, y, t),
                                  gradient=_fd_gradient(
                                      lambda x, y, t: exact(x, y, t)))
        return CaseConfig(
            case=case_id, domain=(0, 0, 1, 0.2), periodic=(False, True),
            gas=gas, t_final=0.2, target_h=0.026, N=3,
            initial=lambda x, y: exact(x, y, 0.0), exact=exact,
            boundary_factory=lambda g: {"xmin": inflow,
                                        "xmax": solver.Transmissive()})

    if case_id == "taylor_green":
        mu = 1e-2 if mu is None else mu
        gas = physics.GasParams(mu=mu, Pr=0.75, kappa_override=0.0)
        C = 100.0 / gas.gamma

        def exact(x, y, t):
            nu = mu  # rho = 1
            u = np.sin(x) * np.cos(y) * np.exp(-2 * nu * t)
            v = -np.cos(x) * np.sin(y) * np.exp(-2 * nu * t)
            p = C + 0.25 * (np.cos(2 * x) + np.cos(2 * y)) * np.exp(-4 * nu * t)
            return physics.conserved(np.ones_like(u), u, v, p, gas)

        return CaseConfig(
            case=case_id, domain=(0, 0, 2 * np.pi, 2 * np.pi),
            periodic=(True, True), gas=gas, t_final=1.0, target_h=0.2264,
            N=3, initial=lambda x, y: exact(x, y, 0.0), exact=exact,
            notes="incompressible exact solution, run at low Mach")

    if case_id == "mixing_layer":
        gas = physics.GasParams(mu=1e-3, Pr=0.75, kappa_override=0.0)
        omega = 0.3147876

        def base(x, y):
            u = 0.125 * np.tanh(2.0 * y) + 0.375
            return physics.conserved(np.ones_like(u), u, 0.0, 1.0 / gas.gamma, gas)

        def inflow_state(x, y, t):
            d = -1e-3 * np.exp(-0.25 * y * y) * (
                np.cos(omega * t) + np.cos(0.5 * omega * t - 0.028)
                + np.cos(0.25 * omega * t + 0.141)
                + np.cos(0.125 * omega * t + 0.391))
            rho = 1.0 + 0.05 * d
            u = 0.125 * np.tanh(2.0 * y) + 0.375 + 1.0 * d
            v = 0.6 * d
            p = 1.0 / gas.gamma + 0.2 * d
            return physics.conserved(rho, u, v, p, gas)

        return CaseConfig(
            case=case_id, domain=(-200, -50, 200, 50),
            periodic=(False, False), gas=gas, t_final=1596.8,
            target_h=6.15 if reduced else 3.10, N=2,
            limiter_on=True, initial=base,
            boundary_factory=lambda g: {
                "xmin": solver.Dirichlet(inflow_state),
                "xmax": solver.Transmissive(p_out=1.0 / gas.gamma),
                "ymin": solver.Transmissive(p_out=1.0 / gas.gamma),
                "ymax": solver.Transmissive(p_out=1.0 / gas.gamma)})

    raise ConfigurationError(f"unhandled case {case_id}")
