"""Physical condensate parameters -> dimensionless model.

Everything downstream works in natural units c_0 = M_* = 1 (momenta
x = c_0 k / M_*, frequencies in M_*, lengths in c_0/M_*, observables in
lambda^2 rho_0 / c_0^2).  Physical-unit entry exists only here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParams, StabilityViolation

R_MAX = math.sqrt(math.pi / 2.0)

# Critical effective chemical potential at DDI dominance; construction gate.
A_CRITICAL = 3.4454

# Gate applies when R is this close to R_MAX (the DDI-dominance regime).
_R_GATE_TOL = 1e-4


@dataclass(frozen=True)
class CondensateParams:
    """Physical inputs, any consistent unit system with hbar = 1."""

    m: float          # atomic mass
    omega_z: float    # transverse trap frequency
    g_c: float        # contact coupling
    g_d: float        # dipolar coupling
    rho_0: float      # 2D condensate density

    def __post_init__(self):
        if self.m <= 0.0 or self.omega_z <= 0.0 or self.rho_0 <= 0.0:
            raise InvalidParams("m, omega_z and rho_0 must be positive")
        if self.g_c < 0.0 or self.g_d < 0.0:
            raise InvalidParams("couplings must be nonnegative")
        if self.g_c + 2.0 * self.g_d <= 0.0:
            raise InvalidParams("g_c + 2 g_d must be positive")


@dataclass(frozen=True)
class DimensionlessModel:
    """The (R, A) dispersion configuration in natural units.

    The derived record (c_0, M_star, d_z, g_eff) is retained for reporting
    when the model came from physical inputs; direct (R, A) construction
    leaves it unset.
    """

    R: float
    A: float
    c_0: float | None = None
    M_star: float | None = None
    d_z: float | None = None
    g_eff: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.R <= R_MAX * (1.0 + 1e-12)):
            raise InvalidParams(f"R must lie in [0, sqrt(pi/2)], got {self.R}")
        if self.A < 0.0:
            raise InvalidParams(f"A must be nonnegative, got {self.A}")
        if self.R >= R_MAX - _R_GATE_TOL and self.A > A_CRITICAL:
            raise StabilityViolation(
                f"A = {self.A} exceeds the critical value A_c = {A_CRITICAL} "
                "in the DDI-dominance regime; the quasiparticle spectrum "
                "would be unstable")


def nondimensionalize(p: CondensateParams) -> DimensionlessModel:
    """Convert physical parameters to the dimensionless (R, A) model."""
    omega_z_min = 2.0 * p.m * p.g_d**2 * p.rho_0**2 / (math.pi * A_CRITICAL**2)
    if p.omega_z < omega_z_min:
        raise StabilityViolation(
            f"omega_z = {p.omega_z} violates the spectrum-stability bound "
            f"omega_z >= 2 m g_d^2 rho_0^2 / (pi A_c^2) = {omega_z_min}")
    d_z = math.sqrt(1.0 / (p.m * p.omega_z))
    g_eff = (p.g_c + 2.0 * p.g_d) / (math.sqrt(2.0 * math.pi) * d_z)
    c_0 = math.sqrt(g_eff * p.rho_0 / p.m)
    m_star = p.m * c_0**2
    a = g_eff * p.rho_0 / p.omega_z
    r = 0.0 if p.g_d == 0.0 else R_MAX / (1.0 + p.g_c / (2.0 * p.g_d))
    return DimensionlessModel(R=r, A=a, c_0=c_0, M_star=m_star,
                              d_z=d_z, g_eff=g_eff)
