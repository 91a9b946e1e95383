import math

import mpmath as mp
import pytest

from becharvest.errors import InvalidParams, StabilityViolation
from becharvest.units import (A_CRITICAL, R_MAX, CondensateParams,
                              DimensionlessModel, nondimensionalize)


def test_r_zero_at_contact_dominance():
    model = nondimensionalize(
        CondensateParams(m=1.0, omega_z=5.0, g_c=0.3, g_d=0.0, rho_0=10.0))
    assert model.R == 0.0


def test_r_at_equal_couplings():
    model = nondimensionalize(
        CondensateParams(m=1.0, omega_z=5.0, g_c=0.2, g_d=0.1, rho_0=10.0))
    assert abs(model.R - R_MAX / 2.0) < 1e-15


def test_physical_example_against_hand_oracle():
    # m=1, omega_z=10, g_c=0.1, g_d=0.05, rho_0=100 evaluated independently
    # in 40-digit arithmetic and frozen:
    #   d_z    = 0.3162277660168379332
    #   g_eff  = 0.25231325220201600482
    #   c_0    = 5.0230792568106667774
    #   M_star = 25.231325220201600482
    #   A      = 2.5231325220201600482
    #   R      = 0.6266570686577501256
    with mp.workdps(40):
        m, wz, gc, gd, rho = map(mp.mpf, ("1", "10", "0.1", "0.05", "100"))
        d_z = mp.sqrt(1 / (m * wz))
        g_eff = (gc + 2 * gd) / (mp.sqrt(2 * mp.pi) * d_z)
        c_0 = mp.sqrt(g_eff * rho / m)
        expected = {
            "d_z": float(d_z), "g_eff": float(g_eff), "c_0": float(c_0),
            "M_star": float(m * c_0**2), "A": float(g_eff * rho / wz),
            "R": float(mp.sqrt(mp.pi / 2) / (1 + gc / (2 * gd))),
        }
    model = nondimensionalize(
        CondensateParams(m=1.0, omega_z=10.0, g_c=0.1, g_d=0.05, rho_0=100.0))
    for key, ref in expected.items():
        assert abs(getattr(model, key) - ref) <= 1e-12 * abs(ref), key
    assert abs(model.R - 0.6266570686577501) < 1e-15
    assert abs(model.A - 2.5231325220201600) < 1e-12


def test_r_monotone_in_coupling_ratio():
    previous = -1.0
    for g_d in (0.01, 0.05, 0.2, 1.0, 10.0):
        model = nondimensionalize(CondensateParams(
            m=1.0, omega_z=1e6, g_c=1.0, g_d=g_d, rho_0=1.0))
        assert model.R > previous
        previous = model.R


def test_r_limit_at_ddi_dominance():
    model = nondimensionalize(CondensateParams(
        m=1.0, omega_z=1e9, g_c=1e-12, g_d=1.0, rho_0=1e-6))
    assert abs(model.R - R_MAX) < 1e-9


def test_round_trip_consistency():
    p = CondensateParams(m=2.0, omega_z=7.0, g_c=0.4, g_d=0.1, rho_0=30.0)
    model = nondimensionalize(p)
    assert abs(model.A * p.omega_z - model.g_eff * p.rho_0) \
        <= 4e-16 * model.g_eff * p.rho_0
    assert model.M_star == p.m * model.c_0**2


def test_deterministic():
    p = CondensateParams(m=1.0, omega_z=10.0, g_c=0.1, g_d=0.05, rho_0=100.0)
    assert nondimensionalize(p) == nondimensionalize(p)


@pytest.mark.parametrize("kwargs", [
    dict(m=0.0, omega_z=1.0, g_c=0.1, g_d=0.1, rho_0=1.0),
    dict(m=1.0, omega_z=-1.0, g_c=0.1, g_d=0.1, rho_0=1.0),
    dict(m=1.0, omega_z=1.0, g_c=-0.1, g_d=0.1, rho_0=1.0),
    dict(m=1.0, omega_z=1.0, g_c=0.1, g_d=-0.1, rho_0=1.0),
    dict(m=1.0, omega_z=1.0, g_c=0.0, g_d=0.0, rho_0=1.0),
    dict(m=1.0, omega_z=1.0, g_c=0.1, g_d=0.1, rho_0=0.0),
])
def test_invalid_condensate_params(kwargs):
    with pytest.raises(InvalidParams):
        CondensateParams(**kwargs)


def test_transverse_stability_gate():
    # omega_z below 2 m g_d^2 rho_0^2 / (pi A_c^2) must be rejected
    m, g_d, rho_0 = 1.0, 0.5, 100.0
    bound = 2.0 * m * g_d**2 * rho_0**2 / (math.pi * A_CRITICAL**2)
    with pytest.raises(StabilityViolation):
        nondimensionalize(CondensateParams(
            m=m, omega_z=0.9 * bound, g_c=0.0, g_d=g_d, rho_0=rho_0))
    model = nondimensionalize(CondensateParams(
        m=m, omega_z=1.1 * bound, g_c=0.0, g_d=g_d, rho_0=rho_0))
    assert model.A <= A_CRITICAL


def test_direct_model_gate_at_ddi_dominance():
    DimensionlessModel(R=R_MAX, A=A_CRITICAL)  # boundary allowed
    with pytest.raises(StabilityViolation):
        DimensionlessModel(R=R_MAX, A=A_CRITICAL + 0.01)
    with pytest.raises(StabilityViolation):
        DimensionlessModel(R=1.2533, A=5.0)  # 4-digit rounding still gated
    DimensionlessModel(R=0.5, A=5.0)  # far from DDI dominance: no gate


@pytest.mark.parametrize("kwargs", [
    dict(R=-0.1, A=1.0),
    dict(R=R_MAX + 1e-6, A=1.0),
    dict(R=0.5, A=-1.0),
])
def test_invalid_dimensionless_model(kwargs):
    with pytest.raises(InvalidParams):
        DimensionlessModel(**kwargs)
