import math

import numpy as np
import pytest

from becharvest import specfun as sf
from becharvest.errors import DomainError

import oracles


# ---------------------------------------------------------------------------
# erfcx
# ---------------------------------------------------------------------------

def test_erfcx_at_zero():
    assert sf.erfcx(0.0) == 1.0


def test_erfcx_at_one_vs_series_oracle():
    ref = float((1 - oracles.erf_series(1.0, dps=35)) * np.exp(1.0))
    assert abs(sf.erfcx(1.0) - ref) < 1e-13


def test_erfcx_asymptotic_at_50():
    # truncated divergent series 1/(sqrt(pi) x) (1 - 1/(2x^2) + 3/(4x^4));
    # the guarantee of an asymptotic truncation is the first omitted term
    x = 50.0
    trunc = (1.0 - 1.0 / (2 * x**2) + 3.0 / (4 * x**4)) / (sf.SQRT_PI * x)
    omitted = 15.0 / (8.0 * x**6) / (sf.SQRT_PI * x)
    assert abs(sf.erfcx(x) - trunc) <= 1.1 * omitted


def test_erfcx_grid_vs_extended_precision():
    xs = np.concatenate([np.linspace(0.0, 30.0, 700),
                         [40.0, 50.0, 100.0, 1e3, 1e4]])
    worst = max(abs(sf.erfcx(float(x)) - oracles.erfcx_ref(x)) for x in xs)
    assert worst < 1e-13


def test_erfcx_w_link_identity():
    # erfcx(x) e^{-x^2} + erf(x) = 1, with erf from the series oracle where
    # erfc is non-negligible and mpmath's erf beyond
    import mpmath as mp
    xs = np.linspace(0.0, 30.0, 1000)
    for x in xs:
        if x <= 6.0:
            erf = float(oracles.erf_series(x, dps=60))
        else:
            with mp.workdps(40):
                erf = float(mp.erf(mp.mpf(x)))
        lhs = sf.erfcx(float(x)) * math.exp(-x * x) + erf
        assert abs(lhs - 1.0) < 1e-12


def test_erfcx_monotone_and_finite():
    xs = np.linspace(0.0, 200.0, 5000)
    vals = sf.erfcx(xs)
    assert np.all(np.isfinite(vals))
    assert np.all(np.diff(vals) < 0.0)
    assert np.isfinite(sf.erfcx(1e8))


def test_erfcx_branch_seams():
    # both branch formulas agree at the crossover points
    x = 0.46875
    small = float(np.exp(x * x) * (1.0 - sf._erf_small(np.float64(x))))
    assert abs(small - float(sf._erfcx_mid(np.float64(x)))) < 1e-13
    x = 4.0
    assert abs(float(sf._erfcx_mid(np.float64(x)))
               - float(sf._erfcx_large(np.float64(x)))) < 1e-13


def test_erfcx_rejects_negative():
    with pytest.raises(DomainError):
        sf.erfcx(-0.1)
    with pytest.raises(DomainError):
        sf.erfcx(np.array([0.5, -2.0]))


# ---------------------------------------------------------------------------
# dawson
# ---------------------------------------------------------------------------

def test_dawson_at_zero():
    assert sf.dawson(0.0) == 0.0


def test_dawson_maximum_vs_simpson_oracle():
    zmax, dmax = oracles.golden_max(oracles.dawson_by_simpson, 0.8, 1.1)
    assert abs(zmax - 0.9241388730) < 1e-6
    assert abs(dmax - 0.5410442246351817) < 1e-9  # frozen from the oracle
    assert abs(sf.dawson(0.9241388730) - dmax) < 1e-9


def test_dawson_asymptotic_at_100():
    z = 100.0
    trunc = 1.0 / (2 * z) + 1.0 / (4 * z**3)
    omitted = 3.0 / (8.0 * z**5)
    assert abs(sf.dawson(z) - trunc) <= 1.1 * omitted


def test_dawson_grid_vs_extended_precision():
    zs = np.concatenate([np.linspace(0.0, 30.0, 700),
                         np.linspace(30.0, 200.0, 120)])
    worst = max(abs(sf.dawson(float(z)) - oracles.dawson_ref(z)) for z in zs)
    assert worst < 1e-13


@pytest.mark.parametrize("z", [0.1, 1.0, 5.0, 20.0])
def test_dawson_ode_residual(z):
    h = 1e-5
    dprime = (sf.dawson(z + h) - sf.dawson(z - h)) / (2 * h)
    assert abs(dprime + 2 * z * sf.dawson(z) - 1.0) < 1e-8


def test_dawson_branch_seams():
    z = 0.5
    assert abs(float(sf._dawson_series(np.float64(z)))
               - float(sf._dawson_rybicki(z)[0])) < 1e-13
    z = 25.0
    assert abs(float(sf._dawson_rybicki(z)[0])
               - float(sf._dawson_asymptotic(np.float64(z)))) < 1e-13


def test_dawson_no_overflow():
    assert np.isfinite(sf.dawson(1e8))


def test_dawson_rejects_negative():
    with pytest.raises(DomainError):
        sf.dawson(-1.0)


# ---------------------------------------------------------------------------
# bessel_j0 and its zeros
# ---------------------------------------------------------------------------

def test_j0_at_zero():
    assert sf.bessel_j0(0.0) == 1.0


def test_j0_first_zero_vs_series_bisection():
    ref = oracles.j0_zero_by_bisection(2.0, 3.0)
    assert abs(ref - 2.4048255577) < 1e-9
    assert abs(sf.j0_zero(1) - ref) < 1e-10


def test_j0_second_zero():
    ref = oracles.j0_zero_by_bisection(5.0, 6.0)
    assert abs(ref - 5.5200781103) < 1e-9
    assert abs(sf.j0_zero(2) - ref) < 1e-10


def test_j0_at_ten_vs_series_oracle():
    ref = float(oracles.j0_series_mp(10.0, dps=40))
    assert abs(sf.bessel_j0(10.0) - ref) < 1e-12


def test_j0_grid_vs_extended_precision():
    xs = np.concatenate([np.linspace(0.0, 30.0, 600),
                         np.linspace(30.0, 1000.0, 300),
                         np.linspace(1000.0, 10000.0, 120)])
    worst = max(abs(sf.bessel_j0(float(x)) - oracles.j0_ref(x)) for x in xs)
    assert worst < 1e-12


def test_j0_bounded():
    xs = np.linspace(0.0, 500.0, 20000)
    assert np.max(np.abs(sf.bessel_j0(xs))) <= 1.0 + 1e-12


@pytest.mark.parametrize("x", [1.0, 5.0, 50.0])
def test_j0_ode_residual(x):
    h = 2e-4
    j = sf.bessel_j0
    second = (j(x + h) - 2 * j(x) + j(x - h)) / (h * h)
    first = (j(x + h) - j(x - h)) / (2 * h)
    assert abs(second + first / x + j(x)) < 1e-6


def test_j0_zeros_are_roots():
    worst = max(abs(sf.bessel_j0(sf.j0_zero(n))) for n in range(1, 201))
    assert worst < 1e-9


def test_j0_zero_spacing_approaches_pi():
    gap = sf.j0_zero(1000) - sf.j0_zero(999)
    assert math.pi - 1e-3 < gap < math.pi + 1e-3


def test_j0_zeros_monotone():
    zeros = sf.j0_zeros(200)
    assert np.all(np.diff(zeros) > 0.0)


def test_j0_zero_rejects_bad_n():
    with pytest.raises(DomainError):
        sf.j0_zero(0)
    with pytest.raises(DomainError):
        sf.j0_zero(1.5)


def test_j0_rejects_negative():
    with pytest.raises(DomainError):
        sf.bessel_j0(-2.0)


# ---------------------------------------------------------------------------
# array API and the certified-bound wrapper
# ---------------------------------------------------------------------------

def test_vectorized_shapes():
    xs = np.linspace(0.0, 12.0, 37)
    for fn in (sf.erfcx, sf.dawson, sf.bessel_j0):
        out = fn(xs)
        assert isinstance(out, np.ndarray) and out.shape == xs.shape
        assert isinstance(fn(1.25), float)


def test_evaluate_wrapper():
    res = sf.evaluate("erfcx", 1.0)
    assert isinstance(res, sf.SpecFunResult)
    assert res.value == sf.erfcx(1.0)
    assert 0.0 < res.est_abs_error <= 1e-12
    for name in ("dawson", "bessel_j0"):
        assert sf.evaluate(name, 2.0).est_abs_error <= 1e-12
    with pytest.raises(DomainError):
        sf.evaluate("gamma", 1.0)
