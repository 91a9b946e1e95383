"""Detector-pair observables P, C, X, the reduced density matrix and the
concurrence, plus time-domain Wightman oracles used for validation.

All observables are reported in units lambda^2 rho_0 / c_0^2 and all inputs
are dimensionless (gap Omega/M_*, width sigma*M_*, separation M_* L / c_0).

Momentum-space forms (natural units, weight (u+v)^2 = x/(2f)):

    P = sigma^2 int_0^inf x (u+v)^2 exp(-(omega+Omega)^2 sigma^2) dx
    C = sigma^2 int_0^inf x (u+v)^2 exp(-(omega+Omega)^2 sigma^2) J0(x L) dx
    X = -sigma^2 int_0^inf x (u+v)^2 exp(-(omega^2+Omega^2) sigma^2)
                        (1 - i Erfi(sigma omega)) J0(x L) dx

The imaginary part is always evaluated through the Dawson function,
exp(-w^2) Erfi(w) = (2/sqrt(pi)) D(w), which is finite where the raw product
overflows.  The sign of the imaginary part follows the Heaviside-ordered
double time integral (validated against the time-domain oracle below).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dispersion import DispersionKind, f_factor, omega, radicand
from .errors import (CoincidentDetectorsUnregularized, InvalidParams,
                     UnstableSpectrum)
from .quadrature import (DEFAULT_SPEC, QuadratureSpec,
                         abel_regularized_linear_tail, integrate_bessel_tail,
                         integrate_decaying)
from .specfun import SQRT_PI, bessel_j0, dawson, j0_zeros
from .units import DimensionlessModel

COUPLING_UNITS = "lambda^2 rho_0 / c_0^2"


@dataclass(frozen=True)
class DetectorPair:
    """Two identical static detectors: gap, Gaussian switching width and
    separation, all dimensionless."""

    omega_gap: float
    sigma: float
    separation: float
    coupling_units: str = COUPLING_UNITS

    def __post_init__(self):
        if self.omega_gap < 0.0:
            raise InvalidParams("omega_gap must be nonnegative")
        if self.sigma <= 0.0:
            raise InvalidParams("sigma must be positive")
        if self.separation < 0.0:
            raise InvalidParams("separation must be nonnegative")


@dataclass(frozen=True)
class PairGeometry:
    """Ring placement (r, theta_a), (r, theta_b) of the two detectors."""

    r: float
    theta_a: float
    theta_b: float

    def __post_init__(self):
        if self.r <= 0.0:
            raise InvalidParams("ring radius must be positive")

    @property
    def separation(self) -> float:
        return 2.0 * self.r * math.sin(abs(self.theta_b - self.theta_a) / 2.0)


def pair_from_geometry(geom: PairGeometry, omega_gap: float,
                       sigma: float) -> DetectorPair:
    return DetectorPair(omega_gap=omega_gap, sigma=sigma,
                        separation=geom.separation)


@dataclass(frozen=True)
class HarvestObservables:
    p_d: float
    c_elem: float
    x_elem: complex
    concurrence: float
    units: str = COUPLING_UNITS


@dataclass(frozen=True)
class PointValues:
    """Observables plus quadrature error estimates, for sweeps and the CLI."""

    p: float
    c: float
    x: complex
    concurrence: float
    p_err: float
    c_err: float
    x_err: float


# ---------------------------------------------------------------------------
# integrands and truncation
# ---------------------------------------------------------------------------

def _weight_x2(model, kind, x):
    """x^2 / (2 f(x)); the x -> 0 limit of x * (u+v)^2."""
    x = np.asarray(x, dtype=float)
    return 0.5 * x * x / f_factor(model, kind, x)


def _envelope_cut(model, kind, omega_gap, sigma, spec):
    """Smallest grid x beyond the last crossing omega(x) = cutoff/sigma +
    omega_gap; past it the Gaussian envelope is below exp(-cutoff^2)."""
    target = spec.envelope_cutoff / sigma + omega_gap
    span = max(2.0 * target + 1.0, 2.0 * math.sqrt(target) + 4.0, 10.0)
    for _ in range(40):
        xs = np.linspace(0.0, span, 1500)
        om = omega(model, kind, xs)
        below = np.nonzero(om < target)[0]
        last = int(below[-1])
        if last < xs.size - 1:
            return float(xs[last + 1])
        span *= 2.0
    raise UnstableSpectrum("could not bracket the envelope truncation")


def _beyond_roton(model, kind):
    """x past which omega is nondecreasing (start of the monotone branch)."""
    if kind != DispersionKind.DIPOLAR:
        return 2.0
    xs = np.linspace(0.0, 6.0, 1201)
    om = omega(model, kind, xs)
    dec = np.nonzero(np.diff(om) < 0.0)[0]
    if dec.size == 0:
        return 2.0
    return max(2.0, float(xs[dec[-1] + 1]) + 0.05)


# Asymptotic tail of D(z) - 1/(2z) = (1/(2z)) (u + 3u^2 + ...), u = 1/(2z^2).
_DAWSON_SUB = (1.0, 3.0, 15.0, 105.0, 945.0, 10395.0, 135135.0)


def _li_im_remainder(sigma, x):
    """(x^2 D(sigma x) - x/(2 sigma)) / sqrt(pi): the f = 1 imaginary-part
    envelope after subtracting the linearly growing Abel-regularized piece."""
    x = np.asarray(x, dtype=float)
    z = sigma * x
    out = np.empty_like(x)
    near = z < 20.0
    xn = x[near]
    out[near] = (xn * xn * dawson(z[near]) - 0.5 * xn / sigma) / SQRT_PI
    zf = z[~near]
    u = 0.5 / (zf * zf)
    acc = np.full_like(zf, _DAWSON_SUB[-1])
    for c in _DAWSON_SUB[-2::-1]:
        acc = acc * u + c
    out[~near] = x[~near] / (2.0 * SQRT_PI * sigma) * (u * acc)
    return out


def _dispersive_im_envelope(model, kind, sigma, x):
    """x^2 D(sigma x f) / (sqrt(pi) f): imaginary-part envelope for the
    Bogoliubov kinds (decays like 1/x, integrable against J0 for L > 0)."""
    x = np.asarray(x, dtype=float)
    f = f_factor(model, kind, x)
    return x * x * dawson(sigma * x * f) / (SQRT_PI * f)


def _first_scaled_zero_at_or_after(separation, x_lo):
    n = max(4, int(separation * x_lo / math.pi) + 2)
    zeros = j0_zeros(n) / separation
    while zeros[-1] < x_lo:
        n *= 2
        zeros = j0_zeros(n) / separation
    return float(zeros[np.searchsorted(zeros, x_lo)])


# ---------------------------------------------------------------------------
# cached cores
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _p_core(model, kind, omega_gap, sigma, spec):
    cut = _envelope_cut(model, kind, omega_gap, sigma, spec)

    def g(x):
        return _weight_x2(model, kind, x) * np.exp(
            -(omega(model, kind, x) + omega_gap) ** 2 * sigma * sigma)

    res = integrate_decaying(g, cut, spec)
    return res.value, res.est_error


def _oscillation_seed(x_cut, separation):
    # three panels per J0 half period; fewer leaves the refinement budget
    # fighting the oscillation instead of converging on it
    return max(8, int(math.ceil(3.0 * x_cut * separation / math.pi)) + 4)


def _bessel_modulated(envelope, separation, cut, x_beyond, spec):
    """Integral of envelope(x) * J0(x * separation) over [0, cut-or-beyond].

    Plain seeded adaptivity when few oscillations fit under the envelope;
    otherwise lobe partition plus series acceleration, which certifies the
    heavy cancellation far more cheaply than bisection can.
    """
    many_lobes = separation > 0.0 and (cut - x_beyond) * separation \
        >= 20.0 * math.pi
    if many_lobes:
        x_start = _first_scaled_zero_at_or_after(separation, x_beyond)
        if x_start < cut:
            def head_g(x):
                return envelope(x) * bessel_j0(x * separation)

            head = integrate_decaying(
                head_g, x_start, spec,
                seed=_oscillation_seed(x_start, separation))
            tail = integrate_bessel_tail(envelope, separation, x_start, spec)
            return head.value + tail.value, head.est_error + tail.est_error

    def g(x):
        return envelope(x) * bessel_j0(x * separation)

    res = integrate_decaying(g, cut, spec,
                             seed=_oscillation_seed(cut, separation))
    return res.value, res.est_error


def _c_core(model, kind, omega_gap, sigma, separation, spec):
    cut = _envelope_cut(model, kind, omega_gap, sigma, spec)

    def envelope(x):
        return _weight_x2(model, kind, x) * np.exp(
            -(omega(model, kind, x) + omega_gap) ** 2 * sigma * sigma)

    return _bessel_modulated(envelope, separation, cut,
                             _beyond_roton(model, kind), spec)


@lru_cache(maxsize=4096)
def _x_core(model, kind, sigma, separation, spec):
    """Gap-independent pieces of X: the full X is
    sigma^2 e^{-Omega^2 sigma^2} (-re + i im) with (re, im) returned here."""
    if separation == 0.0:
        raise CoincidentDetectorsUnregularized(
            "the imaginary part of X diverges at zero separation "
            "(linearly for f = 1, logarithmically for dispersive kinds)")
    cut = _envelope_cut(model, kind, 0.0, sigma, spec)
    x_beyond = _beyond_roton(model, kind)

    def re_envelope(x):
        return _weight_x2(model, kind, x) * np.exp(
            -omega(model, kind, x) ** 2 * sigma * sigma)

    re_val, re_err = _bessel_modulated(re_envelope, separation, cut,
                                       x_beyond, spec)

    x_split = _first_scaled_zero_at_or_after(separation, x_beyond)
    if kind == DispersionKind.LORENTZ_INVARIANT:
        def env(x):
            return _li_im_remainder(sigma, x)
        abel = abel_regularized_linear_tail(
            sigma * math.exp(0.0) / (2.0 * SQRT_PI), separation)
    else:
        def env(x):
            return _dispersive_im_envelope(model, kind, sigma, x)
        abel = 0.0

    def g_im_head(x):
        return env(x) * bessel_j0(x * separation)

    head = integrate_decaying(g_im_head, x_split, spec,
                              seed=_oscillation_seed(x_split, separation))
    tail = integrate_bessel_tail(env, separation, x_split, spec)
    im_val = head.value + tail.value + abel
    im_err = head.est_error + tail.est_error
    return re_val, re_err, im_val, im_err


def _x_partial(model, kind, pair, x_max, spec=DEFAULT_SPEC):
    """Closed-form X integrated over modes [0, x_max] only; the validation
    tests compare this against the mode-truncated time-domain oracle."""
    sigma, gap = pair.sigma, pair.omega_gap

    def g_re(x):
        return _weight_x2(model, kind, x) * np.exp(
            -omega(model, kind, x) ** 2 * sigma * sigma) \
            * bessel_j0(x * pair.separation)

    def g_im(x):
        return _dispersive_im_envelope(model, kind, sigma, x) \
            * bessel_j0(x * pair.separation)

    seed = _oscillation_seed(x_max, pair.separation)
    re_res = integrate_decaying(g_re, x_max, spec, seed=seed)
    im_res = integrate_decaying(g_im, x_max, spec, seed=seed)
    pre = sigma * sigma * math.exp(-gap * gap * sigma * sigma)
    return complex(-pre * re_res.value, pre * im_res.value)


# ---------------------------------------------------------------------------
# public observables
# ---------------------------------------------------------------------------

def transition_probability(model: DimensionlessModel, kind: DispersionKind,
                           pair: DetectorPair,
                           spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """P_A = P_B for identical detectors, strictly decreasing in the gap."""
    value, _ = _p_core(model, kind, pair.omega_gap, pair.sigma, spec)
    return pair.sigma ** 2 * value


def correlation_c(model: DimensionlessModel, kind: DispersionKind,
                  pair: DetectorPair,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The C matrix element; equals P exactly at zero separation."""
    value, _ = _c_core(model, kind, pair.omega_gap, pair.sigma,
                       pair.separation, spec)
    return pair.sigma ** 2 * value


def correlation_x(model: DimensionlessModel, kind: DispersionKind,
                  pair: DetectorPair,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """The X matrix element (complex)."""
    re_val, _, im_val, _ = _x_core(model, kind, pair.sigma,
                                   pair.separation, spec)
    pre = pair.sigma ** 2 * math.exp(
        -pair.omega_gap ** 2 * pair.sigma ** 2)
    return complex(-pre * re_val, pre * im_val)


def concurrence(model: DimensionlessModel, kind: DispersionKind,
                pair: DetectorPair,
                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """2 max(0, |X| - P); the C element never enters."""
    p = transition_probability(model, kind, pair, spec)
    x = correlation_x(model, kind, pair, spec)
    return concurrence_from(p, x)


def concurrence_from(p: float, x: complex) -> float:
    return 2.0 * max(0.0, abs(x) - p)


def evaluate_pair(model: DimensionlessModel, kind: DispersionKind,
                  pair: DetectorPair,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> PointValues:
    """All observables plus error estimates for one parameter point."""
    sig2 = pair.sigma ** 2
    p_val, p_err = _p_core(model, kind, pair.omega_gap, pair.sigma, spec)
    c_val, c_err = _c_core(model, kind, pair.omega_gap, pair.sigma,
                           pair.separation, spec)
    re_val, re_err, im_val, im_err = _x_core(model, kind, pair.sigma,
                                             pair.separation, spec)
    pre = sig2 * math.exp(-pair.omega_gap ** 2 * sig2)
    x = complex(-pre * re_val, pre * im_val)
    p = sig2 * p_val
    return PointValues(p=p, c=sig2 * c_val, x=x,
                       concurrence=concurrence_from(p, x),
                       p_err=sig2 * p_err, c_err=sig2 * c_err,
                       x_err=pre * (re_err + im_err))


def observables(model: DimensionlessModel, kind: DispersionKind,
                pair: DetectorPair,
                spec: QuadratureSpec = DEFAULT_SPEC) -> HarvestObservables:
    vals = evaluate_pair(model, kind, pair, spec)
    return HarvestObservables(p_d=vals.p, c_elem=vals.c, x_elem=vals.x,
                              concurrence=vals.concurrence)


# ---------------------------------------------------------------------------
# reduced density matrix
# ---------------------------------------------------------------------------

@dataclass
class DensityMatrixAB:
    """4x4 two-detector state in the basis {gg, ge, eg, ee}, entries in
    coupling units (symbolic tag, never re-dimensionalized)."""

    matrix: np.ndarray
    units: str = COUPLING_UNITS


def density_matrix_from(p: float, c: float, x: complex) -> DensityMatrixAB:
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0 - 2.0 * p
    m[0, 3] = x
    m[3, 0] = np.conj(x)
    m[1, 1] = p
    m[2, 2] = p
    m[1, 2] = c
    m[2, 1] = np.conj(c)
    return DensityMatrixAB(matrix=m)


def density_matrix(model: DimensionlessModel, kind: DispersionKind,
                   pair: DetectorPair,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> DensityMatrixAB:
    vals = evaluate_pair(model, kind, pair, spec)
    return density_matrix_from(vals.p, vals.c, vals.x)


# ---------------------------------------------------------------------------
# time-domain Wightman oracles (validation only)
# ---------------------------------------------------------------------------

def _trapezoid_weights(n, step):
    w = np.full(n, step)
    w[0] = w[-1] = 0.5 * step
    return w


def _switching_amplitude(pair, n_tau, tau_span):
    taus = np.linspace(-tau_span * pair.sigma, tau_span * pair.sigma, n_tau)
    w = _trapezoid_weights(n_tau, taus[1] - taus[0])
    chi = np.exp(-taus ** 2 / (2.0 * pair.sigma ** 2))
    return taus, w, chi


def gaussian_mode_overlap(pair, omega_k, n_tau=401, tau_span=8.0):
    """Trapezoid of int chi(tau) e^{-i (Omega + omega_k) tau} dtau; equals
    sqrt(2 pi) sigma exp(-(Omega+omega_k)^2 sigma^2 / 2) analytically."""
    taus, w, chi = _switching_amplitude(pair, n_tau, tau_span)
    phase = np.exp(-1j * np.multiply.outer(
        np.atleast_1d(omega_k) + pair.omega_gap, taus))
    out = phase @ (w * chi)
    return out[0] if np.ndim(omega_k) == 0 else out


def wightman_oracle_p(model, kind, pair, n_tau=401, n_x=4000, tau_span=8.0,
                      spec=DEFAULT_SPEC):
    """P by per-mode double time integration (trapezoid), then mode integral."""
    cut = _envelope_cut(model, kind, pair.omega_gap, pair.sigma, spec)
    xs = np.linspace(0.0, cut, n_x + 1)
    oms = omega(model, kind, xs)
    f_amp = gaussian_mode_overlap(pair, oms, n_tau, tau_span)
    g = _weight_x2(model, kind, xs) * np.abs(f_amp) ** 2
    return float(np.trapezoid(g, xs)) / (2.0 * np.pi)


def wightman_oracle_c(model, kind, pair, n_tau=401, n_x=4000, tau_span=8.0,
                      spec=DEFAULT_SPEC):
    """C oracle: same per-mode factor as P with the J0 spatial phase kept."""
    cut = _envelope_cut(model, kind, pair.omega_gap, pair.sigma, spec)
    xs = np.linspace(0.0, cut, n_x + 1)
    oms = omega(model, kind, xs)
    f_amp = gaussian_mode_overlap(pair, oms, n_tau, tau_span)
    g = _weight_x2(model, kind, xs) * np.abs(f_amp) ** 2 \
        * bessel_j0(xs * pair.separation)
    return float(np.trapezoid(g, xs)) / (2.0 * np.pi)


def time_ordered_kernel(pair, omega_vals, n_tau=3201, tau_span=8.0,
                        swapped=False):
    """Per-mode double time integral of chi chi e^{-i Omega (tau+tau')} times
    the Heaviside-ordered mode phase, via the exact diagonal regrouping of
    the 2D trapezoid sum."""
    taus, w, chi = _switching_amplitude(pair, n_tau, tau_span)
    amp = w * chi * np.exp(-1j * pair.omega_gap * taus)
    rho = np.convolve(amp, amp[::-1])[::-1]  # lag sums, d = -(n-1)..(n-1)
    dt = taus[1] - taus[0]
    vs = np.arange(-(n_tau - 1), n_tau) * dt
    sgn = +1.0 if swapped else -1.0
    omega_vals = np.atleast_1d(np.asarray(omega_vals, dtype=float))
    out = np.empty(omega_vals.size, dtype=complex)
    chunk = 256
    absv = np.abs(vs)
    for i in range(0, omega_vals.size, chunk):
        om_blk = omega_vals[i:i + chunk]
        out[i:i + chunk] = np.exp(
            sgn * 1j * np.multiply.outer(om_blk, absv)) @ rho
    return out


def wightman_oracle_x(model, kind, pair, x_max=None, n_tau=3201, n_x=2400,
                      tau_span=8.0, spec=DEFAULT_SPEC):
    """X by direct Heaviside-ordered double time integration per mode.

    The time grid resolves mode phases only up to omega ~ 0.5/dtau, so the
    mode integral runs over [0, x_max]; validation compares against the
    closed form restricted to the same mode band.
    """
    if pair.separation <= 0.0:
        raise CoincidentDetectorsUnregularized(
            "oracle X requires positive separation")
    if x_max is None:
        x_max = _envelope_cut(model, kind, 0.0, pair.sigma, spec)
    xs = np.linspace(0.0, float(x_max), n_x + 1)
    oms = omega(model, kind, xs)
    kern = time_ordered_kernel(pair, oms, n_tau, tau_span)
    g = _weight_x2(model, kind, xs) * bessel_j0(xs * pair.separation) * kern
    return complex(-np.trapezoid(g, xs) / (2.0 * np.pi))


# Preset parameter points for the oracle-equivalence suite (CLI `validate`
# and the acceptance tests share these).
VALIDATION_POINTS = {
    "p": [
        (DispersionKind.LORENTZ_INVARIANT, 0.0, 1.0,
         DetectorPair(omega_gap=1.0, sigma=1.0, separation=1.0)),
        (DispersionKind.CONTACT, 0.0, 1.0,
         DetectorPair(omega_gap=0.5, sigma=2.0, separation=1.0)),
        (DispersionKind.DIPOLAR, None, 3.0,
         DetectorPair(omega_gap=1.0, sigma=2.0, separation=1.0)),
    ],
    "x": [
        (DispersionKind.CONTACT, 0.0, 1.0,
         DetectorPair(omega_gap=1.0, sigma=2.0, separation=2.0), 8.0),
        (DispersionKind.CONTACT, 0.0, 1.0,
         DetectorPair(omega_gap=0.5, sigma=1.0, separation=1.0), 13.0),
    ],
    "c": [
        (DispersionKind.LORENTZ_INVARIANT, 0.0, 1.0,
         DetectorPair(omega_gap=1.0, sigma=1.0, separation=2.0)),
    ],
}

P_ORACLE_TOL = 1e-4
XC_ORACLE_TOL = 1e-3


def _point_model(kind, r, a):
    from .units import R_MAX
    return DimensionlessModel(R=R_MAX if r is None else r, A=a)


def validate_oracles(spec=DEFAULT_SPEC):
    """Run the oracle-equivalence suite; returns a list of check records."""
    checks = []
    for kind, r, a, pair in VALIDATION_POINTS["p"]:
        model = _point_model(kind, r, a)
        got = transition_probability(model, kind, pair, spec)
        ref = wightman_oracle_p(model, kind, pair, spec=spec)
        rel = abs(got - ref) / abs(ref)
        checks.append({"observable": "p", "kind": kind.value,
                       "closed_form": got, "oracle": ref,
                       "rel_err": rel, "tol": P_ORACLE_TOL,
                       "ok": rel <= P_ORACLE_TOL})
    for kind, r, a, pair, x_max in VALIDATION_POINTS["x"]:
        model = _point_model(kind, r, a)
        got = _x_partial(model, kind, pair, x_max, spec)
        ref = wightman_oracle_x(model, kind, pair, x_max=x_max,
                                n_tau=6401, spec=spec)
        rel = abs(got - ref) / abs(ref)
        checks.append({"observable": "x", "kind": kind.value,
                       "closed_form": [got.real, got.imag],
                       "oracle": [ref.real, ref.imag],
                       "rel_err": rel, "tol": XC_ORACLE_TOL,
                       "ok": rel <= XC_ORACLE_TOL})
    for kind, r, a, pair in VALIDATION_POINTS["c"]:
        model = _point_model(kind, r, a)
        got = correlation_c(model, kind, pair, spec)
        ref = wightman_oracle_c(model, kind, pair, spec=spec)
        rel = abs(got - ref) / abs(ref)
        checks.append({"observable": "c", "kind": kind.value,
                       "closed_form": got, "oracle": ref,
                       "rel_err": rel, "tol": XC_ORACLE_TOL,
                       "ok": rel <= XC_ORACLE_TOL})
    return checks
