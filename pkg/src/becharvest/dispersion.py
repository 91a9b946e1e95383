"""Quasiparticle dispersion, Bogoliubov weights and spectrum analysis.

The dimensionless momentum is x = c_0 |k| / M_*; the dispersion factor is

    f(x) = sqrt(1 - (3R/2) sqrt(A) x w[sqrt(A/2) x] + x^2/4),

with w the scaled complementary error function, so omega(x) = x f(x) in
units of M_*.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (DomainError, InvalidParams, NoInstability,
                     UnstableSpectrum)
from .specfun import erfcx
from .units import R_MAX, DimensionlessModel


class DispersionKind(str, Enum):
    LORENTZ_INVARIANT = "li"        # f = 1, the idealized linear spectrum
    CONTACT = "contact"             # R = 0, quartic quantum-pressure term kept
    DIPOLAR = "dipolar"             # general (R, A)


# Crossover x_c = c_0 k_c / M_* between phononic and quasiparticle regimes
# for the contact dispersion omega^2 = x^2 + x^4/4 (epsilon-tilde = 1/2).
CONTACT_CROSSOVER_X = 2.0

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _radicand_raw(r, a, x):
    x = np.asarray(x, dtype=float)
    return 1.0 - 1.5 * r * np.sqrt(a) * x * erfcx(np.sqrt(0.5 * a) * x) \
        + 0.25 * x * x


def radicand(model: DimensionlessModel, kind: DispersionKind, x):
    """f^2(x) before the square root; may be negative on unstable spectra."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("momentum x must be nonnegative")
    if kind == DispersionKind.LORENTZ_INVARIANT:
        return np.ones_like(x)
    if kind == DispersionKind.CONTACT:
        return 1.0 + 0.25 * x * x
    return _radicand_raw(model.R, model.A, x)


def f_factor(model: DimensionlessModel, kind: DispersionKind, x):
    """Dispersion factor f(x) = omega(x)/x; raises on negative radicand."""
    rad = radicand(model, kind, x)
    if np.any(rad < 0.0):
        raise UnstableSpectrum(
            f"f^2 < 0 for (R, A) = ({model.R}, {model.A}); the spectrum is "
            "unstable at the requested momentum")
    out = np.sqrt(rad)
    return float(out) if np.ndim(x) == 0 else out


def omega(model: DimensionlessModel, kind: DispersionKind, x):
    """Quasiparticle frequency x * f(x) in units of M_*."""
    xarr = np.asarray(x, dtype=float)
    out = xarr * f_factor(model, kind, xarr)
    return float(out) if np.ndim(x) == 0 else out


def bogoliubov_weight(model: DimensionlessModel, kind: DispersionKind, x):
    """(u + v)^2 = H/omega = x / (2 f(x)) for x > 0."""
    xarr = np.asarray(x, dtype=float)
    if np.any(xarr <= 0.0):
        raise DomainError("bogoliubov_weight requires x > 0; integrands "
                          "take the x -> 0 limit directly")
    out = xarr / (2.0 * f_factor(model, kind, xarr))
    return float(out) if np.ndim(x) == 0 else out


def bogoliubov_uv(model: DimensionlessModel, kind: DispersionKind, x):
    """Individual (u, v); exposed for testing only, physics uses (u+v)^2.

    Reconstructed through extended-precision intermediates: u, v grow like
    1/sqrt(2x) as x -> 0 and the identity u^2 - v^2 = 1 would otherwise
    lose a digit more than plain double rounding allows when squared.
    """
    xarr = np.asarray(x, dtype=float)
    if np.any(xarr <= 0.0):
        raise DomainError("bogoliubov_uv requires x > 0")
    h = (0.5 * xarr * xarr).astype(np.longdouble)
    w = np.asarray(xarr * f_factor(model, kind, xarr), dtype=np.longdouble)
    s = 2.0 * np.sqrt(h * w)
    u = ((h + w) / s).astype(float)
    v = ((h - w) / s).astype(float)
    if np.ndim(x) == 0:
        return float(u), float(v)
    return u, v


def _golden_min(fun, a, b, tol=1e-10):
    """Golden-section minimum of a scalar function on [a, b]."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    xm = 0.5 * (a + b)
    return xm, fun(xm)


def _min_radicand(r, a, x_max=10.0, n=600):
    xs = np.linspace(1e-9, x_max, n)
    vals = _radicand_raw(r, a, xs)
    i = int(np.argmin(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, n - 1)]
    xm, fm = _golden_min(lambda x: float(_radicand_raw(r, a, x)), lo, hi)
    return xm, min(fm, float(vals[i]))


def critical_A(r: float, tol: float = 1e-5) -> float:
    """Smallest A at which min_x f^2(x) reaches zero, by bisection on A.

    Raises NoInstability when f^2 stays positive over the whole search
    bracket A in [0, 100] (the dip term is bounded by 3R/sqrt(2 pi), so no
    instability exists at all for R < sqrt(2 pi)/3).
    """
    if not (0.0 < r <= R_MAX * (1.0 + 1e-12)):
        raise InvalidParams("critical_A requires R in (0, sqrt(pi/2)]")
    hi = 100.0
    if _min_radicand(r, hi)[1] > 0.0:
        raise NoInstability(
            f"f^2 stays positive for all A in [0, {hi}] at R = {r}")
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _min_radicand(r, mid)[1] > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class SpectrumReport:
    """Sampled dispersion factor with roton/stability/crossover summary."""

    x: np.ndarray
    f: np.ndarray
    omega: np.ndarray
    roton: tuple[float, float] | None
    stable: bool
    min_f2: float
    crossover_x: float | None = None

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.f.tolist(),
                        self.omega.tolist()))

    def csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("x,f,omega\n")
        for xi, fi, oi in zip(self.x, self.f, self.omega):
            buf.write(f"{xi:.17g},{fi:.17g},{oi:.17g}\n")
        return buf.getvalue()

    def json_dict(self) -> dict:
        return {
            "samples": [[float(a), float(b), float(c)]
                        for a, b, c in self.samples],
            "roton": None if self.roton is None
            else {"x": self.roton[0], "f": self.roton[1]},
            "stable": self.stable,
            "min_f2": self.min_f2,
            "crossover_x": self.crossover_x,
        }

    def json_text(self) -> str:
        return json.dumps(self.json_dict(), indent=2) + "\n"


_ROTON_DIP_TOL = 1e-9


def analyze_spectrum(model: DimensionlessModel, kind: DispersionKind,
                     x_max: float = 10.0, n: int = 512) -> SpectrumReport:
    """Sample f on a uniform grid and locate roton/crossover features."""
    if x_max <= 0.0:
        raise InvalidParams("x_max must be positive")
    if n < 16:
        raise InvalidParams("need at least 16 grid points")
    xs = np.linspace(0.0, x_max, n)
    rad = radicand(model, kind, xs)
    min_f2 = float(np.min(rad))
    if min_f2 < 0.0:
        raise UnstableSpectrum(
            f"f^2 reaches {min_f2:.6g} on [0, {x_max}]; spectrum unstable")
    fs = np.sqrt(rad)
    oms = xs * fs

    roton = None
    if kind == DispersionKind.DIPOLAR:
        d = np.diff(fs)
        best = None
        for i in range(1, n - 1):
            if d[i - 1] < 0.0 and d[i] > 0.0:
                xm, fm2 = _golden_min(
                    lambda x: float(radicand(model, kind, x)),
                    xs[i - 1], xs[i + 1])
                fm = np.sqrt(max(fm2, 0.0))
                if best is None or fm < best[1]:
                    best = (xm, float(fm))
        if best is not None and best[1] < 1.0 - _ROTON_DIP_TOL:
            roton = best
            min_f2 = min(min_f2, best[1] ** 2)

    crossover = CONTACT_CROSSOVER_X if kind == DispersionKind.CONTACT else None
    return SpectrumReport(x=xs, f=fs, omega=oms, roton=roton, stable=True,
                          min_f2=min_f2, crossover_x=crossover)
