"""Special functions used by the model catalog and the closed-form references.

Gamma/Bessel families are delegated to scipy; the Mittag-Leffler and Hermite
functions (not available in scipy) are implemented here with
series/integral-representation switching.  Every routine reports an error
estimate through :class:`SpecFunResult`.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from ._quad import integrate_adaptive
from .errors import DomainError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SpecFunResult:
    """Value of a special function together with an error estimate."""

    value: complex
    est_error: float

    def __float__(self):
        return float(self.value.real if isinstance(self.value, complex) else self.value)


@dataclass(frozen=True)
class SpecFunConfig:
    """Algorithm-switching thresholds, collected in one place.

    ``ml_series_floor``: most negative real argument still summed by the
    plain Mittag-Leffler power series; below it the spectral integral
    representation takes over (the series suffers catastrophic cancellation).
    """

    ml_series_floor: float = -0.25
    ml_max_terms: int = 600
    quad_rel_tol: float = 1e-11


CONFIG = SpecFunConfig()


def _result(value, est=None):
    if est is None:
        est = 4.0 * _EPS * (abs(value) + 1e-30)
    return SpecFunResult(value, float(est))


# ---------------------------------------------------------------------------
# gamma family
# ---------------------------------------------------------------------------

def _check_gamma_pole(x):
    if np.isreal(x):
        xr = float(np.real(x))
        if xr <= 0 and xr == int(xr):
            raise DomainError(f"gamma pole at {xr}")


def gamma_fn(x) -> SpecFunResult:
    """Euler gamma; complex arguments supported."""
    _check_gamma_pole(x)
    if isinstance(x, complex):
        return _result(complex(sp.gamma(x)))
    return _result(float(sp.gamma(x)))


def log_gamma(x) -> SpecFunResult:
    _check_gamma_pole(x)
    if isinstance(x, complex):
        return _result(complex(sp.loggamma(x)))
    if x <= 0:
        raise DomainError("log_gamma requires a positive real argument")
    return _result(float(sp.gammaln(x)))


def lower_incomplete_gamma(p, s) -> SpecFunResult:
    """Unregularized lower incomplete gamma ``gamma(p, s)``."""
    if p <= 0 or s < 0:
        raise DomainError("lower incomplete gamma needs p > 0, s >= 0")
    return _result(float(sp.gammainc(p, s) * sp.gamma(p)))


def upper_incomplete_gamma(p, s) -> SpecFunResult:
    """Unregularized upper incomplete gamma ``Gamma(p, s)``; p = 0 allowed."""
    if s < 0:
        raise DomainError("upper incomplete gamma needs s >= 0")
    if p == 0:
        if s == 0:
            raise DomainError("Gamma(0, 0) diverges")
        return _result(float(sp.exp1(s)))
    if p < 0:
        # recurrence Gamma(p, s) = (Gamma(p+1, s) - s^p e^-s)/p
        up = upper_incomplete_gamma(p + 1.0, s).value
        return _result((up - s ** p * math.exp(-s)) / p)
    return _result(float(sp.gammaincc(p, s) * sp.gamma(p)))


def beta_fn(a, b) -> SpecFunResult:
    """Euler beta; complex arguments go through log-gamma."""
    if isinstance(a, complex) or isinstance(b, complex):
        val = np.exp(sp.loggamma(a) + sp.loggamma(b) - sp.loggamma(a + b))
        return _result(complex(val))
    if a <= 0 or b <= 0:
        raise DomainError("beta requires positive real parts")
    return _result(float(sp.beta(a, b)))


def digamma(x) -> SpecFunResult:
    _check_gamma_pole(x)
    return _result(float(sp.psi(x)))


_GAMMA_DISPATCH = {
    "gamma": gamma_fn,
    "log_gamma": log_gamma,
    "lower_incomplete": lower_incomplete_gamma,
    "upper_incomplete": upper_incomplete_gamma,
    "beta": beta_fn,
    "digamma": digamma,
}


def gamma_family(which, *args) -> SpecFunResult:
    """Dispatching front end for the gamma-function family."""
    try:
        fn = _GAMMA_DISPATCH[which]
    except KeyError:
        raise DomainError(f"unknown gamma-family member {which!r}") from None
    return fn(*args)


# ---------------------------------------------------------------------------
# Bessel family
# ---------------------------------------------------------------------------

def bessel_k(p, x) -> SpecFunResult:
    """Modified Bessel function of the second kind ``K_p(x)``, x > 0."""
    if x <= 0:
        raise DomainError("K_p requires x > 0")
    return _result(float(sp.kv(p, x)))


def bessel_i0(x) -> SpecFunResult:
    if x < 0:
        x = -x  # I_0 is even
    return _result(float(sp.i0(x)))


def struve_l0(x) -> SpecFunResult:
    """Modified Struve function ``L_0(x)``."""
    return _result(float(sp.modstruve(0, x)))


def bessel_i0_minus_struve_l0(x) -> SpecFunResult:
    """Cancellation-free ``I_0(x) - L_0(x)``.

    Both terms grow like e^x, so the naive difference loses all digits once
    x is moderately large.  The difference itself is the Laplace transform
    of the arcsine law,

        I_0(x) - L_0(x) = (2/pi) int_0^{pi/2} e^{-x sin t} dt,

    which is evaluated directly.
    """
    if x < 0:
        raise DomainError("difference evaluated for x >= 0")
    if x <= 1.0:
        return _result(float(sp.i0(x) - sp.modstruve(0, x)))
    val, err = integrate_adaptive(lambda t: math.exp(-x * math.sin(t)),
                                  0.0, math.pi / 2, rel_tol=CONFIG.quad_rel_tol)
    return SpecFunResult(2.0 * val / math.pi, 2.0 * err / math.pi)


def bessel_family(which, p, x) -> SpecFunResult:
    if which == "K_p":
        return bessel_k(p, x)
    if which == "I_0":
        return bessel_i0(x)
    if which == "struve_L0":
        return struve_l0(x)
    raise DomainError(f"unknown Bessel-family member {which!r}")


# ---------------------------------------------------------------------------
# Mittag-Leffler function
# ---------------------------------------------------------------------------

def _ml_series(a, z, max_terms):
    """Plain power series sum_k z^k / Gamma(a k + 1) with remainder control."""
    total = 1.0
    term = 1.0
    max_abs = 1.0
    sgn = 1.0 if z > 0 else -1.0
    log_abs_z = math.log(abs(z))
    k = 1
    while k < max_terms:
        # term magnitude in log space to dodge overflow in either factor
        log_mag = k * log_abs_z - sp.gammaln(a * k + 1.0)
        term = (sgn ** k) * math.exp(log_mag)
        total += term
        max_abs = max(max_abs, abs(term))
        if abs(term) < 1e-17 * max(abs(total), 1e-30) and k > 4:
            break
        k += 1
    est = abs(term) + _EPS * max_abs * math.sqrt(k)
    return total, est


def _ml_spectral(a, x, rel_tol):
    """Completely monotone representation of ``E_a(-x)`` for x > 0, a in (0,1).

    The spectral density K_a(r) = sin(pi a)/pi * r^{a-1} / (r^{2a} +
    2 r^a cos(pi a) + 1) satisfies int e^{-r t} K_a(t) dt = E_a(-r^a), so
    E_a(-x) is the transform evaluated at r = x^{1/a}.  The substitution
    t = u^{1/a} removes the endpoint singularity.
    """
    s, c = math.sin(math.pi * a), math.cos(math.pi * a)
    r = x ** (1.0 / a)

    def integrand(u):
        if u <= 0.0:
            return s / (a * math.pi)
        t = u ** (1.0 / a)
        return (s / (a * math.pi)) * math.exp(-r * t) / (u * u + 2.0 * c * u + 1.0)

    decay_scale = r ** (-a) if r > 0 else 1.0  # e^{-rt} turns over at t ~ 1/r
    val, err = integrate_adaptive(integrand, 0.0, math.inf,
                                  points=sorted({1.0, decay_scale}), rel_tol=rel_tol)
    return val, err


def mittag_leffler(a, z) -> SpecFunResult:
    """One-parameter Mittag-Leffler function ``E_a(z) = sum z^k/Gamma(ak+1)``.

    Supported for ``a`` in (0, 1] and real ``z``; the series is used where it
    is numerically benign and the spectral integral representation elsewhere.
    """
    if not (0.0 < a <= 1.0):
        raise DomainError("Mittag-Leffler order must lie in (0, 1]")
    z = float(z)
    if a == 1.0:
        return _result(math.exp(z))
    if z == 0.0:
        return _result(1.0)
    if z >= CONFIG.ml_series_floor:
        val, est = _ml_series(a, z, CONFIG.ml_max_terms)
        return SpecFunResult(val, est)
    val, est = _ml_spectral(a, -z, CONFIG.quad_rel_tol)
    return SpecFunResult(val, est)


def ml_value(a, z) -> float:
    """Convenience scalar accessor used by kernel code."""
    return float(mittag_leffler(a, z).value)


# ---------------------------------------------------------------------------
# Hermite function (negative order)
# ---------------------------------------------------------------------------

def hermite_function(a, z) -> SpecFunResult:
    """Hermite function of negative order,

        H_a(z) = (1/Gamma(-a)) int_0^inf e^{-x^2/2 - x z} x^{-a-1} dx,

    valid for a < 0; the substitution x = u^{1/(-a)} makes the integrand
    smooth at the origin for every a < 0.
    """
    if a >= 0:
        raise DomainError("integral representation of H_a requires a < 0")
    if z <= 0:
        raise DomainError("H_a is evaluated here for z > 0 only")
    c = 1.0 / (-a)
    pref = c / sp.gamma(-a)

    def integrand(u):
        if u <= 0.0:
            return pref
        x = u ** c
        return pref * math.exp(-0.5 * x * x - x * z)

    # integrand decays once x ~ max(1/z, 1); translate back to u
    scale = max(1.0, 1.0 / z) ** (1.0 / c)
    val, err = integrate_adaptive(integrand, 0.0, math.inf, points=[scale],
                                  rel_tol=CONFIG.quad_rel_tol)
    return SpecFunResult(val, err)
