"""Levy-side views of a Thorin triplet.

The canonical function is the per-side Laplace transform of the Thorin
measure,

    k(x) = L[tau_plus](x)   for x > 0,      k(x) = L[tau_minus](|x|) for x < 0,

the Levy density is nu(x) = k(x)/|x|, and tails integrate nu.  The module
also carries the subordination cross-checks: the potential-measure route
(Levy measure of a Brownian motion subordinated by a positive Thorin
process as an integral of resolvent Levy densities) and the direct Bochner
integral, which serves purely as an independent oracle.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from ._quad import integrate_adaptive
from .errors import DomainError, PreconditionError
from .exponent import ThorinTriplet
from .measure import RadialMeasure

_INF = math.inf


@dataclass(frozen=True)
class LevyView:
    """Lazy canonical-function / Levy-density / tail evaluators of a triplet."""

    source: ThorinTriplet

    def canonical(self, x):
        """k(x): completely monotone on each side of the origin."""
        if x == 0:
            raise DomainError("canonical function is evaluated away from 0")
        m = self.source.tau_plus if x > 0 else self.source.tau_minus
        if m.is_zero:
            return 0.0
        return float(np.real(m.laplace(abs(x))))

    def levy_density(self, x):
        """nu(x) = k(x)/|x|."""
        return self.canonical(x) / abs(x)

    def levy_tail(self, x):
        """One-sided tail  int_x^inf nu(y) dy  for x > 0 (mirror for x < 0).

        Pure-atom measures use the exponential-integral closed form
        sum_i w_i Gamma(0, loc_i x); otherwise adaptive quadrature of the
        transform.
        """
        if x <= 0:
            raise DomainError("tail is one-sided: pass x > 0 and pick the side")
        m = self.source.tau_plus
        return _tail_of_measure(m, x)

    def levy_tail_negative(self, x):
        if x <= 0:
            raise DomainError("tail argument must be positive")
        return _tail_of_measure(self.source.tau_minus, x)

    def jump_activity_integral(self):
        """int (x^2 ^ 1) nu(dx): finite for every valid triplet."""
        total = 0.0
        for sign in (+1, -1):
            m = self.source.tau_plus if sign > 0 else self.source.tau_minus
            if m.is_zero:
                continue
            inner, _ = integrate_adaptive(
                lambda y: y * float(np.real(m.laplace(y))), 1e-12, 1.0, rel_tol=1e-8)
            outer, _ = integrate_adaptive(
                lambda y: float(np.real(m.laplace(y))) / y, 1.0, 80.0, rel_tol=1e-8)
            total += inner + outer
        return total


def _tail_of_measure(m: RadialMeasure, x):
    if m.is_zero:
        return 0.0
    total = 0.0
    for a in m.atoms:
        total += a.weight * float(sp.exp1(a.location * x))
    rest = RadialMeasure((), m.pieces, m.trains)
    if not rest.is_zero:
        val, _ = integrate_adaptive(
            lambda y: float(np.real(rest.laplace(y))) / y, x, _INF, rel_tol=1e-8)
        total += val
    return total


# ---------------------------------------------------------------------------
# potential-measure route for Brownian parents
# ---------------------------------------------------------------------------

def bm_potential_levy_density(q, x):
    """Levy density of q V^q for a standard Brownian parent:

        nu*_q(x) = e^{-sqrt(2q) |x|} / |x|,   q > 0.
    """
    if q <= 0:
        raise DomainError("potential index q must be positive")
    if x == 0:
        raise DomainError("evaluate away from zero")
    return math.exp(-math.sqrt(2.0 * q) * abs(x)) / abs(x)


def subordinated_levy_density_potential(rho: RadialMeasure, b_T, x):
    """Levy density of standard Brownian motion subordinated by a positive
    Thorin process with measure ``rho`` and drift ``b_T``:

        nu'(x) = b_T nu_parent(x) + int_0^inf nu*_s(x) rho(ds),

    and the Brownian parent has no jumps, so only the integral survives.
    """
    if b_T < 0:
        raise PreconditionError("subordinator drift must be nonnegative")
    if x == 0:
        raise DomainError("evaluate away from zero")
    if rho.is_zero:
        return 0.0
    ax = abs(x)
    val = rho.integrate(lambda s: math.exp(-math.sqrt(2.0 * s) * ax) / ax,
                        rel_tol=1e-10)
    return float(np.real(val))


def bochner_levy_density(subordinator_levy_density, x, *, theta=0.0, sigma=1.0,
                         rel_tol=1e-9):
    """Independent oracle:  nu'(x) = int_0^inf n_{theta s, sigma^2 s}(x) rho_L(s) ds
    with n the Gaussian marginal of the parent and rho_L the subordinator's
    Levy density.  Quadrature only; used to cross-validate the other routes.
    """
    if x == 0:
        raise DomainError("evaluate away from zero")

    def integrand(s):
        var = sigma * sigma * s
        return math.exp(-0.5 * (x - theta * s) ** 2 / var) \
            / math.sqrt(2.0 * math.pi * var) * subordinator_levy_density(s)

    # the integrand peaks near s ~ |x|/sigma; split there for the quadrature
    scale = max(abs(x) / max(sigma, 1e-12), 1e-6)
    val, err = integrate_adaptive(integrand, 0.0, _INF,
                                  points=[scale / 4.0, scale, 4.0 * scale],
                                  rel_tol=rel_tol)
    return val


# ---------------------------------------------------------------------------
# complete monotonicity witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotonicityWitness:
    """Outcome of the divided-difference alternation test."""

    passed: bool
    order: int = 0
    grid_point: float = math.nan

    def __bool__(self):
        return self.passed


def completely_monotone_witness(f, grid, max_order=6, tol_scale=1e-9):
    """Sign-alternation test for complete monotonicity of ``f`` on ``grid``.

    Forward differences of order n must satisfy (-1)^n delta^n f >= 0 for a
    completely monotone function on an equispaced grid.  Returns the first
    violating (order, abscissa) as an explicit witness.
    """
    xs = np.asarray(grid, dtype=float)
    vals = np.array([f(float(x)) for x in xs])
    scale = np.max(np.abs(vals))
    diff = vals.copy()
    for order in range(1, max_order + 1):
        diff = np.diff(diff)
        signed = (-1.0) ** order * diff
        bad = signed < -tol_scale * scale
        if bad.any():
            idx = int(np.argmax(bad))
            return MonotonicityWitness(False, order, float(xs[idx]))
    return MonotonicityWitness(True)
