"""Subordination calculus for Thorin processes.

Forward direction: a drifted Brownian motion time-changed by a positive
Thorin (GGC) subordinator is again a Thorin process whose measures are
pushforwards of the subordinator's measure under the hyperbolic map

    f(x) = sqrt(theta^2 + 2 sigma^2 x) / sigma^2,
    tau_+/- = (f_# rho)^{+/- theta/sigma^2}.

Inverse direction: a triplet with shift-symmetric measures is realizable as
a unit-variance subordinated Brownian motion, with subordinator measure
rho = g_# tau_+^{-theta}, g(x) = (x^2 - theta^2)/2.

Lattice negative-binomial convolutions (the natural finite-activity
subordinators of gamma-type parents) transform gamma and bilateral-gamma
processes inside the Thorin class via affine/square-root pushforwards.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._quad import integrate_adaptive
from .errors import DomainError, PreconditionError
from .exponent import ThorinTriplet
from .maps import AffineMap, BilateralRootMap, HyperbolicMap, QuadraticMap, \
    ShiftedReciprocalMap
from .measure import Atom, RadialMeasure, measures_equal, validate_thorin

_INF = math.inf


@dataclass(frozen=True)
class BrownianParent:
    """X_t = sigma W_t + theta t."""

    sigma: float
    theta: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise PreconditionError("parent volatility must be positive")


@dataclass(frozen=True)
class GgcSubordinator:
    """Positive Thorin subordinator with drift ``a`` (Laplace convention)."""

    a: float
    rho: RadialMeasure

    def __post_init__(self):
        if self.a < 0:
            raise PreconditionError("subordinator drift must be nonnegative")
        if not validate_thorin(self.rho, RadialMeasure()).ok:
            raise PreconditionError("measure fails the Thorin integrability conditions")
        if not self.rho.is_zero and not self.rho.moment_integral(1.0, "outer").finite:
            raise PreconditionError(
                "harmonic tail diverges: not a finite-variation subordinator")

    def triplet(self) -> ThorinTriplet:
        return ThorinTriplet.from_subordinator(self.rho, self.a)


# ---------------------------------------------------------------------------
# Brownian subordination, forward
# ---------------------------------------------------------------------------

def brownian_forward(T: GgcSubordinator, X: BrownianParent) -> ThorinTriplet:
    """Thorin triplet of  Y = sigma W_T + theta T.

    The drift lands in the truncation-indicator convention through the exact
    compensation identity

        b = theta a + int [ (1/f+) 1_{f+>=1} - (1/f-) 1_{f->=1} ] rho(dt),

    f+/-(t) = f(t) -/+ theta/sigma^2, which reduces cleanly to b = 0 at
    theta = 0 (the two indicator terms cancel pointwise).
    """
    sigma, theta = X.sigma, X.theta
    fmap = HyperbolicMap(theta, sigma)
    shift_amount = theta / sigma ** 2
    if T.rho.is_zero:
        return ThorinTriplet(theta * T.a, T.a * sigma ** 2)
    image = T.rho.pushforward(fmap)
    tau_plus = image.shift(shift_amount)
    tau_minus = image.shift(-shift_amount)

    def compensation(t):
        base = fmap.forward(t)
        fp = base - shift_amount
        fm = base + shift_amount
        val = 0.0
        if fp >= 1.0:
            val += 1.0 / fp
        if fm >= 1.0:
            val -= 1.0 / fm
        return val

    kink_points = [p for p in (sigma ** 2 / 2.0 + theta, sigma ** 2 / 2.0 - theta)
                   if p > 0]
    corr = T.rho.integrate(compensation, points=kink_points, rel_tol=1e-11)
    b = theta * T.a + float(np.real(corr))
    out = ThorinTriplet(b, T.a * sigma ** 2, tau_plus, tau_minus)
    if not out.validate().ok:
        raise PreconditionError("forward transform produced an invalid triplet")
    return out


def brownian_inverse(t: ThorinTriplet, theta: float) -> GgcSubordinator:
    """Subordinator of the unit-variance Brownian representation
    Y = W_T + theta T, when one exists.

    Requires gaussian_var = 0, the shift symmetry tau_+^{-theta} =
    tau_-^{theta}, and  inf supp tau >= |theta| (the exponential-moment
    condition); the subordinator measure is rho = g_# tau_+^{-theta} with
    g(x) = (x^2 - theta^2)/2.
    """
    if t.gaussian_var != 0.0:
        raise PreconditionError("inverse representation requires no Gaussian part")
    if t.tau_plus.is_zero and t.tau_minus.is_zero:
        return GgcSubordinator(0.0, RadialMeasure())
    support = min(t.tau_plus.support_inf(), t.tau_minus.support_inf())
    if support < abs(theta) - 1e-12:
        raise PreconditionError(
            "support of the Thorin measure lies below |theta|: the required "
            "exponential moment does not exist for this drift")
    shifted_plus = t.tau_plus.shift(-theta)
    shifted_minus = t.tau_minus.shift(theta)
    if not measures_equal(shifted_plus, shifted_minus, rel_tol=1e-9):
        raise PreconditionError(
            "not Brownian-representable for this theta: the Thorin measure "
            "is not a shift of a symmetric one")
    rho = shifted_plus.pushforward(QuadraticMap(theta))
    return GgcSubordinator(0.0, rho)


def subordinated_levy_density_ig(T: GgcSubordinator, X: BrownianParent, x):
    """Levy density of the subordinated process via the inverse-Gaussian
    mixture representation,

        |x| nu(x) = E[k_rho(Z_x)]                (sgn x = sgn theta)
        |x| nu(x) = e^{2 x theta / sigma^2} E[k_rho(Z_x)]   (otherwise),

    Z_x ~ IG(|x/theta|, (x/sigma)^2).  Needs theta != 0 (the symmetric case
    degenerates; use the canonical-function route directly).
    """
    sigma, theta = X.sigma, X.theta
    if theta == 0.0:
        raise PreconditionError("IG route needs a drifted parent")
    if x == 0:
        raise DomainError("evaluate away from zero")
    mean_ig = abs(x / theta)
    shape_ig = (x / sigma) ** 2

    def ig_pdf(u):
        return math.sqrt(shape_ig / (2.0 * math.pi * u ** 3)) \
            * math.exp(-shape_ig * (u - mean_ig) ** 2 / (2.0 * mean_ig ** 2 * u))

    def integrand(u):
        return float(np.real(T.rho.laplace(u))) * ig_pdf(u)

    val, _ = integrate_adaptive(integrand, 0.0, _INF,
                                points=[mean_ig / 4.0, mean_ig, 4.0 * mean_ig],
                                rel_tol=1e-10)
    if math.copysign(1.0, x) != math.copysign(1.0, theta):
        val *= math.exp(2.0 * x * theta / sigma ** 2)
    return val / abs(x)


def subordinator_canonical_from_symmetric(tau_plus: RadialMeasure, theta: float, x):
    """Canonical function of the representing subordinator, for x > 0:

        k_rho(x) = int e^{-x (s^2/2 + s theta)} tau_+(ds)
                 = e^{x theta^2 / 2} int e^{-x (s + theta)^2 / 2} tau_+(ds).

    Equals  L[rho](x)  with rho from :func:`brownian_inverse`.
    """
    if x <= 0:
        raise DomainError("canonical function argument must be positive")
    val = tau_plus.integrate(lambda s: math.exp(-x * (0.5 * s * s + s * theta)),
                             rel_tol=1e-11)
    return float(np.real(val))


# ---------------------------------------------------------------------------
# lattice negative-binomial convolution subordination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LgnbcQuadruplet:
    """(c, alpha_scale, a_poisson, pi) of a lattice-valued negative-binomial
    convolution subordinator with p.g.f.

        phi(z) = z^c exp( a (z^alpha - 1)
                          + int_0^1 log((1-q)/(1-q z^alpha)) pi(dq) ).
    """

    c: float
    alpha_scale: float
    a_poisson: float
    pi: RadialMeasure

    def __post_init__(self):
        if self.c < 0 or self.alpha_scale <= 0 or self.a_poisson < 0:
            raise PreconditionError("quadruplet needs c >= 0, alpha > 0, a >= 0")


@dataclass(frozen=True)
class LgnbcValidation:
    support_ok: bool
    low_moment_finite: bool
    log_moment_finite: bool
    mass: float

    @property
    def ok(self):
        return self.support_ok and self.low_moment_finite and self.log_moment_finite


def lgnbc_validate(q: LgnbcQuadruplet) -> LgnbcValidation:
    """Representing-measure admissibility:  supp pi in [0,1],
    int_0^{1/2} q pi(dq) < inf  and  int_{1/2}^1 |log(1-q)| pi(dq) < inf."""
    pi = q.pi
    support_ok = pi.is_zero or (pi.support_inf() >= -1e-12
                                and pi.support_sup() <= 1.0 + 1e-12)
    if not support_ok:
        return LgnbcValidation(False, False, False, math.nan)
    low = pi.integrate(lambda p: p, 0.0, 0.5, rel_tol=1e-9)
    low_ok = math.isfinite(float(np.real(low)))
    # |log(1-q)| against the upper half; kernels with order b-1 > -1 at the
    # endpoint q=1 keep this finite
    log_ok = True
    for piece in pi.pieces:
        if piece.support_hi >= 1.0 - 1e-12 and piece.order_at_hi <= -1.0:
            log_ok = False
    if any(abs(a.location - 1.0) <= 1e-12 for a in pi.atoms):
        log_ok = False
    return LgnbcValidation(True, low_ok, log_ok, pi.mass())


def quadruplet_from_ggc(rho: RadialMeasure, c: float, alpha_scale: float,
                        a_poisson: float = 0.0) -> LgnbcQuadruplet:
    """Representing measure of the mixed-Poisson component driven by a GGC
    subordinator:  pi = h_# rho with h(x) = 1/(1+x)."""
    return LgnbcQuadruplet(c, alpha_scale, a_poisson,
                           rho.pushforward(ShiftedReciprocalMap()))


def lgnbc_pgf(q: LgnbcQuadruplet, z):
    """Probability generating function at z in (0, 1) (complex values with
    |z| <= 1 are accepted for composition identities)."""
    if not isinstance(z, complex):
        if not (0.0 < z < 1.0):
            raise DomainError("p.g.f. argument must lie in (0, 1)")
    za = z ** q.alpha_scale
    expo = q.a_poisson * (za - 1.0)

    def f(p):
        return np.log1p(-p) - np.log(1.0 - p * za)

    expo += q.pi.integrate(f, rel_tol=1e-11, complex_valued=isinstance(z, complex),
                           points=[0.5])
    return z ** q.c * np.exp(expo)


def _merge_equal_atoms(atoms):
    merged = {}
    for a in atoms:
        merged[a.location] = merged.get(a.location, 0.0) + a.weight
    return tuple(Atom(loc, w) for loc, w in sorted(merged.items()) if w > 0)


@dataclass(frozen=True)
class LgnbcSubordination:
    """Transform result, keeping the residual gamma atom separate from the
    pushforward part (it can always be removed by choosing c alpha = mass pi)."""

    triplet: ThorinTriplet
    pushforward_plus: RadialMeasure
    pushforward_minus: RadialMeasure
    residual_weight: float


def _check_lgnbc_pre(q: LgnbcQuadruplet, alpha: float):
    if abs(q.alpha_scale * alpha - 1.0) > 1e-12:
        raise PreconditionError("lattice scale must equal 1/shape of the parent")
    if q.a_poisson != 0.0:
        raise PreconditionError("pure-Poisson component is not supported here")
    theta_mass = q.pi.mass()
    if not (theta_mass > 0) or math.isinf(theta_mass):
        raise PreconditionError("representing measure must have positive finite mass")
    if q.c * alpha < theta_mass - 1e-12:
        raise PreconditionError("requires c * alpha >= total mass of pi")
    val = lgnbc_validate(q)
    if not val.ok:
        raise PreconditionError("representing measure fails admissibility")
    return theta_mass


def lgnbc_sub_gamma(q: LgnbcQuadruplet, gamma_params) -> LgnbcSubordination:
    """Gamma(alpha, beta) parent: the subordinated process is a positive
    Thorin subordinator with

        tau = f_# pi + (c alpha - mass) delta_beta,   f(x) = beta (1 - x),

    supported in [0, beta], with zero-index activity  c alpha."""
    alpha, beta = gamma_params
    if alpha <= 0 or beta <= 0:
        raise PreconditionError("gamma parent needs positive shape and rate")
    theta_mass = _check_lgnbc_pre(q, alpha)
    image = q.pi.pushforward(AffineMap(beta, -beta))
    residual = q.c * alpha - theta_mass
    atoms = list(image.atoms)
    if residual > 1e-14 * max(1.0, q.c * alpha):
        atoms.append(Atom(beta, residual))
    tau = RadialMeasure(_merge_equal_atoms(atoms), image.pieces, image.trains)
    triplet = ThorinTriplet.from_subordinator(tau, 0.0)
    return LgnbcSubordination(triplet, image, RadialMeasure(), max(residual, 0.0))


def lgnbc_sub_bilateral(q: LgnbcQuadruplet, bil_params) -> LgnbcSubordination:
    """BilGamma(alpha, beta+, alpha, beta-) parent:

        tau_+/- = (f_# pi)^{+/- beta_0} + (c alpha - mass) delta_{beta_+/-},

    f(x) = sqrt((beta_+ + beta_-)^2 - 4 beta_+ beta_- x)/2 and
    beta_0 = (beta_- - beta_+)/2; supports lie in [0, beta_+/-] and the
    zero-index activity is 2 c alpha."""
    alpha, beta_p, beta_m = bil_params
    if alpha <= 0 or beta_p <= 0 or beta_m <= 0:
        raise PreconditionError("bilateral parent needs positive shape and rates")
    theta_mass = _check_lgnbc_pre(q, alpha)
    image = q.pi.pushforward(BilateralRootMap(beta_p, beta_m))
    beta0 = (beta_m - beta_p) / 2.0
    plus = image.shift(beta0)
    minus = image.shift(-beta0)
    residual = q.c * alpha - theta_mass
    sides = []
    for side, beta_side in ((plus, beta_p), (minus, beta_m)):
        atoms = list(side.atoms)
        if residual > 1e-14 * max(1.0, q.c * alpha):
            atoms.append(Atom(beta_side, residual))
        sides.append(RadialMeasure(_merge_equal_atoms(atoms), side.pieces,
                                   side.trains))
    tau_plus, tau_minus = sides
    b = tau_plus.moment_integral(1.0, "outer").value \
        - tau_minus.moment_integral(1.0, "outer").value
    triplet = ThorinTriplet(b, 0.0, tau_plus, tau_minus)
    if not triplet.validate().ok:
        raise PreconditionError("bilateral transform produced an invalid triplet")
    return LgnbcSubordination(triplet, plus, minus, max(residual, 0.0))
