"""Tagged closed-form density pieces for radial measures.

Every kernel is a frozen dataclass with decidable endpoint behavior
(``order_at_lo``, ``order_at_hi``, ``tail_exponent_at_inf``), a density,
an exact Laplace transform wherever the tag admits one, and closed-form
pushforward/translation rules where those stay inside the tag family.
Anything that leaves the family becomes a :class:`ComposedKernel`, which
evaluates all integrals by pulling back to its base kernel.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import special as sp

from ._quad import integrate_adaptive, integrate_complex, gauss_panels
from .errors import DivergenceError, PreconditionError
from .maps import AffineMap, MonotoneMap, ReciprocalMap
from .specfun import ml_value

_INF = math.inf


def _acot(y):
    """Inverse cotangent with range (0, pi)."""
    return np.arctan2(1.0, y)


class DensityPiece:
    """Common behavior for all kernel tags."""

    # --- structure ---------------------------------------------------------
    @property
    def support_lo(self):
        raise NotImplementedError

    @property
    def support_hi(self):
        raise NotImplementedError

    @property
    def order_at_lo(self):
        """Power order a with density ~ c (s-lo)^a as s -> lo+ (None: unknown)."""
        raise NotImplementedError

    @property
    def order_at_hi(self):
        """Power order at a finite upper endpoint."""
        return 0.0

    @property
    def tail_exponent_at_inf(self):
        """t with density ~ c s^t at infinity; -inf if faster than any power."""
        raise NotImplementedError

    @property
    def decays_exponentially(self):
        return self.tail_exponent_at_inf == -_INF and math.isinf(self.support_hi)

    def density(self, s):
        raise NotImplementedError

    # --- integration ---------------------------------------------------------
    def integrate(self, f, lo=0.0, hi=_INF, *, points=(), rel_tol=1e-11,
                  complex_valued=False):
        """Adaptive quadrature of ``f`` against this density over ``[lo, hi]``."""
        a = max(lo, self.support_lo)
        b = min(hi, self.support_hi)
        if b <= a:
            return 0.0 + 0.0j if complex_valued else 0.0
        integrand = lambda s: f(s) * self.density(s)
        quad = integrate_complex if complex_valued else integrate_adaptive
        val, _ = quad(integrand, a, b, points=list(points), rel_tol=rel_tol)
        return val

    def laplace(self, r):
        """Laplace transform at ``r``; closed form where the tag has one."""
        if isinstance(r, complex):
            return self.integrate(lambda s: np.exp(-r * s), complex_valued=True)
        return self.integrate(lambda s: math.exp(-r * s))

    def mass(self):
        """Total mass; may be ``inf``."""
        if math.isinf(self.support_hi) and not self.decays_exponentially \
                and self.tail_exponent_at_inf >= -1.0:
            return _INF
        return self.integrate(lambda s: 1.0)

    # --- algebra ---------------------------------------------------------
    def translated(self, theta):
        """Kernel of the left-translated measure m^theta (support shifts by -theta)."""
        raise NotImplementedError

    def pushforward(self, phi: MonotoneMap):
        """Image kernel under ``phi`` (closed form where possible)."""
        return ComposedKernel(self, phi, 0.0)

    def density_from_lo(self, du):
        """Density at lo + du, with the offset ``du`` supplied directly.

        Subclasses with an endpoint singularity override this so tiny offsets
        do not get destroyed by the ``(lo + du) - lo`` cancellation.
        """
        return self.density(self.support_lo + np.asarray(du, dtype=float))

    # --- vectorized nodes ---------------------------------------------------
    def panel_nodes(self, s_max, *, n_panels=24, nodes_per_panel=24, edges=()):
        """Nodes/weights (x, w) with sum w_i f(x_i) ~ int f d(this) on [lo, s_max].

        A power substitution absorbs an algebraic singularity at the lower
        endpoint so fixed-order Gauss panels converge fast; ``edges`` forces
        panel boundaries at integrand kinks (in the s variable).
        """
        lo = self.support_lo
        hi = min(self.support_hi, s_max)
        if hi <= lo:
            return np.empty(0), np.empty(0)
        a = self.order_at_lo if self.order_at_lo is not None else 0.0
        if -1.0 < a < 0.0:
            c = 1.0 / (1.0 + a)
            u_hi = (hi - lo) ** (1.0 / c)
            u_edges = [(e - lo) ** (1.0 / c) for e in edges if lo < e < hi]
            u, w = gauss_panels(0.0, u_hi, n_panels, nodes_per_panel,
                                geometric=True, must_edges=u_edges)
            du = u ** c
            s = lo + du
            wt = w * self.density_from_lo(du) * c * u ** (c - 1.0)
        else:
            s, w = gauss_panels(lo, hi, n_panels, nodes_per_panel,
                                geometric=math.isinf(self.support_hi),
                                must_edges=edges)
            wt = w * self.density(s)
        keep = np.isfinite(wt) & (wt != 0.0)
        return s[keep], wt[keep]


@dataclass(frozen=True)
class PowerKernel(DensityPiece):
    """c (s-lo)^p e^{-q (s-lo)} on (lo, hi).

    Covers the stable kernel s^{alpha-1}/Gamma(alpha) (lo=0, q=0), its
    exponentially tempered shift (the classical tempered stable Thorin
    density), and plain window kernels (p=0).
    """

    coef: float
    power: float
    rate: float = 0.0
    lo: float = 0.0
    hi: float = _INF

    def __post_init__(self):
        if self.coef <= 0 or self.rate < 0 or self.hi <= self.lo:
            raise PreconditionError("power kernel needs coef>0, rate>=0, hi>lo")

    @property
    def support_lo(self):
        return self.lo

    @property
    def support_hi(self):
        return self.hi

    @property
    def order_at_lo(self):
        return self.power

    @property
    def tail_exponent_at_inf(self):
        if math.isinf(self.hi) and self.rate == 0.0:
            return self.power
        return -_INF

    def density(self, s):
        s = np.asarray(s, dtype=float)
        u = s - self.lo
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            out = np.where((u > 0) & (s < self.hi),
                           self.coef * u ** self.power * np.exp(-self.rate * u), 0.0)
        return out if out.ndim else float(out)

    def density_from_lo(self, du):
        du = np.asarray(du, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            out = np.where((du > 0) & (self.lo + du < self.hi),
                           self.coef * du ** self.power * np.exp(-self.rate * du), 0.0)
        return out if out.ndim else float(out)

    def laplace(self, r):
        p1 = self.power + 1.0
        if p1 <= 0.0:
            raise DivergenceError("kernel is not Laplace-transformable near its endpoint")
        z = r + self.rate
        if isinstance(r, complex):
            if math.isinf(self.hi):
                if z.real <= 0:
                    raise DivergenceError("Laplace transform diverges at this abscissa")
                return self.coef * np.exp(-r * self.lo) * math.gamma(p1) / z ** p1
            return super().laplace(r)
        if math.isinf(self.hi):
            if z <= 0:
                if z == 0:  # total mass
                    return self.mass()
                raise DivergenceError("Laplace transform diverges at this abscissa")
            return self.coef * math.exp(-r * self.lo) * math.gamma(p1) / z ** p1
        if z == 0:
            return self.coef * (self.hi - self.lo) ** p1 / p1 * math.exp(-r * self.lo)
        # lower incomplete gamma; z<0 (tilting beyond the rate) via quadrature
        if z < 0:
            return super().laplace(r)
        x = z * (self.hi - self.lo)
        return self.coef * math.exp(-r * self.lo) * sp.gammainc(p1, x) * math.gamma(p1) / z ** p1

    def mass(self):
        p1 = self.power + 1.0
        if p1 <= 0.0:
            return _INF
        if math.isinf(self.hi):
            if self.rate == 0.0:
                return _INF
            return self.coef * math.gamma(p1) / self.rate ** p1
        if self.rate == 0.0:
            return self.coef * (self.hi - self.lo) ** p1 / p1
        x = self.rate * (self.hi - self.lo)
        return self.coef * sp.gammainc(p1, x) * math.gamma(p1) / self.rate ** p1

    def translated(self, theta):
        return replace(self, lo=self.lo - theta,
                       hi=self.hi - theta if not math.isinf(self.hi) else _INF)

    def pushforward(self, phi):
        if isinstance(phi, AffineMap):
            a, b = phi.intercept, phi.slope
            if b > 0:
                return PowerKernel(self.coef * b ** (-self.power - 1.0), self.power,
                                   self.rate / b, a + b * self.lo,
                                   a + b * self.hi if not math.isinf(self.hi) else _INF)
            if self.rate == 0.0 and not math.isinf(self.hi):
                w = abs(b)
                return TwoSidedPowerKernel(self.coef * w ** (-self.power - 1.0),
                                           1.0, self.power + 1.0,
                                           a + b * self.hi, a + b * self.lo)
        if isinstance(phi, ReciprocalMap) and self.rate == 0.0 and self.lo == 0.0:
            new_lo = 0.0 if math.isinf(self.hi) else 1.0 / self.hi
            return PowerKernel(self.coef, -self.power - 2.0, 0.0, new_lo, _INF)
        return ComposedKernel(self, phi, 0.0)


def stable_kernel(alpha, weight=1.0):
    """Thorin density of an alpha-stable direction: w s^{alpha-1}/Gamma(alpha)."""
    return PowerKernel(weight / math.gamma(alpha), alpha - 1.0, 0.0, 0.0, _INF)


def tempered_stable_kernel(alpha, theta, weight=1.0):
    """Fractional integral of a point tempering mass: w (s-theta)^{alpha-1}/Gamma(alpha)."""
    return PowerKernel(weight / math.gamma(alpha), alpha - 1.0, 0.0, theta, _INF)


@dataclass(frozen=True)
class TwoSidedPowerKernel(DensityPiece):
    """c (s-lo)^{a-1} (hi-s)^{b-1} on (lo, hi): beta-type kernels.

    a = b = 1/2 with c = 1/(2 pi (hi-lo)/2 ...) is the arcsine kernel of the
    beta representing measure used in negative-binomial subordination.
    """

    coef: float
    a: float
    b: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.coef <= 0 or self.a <= 0 or self.b <= 0 or self.hi <= self.lo:
            raise PreconditionError("two-sided power kernel needs coef,a,b>0, hi>lo")

    @property
    def support_lo(self):
        return self.lo

    @property
    def support_hi(self):
        return self.hi

    @property
    def order_at_lo(self):
        return self.a - 1.0

    @property
    def order_at_hi(self):
        return self.b - 1.0

    @property
    def tail_exponent_at_inf(self):
        return -_INF

    def density(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where((s > self.lo) & (s < self.hi),
                           self.coef * (s - self.lo) ** (self.a - 1.0)
                           * (self.hi - s) ** (self.b - 1.0), 0.0)
        return out if out.ndim else float(out)

    def laplace(self, r):
        if isinstance(r, complex):
            return super().laplace(r)
        span = self.hi - self.lo
        pref = self.coef * math.exp(-r * self.lo) * span ** (self.a + self.b - 1.0) \
            * sp.beta(self.a, self.b)
        return pref * sp.hyp1f1(self.a, self.a + self.b, -r * span)

    def mass(self):
        return self.coef * sp.beta(self.a, self.b) \
            * (self.hi - self.lo) ** (self.a + self.b - 1.0)

    def translated(self, theta):
        return replace(self, lo=self.lo - theta, hi=self.hi - theta)

    def pushforward(self, phi):
        if isinstance(phi, AffineMap):
            A, B = phi.intercept, phi.slope
            w = abs(B)
            c = self.coef * w ** (1.0 - self.a - self.b)
            if B > 0:
                return TwoSidedPowerKernel(c, self.a, self.b, A + B * self.lo, A + B * self.hi)
            return TwoSidedPowerKernel(c, self.b, self.a, A + B * self.hi, A + B * self.lo)
        return ComposedKernel(self, phi, 0.0)

    def panel_nodes(self, s_max, *, n_panels=24, nodes_per_panel=24, edges=()):
        # both endpoints can be singular; substitute s = lo + span*sin^2(t)
        if s_max < self.hi:
            return super().panel_nodes(s_max, n_panels=n_panels,
                                       nodes_per_panel=nodes_per_panel, edges=edges)
        span = self.hi - self.lo
        t_edges = [math.asin(math.sqrt((e - self.lo) / span))
                   for e in edges if self.lo < e < self.hi]
        t, w = gauss_panels(0.0, math.pi / 2.0, n_panels, nodes_per_panel,
                            geometric=False, must_edges=t_edges)
        s = self.lo + span * np.sin(t) ** 2
        jac = span * 2.0 * np.sin(t) * np.cos(t)
        return s, w * self.density(s) * jac


def arcsine_kernel(kappa, mass=0.5):
    """Beta(1/2,1/2)-type representing kernel on (0, kappa) with given mass.

    mass = 1/2 reproduces q^{-1/2}(kappa-q)^{-1/2}/(2 pi).
    """
    coef = mass / math.pi
    return TwoSidedPowerKernel(coef, 0.5, 0.5, 0.0, kappa)


@dataclass(frozen=True)
class LinnikKernel(DensityPiece):
    """Bernstein density of the tempered positive Linnik canonical function.

    density(s) = lam * sin(rho pi)/pi * u^{rho-1} /
                 (u^{2 rho}/beta + 2 u^rho cos(rho pi) + beta),  u = s - theta,
    whose Laplace transform is lam * e^{-theta r} E_rho(-beta r^rho).
    """

    lam: float
    theta: float
    rho: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.rho < 1.0):
            raise PreconditionError("Linnik kernel needs rho in (0,1)")
        if self.lam <= 0 or self.theta < 0 or self.beta <= 0:
            raise PreconditionError("Linnik kernel needs lam>0, theta>=0, beta>0")

    @property
    def support_lo(self):
        return self.theta

    @property
    def support_hi(self):
        return _INF

    @property
    def order_at_lo(self):
        return self.rho - 1.0

    @property
    def tail_exponent_at_inf(self):
        return -self.rho - 1.0

    def density(self, s):
        s = np.asarray(s, dtype=float)
        return self.density_from_lo(s - self.theta)

    def density_from_lo(self, du):
        u = np.asarray(du, dtype=float)
        rho, beta = self.rho, self.beta
        sinp, cosp = math.sin(math.pi * rho), math.cos(math.pi * rho)
        with np.errstate(invalid="ignore", divide="ignore"):
            ur = np.where(u > 0, u, np.nan) ** rho
            val = self.lam * sinp / math.pi * ur / u \
                / (ur * ur / beta + 2.0 * ur * cosp + beta)
            out = np.where(u > 0, val, 0.0)
        return out if out.ndim else float(out)

    def laplace(self, r):
        if isinstance(r, complex):
            return super().laplace(r)
        if r < 0:
            raise DivergenceError("Linnik kernel transform needs r >= 0")
        if r == 0:
            return self.lam
        return self.lam * math.exp(-self.theta * r) * ml_value(self.rho, -self.beta * r ** self.rho)

    def mass(self):
        return self.lam

    def translated(self, dtheta):
        return replace(self, theta=self.theta - dtheta)


@dataclass(frozen=True)
class LampertiCdfKernel(DensityPiece):
    """Unit-order fractional integral (running distribution function) of a
    Linnik kernel: density(s) = lam * F((s-theta) beta^{-1/rho}) with F the
    Lamperti ratio c.d.f.

        F(x) = 1 - acot( cot(rho pi) + x^rho / sin(rho pi) ) / (rho pi).

    Laplace transform: lam e^{-theta r} E_rho(-beta r^rho) / r.
    """

    lam: float
    theta: float
    rho: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.rho < 1.0):
            raise PreconditionError("Lamperti kernel needs rho in (0,1)")
        if self.lam <= 0 or self.theta < 0 or self.beta <= 0:
            raise PreconditionError("Lamperti kernel needs lam>0, theta>=0, beta>0")

    @property
    def support_lo(self):
        return self.theta

    @property
    def support_hi(self):
        return _INF

    @property
    def order_at_lo(self):
        return self.rho

    @property
    def tail_exponent_at_inf(self):
        return 0.0  # the c.d.f. saturates at lam

    def ratio_cdf(self, x):
        """The Lamperti c.d.f. F, vectorized on x >= 0."""
        x = np.asarray(x, dtype=float)
        rho = self.rho
        cotp = math.cos(math.pi * rho) / math.sin(math.pi * rho)
        with np.errstate(invalid="ignore"):
            val = 1.0 - _acot(cotp + np.where(x > 0, x, 0.0) ** rho
                              / math.sin(math.pi * rho)) / (rho * math.pi)
        return np.where(x > 0, val, 0.0)

    def density(self, s):
        s = np.asarray(s, dtype=float)
        u = (s - self.theta) * self.beta ** (-1.0 / self.rho)
        out = self.lam * self.ratio_cdf(u)
        return out if out.ndim else float(out)

    def laplace(self, r):
        if isinstance(r, complex):
            return super().laplace(r)
        if r <= 0:
            raise DivergenceError("transform of an unbounded-mass kernel needs r > 0")
        return self.lam * math.exp(-self.theta * r) \
            * ml_value(self.rho, -self.beta * r ** self.rho) / r

    def mass(self):
        return _INF

    def translated(self, dtheta):
        return replace(self, theta=self.theta - dtheta)


@dataclass(frozen=True)
class ComposedKernel(DensityPiece):
    """Image of ``base`` under y = phi(t) - offset.

    All integrals pull back to the base variable, so endpoint singularities
    stay where the base kernel already handles them.
    """

    base: DensityPiece
    map: MonotoneMap
    offset: float = 0.0

    def _image_endpoints(self):
        end1 = self.map.forward(self.base.support_lo)
        end2 = self.map.forward(self.base.support_hi)
        a, b = (end1, end2) if end1 <= end2 else (end2, end1)
        return a - self.offset, b - self.offset

    @property
    def support_lo(self):
        return self._image_endpoints()[0]

    @property
    def support_hi(self):
        return self._image_endpoints()[1]

    @property
    def order_at_lo(self):
        return self.map.image_lo_order(self.base)

    @property
    def order_at_hi(self):
        # image upper endpoint corresponds to base hi (increasing) / lo (decreasing)
        if math.isinf(self.support_hi):
            return 0.0
        a = self.base.order_at_hi if self.map.increasing else self.base.order_at_lo
        return a

    @property
    def tail_exponent_at_inf(self):
        if not math.isinf(self.support_hi):
            return -_INF
        if isinstance(self.map, (ReciprocalMap,)):
            return -self.base.order_at_lo - 2.0
        t, _ = self.map.image_tail(self.base.tail_exponent_at_inf,
                                   self.base.decays_exponentially)
        return t

    @property
    def decays_exponentially(self):
        if not math.isinf(self.support_hi):
            return False
        if isinstance(self.map, (ReciprocalMap,)):
            return False
        _, flag = self.map.image_tail(self.base.tail_exponent_at_inf,
                                      self.base.decays_exponentially)
        return flag

    def density(self, y):
        y = np.asarray(y, dtype=float)
        lo, hi = self._image_endpoints()
        w = y + self.offset
        with np.errstate(invalid="ignore", divide="ignore"):
            t = self.map.inverse(w)
            val = self.base.density(t) * np.abs(self.map.inverse_deriv(w))
            out = np.where((y > lo) & (y < hi), val, 0.0)
        return out if out.ndim else float(out)

    def integrate(self, f, lo=0.0, hi=_INF, *, points=(), rel_tol=1e-11,
                  complex_valued=False):
        img_lo, img_hi = self._image_endpoints()
        a, b = max(lo, img_lo), min(hi, img_hi)
        if b <= a:
            return 0.0 + 0.0j if complex_valued else 0.0
        # pull [a, b] back to the base variable, keeping exact base endpoints
        # when the clip does not bite
        blo, bhi = self.base.support_lo, self.base.support_hi
        if self.map.increasing:
            t_lo = blo if a <= img_lo else self.map.inverse(a + self.offset)
            t_hi = bhi if b >= img_hi else self.map.inverse(b + self.offset)
        else:
            t_lo = blo if b >= img_hi else self.map.inverse(b + self.offset)
            t_hi = bhi if a <= img_lo else self.map.inverse(a + self.offset)
        g = lambda t: f(self.map.forward(t) - self.offset)
        t_points = [self.map.inverse(p + self.offset) for p in points if a < p < b]
        return self.base.integrate(g, t_lo, t_hi, points=t_points,
                                   rel_tol=rel_tol, complex_valued=complex_valued)

    def laplace(self, r):
        if isinstance(r, complex):
            return self.integrate(lambda y: np.exp(-r * y), complex_valued=True)
        return self.integrate(lambda y: math.exp(-r * y))

    def mass(self):
        return self.base.mass()

    def translated(self, theta):
        return replace(self, offset=self.offset + theta)

    def pushforward(self, phi):
        if isinstance(phi, AffineMap) and phi.slope == 1.0:
            return self.translated(-phi.intercept)
        if self.offset == 0.0 and phi == self.map.inverse_map:
            return self.base
        return ComposedKernel(self, phi, 0.0)

    def panel_nodes(self, s_max, *, n_panels=24, nodes_per_panel=24, edges=()):
        # transport base nodes through the map
        img_lo, img_hi = self._image_endpoints()
        cap = min(s_max, img_hi)
        if cap <= img_lo:
            return np.empty(0), np.empty(0)
        if self.map.increasing:
            t_cap = self.base.support_hi if cap >= img_hi \
                else self.map.inverse(cap + self.offset)
        elif not math.isinf(self.base.support_hi):
            t_cap = self.base.support_hi
        else:
            raise NotImplementedError("fixed nodes need a bounded pullback range")
        t_edges = [float(self.map.inverse(e + self.offset))
                   for e in edges if img_lo < e < cap]
        t, w = self.base.panel_nodes(t_cap, n_panels=n_panels,
                                     nodes_per_panel=nodes_per_panel, edges=t_edges)
        if t.size == 0:
            return t, w
        y = np.asarray(self.map.forward(t), dtype=float) - self.offset
        keep = y <= s_max
        return y[keep], w[keep]


@dataclass(frozen=True)
class FracIntegralKernel(DensityPiece):
    """Riemann-Liouville fractional integral of order alpha of a base kernel,

        density(x) = int_lo^x (x-t)^{alpha-1} base(t) dt / Gamma(alpha),

    with the Laplace convolution rule  L[density](r) = r^{-alpha} L[base](r).
    alpha = 1 is the running distribution function of the base measure.
    """

    base: DensityPiece
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise PreconditionError("fractional order must lie in (0, 2)")

    @property
    def support_lo(self):
        return self.base.support_lo

    @property
    def support_hi(self):
        return _INF

    @property
    def order_at_lo(self):
        return self.alpha + self.base.order_at_lo

    @property
    def tail_exponent_at_inf(self):
        t = self.base.tail_exponent_at_inf
        if self.base.decays_exponentially or t < -1.0 or not math.isinf(self.base.support_hi):
            return self.alpha - 1.0
        return self.alpha + t

    def density(self, x):
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(xs)
        ga = math.gamma(self.alpha)
        for i, xi in enumerate(xs):
            if xi <= self.base.support_lo:
                continue
            val = self.base.integrate(lambda t, xi=xi: (xi - t) ** (self.alpha - 1.0),
                                      self.base.support_lo, xi, rel_tol=1e-10)
            out[i] = val / ga
        return float(out[0]) if scalar else out

    def laplace(self, r):
        if isinstance(r, complex):
            return r ** (-self.alpha) * self.base.laplace(r)
        if r <= 0:
            raise DivergenceError("fractional-integral transform needs r > 0")
        return r ** (-self.alpha) * self.base.laplace(r)

    def mass(self):
        return _INF

    def translated(self, theta):
        return replace(self, base=self.base.translated(theta))
