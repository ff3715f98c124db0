"""Strictly monotone scalar maps with closed-form inverses.

These are the change-of-variable maps the measure calculus pushes radial
measures through: affine reparametrizations, the hyperbolic map arising in
Brownian subordination, its quadratic inverse, reciprocals (dual measures,
negative-binomial representing measures) and the square-root map of bilateral
negative-binomial subordination.

Each map knows its domain, orientation, inverse and inverse derivative, and
carries enough analytic structure (growth/local orders) for image kernels to
keep decidable endpoint behavior.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError

_INF = math.inf


@dataclass(frozen=True)
class MonotoneMap:
    """Base interface; subclasses are frozen dataclasses (hashable/immutable)."""

    @property
    def domain(self):
        raise NotImplementedError

    @property
    def increasing(self) -> bool:
        raise NotImplementedError

    def forward(self, x):
        raise NotImplementedError

    def inverse(self, y):
        raise NotImplementedError

    def inverse_deriv(self, y):
        raise NotImplementedError

    @property
    def inverse_map(self):
        """The inverse as a map object when it has a closed tag, else None."""
        return None

    def image_interval(self):
        lo, hi = self.domain
        a, b = self.forward(lo), self.forward(hi)
        return (a, b) if self.increasing else (b, a)

    # --- analytic order transport -----------------------------------------
    # image density of a kernel with tail exponent t / endpoint order a:
    #   density_img(y) = base(inverse(y)) * |inverse'(y)|

    def image_tail(self, tail_exponent, decays_exponentially):
        """(tail exponent, exp-decay flag) of the image at +inf."""
        raise NotImplementedError

    def image_lo_order(self, base_kernel):
        """Power order of the image density at its lower support endpoint."""
        raise NotImplementedError


def _local_order(base_order, m0):
    # base ~ (t-t0)^a, inverse deviation ~ (y-y0)^{m0}:
    # image ~ (y-y0)^{m0 a} * |w'| ~ (y-y0)^{m0(a+1)-1}
    return m0 * (base_order + 1.0) - 1.0


@dataclass(frozen=True)
class AffineMap(MonotoneMap):
    """y = intercept + slope * x."""

    intercept: float
    slope: float

    def __post_init__(self):
        if self.slope == 0:
            raise PreconditionError("affine map must have nonzero slope")

    @property
    def domain(self):
        return (-_INF, _INF)

    @property
    def increasing(self):
        return self.slope > 0

    def forward(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float) \
            if np.ndim(x) else self.intercept + self.slope * x

    def inverse(self, y):
        return (y - self.intercept) / self.slope

    def inverse_deriv(self, y):
        return (np.full_like(np.asarray(y, dtype=float), 1.0 / self.slope)
                if np.ndim(y) else 1.0 / self.slope)

    @property
    def inverse_map(self):
        return AffineMap(-self.intercept / self.slope, 1.0 / self.slope)

    def image_tail(self, tail_exponent, decays_exponentially):
        return tail_exponent, decays_exponentially

    def image_lo_order(self, base_kernel):
        a = base_kernel.order_at_lo if self.increasing else base_kernel.order_at_hi
        return _local_order(a, 1.0)


def shift_map(theta):
    """Left-translation map x -> x - theta."""
    return AffineMap(-theta, 1.0)


@dataclass(frozen=True)
class HyperbolicMap(MonotoneMap):
    """f(x) = sqrt(theta^2 + 2 sigma^2 x) / sigma^2 on [0, inf), increasing.

    This is the radial map of drifted Brownian subordination; its inverse is
    the quadratic w(y) = (sigma^4 y^2 - theta^2) / (2 sigma^2).
    """

    theta: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise PreconditionError("hyperbolic map requires sigma > 0")

    @property
    def domain(self):
        return (0.0, _INF)

    @property
    def increasing(self):
        return True

    def forward(self, x):
        s2 = self.sigma * self.sigma
        return np.sqrt(self.theta * self.theta + 2.0 * s2 * np.asarray(x, dtype=float)) / s2 \
            if np.ndim(x) else math.sqrt(self.theta ** 2 + 2.0 * s2 * x) / s2

    def inverse(self, y):
        s2 = self.sigma * self.sigma
        return (s2 * s2 * np.square(y) - self.theta * self.theta) / (2.0 * s2) \
            if np.ndim(y) else (s2 * s2 * y * y - self.theta ** 2) / (2.0 * s2)

    def inverse_deriv(self, y):
        return self.sigma * self.sigma * (np.asarray(y, dtype=float) if np.ndim(y) else y)

    @property
    def inverse_map(self):
        if self.sigma == 1.0:
            return QuadraticMap(self.theta)
        return None

    def image_tail(self, tail_exponent, decays_exponentially):
        if decays_exponentially:
            return -_INF, True
        return 2.0 * tail_exponent + 1.0, False

    def image_lo_order(self, base_kernel):
        a = base_kernel.order_at_lo
        m0 = 2.0 if (self.theta == 0.0 and base_kernel.support_lo == 0.0) else 1.0
        return _local_order(a, m0)


@dataclass(frozen=True)
class QuadraticMap(MonotoneMap):
    """g(x) = (x^2 - theta^2)/2 on [|theta|, inf); inverse of the unit-sigma
    hyperbolic map, used to recover subordinator Thorin measures."""

    theta: float

    @property
    def domain(self):
        return (abs(self.theta), _INF)

    @property
    def increasing(self):
        return True

    def forward(self, x):
        if np.ndim(x):
            xx = np.asarray(x, dtype=float)
            return (np.square(xx) - self.theta * self.theta) / 2.0
        return (x * x - self.theta * self.theta) / 2.0

    def inverse(self, y):
        if np.ndim(y):
            return np.sqrt(self.theta * self.theta + 2.0 * np.asarray(y, dtype=float))
        return math.sqrt(self.theta * self.theta + 2.0 * y)

    def inverse_deriv(self, y):
        return 1.0 / self.inverse(y)

    @property
    def inverse_map(self):
        return HyperbolicMap(self.theta, 1.0)

    def image_tail(self, tail_exponent, decays_exponentially):
        if decays_exponentially:
            # exp(-q x) becomes exp(-q sqrt(2y)): still beats every power
            return -_INF, True
        return 0.5 * tail_exponent - 0.5, False

    def image_lo_order(self, base_kernel):
        a = base_kernel.order_at_lo
        m0 = 0.5 if (self.theta == 0.0 and base_kernel.support_lo == 0.0) else 1.0
        return _local_order(a, m0)


@dataclass(frozen=True)
class ReciprocalMap(MonotoneMap):
    """p(x) = 1/x on (0, inf); decreasing involution (dual Thorin measures)."""

    @property
    def domain(self):
        return (0.0, _INF)

    @property
    def increasing(self):
        return False

    def forward(self, x):
        if np.ndim(x):
            with np.errstate(divide="ignore"):
                return 1.0 / np.asarray(x, dtype=float)
        return _INF if x == 0 else (0.0 if math.isinf(x) else 1.0 / x)

    inverse = forward

    def inverse_deriv(self, y):
        if np.ndim(y):
            return -1.0 / np.square(np.asarray(y, dtype=float))
        return -1.0 / (y * y)

    @property
    def inverse_map(self):
        return ReciprocalMap()

    def image_tail(self, tail_exponent, decays_exponentially):
        # unbounded image requires base support reaching 0; handled by kernels
        raise PreconditionError("reciprocal image tail depends on base order at 0")

    def image_lo_order(self, base_kernel):
        if math.isinf(base_kernel.support_hi):
            if base_kernel.decays_exponentially:
                return _INF  # flatter than any power at 0
            return -base_kernel.tail_exponent_at_inf - 2.0
        return _local_order(base_kernel.order_at_hi, 1.0)


@dataclass(frozen=True)
class ShiftedReciprocalMap(MonotoneMap):
    """h(x) = 1/(1+x) on [0, inf) -> (0, 1]; decreasing.

    Carries Thorin measures of subordinators to negative-binomial-convolution
    representing measures.
    """

    @property
    def domain(self):
        return (0.0, _INF)

    @property
    def increasing(self):
        return False

    def forward(self, x):
        if np.ndim(x):
            return 1.0 / (1.0 + np.asarray(x, dtype=float))
        return 0.0 if math.isinf(x) else 1.0 / (1.0 + x)

    def inverse(self, y):
        if np.ndim(y):
            return 1.0 / np.asarray(y, dtype=float) - 1.0
        return 1.0 / y - 1.0

    def inverse_deriv(self, y):
        if np.ndim(y):
            return -1.0 / np.square(np.asarray(y, dtype=float))
        return -1.0 / (y * y)

    def image_tail(self, tail_exponent, decays_exponentially):
        raise PreconditionError("image of shifted reciprocal is bounded")

    def image_lo_order(self, base_kernel):
        if math.isinf(base_kernel.support_hi):
            if base_kernel.decays_exponentially:
                return _INF
            return -base_kernel.tail_exponent_at_inf - 2.0
        return _local_order(base_kernel.order_at_hi, 1.0)


@dataclass(frozen=True)
class BilateralRootMap(MonotoneMap):
    """f(x) = sqrt((b+ + b-)^2 - 4 b+ b- x) / 2 on [0, 1]; decreasing.

    The radial map of bilateral-gamma subordination by lattice
    negative-binomial convolutions; image is [|b- − b+|/2, (b+ + b-)/2].
    """

    beta_plus: float
    beta_minus: float

    def __post_init__(self):
        if self.beta_plus <= 0 or self.beta_minus <= 0:
            raise PreconditionError("bilateral root map requires positive rates")

    @property
    def domain(self):
        return (0.0, 1.0)

    @property
    def increasing(self):
        return False

    def forward(self, x):
        bp, bm = self.beta_plus, self.beta_minus
        arg = (bp + bm) ** 2 - 4.0 * bp * bm * (np.asarray(x, dtype=float) if np.ndim(x) else x)
        return 0.5 * (np.sqrt(arg) if np.ndim(x) else math.sqrt(max(arg, 0.0)))

    def inverse(self, y):
        bp, bm = self.beta_plus, self.beta_minus
        yy = np.square(y) if np.ndim(y) else y * y
        return ((bp + bm) ** 2 - 4.0 * yy) / (4.0 * bp * bm)

    def inverse_deriv(self, y):
        return -2.0 * (np.asarray(y, dtype=float) if np.ndim(y) else y) \
            / (self.beta_plus * self.beta_minus)

    def image_tail(self, tail_exponent, decays_exponentially):
        raise PreconditionError("image of bilateral root map is bounded")

    def image_lo_order(self, base_kernel):
        a = base_kernel.order_at_hi
        symmetric = self.beta_plus == self.beta_minus
        m0 = 2.0 if (symmetric and base_kernel.support_hi == 1.0) else 1.0
        return _local_order(a, m0)
