"""Characteristic and Laplace exponents of Thorin triplets.

A model is a triplet ``(b, gaussian_var, tau_plus/tau_minus)``; the
characteristic exponent is

    psi(z) = i z b - z^2 gaussian_var / 2
             - int_0^inf [ log(1 - iz/s) + (iz/s) 1_{s>=1} ] tau_plus(ds)
             - int_0^inf [ log(1 + iz/s) - (iz/s) 1_{s>=1} ] tau_minus(ds)

with the drift ``b`` always stored in the ``1_{|x|>=1}`` truncation
convention.  Atom trains are summed with Hurwitz-zeta tail acceleration;
density pieces by adaptive quadrature (scalar path) or Gauss panels with an
analytic tail series (vectorized grid path used by Fourier inversion).
"""

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy import special as sp

from .errors import DomainError, NumericalError, PreconditionError
from .maps import ReciprocalMap
from .measure import RadialMeasure, validate_thorin

_INF = math.inf


@dataclass(frozen=True)
class ThorinTriplet:
    """(drift, Gaussian variance, +/- Thorin measures) defining the model.

    ``b`` uses the modern truncation function 1_{|x|>=1}; the zero-drift
    subordinator and mean-centered conventions are derived views
    (:meth:`laplace_drift`, :meth:`mean`).
    """

    b: float
    gaussian_var: float
    tau_plus: RadialMeasure = RadialMeasure()
    tau_minus: RadialMeasure = RadialMeasure()

    def __post_init__(self):
        if self.gaussian_var < 0:
            raise PreconditionError("Gaussian variance must be nonnegative")

    def validate(self):
        return validate_thorin(self.tau_plus, self.tau_minus)

    @property
    def is_one_sided(self):
        return self.tau_minus.is_zero

    # --- drift conventions --------------------------------------------------

    def outer_harmonic(self):
        """Signed  int_{|x|>=1} x^{-1} tau(dx); needed to move between drift
        conventions.  Second element reports finiteness."""
        rp = self.tau_plus.moment_integral(1.0, "outer")
        rm = self.tau_minus.moment_integral(1.0, "outer")
        return rp.value - rm.value, rp.finite and rm.finite

    def laplace_drift(self):
        """True subordinator drift: b - int_{x>=1} tau_plus(dx)/x."""
        if not self.is_one_sided or self.gaussian_var != 0:
            raise PreconditionError("subordinator drift requires a positive triplet")
        res = self.tau_plus.moment_integral(1.0, "outer")
        if not res.finite:
            raise PreconditionError(
                "not a subordinator: int_{x>=1} tau(dx)/x diverges")
        return self.b - res.value

    def mean(self):
        """First cumulant  b + int_(0,1) tau_plus(dx)/x - int_(0,1) tau_minus(dx)/x."""
        rp = self.tau_plus.moment_integral(1.0, "inner")
        rm = self.tau_minus.moment_integral(1.0, "inner")
        if not (rp.finite and rm.finite):
            raise PreconditionError("first moment does not exist")
        return self.b + rp.value - rm.value

    def recentered(self, mean=0.0):
        """Same measures with drift adjusted to the prescribed mean."""
        return replace(self, b=self.b + (mean - self.mean()))

    @staticmethod
    def from_subordinator(rho: RadialMeasure, drift=0.0):
        """Triplet of the subordinator with Laplace-convention drift >= 0."""
        if drift < 0:
            raise PreconditionError("subordinator drift must be nonnegative")
        res = rho.moment_integral(1.0, "outer")
        if not res.finite:
            raise PreconditionError("measure fails the subordinator condition")
        return ThorinTriplet(drift + res.value, 0.0, rho, RadialMeasure())


@dataclass(frozen=True)
class LevyTriplet:
    """Levy-Khintchine triplet view (truncation x 1_{|x|<=1} convention)."""

    a: float
    gaussian_var: float
    source: ThorinTriplet

    def view(self):
        from .levy import LevyView
        return LevyView(self.source)

    def levy_density(self, x):
        return self.view().levy_density(x)


# ---------------------------------------------------------------------------
# side integrals
# ---------------------------------------------------------------------------

def _side_integrand(w, sign, centered):
    """Integrand of one radial direction at scalar frequency ``w``.

    sign=+1 contributes -log(1 - iw/s) - (iw/s) c(s); sign=-1 the conjugate
    direction -log(1 + iw/s) + (iw/s) c(s), with c the truncation function.
    """
    def f(s):
        ws = w / s
        if sign > 0:
            val = -np.log1p(-1j * ws)
            trunc = -1j * ws
        else:
            val = -np.log1p(1j * ws)
            trunc = 1j * ws
        if centered or s >= 1.0:
            val += trunc
        return val
    return f


def _train_side_sum(train, w, sign, centered, tol=1e-15):
    """Hurwitz-zeta accelerated sum of the side integrand over an atom train."""
    aw = abs(w)
    # explicit terms until x_k >= max(1, 2|w|); series tail beyond
    x_needed = max(1.0, 2.0 * aw, train.base)
    k_cap = max(32, int(math.ceil((x_needed - train.base) / train.step)) + 1)
    f = _side_integrand(w, sign, centered)
    explicit = sum(f(train.location(k)) for k in range(k_cap))
    q = k_cap + train.base / train.step
    iw = 1j * w if sign > 0 else -1j * w
    tail = 0.0 + 0.0j
    term_pow = iw / train.step
    power = term_pow
    for j in range(2, 200):
        power = power * term_pow
        term = power / j * float(sp.zeta(j, q))
        tail += term
        if abs(term) < tol * max(abs(tail), 1e-30):
            break
    else:
        raise NumericalError("train tail series failed to converge")
    return train.weight * (explicit + tail)


def _side_integral(m: RadialMeasure, w, sign, centered, rel_tol=1e-11):
    """int of the side integrand against a radial measure (scalar path)."""
    if m.is_zero:
        return 0.0 + 0.0j
    if centered:
        inner = m.moment_integral(1.0, "inner")
        if not inner.finite:
            raise PreconditionError(
                "centered representation requires the first-moment condition")
    total = 0.0 + 0.0j
    f = _side_integrand(w, sign, centered)
    for a in m.atoms:
        total += a.weight * f(a.location)
    aw = abs(w)
    for p in m.pieces:
        pts = [1.0] if not centered else []
        if aw > 0:
            pts.append(aw)
        total += p.integrate(f, points=pts, rel_tol=rel_tol, complex_valued=True)
    for t in m.trains:
        total += _train_side_sum(t, w, sign, centered)
    return total


def _require_strip(t: ThorinTriplet, z):
    im = z.imag if isinstance(z, complex) else 0.0
    if im == 0.0:
        return
    if not t.tau_plus.is_zero and t.tau_plus.support_inf() + im <= 0:
        raise DomainError("frequency outside the analyticity strip (positive side)")
    if not t.tau_minus.is_zero and t.tau_minus.support_inf() - im <= 0:
        raise DomainError("frequency outside the analyticity strip (negative side)")


def char_exponent(t: ThorinTriplet, z, *, centered=False) -> complex:
    """Characteristic exponent psi(z) of the triplet.

    ``centered=True`` evaluates the identical function through the
    truncation-function-1 form (drift = mean), which avoids the integrand
    kink at s = 1; it requires the first-moment condition.
    """
    if isinstance(z, np.ndarray):
        return np.array([char_exponent(t, complex(zz), centered=centered) for zz in z])
    z = complex(z)
    _require_strip(t, z)
    if centered:
        drift = t.mean()
    else:
        drift = t.b
    psi = 1j * z * drift - 0.5 * t.gaussian_var * z * z
    psi += _side_integral(t.tau_plus, z, +1, centered)
    psi += _side_integral(t.tau_minus, z, -1, centered)
    return complex(psi)


def laplace_exponent(t: ThorinTriplet, s) -> complex:
    """log Laplace transform of a positively supported (GGC) triplet,

        phi(s) = -s b_lap + int_0^inf log(x / (x + s)) tau_plus(dx),

    equal to the analytic continuation char_exponent(t, i s).  Complex ``s``
    with Re s >= 0 is accepted (subordination compositions).
    """
    if not t.is_one_sided or t.gaussian_var != 0.0:
        raise PreconditionError("Laplace exponent requires a GGC (positive) triplet")
    if t.tau_plus.trains:
        raise PreconditionError(
            "not a subordinator: harmonic tail of the atom train diverges")
    b_lap = t.laplace_drift()
    if b_lap < -1e-12:
        raise PreconditionError("negative subordinator drift")
    is_cplx = isinstance(s, complex)
    sr = s.real if is_cplx else s
    if sr < 0:
        raise DomainError("Laplace exponent needs Re s >= 0")
    if s == 0:
        return 0.0
    total = -s * b_lap
    f = (lambda x: -np.log1p(s / x))
    for a in t.tau_plus.atoms:
        total += a.weight * f(a.location)
    for p in t.tau_plus.pieces:
        total += p.integrate(f, points=[abs(s)], rel_tol=1e-11,
                             complex_valued=True)
    if not is_cplx:
        total = total.real if isinstance(total, complex) else total
        return float(total)
    return complex(total)


def drift_convert(t: ThorinTriplet) -> LevyTriplet:
    """Levy linear characteristic  a = b + int c(x) tau(dx) with
    c(x) = ((1 - e^{-x}) - 1_{x>=1}) / x, signed across the two sides."""
    corr = _drift_correction(t.tau_plus) - _drift_correction(t.tau_minus)
    return LevyTriplet(t.b + corr, t.gaussian_var, t)


def thorin_drift_from_levy(a: float, t: ThorinTriplet) -> float:
    """Inverse conversion: recover the Thorin drift from the Levy one."""
    corr = _drift_correction(t.tau_plus) - _drift_correction(t.tau_minus)
    return a - corr


def _drift_correction(m: RadialMeasure):
    if m.is_zero:
        return 0.0

    def c(x):
        v = -math.expm1(-x)  # 1 - e^{-x}
        if x >= 1.0:
            v -= 1.0
        return v / x

    val = m.integrate(c, points=[1.0], rel_tol=1e-11)
    return float(np.real(val))


# ---------------------------------------------------------------------------
# vectorized grid evaluation (Fourier-inversion path)
# ---------------------------------------------------------------------------

class ExponentGrid:
    """Vectorized psi(z) evaluation on large real grids.

    Pieces are reduced to fixed Gauss panel nodes once (with an analytic
    power-series tail beyond ``s_cap``); trains use explicit terms plus
    Hurwitz-zeta tails.  Used by the density pipeline where the scalar
    adaptive path would be too slow.
    """

    N_TAIL_TERMS = 40

    def __init__(self, t: ThorinTriplet, z_max: float, *, centered=None):
        self.t = t
        self.z_max = float(z_max)
        if centered is None:
            rp = t.tau_plus.moment_integral(1.0, "inner")
            rm = t.tau_minus.moment_integral(1.0, "inner")
            centered = rp.finite and rm.finite
        self.centered = centered
        self.drift = t.mean() if centered else t.b
        self.s_cap = 4.0 * max(self.z_max, 1.0)
        self.plans = [self._plan_side(t.tau_plus, +1), self._plan_side(t.tau_minus, -1)]

    def _plan_side(self, m, sign):
        plan = {"sign": sign, "atoms": None, "trains": list(m.trains),
                "nodes": None, "tail_moments": None}
        if m.atoms:
            plan["atoms"] = (np.array([a.location for a in m.atoms]),
                             np.array([a.weight for a in m.atoms]))
        if m.pieces:
            xs, ws, tails = [], [], np.zeros(self.N_TAIL_TERMS)
            for p in m.pieces:
                edges = () if self.centered else (1.0,)  # truncation kink
                x, w = p.panel_nodes(self.s_cap, n_panels=48, nodes_per_panel=24,
                                     edges=edges)
                xs.append(x)
                ws.append(w)
                if math.isinf(p.support_hi):
                    for j in range(2, 2 + self.N_TAIL_TERMS):
                        tails[j - 2] += p.integrate(lambda s: s ** (-j),
                                                    self.s_cap, _INF, rel_tol=1e-10)
            plan["nodes"] = (np.concatenate(xs), np.concatenate(ws))
            plan["tail_moments"] = tails
        return plan

    def psi(self, z):
        """psi on a real z array with |z| <= z_max."""
        z = np.asarray(z, dtype=float)
        if np.max(np.abs(z), initial=0.0) > self.z_max * (1 + 1e-12):
            raise DomainError("grid exceeds the configured frequency range")
        out = 1j * z * self.drift - 0.5 * self.t.gaussian_var * z * z
        out = out.astype(complex)
        for plan in self.plans:
            out += self._side(plan, z)
        return out

    def _side(self, plan, z):
        sign = plan["sign"]
        total = np.zeros(z.shape, dtype=complex)
        iz = 1j * z if sign > 0 else -1j * z
        if plan["atoms"] is not None:
            locs, wts = plan["atoms"]
            total += _vector_integrand(iz, locs, wts, self.centered)
        if plan["nodes"] is not None:
            x, w = plan["nodes"]
            flat = total.reshape(-1)
            iz_flat = iz.reshape(-1)
            chunk = max(1, int(4e6 // max(x.size, 1)))
            for i in range(0, z.size, chunk):
                flat[i:i + chunk] += _vector_integrand(iz_flat[i:i + chunk], x, w,
                                                       self.centered)
            tails = plan["tail_moments"]
            if tails is not None and tails.any():
                # analytic tail beyond s_cap:  sum_{j>=2} (iz)^j M_j / j
                power = iz.copy()
                acc = np.zeros_like(total)
                for j in range(2, 2 + self.N_TAIL_TERMS):
                    power = power * iz
                    acc += power / j * tails[j - 2]
                total += acc
        for t in plan["trains"]:
            vals = np.empty(z.size, dtype=complex)
            for i, zz in enumerate(z.reshape(-1)):
                vals[i] = _train_side_sum(t, float(zz), sign, self.centered)
            total += vals.reshape(z.shape)
        return total


def _vector_integrand(iz, locs, wts, centered):
    """sum_k w_k [ -log(1 - iz/x_k) - (iz/x_k) c(x_k) ] vectorized over z."""
    zz = np.atleast_1d(iz)
    ratio = zz[:, None] / locs[None, :]
    vals = -np.log1p(-ratio)
    if centered:
        vals -= ratio
    else:
        vals -= ratio * (locs[None, :] >= 1.0)
    out = vals @ wts
    return out if np.ndim(iz) else out[0]


# ---------------------------------------------------------------------------
# dual representation
# ---------------------------------------------------------------------------

def dual_measure(t: ThorinTriplet):
    """Dual pair tau^* = p_# tau with p(x) = x / |x|^2 (per-side reciprocal)."""
    for m in (t.tau_plus, t.tau_minus):
        if m.has_atom_at(0.0, tol=0.0) or any(tr.base == 0.0 for tr in m.trains):
            raise PreconditionError("dual measure undefined: mass at zero")
        if m.trains:
            raise PreconditionError("dual of an infinite atom train is not representable")
    rec = ReciprocalMap()
    dp = t.tau_plus.pushforward(rec) if not t.tau_plus.is_zero else RadialMeasure()
    dm = t.tau_minus.pushforward(rec) if not t.tau_minus.is_zero else RadialMeasure()
    return dp, dm


def dual_char_exponent(t: ThorinTriplet, z) -> complex:
    """psi evaluated through the dual representation

        psi(z) = izb - z^2 var/2 - int [ log(1 - izy) + izy 1_{y<=1} ] tau*(dy),

    used as a consistency oracle against :func:`char_exponent`.
    """
    dp, dm = dual_measure(t)
    z = complex(z)

    def f_plus(y):
        val = -np.log1p(-1j * z * y)
        if y <= 1.0:
            val -= 1j * z * y
        return val

    def f_minus(y):
        val = -np.log1p(1j * z * y)
        if y <= 1.0:
            val += 1j * z * y
        return val

    psi = 1j * z * t.b - 0.5 * t.gaussian_var * z * z
    for m, f in ((dp, f_plus), (dm, f_minus)):
        for a in m.atoms:
            psi += a.weight * f(a.location)
        for p in m.pieces:
            psi += p.integrate(f, points=[1.0, 1.0 / max(abs(z), 1e-12)],
                               rel_tol=1e-11, complex_valued=True)
    return complex(psi)


# ---------------------------------------------------------------------------
# finitely atomic spherical measures in d dimensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ray:
    """One spherical atom: unit direction, weight, radial Thorin component."""

    direction: tuple
    weight: float
    radial: RadialMeasure

    def __post_init__(self):
        u = np.asarray(self.direction, dtype=float)
        if abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise PreconditionError("ray direction must be a unit vector")
        if self.weight <= 0:
            raise PreconditionError("ray weight must be positive")


@dataclass(frozen=True)
class PolarThorin:
    """Thorin measure with finitely atomic spherical part, plus drift and
    Gaussian matrix."""

    rays: tuple
    b: tuple
    sigma: tuple  # symmetric nonnegative-definite matrix, row tuples

    def __post_init__(self):
        d = len(self.b)
        S = np.asarray(self.sigma, dtype=float)
        if S.shape != (d, d) or not np.allclose(S, S.T, atol=1e-12):
            raise PreconditionError("sigma must be a symmetric d x d matrix")
        if np.any(np.linalg.eigvalsh(S) < -1e-10):
            raise PreconditionError("sigma must be nonnegative definite")
        for ray in self.rays:
            if len(ray.direction) != d:
                raise PreconditionError("ray dimension mismatch")
            if not validate_thorin(ray.radial, RadialMeasure()).ok:
                raise PreconditionError("ray radial measure fails Thorin integrability")

    @staticmethod
    def from_uncompensated_rays(rays, sigma=None):
        """Drift chosen so each ray contributes an uncompensated log integral
        (the natural convention for products of elementary gamma factors)."""
        d = len(rays[0].direction)
        if sigma is None:
            sigma = tuple(tuple(0.0 for _ in range(d)) for _ in range(d))
        b = np.zeros(d)
        for ray in rays:
            res = ray.radial.moment_integral(1.0, "outer")
            if not res.finite:
                raise PreconditionError("uncompensated ray needs a finite harmonic tail")
            b += ray.weight * res.value * np.asarray(ray.direction)
        return PolarThorin(tuple(rays), tuple(b), tuple(map(tuple, sigma)))


def char_exponent_multi(p: PolarThorin, z) -> complex:
    """Multivariate exponent reduced along atomic rays:

        psi(z) = i<z,b> - <Sigma z, z>/2
                 - sum_i w_i int [ log(1 - i<z,u_i>/s) + (i<z,u_i>/s) 1_{s>=1} ] tau_i(ds).
    """
    z = np.asarray(z, dtype=float)
    b = np.asarray(p.b)
    S = np.asarray(p.sigma)
    psi = 1j * np.dot(z, b) - 0.5 * np.dot(z, S @ z)
    for ray in p.rays:
        w = float(np.dot(z, np.asarray(ray.direction)))
        psi += ray.weight * _side_integral(ray.radial, w, +1, centered=False)
    return complex(psi)
