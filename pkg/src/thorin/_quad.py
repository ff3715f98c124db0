"""Adaptive quadrature helpers.

Thin wrappers around ``scipy.integrate.quad`` that

* split semi-infinite ranges at user breakpoints (scipy ignores ``points``
  on infinite intervals),
* integrate complex-valued integrands as two real quadratures,
* treat magnitudes below an absolute floor as zero so that underflow never
  masquerades as divergence.
"""

import warnings

import numpy as np
from scipy import integrate

# Below this magnitude a quadrature result is considered exactly zero;
# avoids spurious divergence flags from subnormal underflow.
ABS_FLOOR = 1e-300

_QUAD_LIMIT = 200


def integrate_adaptive(f, lo, hi, *, points=None, rel_tol=1e-11, limit=_QUAD_LIMIT):
    """Integrate ``f`` over ``(lo, hi)``, returning ``(value, abserr)``.

    ``points`` lists interior breakpoints (kinks, integrable singularities).
    Semi-infinite upper limits are handled by splitting at the largest
    breakpoint and letting QAGI transform the unbounded piece.
    """
    if hi <= lo:
        return 0.0, 0.0
    pts = sorted(p for p in (points or ()) if lo < p < hi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if np.isinf(hi):
            split = pts[-1] if pts else None
            if split is None:
                val, err = integrate.quad(f, lo, hi, epsrel=rel_tol, epsabs=ABS_FLOOR,
                                          limit=limit)
            else:
                v1, e1 = integrate.quad(f, lo, split, epsrel=rel_tol, epsabs=ABS_FLOOR,
                                        limit=limit, points=pts[:-1] or None)
                v2, e2 = integrate.quad(f, split, hi, epsrel=rel_tol, epsabs=ABS_FLOOR,
                                        limit=limit)
                val, err = v1 + v2, e1 + e2
        else:
            val, err = integrate.quad(f, lo, hi, epsrel=rel_tol, epsabs=ABS_FLOOR,
                                      limit=limit, points=pts or None)
    if abs(val) < ABS_FLOOR:
        val = 0.0
    return val, err


def integrate_complex(f, lo, hi, *, points=None, rel_tol=1e-11):
    """Complex-valued adaptive quadrature; returns ``(value, abserr)``."""
    re, err_re = integrate_adaptive(lambda s: f(s).real, lo, hi,
                                    points=points, rel_tol=rel_tol)
    im, err_im = integrate_adaptive(lambda s: f(s).imag, lo, hi,
                                    points=points, rel_tol=rel_tol)
    return complex(re, im), err_re + err_im


def gauss_panels(lo, hi, n_panels, nodes_per_panel=24, *, geometric=True,
                 must_edges=()):
    """Gauss-Legendre nodes/weights on panels covering ``[lo, hi]``.

    With ``geometric=True`` panel lengths grow geometrically away from
    ``lo``, which resolves integrands concentrated near the lower endpoint.
    ``must_edges`` forces panel boundaries (integrand kinks).
    Returns flat arrays ``(x, w)``.
    """
    if geometric and hi / max(lo, 1e-12) > 4.0:
        base = max(lo, 1e-12)
        edges = np.geomspace(base, hi, n_panels + 1)
        edges[0] = lo
    else:
        edges = np.linspace(lo, hi, n_panels + 1)
    forced = [e for e in must_edges if lo < e < hi]
    if forced:
        edges = np.unique(np.concatenate([edges, np.asarray(forced, dtype=float)]))
    xg, wg = np.polynomial.legendre.leggauss(nodes_per_panel)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        xs.append(0.5 * (a + b) + half * xg)
        ws.append(half * wg)
    return np.concatenate(xs), np.concatenate(ws)
