"""Characteristic/Laplace exponents from triplets, drift conversion, duals."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import loggamma
from scipy.special import psi as digamma_fn

from thorin.errors import DomainError, PreconditionError
from thorin.exponent import (ExponentGrid, PolarThorin, Ray, ThorinTriplet,
                             char_exponent, char_exponent_multi, drift_convert,
                             dual_char_exponent, dual_measure, laplace_exponent,
                             thorin_drift_from_levy)
from thorin.kernels import stable_kernel, tempered_stable_kernel
from thorin.measure import Atom, AtomTrain, RadialMeasure

INF = math.inf


def gamma_triplet(lam=1.0, theta=1.0):
    return ThorinTriplet.from_subordinator(
        RadialMeasure(atoms=(Atom(theta, lam),)))


def cts_subordinator(alpha=0.5, theta=1.0, lam=1.0):
    return ThorinTriplet.from_subordinator(
        RadialMeasure(pieces=(tempered_stable_kernel(alpha, theta, lam),)))


def cts_centered_psi(z, alpha, theta, lam):
    """Mean-zero tempered-stable exponent; the compensator carries
    +iz alpha theta^{alpha-1} (zero derivative at z = 0)."""
    return lam * math.gamma(-alpha) * ((theta - 1j * z) ** alpha
                                       + 1j * z * alpha * theta ** (alpha - 1.0)
                                       - theta ** alpha)


def gzd_triplet(lam=1.0, sigma=1.0, c_plus=0.7, c_minus=1.2):
    plus = RadialMeasure(trains=(AtomTrain((0 + c_plus) / sigma, 1.0 / sigma, lam),))
    minus = RadialMeasure(trains=(AtomTrain((0 + c_minus) / sigma, 1.0 / sigma, lam),))
    return ThorinTriplet(0.0, 0.0, plus, minus).recentered()


class TestCharExponent:
    def test_pure_gaussian(self):
        t = ThorinTriplet(0.4, 2.0)
        z = 1.3
        assert char_exponent(t, z) == pytest.approx(1j * z * 0.4 - z * z, rel=1e-14)

    def test_gamma_characteristic_function(self):
        t = gamma_triplet(1.0, 1.0)
        got = char_exponent(t, 1.0)
        assert got == pytest.approx(-cmath.log(1 - 1j), abs=1e-13)
        assert got.real == pytest.approx(-0.5 * math.log(2.0), abs=1e-14)
        assert got.imag == pytest.approx(math.pi / 4.0, abs=1e-14)

    def test_cts_quadrature_matches_closed_form(self):
        t = cts_subordinator(0.5, 1.0, 1.0).recentered()
        for z in (0.5, 1.0, 2.0, 5.0):
            want = cts_centered_psi(z, 0.5, 1.0, 1.0)
            assert abs(char_exponent(t, z) - want) < 1e-8

    def test_centered_and_truncated_paths_agree(self):
        t = cts_subordinator(0.7, 1.3, 0.8)
        for z in (-3.0, 0.4, 6.0):
            a = char_exponent(t, z, centered=False)
            b = char_exponent(t, z, centered=True)
            assert abs(a - b) < 1e-10 * max(1.0, abs(a))

    def test_gzd_train_acceleration_vs_beta_ratio(self):
        lam, sigma, cp, cm = 1.0, 1.0, 0.7, 1.2
        t = gzd_triplet(lam, sigma, cp, cm)

        def ref(z):
            lb = (loggamma(cm + 1j * z * sigma) + loggamma(cp - 1j * z * sigma)
                  - loggamma(cm) - loggamma(cp))
            return lam * lb - 1j * z * lam * sigma * (digamma_fn(cm) - digamma_fn(cp))

        for z in (-2.0, 0.5, 3.0, 10.0):
            assert abs(char_exponent(t, z) - ref(z)) < 1e-11

    def test_psi_at_zero_and_hermitian_symmetry(self):
        t = cts_subordinator(0.5, 1.0, 1.0)
        assert char_exponent(t, 0.0) == 0.0
        for z in (0.3, 1.7, 8.0):
            assert char_exponent(t, -z) == pytest.approx(
                char_exponent(t, z).conjugate(), rel=1e-12)

    @given(st.floats(min_value=0.2, max_value=5.0),
           st.floats(min_value=0.2, max_value=4.0),
           st.floats(min_value=-20.0, max_value=20.0))
    @settings(max_examples=30, deadline=None)
    def test_modulus_bound_atomic(self, lam, theta, z):
        # |exp psi| <= 1 for probability characteristic functions
        t = ThorinTriplet(0.0, 0.0,
                          RadialMeasure(atoms=(Atom(theta, lam),)),
                          RadialMeasure(atoms=(Atom(2.0 * theta, 0.5 * lam),)))
        assert abs(cmath.exp(char_exponent(t, z))) <= 1.0 + 1e-12

    def test_complex_strip_enforced(self):
        t = gamma_triplet(1.0, 1.0)  # strip Im z in (-1, inf)
        char_exponent(t, complex(0.5, -0.5))
        with pytest.raises(DomainError):
            char_exponent(t, complex(0.5, -1.5))


class TestLaplaceExponent:
    def test_gamma_closed_form(self):
        t = gamma_triplet(1.0, 1.0)
        assert laplace_exponent(t, 1.0) == pytest.approx(math.log(0.5), rel=1e-13)
        assert laplace_exponent(t, 0.0) == 0.0

    def test_matches_continued_char_exponent(self):
        for t in (gamma_triplet(2.0, 0.5), cts_subordinator(0.5, 1.0, 1.0)):
            for s in (0.1, 1.0, 5.0, 10.0):
                lhs = laplace_exponent(t, s)
                rhs = char_exponent(t, complex(0.0, s))
                assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))

    def test_decreasing_and_nonpositive(self):
        t = cts_subordinator(0.6, 0.8, 1.5)
        vals = [laplace_exponent(t, s) for s in np.linspace(0.0, 10.0, 15)]
        assert all(v <= 1e-12 for v in vals)
        assert all(b < a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_cts_alpha_one_closed_form(self):
        # alpha = 1: infinite variation (the harmonic tail diverges), so the
        # model only exists in centered form; log-series closed form
        lam, theta = 1.2, 1.7
        plus = RadialMeasure(pieces=(tempered_stable_kernel(1.0, theta, lam),))
        t = ThorinTriplet(0.0, 0.0, plus, RadialMeasure()).recentered()
        for z in (0.5, 2.0):
            want = lam * ((theta - 1j * z) * cmath.log(1 - 1j * z / theta) + 1j * z)
            assert abs(char_exponent(t, z) - want) < 1e-9
        with pytest.raises(PreconditionError):
            laplace_exponent(t, 1.0)

    def test_non_ggc_rejected(self):
        two_sided = ThorinTriplet(0.0, 0.0,
                                  RadialMeasure(atoms=(Atom(1.0, 1.0),)),
                                  RadialMeasure(atoms=(Atom(1.0, 1.0),)))
        with pytest.raises(PreconditionError):
            laplace_exponent(two_sided, 1.0)
        train = ThorinTriplet(0.0, 0.0,
                              RadialMeasure(trains=(AtomTrain(1.0, 1.0, 1.0),)),
                              RadialMeasure())
        with pytest.raises(PreconditionError):
            laplace_exponent(train, 1.0)


class TestDriftConvert:
    def test_zero_measure(self):
        t = ThorinTriplet(0.7, 1.0)
        assert drift_convert(t).a == 0.7

    def test_atom_beyond_one_closed_form(self):
        t = ThorinTriplet(0.0, 0.0, RadialMeasure(atoms=(Atom(2.0, 1.0),)),
                          RadialMeasure())
        assert drift_convert(t).a == pytest.approx(-math.exp(-2.0) / 2.0, rel=1e-12)

    def test_stable_against_independent_quadrature(self):
        alpha = 0.5
        t = ThorinTriplet(0.0, 0.0, RadialMeasure(pieces=(stable_kernel(alpha),)),
                          RadialMeasure())
        got = drift_convert(t).a
        f = lambda s: ((1 - math.exp(-s)) - (s >= 1.0)) \
            * s ** (alpha - 2.0) / math.gamma(alpha)
        w1, _ = quad(f, 0, 1)
        w2, _ = quad(f, 1, np.inf)
        assert got == pytest.approx(w1 + w2, abs=1e-9)

    @given(st.floats(min_value=0.1, max_value=4.0),
           st.floats(min_value=0.1, max_value=3.0))
    @settings(max_examples=25, deadline=None)
    def test_round_trip(self, lam, theta):
        t = ThorinTriplet(0.3, 0.2, RadialMeasure(atoms=(Atom(theta, lam),)),
                          RadialMeasure(pieces=(tempered_stable_kernel(0.5, theta),)))
        lt = drift_convert(t)
        assert thorin_drift_from_levy(lt.a, t) == pytest.approx(0.3, abs=1e-10)


class TestDualMeasure:
    def test_atom_reciprocal(self):
        t = ThorinTriplet(0.0, 0.0, RadialMeasure(atoms=(Atom(2.0, 1.0),)),
                          RadialMeasure())
        dp, _ = dual_measure(t)
        assert dp.atoms[0].location == pytest.approx(0.5)

    def test_involution(self):
        t = ThorinTriplet(0.0, 0.0,
                          RadialMeasure(atoms=(Atom(2.0, 1.0),),
                                        pieces=(stable_kernel(0.5),)),
                          RadialMeasure())
        dp, dm = dual_measure(t)
        t2 = ThorinTriplet(0.0, 0.0, dp, dm)
        ddp, _ = dual_measure(t2)
        assert ddp.atoms == t.tau_plus.atoms
        assert ddp.pieces == t.tau_plus.pieces

    def test_dual_representation_agreement(self):
        t = ThorinTriplet(0.3, 0.1,
                          RadialMeasure(atoms=(Atom(2.0, 1.0),),
                                        pieces=(stable_kernel(0.5),)),
                          RadialMeasure(atoms=(Atom(0.5, 0.4),)))
        for z in (-3.0, 0.7, 1.9, 6.0):
            assert abs(char_exponent(t, z) - dual_char_exponent(t, z)) < 1e-9

    def test_mass_at_zero_rejected(self):
        t = ThorinTriplet(0.0, 0.0, RadialMeasure(atoms=(Atom(0.0, 1.0),)),
                          RadialMeasure())
        with pytest.raises(PreconditionError):
            dual_measure(t)


class TestGridEvaluator:
    def test_matches_scalar_path(self):
        t = cts_subordinator(0.5, 1.0, 1.0).recentered()
        grid = ExponentGrid(t, 60.0)
        zs = np.linspace(-60.0, 60.0, 41)
        got = grid.psi(zs)
        want = np.array([char_exponent(t, float(z)) for z in zs])
        assert np.max(np.abs(got - want)) < 1e-9

    def test_trains_and_atoms(self):
        t = gzd_triplet()
        grid = ExponentGrid(t, 30.0)
        zs = np.array([-30.0, -4.2, 0.0, 1.1, 30.0])
        want = np.array([char_exponent(t, float(z)) for z in zs])
        assert np.max(np.abs(grid.psi(zs) - want)) < 1e-10

    def test_indicator_path_without_first_moment(self):
        # stable with alpha < 1 has no mean: grid falls back to the
        # truncation-indicator form with an exact panel split at s = 1
        t = ThorinTriplet(0.1, 0.0, RadialMeasure(pieces=(stable_kernel(0.6),)),
                          RadialMeasure())
        grid = ExponentGrid(t, 20.0)
        zs = np.array([-20.0, -1.0, 0.5, 7.0, 20.0])
        want = np.array([char_exponent(t, float(z)) for z in zs])
        assert np.max(np.abs(grid.psi(zs) - want)) < 1e-8


class TestPolar:
    def test_d1_reduction(self):
        plus = RadialMeasure(atoms=(Atom(1.0, 1.5),))
        minus = RadialMeasure(atoms=(Atom(2.0, 0.5),))
        t = ThorinTriplet(0.4, 0.3, plus, minus)
        p = PolarThorin((Ray((1.0,), 1.0, plus), Ray((-1.0,), 1.0, minus)),
                        (0.4,), ((0.3,),))
        for z in (-2.0, 0.7, 5.0):
            assert abs(char_exponent_multi(p, (z,)) - char_exponent(t, z)) < 1e-12

    def test_elementary_gamma_law(self):
        # single ray u with radial a delta_{b/|x|} reproduces the law of V x,
        # V ~ Gamma(a, b)
        x = np.array([0.6, 0.8])
        a_shape, b_rate = 1.3, 2.0
        u = tuple(x / np.linalg.norm(x))
        radial = RadialMeasure(atoms=(Atom(b_rate / np.linalg.norm(x), a_shape),))
        p = PolarThorin.from_uncompensated_rays([Ray(u, 1.0, radial)])
        for z in (np.array([0.3, -0.4]), np.array([1.0, 2.0])):
            got = cmath.exp(char_exponent_multi(p, z))
            want = (1 - 1j * float(np.dot(z, x)) / b_rate) ** (-a_shape)
            assert abs(got - want) < 1e-12

    def test_orthogonal_rays_factorize(self):
        r1 = RadialMeasure(atoms=(Atom(1.0, 2.0),))
        r2 = RadialMeasure(atoms=(Atom(3.0, 0.7),))
        p = PolarThorin.from_uncompensated_rays(
            [Ray((1.0, 0.0), 1.0, r1), Ray((0.0, 1.0), 1.0, r2)])
        t1 = ThorinTriplet.from_subordinator(r1)
        t2 = ThorinTriplet.from_subordinator(r2)
        for z in (np.array([0.5, 1.5]), np.array([-2.0, 0.3])):
            got = char_exponent_multi(p, z)
            want = char_exponent(t1, float(z[0])) + char_exponent(t2, float(z[1]))
            assert abs(got - want) < 1e-12

    def test_hermitian_multidim(self):
        rng = np.random.default_rng(7)
        r1 = RadialMeasure(atoms=(Atom(1.5, 1.0),))
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        p = PolarThorin.from_uncompensated_rays([Ray(tuple(u), 0.8, r1)])
        for _ in range(5):
            z = rng.normal(size=3)
            assert abs(char_exponent_multi(p, -z)
                       - char_exponent_multi(p, z).conjugate()) < 1e-12

    def test_unit_norm_enforced(self):
        with pytest.raises(PreconditionError):
            Ray((1.0, 1.0), 1.0, RadialMeasure(atoms=(Atom(1.0, 1.0),)))
