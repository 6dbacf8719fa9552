import math

import numpy as np
import pytest

from lvcorridor import (
    InvalidStateError,
    NoInteriorEquilibriumError,
    Params,
    StabilityClass,
    boundary_spectra,
    classify_eigenvalues,
    equilibrium_report,
    interior_equilibrium,
    interior_spectrum,
    jacobian,
    near_critical_family,
    require_interior,
    vector_field,
)

from conftest import PANEL_A, PANEL_B, PANEL_C, random_params


class TestParams:
    def test_eta_is_derived(self):
        p = Params(0.48, 0.55, 1.0)
        assert p.eta == 1.0 - 0.48 * 0.55

    @pytest.mark.parametrize("kwargs", [
        dict(a12=-0.1, a21=0.5),
        dict(a12=0.5, a21=-0.1),
        dict(a12=0.5, a21=0.5, rho=0.0),
        dict(a12=0.5, a21=0.5, rho=-1.0),
        dict(a12=float("nan"), a21=0.5),
        dict(a12=0.5, a21=float("inf")),
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            Params(**kwargs)

    def test_zero_coupling_admissible(self):
        # the decoupled configuration is the standard validation case
        p = Params(0.0, 0.0, 2.0)
        assert p.eta == 1.0


class TestVectorField:
    def test_equilibrium_annihilates_field(self):
        eq = interior_equilibrium(PANEL_A)
        fL, fS = vector_field(PANEL_A, eq)
        assert abs(fL) <= 1e-15
        assert abs(fS) <= 1e-15

    def test_decoupled_logistic_values(self):
        # L(1-L) = 0.25 and rho S(1-S) = 0.5 exactly in floats
        assert vector_field(Params(0.0, 0.0, 2.0), (0.5, 0.5)) == (0.25, 0.5)

    def test_hand_substitution(self):
        fL, fS = vector_field(Params(0.5, 0.7, 1.0), (0.2, 0.3))
        # 0.2*(1 - 0.2 - 0.15) and 0.3*(1 - 0.3 - 0.14)
        assert fL == pytest.approx(0.2 * 0.65, rel=1e-15)
        assert fS == pytest.approx(0.3 * 0.56, rel=1e-15)

    def test_nonfinite_state_rejected(self):
        with pytest.raises(InvalidStateError):
            vector_field(PANEL_A, (float("nan"), 0.5))
        with pytest.raises(InvalidStateError):
            vector_field(PANEL_A, (0.5, float("inf")))


class TestJacobian:
    def test_structural_form_at_interior(self):
        for p in (PANEL_A, PANEL_B, PANEL_C):
            Ls, Ss = interior_equilibrium(p)
            expected = np.array([
                [-Ls, -p.a12 * Ls],
                [-p.rho * p.a21 * Ss, -p.rho * Ss],
            ])
            assert np.allclose(jacobian(p, (Ls, Ss)), expected, atol=1e-14)

    def test_origin_linearization_exact(self):
        p = Params(0.3, 0.8, 2.5)
        assert np.array_equal(jacobian(p, (0.0, 0.0)),
                              np.array([[1.0, 0.0], [0.0, 2.5]]))

    def test_determinant_identity_random(self, rng):
        for p in random_params(rng, 1000):
            Ls, Ss = interior_equilibrium(p)
            J = jacobian(p, (Ls, Ss))
            det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
            expected = p.rho * Ls * Ss * p.eta
            assert det == pytest.approx(expected, rel=1e-12)

    def test_trace_identity_random(self, rng):
        for p in random_params(rng, 1000):
            Ls, Ss = interior_equilibrium(p)
            J = jacobian(p, (Ls, Ss))
            assert J[0, 0] + J[1, 1] == pytest.approx(-(Ls + p.rho * Ss),
                                                      rel=1e-12)


class TestInteriorEquilibrium:
    @pytest.mark.parametrize("p,lstar,sstar", [
        (PANEL_A, 0.52 / 0.736, 0.45 / 0.736),
        (PANEL_B, 0.50 / 0.65, 0.30 / 0.65),
        (PANEL_C, 0.25 / 0.6625, 0.55 / 0.6625),
    ])
    def test_reference_values(self, p, lstar, sstar):
        eq = interior_equilibrium(p)
        assert eq[0] == pytest.approx(lstar, rel=1e-12)
        assert eq[1] == pytest.approx(sstar, rel=1e-12)

    def test_reference_decimals(self):
        assert np.allclose(interior_equilibrium(PANEL_A),
                           [0.7065217, 0.6114130], atol=1e-6)
        assert np.allclose(interior_equilibrium(PANEL_C),
                           [0.3773585, 0.8301887], atol=1e-6)

    def test_symmetric_collapses(self):
        eq = interior_equilibrium(Params(0.5, 0.5))
        assert eq[0] == pytest.approx(2.0 / 3.0, rel=1e-15)
        assert eq[0] == eq[1]

    @pytest.mark.parametrize("a12,a21", [(1.0, 0.5), (0.5, 1.0), (1.2, 1.4)])
    def test_absent_outside_open_square(self, a12, a21):
        assert interior_equilibrium(Params(a12, a21)) is None
        with pytest.raises(NoInteriorEquilibriumError):
            require_interior(Params(a12, a21))

    def test_rho_independent(self):
        eqs = [interior_equilibrium(Params(0.48, 0.55, r))
               for r in (0.1, 1.0, 10.0)]
        assert np.array_equal(eqs[0], eqs[1])
        assert np.array_equal(eqs[1], eqs[2])

    def test_fixed_point_equations_random(self, rng):
        for p in random_params(rng, 1000):
            Ls, Ss = interior_equilibrium(p)
            assert abs(1.0 - Ls - p.a12 * Ss) <= 1e-12
            assert abs(1.0 - Ss - p.a21 * Ls) <= 1e-12

    def test_sign_rule_random(self, rng):
        # L* - S* = (a21 - a12)/eta, so the orderings must agree exactly
        for p in random_params(rng, 1000):
            Ls, Ss = interior_equilibrium(p)
            assert (Ls > Ss) == (p.a21 > p.a12)


class TestBoundarySpectra:
    def test_closed_form_classes(self):
        origin, corner_l, corner_s = boundary_spectra(PANEL_A)
        assert np.array_equal(origin.point, [0.0, 0.0])
        assert origin.eigenvalues == (1.0, 1.0)
        assert origin.stability is StabilityClass.UNSTABLE_NODE
        assert corner_l.eigenvalues == (-1.0, pytest.approx(0.45, rel=1e-15))
        assert corner_l.stability is StabilityClass.SADDLE
        assert corner_s.eigenvalues == (pytest.approx(0.52, rel=1e-15), -1.0)
        assert corner_s.stability is StabilityClass.SADDLE

    def test_matches_generic_eigensolver(self, rng):
        # hard-coded closed forms against numpy's solver on the full Jacobian
        for p in random_params(rng, 50):
            for info in boundary_spectra(p):
                numeric = np.sort(np.linalg.eigvals(jacobian(p, info.point)).real)
                stated = np.sort(np.asarray(info.eigenvalues, dtype=float))
                assert np.allclose(numeric, stated, rtol=1e-12, atol=1e-14)
                assert classify_eigenvalues(*stated) is info.stability


class TestInteriorSpectrum:
    def test_reference_configuration(self):
        s = interior_spectrum(PANEL_A)
        Ls, Ss = interior_equilibrium(PANEL_A)
        tr = -(Ls + Ss)
        det = Ls * Ss * 0.736
        assert tr == pytest.approx(-1.3179348, abs=1e-6)
        assert det == pytest.approx(0.3179349, abs=1e-6)
        assert s.lambda_fast == pytest.approx(-0.9999997, abs=1e-6)
        assert s.lambda_slow == pytest.approx(-0.3179351, abs=1e-6)
        # identities at full precision
        assert s.lambda_fast + s.lambda_slow == pytest.approx(tr, rel=1e-12)
        assert s.lambda_fast * s.lambda_slow == pytest.approx(det, rel=1e-12)

    def test_against_generic_eigensolver(self):
        for p in (PANEL_A, PANEL_B, PANEL_C, near_critical_family(0.01)):
            s = interior_spectrum(p)
            J = jacobian(p, interior_equilibrium(p))
            numeric = np.linalg.eigvals(J).real
            numeric = numeric[np.argsort(-np.abs(numeric))]
            assert s.lambda_fast == pytest.approx(numeric[0], rel=1e-10)
            assert s.lambda_slow == pytest.approx(numeric[1], rel=1e-10)

    def test_ordering_by_magnitude(self, rng):
        for p in random_params(rng, 200):
            s = interior_spectrum(p)
            assert abs(s.lambda_fast) >= abs(s.lambda_slow)
            assert s.timescale_ratio >= 1.0

    def test_symmetric_near_critical_slow_eigenvalue(self):
        s = interior_spectrum(near_critical_family(0.01))
        assert s.lambda_slow == pytest.approx(-0.01 / 4.0, rel=0.1)

    def test_decoupled_spectrum(self):
        s = interior_spectrum(Params(0.0, 0.0, 2.0))
        assert {s.lambda_fast, s.lambda_slow} == {-1.0, -2.0}
        assert abs(s.lambda_fast) == 2.0
        s1 = interior_spectrum(Params(0.0, 0.0, 1.0))
        assert (s1.lambda_fast, s1.lambda_slow) == (-1.0, -1.0)

    def test_identity_relations_random(self, rng):
        for p in random_params(rng, 1000):
            Ls, Ss = interior_equilibrium(p)
            s = interior_spectrum(p)
            assert s.lambda_fast + s.lambda_slow == pytest.approx(
                -(Ls + p.rho * Ss), rel=1e-12)
            assert s.lambda_fast * s.lambda_slow == pytest.approx(
                p.rho * Ls * Ss * p.eta, rel=1e-12)
            # trace negative, determinant positive throughout
            assert Ls + p.rho * Ss > 0
            assert p.rho * Ls * Ss * p.eta > 0

    def test_slow_over_eta_converges_to_limit(self):
        # family a12 = 1 - eta/2: equilibrium tends to (1/2, 1/2), where
        # rho L S / (L + rho S) = 1/4
        for eta, bound in ((0.01, 0.10), (0.001, 0.03)):
            p = near_critical_family(eta, a12=1.0 - 0.5 * eta)
            s = interior_spectrum(p)
            assert abs(s.lambda_slow) / eta == pytest.approx(0.25, rel=bound)

    def test_slow_estimate_tracks_lambda_slow_near_threshold(self):
        s = interior_spectrum(near_critical_family(0.001))
        assert s.slow_estimate == pytest.approx(s.lambda_slow, rel=1e-3)


class TestClassifier:
    def test_complex_pairs(self):
        assert classify_eigenvalues(complex(-0.5, 1.0), complex(-0.5, -1.0)) \
            is StabilityClass.STABLE_FOCUS
        assert classify_eigenvalues(complex(0.5, 1.0), complex(0.5, -1.0)) \
            is StabilityClass.UNSTABLE_FOCUS
        assert classify_eigenvalues(complex(0.0, 1.0), complex(0.0, -1.0)) \
            is StabilityClass.NON_HYPERBOLIC

    def test_real_cases(self):
        assert classify_eigenvalues(-2.0, -0.5) is StabilityClass.STABLE_NODE
        assert classify_eigenvalues(2.0, 0.5) is StabilityClass.UNSTABLE_NODE
        assert classify_eigenvalues(2.0, -0.5) is StabilityClass.SADDLE
        assert classify_eigenvalues(0.0, -0.5) is StabilityClass.NON_HYPERBOLIC


class TestEquilibriumReport:
    def test_full_report_panel_a(self):
        rep = equilibrium_report(PANEL_A)
        assert rep.interior is not None
        assert rep.interior.stability is StabilityClass.STABLE_NODE
        assert len(rep.boundary) == 3

    def test_interior_absent(self):
        rep = equilibrium_report(Params(1.3, 0.5))
        assert rep.interior is None
        assert len(rep.boundary) == 3


class TestNearCriticalFamily:
    def test_symmetric_default(self):
        p = near_critical_family(0.01)
        assert p.a12 == p.a21 == pytest.approx(math.sqrt(0.99), rel=1e-15)
        assert p.eta == pytest.approx(0.01, rel=1e-10)

    def test_explicit_anchor(self):
        p = near_critical_family(0.01, a12=0.997)
        assert p.a21 == pytest.approx(0.99 / 0.997, rel=1e-15)
        assert 0.99 < p.a21 < 1.0
        assert abs(p.a12 * p.a21 - 0.99) <= 1e-15

    def test_anchor_below_admissible_interval(self):
        with pytest.raises(ValueError, match="1-eta"):
            near_critical_family(0.2, a12=0.75)

    def test_anchor_at_or_above_one(self):
        with pytest.raises(ValueError):
            near_critical_family(0.2, a12=1.0)

    def test_anchor_constraint_boundary(self):
        # at eta = 0.5 the admissible interval is (0.5, 1): 0.6 is inside,
        # 0.4 and the endpoint are not
        assert near_critical_family(0.5, a12=0.6).a21 == pytest.approx(
            0.5 / 0.6, rel=1e-15)
        with pytest.raises(ValueError):
            near_critical_family(0.5, a12=0.4)
        with pytest.raises(ValueError):
            near_critical_family(0.5, a12=0.5)

    @pytest.mark.parametrize("eta", [0.0, 1.0, -0.1, 1.5])
    def test_eta_domain(self, eta):
        with pytest.raises(ValueError):
            near_critical_family(eta)

    def test_interior_always_exists(self):
        for eta in (0.3, 0.05, 0.001):
            p = near_critical_family(eta, a12=1.0 - 0.25 * eta, rho=2.0)
            assert interior_equilibrium(p) is not None
