import logging

import numpy as np
import pytest
from scipy.integrate import quad

from core.config import BudykoParams
from core.errors import NoFoldError
from core.filippov import PlanarState, extended_field
from services.budyko import (
    BudykoModel,
    albedo,
    alpha_bar,
    as_ice_line_model,
    dh_deta,
    equilibrium,
    fold,
    g,
    h_constructed_fit,
    h_poly,
    insolation,
    insolation_integral,
    nullcline_A,
)
from services.model import IceLineModel, Stability

ETA_F = 0.7682


class TestInsolation:
    def test_values(self):
        assert insolation(0.0) == pytest.approx(1.241)
        assert insolation(1.0) == pytest.approx(0.518)

    def test_normalised(self):
        assert insolation_integral(1.0) == pytest.approx(1.0)
        assert quad(insolation, 0, 1)[0] == pytest.approx(1.0)


class TestAlbedo:
    def test_step_profile(self):
        p = BudykoParams()
        assert albedo(0.5, 0.2, p) == 0.32
        assert albedo(0.5, 0.8, p) == 0.62
        assert albedo(0.5, 0.5, p) == pytest.approx(0.47)

    def test_mean_albedo_endpoints(self):
        assert alpha_bar(0.0) == pytest.approx(0.62)
        assert alpha_bar(1.0) == pytest.approx(0.32)
        assert alpha_bar(0.5) == pytest.approx(0.4428875)

    def test_mean_albedo_matches_quadrature(self):
        p = BudykoParams()
        rng = np.random.default_rng(0)
        for eta in rng.uniform(0.0, 1.0, 50):
            weighted = lambda y: insolation(y) * albedo(eta, y, p)
            reference = quad(weighted, 0, eta)[0] + quad(weighted, eta, 1)[0]
            assert alpha_bar(eta, p) == pytest.approx(reference, abs=1e-10)

    def test_out_of_range_is_clamped_with_warning(self, caplog):
        with caplog.at_level(logging.WARNING, logger="services.budyko"):
            assert alpha_bar(1.5) == alpha_bar(1.0)
        assert "clamping" in caplog.text


class TestH:
    def test_tangency_anchors(self):
        assert abs(h_poly(169.32, 0.0)) < 1e-9
        assert abs(h_poly(201.645, 1.0)) < 1e-9

    def test_rho_scales_the_rate(self):
        assert h_poly(180.0, 0.4, rho=2.5) == pytest.approx(2.5 * h_poly(180.0, 0.4))

    def test_decreasing_in_A(self):
        for eta in np.linspace(0.0, 1.0, 11):
            assert h_poly(170.0, eta) > h_poly(171.0, eta)

    def test_constructed_fit_matches_table_except_constant(self):
        fit = h_constructed_fit()
        for power in (1, 2, 3):
            assert fit.relative_error(power) < 1e-3
        assert fit.constant_residual == pytest.approx(4.58, abs=0.01)
        assert fit.coefficients[1] == pytest.approx(56.909, abs=1e-3)
        assert fit.coefficients[2] == pytest.approx(-23.429, abs=1e-3)
        assert fit.coefficients[3] == pytest.approx(-11.0516, abs=1e-3)


class TestGreenhouse:
    def test_g_independent_of_A(self):
        p = BudykoParams(eta_c=0.6)
        assert g(150.0, 0.2, p) == g(250.0, 0.2, p) == pytest.approx(-0.004)
        assert g(150.0, 1.0, p) == pytest.approx(0.004)


class TestNullcline:
    def test_endpoints(self):
        assert nullcline_A(0.0) == pytest.approx(169.32)
        assert nullcline_A(1.0) == pytest.approx(201.645)

    def test_lies_on_the_zero_set(self):
        for eta in np.linspace(0.0, 1.0, 21):
            assert abs(h_poly(nullcline_A(eta), eta)) < 1e-9

    def test_single_fold(self):
        eta_f = fold()
        assert eta_f == pytest.approx(ETA_F, abs=5e-4)
        assert abs(eta_f - 0.77) < 0.005
        assert nullcline_A(eta_f) >= nullcline_A(eta_f - 0.01)
        assert nullcline_A(eta_f) >= nullcline_A(eta_f + 0.01)
        slopes = np.array([dh_deta(e) for e in np.linspace(0.0, 1.0, 1001)])
        assert np.count_nonzero(np.diff(np.sign(slopes))) == 1

    def test_no_fold_for_monotone_cubic(self):
        with pytest.raises(NoFoldError):
            fold((0.0, 1.0, 0.0, 0.0))


class TestEquilibrium:
    def test_small_ice_cap_is_stable(self):
        report = equilibrium(BudykoParams(eta_c=0.85))
        assert report.stability is Stability.STABLE
        assert report.A_c == pytest.approx(205.355, abs=2e-3)
        assert report.A_c == nullcline_A(0.85)
        assert report.jacobian[1, 1] == pytest.approx(-8.368, abs=1e-3)
        assert report.lambda_re_max < 0

    def test_large_ice_cap_is_unstable(self):
        report = equilibrium(BudykoParams(eta_c=0.6))
        assert report.stability is Stability.UNSTABLE
        assert report.lambda_re_max > 0

    def test_fold_is_degenerate(self):
        report = equilibrium(BudykoParams(eta_c=fold()))
        assert abs(report.lambda_re_max) < 1e-6
        assert report.stability is Stability.DEGENERATE

    @pytest.mark.parametrize("eta_c", [0.0, 1.0])
    def test_boundary_eta_c_is_degenerate(self, eta_c):
        assert equilibrium(BudykoParams(eta_c=eta_c)).stability is Stability.DEGENERATE

    @pytest.mark.parametrize("eta_c", [0.80, 0.85, 0.95])
    def test_stable_values(self, eta_c):
        assert equilibrium(BudykoParams(eta_c=eta_c)).stability is Stability.STABLE

    @pytest.mark.parametrize("eta_c", [0.2, 0.4, 0.6, 0.75])
    def test_unstable_values(self, eta_c):
        assert equilibrium(BudykoParams(eta_c=eta_c)).stability is Stability.UNSTABLE

    def test_stability_flips_at_the_fold(self):
        eta_f = fold()
        rng = np.random.default_rng(42)
        for eta_c in rng.uniform(0.01, 0.99, 100):
            if abs(eta_c - eta_f) < 1e-6:
                continue
            report = equilibrium(BudykoParams(eta_c=float(eta_c)))
            assert (report.stability is Stability.STABLE) == (eta_c > eta_f)

    def test_trace_and_determinant(self):
        p = BudykoParams(eta_c=0.7, delta=0.02, rho=1.3)
        report = equilibrium(p)
        l1, l2 = report.eigenvalues
        assert (l1 + l2).real == pytest.approx(dh_deta(0.7, 1.3))
        assert (l1 * l2).real == pytest.approx(0.02 * 1.3 / 1.5)
        assert abs((l1 * l2).imag) < 1e-12

    def test_report_serialises(self):
        payload = equilibrium(BudykoParams(eta_c=0.6)).to_dict()
        assert payload["stability"] == "unstable"
        assert len(payload["eigenvalues"]) == 2
        assert payload["jacobian"][0] == [0.0, 0.01]


class TestField:
    def test_interior_is_g_and_h(self, cfg):
        p = BudykoParams(eta_c=0.6)
        field = as_ice_line_model(p)
        assert extended_field(field, PlanarState(190.0, 0.4), cfg) == (g(190.0, 0.4, p), h_poly(190.0, 0.4))

    def test_boundary_and_outside(self, cfg):
        field = as_ice_line_model(BudykoParams(eta_c=0.6))
        assert extended_field(field, PlanarState(180.0, 0.0), cfg)[1] == 0.0
        below = extended_field(field, PlanarState(180.0, -0.2), cfg)[1]
        assert below == pytest.approx(abs(h_poly(180.0, -0.2)))

    def test_model_satisfies_protocol(self, budyko):
        assert isinstance(budyko, IceLineModel)
        assert budyko.with_eta_c(0.3).params.eta_c == 0.3
        assert budyko.params.eta_c == 0.85
        assert budyko.lower_tangency() == pytest.approx(169.32)
        assert budyko.upper_tangency() == pytest.approx(201.645)
