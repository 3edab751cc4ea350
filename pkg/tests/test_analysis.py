import numpy as np
import pytest

from core.config import BudykoParams, IntegratorConfig, JormungandParams
from core.errors import InvalidDomainError, NoEntryError, NonRecurrentError, PreconditionError
from core.events import EventKind
from core.filippov import Boundary, Mode, PlanarState, integrate
from services.analysis import (
    detect_periodic_orbit,
    nullcline_curve,
    nullcline_span,
    sliding_segments,
    snowball_exit_experiment,
    standard_ic,
)
from services.budyko import BudykoModel
from services.jormungand import JormungandModel


class TestSnowballExit:
    def test_closed_form_exit_time(self, budyko_osc, cfg, a_star):
        report = snowball_exit_experiment(budyko_osc, PlanarState(180.0, 0.0), cfg)
        assert report.boundary is Boundary.LOWER
        assert report.entry_A == 180.0
        assert report.analytic_exit_time == pytest.approx(1780.0, rel=1e-9)
        assert report.slide_time == pytest.approx(1780.0, rel=0.01)
        assert abs(report.exit_A - a_star) < 10 * cfg.abs_tol

    def test_random_entries_then_lift_off(self, budyko_osc, cfg, a_star):
        rng = np.random.default_rng(17)
        for entry in a_star + rng.uniform(0.5, 50.0, 20):
            report = snowball_exit_experiment(budyko_osc, PlanarState(float(entry), 0.0), cfg)
            assert report.slide_time == pytest.approx((entry - a_star) / 0.006, rel=0.01)
            after = integrate(budyko_osc.field(), report.trajectory.final, report.exit_t + 50.0, cfg)
            assert after.y.max() > 0.01

    def test_entry_at_tangency_is_zero_length(self, budyko_osc, cfg, a_star):
        report = snowball_exit_experiment(budyko_osc, PlanarState(a_star, 0.0), cfg)
        assert report.slide_time == 0.0
        assert report.analytic_exit_time == pytest.approx(0.0, abs=1e-9)

    def test_upper_boundary(self, budyko_osc, cfg):
        report = snowball_exit_experiment(budyko_osc, PlanarState(190.0, 1.0), cfg, boundary=Boundary.UPPER)
        assert report.analytic_exit_time == pytest.approx((201.645 - 190.0) / 0.004, rel=1e-6)
        assert report.slide_time == pytest.approx(report.analytic_exit_time, rel=0.01)
        assert report.exit_A == pytest.approx(201.645, abs=1e-6)

    def test_jormungand_lower_boundary(self, jormungand, cfg):
        tangency = jormungand.lower_tangency()
        report = snowball_exit_experiment(jormungand, PlanarState(tangency + 10.0, 0.0), cfg)
        assert report.slide_time == pytest.approx(10.0 / 0.008, rel=0.01)
        assert report.exit_A == pytest.approx(tangency, abs=1e-8)

    def test_interior_start_reaches_the_boundary_first(self, budyko_osc, cfg, a_star):
        report = snowball_exit_experiment(budyko_osc, PlanarState(210.0, 0.5), cfg)
        assert report.entry_t > 0
        assert report.exit_A == pytest.approx(a_star, abs=1e-9)

    def test_lower_exit_needs_positive_eta_c(self, budyko, cfg):
        with pytest.raises(PreconditionError):
            snowball_exit_experiment(budyko.with_eta_c(0.0), PlanarState(180.0, 0.0), cfg)

    def test_upper_exit_needs_eta_c_below_one(self, budyko, cfg):
        with pytest.raises(PreconditionError):
            snowball_exit_experiment(budyko.with_eta_c(1.0), PlanarState(190.0, 1.0), cfg, boundary=Boundary.UPPER)

    def test_no_entry(self, budyko, cfg):
        at_rest = PlanarState(budyko.nullcline_A(0.85), 0.85)
        with pytest.raises(NoEntryError):
            snowball_exit_experiment(budyko, at_rest, cfg, t_max=100.0)


class TestSlidingSegments:
    def test_interior_trajectory_has_none(self, budyko, cfg):
        traj = integrate(budyko.field(), PlanarState(budyko.nullcline_A(0.85), 0.85), 10.0, cfg)
        assert sliding_segments(traj) == []

    def test_closed_segment(self, budyko_osc, cfg, a_star):
        report = snowball_exit_experiment(budyko_osc, PlanarState(180.0, 0.0), cfg)
        segments = sliding_segments(report.trajectory)
        assert len(segments) == 1
        segment = segments[0]
        assert segment.boundary is Boundary.LOWER
        assert not segment.open_end
        assert segment.A_start == 180.0
        assert segment.A_end == pytest.approx(a_star, abs=1e-9)

    def test_open_segment_closes_at_last_sample(self, budyko_osc, cfg):
        traj = integrate(budyko_osc.field(), PlanarState(200.0, 0.0), 10.0, cfg)
        segments = sliding_segments(traj)
        assert len(segments) == 1
        assert segments[0].open_end
        assert segments[0].t_end == 10.0
        assert segments[0].A_end == pytest.approx(200.0 - 0.06)

    def test_A_monotone_while_sliding(self, budyko_osc, cfg):
        traj = integrate(budyko_osc.field(), PlanarState(200.0, 0.0), 500.0, cfg)
        sliding = np.array([s.x for s in traj.samples if s.mode is Mode.SLIDE_LOWER])
        assert len(sliding) > 100
        assert np.all(np.diff(sliding) < 0)


class TestNullclineCurve:
    def test_budyko_endpoints_and_flip(self, budyko):
        points = nullcline_curve(budyko, 101)
        assert len(points) == 101
        assert points[0].eta == 0.0
        assert points[0].A == pytest.approx(169.32)
        labels = [p.stability_branch for p in points]
        flips = [k for k in range(1, len(labels)) if labels[k] != labels[k - 1]]
        assert len(flips) == 1
        assert points[flips[0]].eta == pytest.approx(0.77)
        assert labels[0] == "unstable" and labels[-1] == "stable"

    def test_jormungand_two_or_more_flips(self, jormungand):
        labels = [p.stability_branch for p in nullcline_curve(jormungand, 201)]
        assert sum(labels[k] != labels[k - 1] for k in range(1, len(labels))) >= 2

    def test_too_few_samples(self, budyko):
        with pytest.raises(InvalidDomainError):
            nullcline_curve(budyko, 1)

    def test_span_and_standard_ic(self, budyko):
        assert nullcline_span(budyko) > 30.0
        ic = standard_ic(budyko)
        assert ic.y == 0.85
        assert ic.x == pytest.approx(budyko.nullcline_A(0.85) + 1.0)


@pytest.mark.slow
class TestPeriodicOrbits:
    def test_budyko_relaxation_cycle(self, budyko_osc, cfg):
        report = detect_periodic_orbit(budyko_osc, cfg=cfg)
        assert report.converged
        assert 12_000 < report.period < 20_000
        assert report.eta_min < 0.05
        assert report.eta_max > 0.95
        assert report.includes_sliding == (True, True)

        tol = 1e-6 * nullcline_span(budyko_osc)
        again = integrate(
            budyko_osc.field(), PlanarState(report.section_A, 0.6), 1.1 * report.period, cfg, section=0.6
        )
        first_return = again.events_of(EventKind.SECTION_CROSS)[0]
        assert abs(first_return.state.x - report.section_A) < 10 * tol
        assert first_return.t == pytest.approx(report.period, rel=1e-3)

    def test_stable_fixed_point_is_not_periodic(self, budyko, cfg):
        try:
            report = detect_periodic_orbit(budyko, cfg=cfg)
        except NonRecurrentError:
            return
        assert not report.converged

    def test_small_ice_cap_run_settles(self, budyko, cfg):
        traj = integrate(budyko.field(), PlanarState(210.0, 0.95), 40_000.0, cfg, dt_out=10.0)
        final = traj.final
        assert abs(final.y - 0.85) < 1e-3
        assert abs(final.x - budyko.nullcline_A(0.85)) < 1e-2
        segments = sliding_segments(traj)
        assert [s.boundary for s in segments] == [Boundary.LOWER, Boundary.UPPER]
        assert segments[0].A_end == pytest.approx(169.32, abs=1e-6)
        assert segments[1].A_end == pytest.approx(201.645, abs=1e-6)
        assert segments[1].t_start - segments[0].t_end < 10.0

    @pytest.mark.parametrize("eta_c, slides", [(0.8, (True, True)), (0.15, (True, False))])
    def test_jormungand_cycles(self, cfg, eta_c, slides):
        model = JormungandModel(JormungandParams(eta_c=eta_c))
        report = detect_periodic_orbit(model, cfg=cfg)
        assert report.converged
        assert report.includes_sliding == slides
