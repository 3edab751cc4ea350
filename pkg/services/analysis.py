"""
Analysis Service
Experiments on top of the Filippov integrator: leaving a sliding boundary,
periodic-orbit detection on a Poincare section, sliding-segment extraction
and nullcline tabulation
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.config import IntegratorConfig
from core.errors import (
    IntegrationError,
    InvalidDomainError,
    NoEntryError,
    NonRecurrentError,
    PreconditionError,
)
from core.events import Event, EventEmitter, EventKind
from core.filippov import Boundary, FilippovIntegrator, Mode, PlanarState, Trajectory
from .model import IceLineModel, Stability

logger = logging.getLogger(__name__)

DEFAULT_T_MAX = 2e5
RETURN_TOL_SCALE = 1e-6
CONVERGED_RETURNS = 3
SETTLE_TOL = 1e-4


@dataclass(frozen=True)
class ExitReport:
    """Entry to and exit from a sliding boundary, with the closed-form slide time"""
    entry_t: float
    entry_A: float
    exit_t: float
    exit_A: float
    analytic_exit_time: float
    boundary: Boundary
    trajectory: Optional[Trajectory] = field(default=None, repr=False, compare=False)

    @property
    def slide_time(self) -> float:
        return self.exit_t - self.entry_t

    def to_dict(self) -> Dict[str, Any]:
        return {
            'boundary': self.boundary.value,
            'entry_t': self.entry_t,
            'entry_A': self.entry_A,
            'exit_t': self.exit_t,
            'exit_A': self.exit_A,
            'slide_time': self.slide_time,
            'analytic_exit_time': self.analytic_exit_time,
        }


@dataclass(frozen=True)
class PeriodicOrbitReport:
    """Observables of the last full cycle between two section crossings"""
    period: float
    eta_min: float
    eta_max: float
    A_min: float
    A_max: float
    includes_sliding: Tuple[bool, bool]  # (lower, upper)
    converged: bool
    section_A: float
    section_eta: float
    crossings: int
    trajectory: Optional[Trajectory] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'period': self.period,
            'eta_min': self.eta_min,
            'eta_max': self.eta_max,
            'A_min': self.A_min,
            'A_max': self.A_max,
            'slides_lower': self.includes_sliding[0],
            'slides_upper': self.includes_sliding[1],
            'converged': self.converged,
            'section_A': self.section_A,
            'section_eta': self.section_eta,
            'crossings': self.crossings,
        }


@dataclass(frozen=True)
class SlidingSegment:
    boundary: Boundary
    t_start: float
    t_end: float
    A_start: float
    A_end: float
    open_end: bool = False  # still sliding when the trajectory ended


@dataclass(frozen=True)
class NullclinePoint:
    eta: float
    A: float
    stability_branch: str  # "stable" or "unstable"


def standard_ic(model: IceLineModel) -> PlanarState:
    """(nullcline_A(eta_c) + 1, eta_c): just right of the fixed point"""
    eta_c = model.params.eta_c
    return PlanarState(model.nullcline_A(eta_c) + 1.0, eta_c)


def nullcline_span(model: IceLineModel, samples: int = 101) -> float:
    """Range of A covered by the nullcline over eta in [0, 1]"""
    values = [model.nullcline_A(e) for e in np.linspace(0.0, 1.0, samples)]
    return max(values) - min(values)


def snowball_exit_experiment(
    model: IceLineModel,
    ic: PlanarState,
    cfg: IntegratorConfig = None,
    t_max: float = DEFAULT_T_MAX,
    boundary: Boundary = Boundary.LOWER,
    dt_out: float = 1.0
) -> ExitReport:
    """
    Integrate until the orbit slides along `boundary` and leaves it again

    On the ice-covered line the slide runs at A-rate -delta*eta_c until the
    tangency A*, on the ice-free line at delta*(1 - eta_c) until the upper
    tangency. An entry exactly at the tangency is a zero-length slide.

    Raises:
        PreconditionError: if the slide cannot end (eta_c <= 0 on the lower
            line, eta_c >= 1 on the upper one)
        NoEntryError: if the orbit never reaches the boundary before t_max
        IntegrationError: if it enters but does not leave before t_max
    """
    eta_c = model.params.eta_c
    if boundary is Boundary.LOWER and not eta_c > 0:
        raise PreconditionError(f"leaving the ice-covered state needs eta_c > 0, got {eta_c!r}")
    if boundary is Boundary.UPPER and not eta_c < 1:
        raise PreconditionError(f"leaving the ice-free state needs eta_c < 1, got {eta_c!r}")

    tangency = model.lower_tangency() if boundary is Boundary.LOWER else model.upper_tangency()
    slide_rate = model.g(tangency, boundary.level)

    entry: List[Event] = []
    exit_: List[Event] = []

    def on_entry(event: Event) -> bool:
        if event.boundary is boundary and not exit_:
            entry.append(event)
        return False

    def on_exit(event: Event) -> bool:
        if event.boundary is boundary and entry:
            exit_.append(event)
            return True
        return False

    def on_tangency(event: Event) -> bool:
        # touching the line right at its tangency: enter and leave at once
        if event.boundary is boundary and not entry:
            entry.append(event)
            exit_.append(event)
            return True
        return False

    emitter = EventEmitter()
    emitter.on(EventKind.SLIDING_ENTRY, on_entry)
    emitter.on(EventKind.SLIDING_EXIT, on_exit)
    emitter.on(EventKind.TANGENCY_CROSS, on_tangency)

    if ic.mode is boundary.sliding_mode:
        entry.append(Event(EventKind.SLIDING_ENTRY, ic.t, ic, boundary))

    integrator = FilippovIntegrator(model.field(), cfg, emitter=emitter)
    trajectory = integrator.integrate(ic, t_max, dt_out)

    if not entry:
        raise NoEntryError(f"orbit from ({ic.x:g}, {ic.y:g}) never reached the {boundary.value} boundary by t={t_max:g}")
    if not exit_:
        raise IntegrationError(
            f"orbit slid onto the {boundary.value} boundary at t={entry[-1].t:g} but did not leave it",
            t=integrator.state.t, partial=trajectory,
        )

    entered, left = entry[-1], exit_[0]
    analytic = abs(entered.state.x - tangency) / abs(slide_rate)
    report = ExitReport(
        entry_t=entered.t,
        entry_A=entered.state.x,
        exit_t=left.t,
        exit_A=left.state.x,
        analytic_exit_time=analytic,
        boundary=boundary,
        trajectory=trajectory,
    )
    logger.info(
        "Left the %s boundary at A=%.6f after %.3f (closed form %.3f)",
        boundary.value, report.exit_A, report.slide_time, analytic
    )
    return report


def detect_periodic_orbit(
    model: IceLineModel,
    ic: Optional[PlanarState] = None,
    cfg: IntegratorConfig = None,
    t_max: float = DEFAULT_T_MAX,
    section: Optional[float] = None,
    return_tol: Optional[float] = None,
    dt_out: float = 1.0
) -> PeriodicOrbitReport:
    """
    Find an attracting cycle through upward crossings of eta = section

    Converged once CONVERGED_RETURNS consecutive crossing A-values differ by
    less than return_tol. Integration also stops early when the orbit has
    settled on a stable fixed point.

    Args:
        model: Model to integrate
        ic: Start; standard_ic(model) when None
        section: eta level of the section; eta_c when None
        return_tol: Return-map tolerance; 1e-6 times the nullcline A-span when None

    Raises:
        NonRecurrentError: with fewer than two crossings
    """
    cfg = cfg or IntegratorConfig()
    ic = ic or standard_ic(model)
    level = model.params.eta_c if section is None else section
    span = nullcline_span(model)
    tol = RETURN_TOL_SCALE * span if return_tol is None else return_tol

    crossings: List[Event] = []

    def converged() -> bool:
        if len(crossings) < CONVERGED_RETURNS + 1:
            return False
        recent = [e.state.x for e in crossings[-(CONVERGED_RETURNS + 1):]]
        return all(abs(b - a) < tol for a, b in zip(recent, recent[1:]))

    def on_section(event: Event) -> bool:
        crossings.append(event)
        logger.debug("Section crossing %d at t=%g, A=%.9f", len(crossings), event.t, event.state.x)
        return converged()

    emitter = EventEmitter()
    emitter.on(EventKind.SECTION_CROSS, on_section)

    stop_when = None
    fixed_point = model.equilibrium()
    if fixed_point.stability is Stability.STABLE:
        A_c, eta_c = fixed_point.A_c, fixed_point.eta_c

        def stop_when(state: PlanarState) -> bool:
            return abs(state.x - A_c) / span + abs(state.y - eta_c) < SETTLE_TOL

    integrator = FilippovIntegrator(model.field(), cfg, emitter=emitter, section=level)
    trajectory = integrator.integrate(ic, t_max, dt_out, stop_when=stop_when)

    if len(crossings) < 2:
        raise NonRecurrentError(
            f"{len(crossings)} crossing(s) of eta={level:g} by t={integrator.state.t:g}; no recurrence"
        )

    t_start, t_end = crossings[-2].t, crossings[-1].t
    cycle = [s for s in trajectory.samples if t_start <= s.t <= t_end]
    etas = np.array([s.y for s in cycle])
    As = np.array([s.x for s in cycle])
    slides = {
        e.boundary for e in trajectory.events
        if e.kind is EventKind.SLIDING_ENTRY and t_start <= e.t <= t_end
    }
    slides |= {Boundary.of_mode(s.mode) for s in cycle if s.mode is not Mode.INTERIOR}

    report = PeriodicOrbitReport(
        period=t_end - t_start,
        eta_min=float(etas.min()),
        eta_max=float(etas.max()),
        A_min=float(As.min()),
        A_max=float(As.max()),
        includes_sliding=(Boundary.LOWER in slides, Boundary.UPPER in slides),
        converged=converged(),
        section_A=crossings[-1].state.x,
        section_eta=level,
        crossings=len(crossings),
        trajectory=trajectory,
    )
    if report.converged:
        logger.info("Periodic orbit of %s: period %.3f after %d crossings", model.name, report.period, report.crossings)
    else:
        logger.warning(
            "Return map of %s not converged after %d crossings (tol %g)", model.name, report.crossings, tol
        )
    return report


def sliding_segments(traj: Trajectory) -> List[SlidingSegment]:
    """Pair sliding entries with their exits; an unpaired entry closes at the last sample"""
    segments = []
    open_entries: Dict[Boundary, Event] = {}
    for event in traj.events:
        if event.kind is EventKind.SLIDING_ENTRY:
            open_entries[event.boundary] = event
        elif event.kind is EventKind.SLIDING_EXIT and event.boundary in open_entries:
            entered = open_entries.pop(event.boundary)
            segments.append(SlidingSegment(
                event.boundary, entered.t, event.t, entered.state.x, event.state.x
            ))

    if open_entries and traj.samples:
        last = traj.samples[-1]
        for boundary, entered in open_entries.items():
            segments.append(SlidingSegment(
                boundary, entered.t, last.t, entered.state.x, last.x, open_end=True
            ))
    return sorted(segments, key=lambda s: s.t_start)


def nullcline_curve(model: IceLineModel, samples: int = 101) -> List[NullclinePoint]:
    """
    Sample the nullcline uniformly in eta

    Each point is labelled by slope stability: the stable branch is where
    dh/deta < 0.
    """
    if samples < 2:
        raise InvalidDomainError(f"samples must be >= 2, got {samples}")
    return [
        NullclinePoint(
            eta=float(eta),
            A=model.nullcline_A(float(eta)),
            stability_branch="stable" if model.dh_deta(float(eta)) < 0 else "unstable",
        )
        for eta in np.linspace(0.0, 1.0, samples)
    ]
