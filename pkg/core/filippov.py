"""
Planar Filippov machinery
A smooth field (G, H) on the plane, extended across the lines y=0 and y=1
so the strip 0 <= y <= 1 attracts everything outside it, integrated with
event location and sliding on both lines.

Outside the strip the y-rate is -|H| above and |H| below; on the lines it
is (H -|H|)/2 and (H + |H|)/2. Where the inside field pushes into a line
the motion slides along it with velocity (G, 0) until H changes sign.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import RK45
from scipy.optimize import brentq

from .config import IntegratorConfig
from .errors import (
    DegenerateBoundaryError,
    IntegrationError,
    InvalidDomainError,
    InvalidStateError,
    ModeViolationError,
    RunawaySlideError,
    StiffnessError,
)
from .events import Event, EventEmitter, EventKind

logger = logging.getLogger(__name__)

ScalarField = Callable[[float, float], float]

# dense output is scanned on this many sub-intervals per step so two
# crossings inside one step are not mistaken for none
_SUBDIVISIONS = 8
_ROOT_RTOL = 4 * np.finfo(float).eps
_ROOT_XTOL = 1e-12


class Mode(Enum):
    """How a state moves"""
    INTERIOR = "interior"
    SLIDE_LOWER = "slide_lower"
    SLIDE_UPPER = "slide_upper"


class Boundary(Enum):
    """The two switching lines"""
    LOWER = "lower"
    UPPER = "upper"

    @property
    def level(self) -> float:
        return 0.0 if self is Boundary.LOWER else 1.0

    @property
    def inward(self) -> float:
        """+1 when the strip lies above the line, -1 when below"""
        return 1.0 if self is Boundary.LOWER else -1.0

    @property
    def sliding_mode(self) -> Mode:
        return Mode.SLIDE_LOWER if self is Boundary.LOWER else Mode.SLIDE_UPPER

    @classmethod
    def of_mode(cls, mode: Mode) -> Optional["Boundary"]:
        if mode is Mode.SLIDE_LOWER:
            return cls.LOWER
        if mode is Mode.SLIDE_UPPER:
            return cls.UPPER
        return None


class RegionLabel(Enum):
    """Which case of the extended field governs a point"""
    ABOVE = "above"
    UPPER_BOUNDARY = "upper_boundary"
    INTERIOR = "interior"
    LOWER_BOUNDARY = "lower_boundary"
    BELOW = "below"


class BoundaryMode(Enum):
    """Behaviour of the inside field at a boundary point"""
    ATTRACTING_SLIDING = "attracting_sliding"
    CROSSING = "crossing"
    TANGENCY = "tangency"


@dataclass(frozen=True)
class SmoothField:
    """
    The smooth field (G, H) the extension is built from

    G and H must be total on the plane; `lipschitz_hint` is an optional
    known Lipschitz constant of H, reported next to the
    one-sided estimate by the diagnose command.
    """
    G: ScalarField
    H: ScalarField
    lipschitz_hint: Optional[float] = None
    name: str = "field"

    def __call__(self, x: float, y: float) -> Tuple[float, float]:
        return self.G(x, y), self.H(x, y)


@dataclass(frozen=True)
class PlanarState:
    """A point (x, y) at time t together with its motion mode"""
    x: float
    y: float
    mode: Mode = Mode.INTERIOR
    t: float = 0.0

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.t)


@dataclass(frozen=True)
class SlidingVelocity:
    """Filippov sliding velocity and the convex-combination weight behind it"""
    dx: float
    dy: float
    alpha: float


@dataclass
class Trajectory:
    """Samples on a dt_out grid plus every event state, and the event log"""
    samples: List[PlanarState] = field(default_factory=list)
    events: List[Event] = field(default_factory=list)
    dt_out: float = 1.0

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def x(self) -> np.ndarray:
        return np.array([s.x for s in self.samples])

    @property
    def y(self) -> np.ndarray:
        return np.array([s.y for s in self.samples])

    @property
    def final(self) -> PlanarState:
        return self.samples[-1]

    def events_of(self, kind: EventKind, boundary: Optional[Boundary] = None) -> List[Event]:
        return [
            e for e in self.events
            if e.kind is kind and (boundary is None or e.boundary is boundary)
        ]


def _check_state(state: PlanarState) -> None:
    if not state.is_finite():
        raise InvalidStateError(f"non-finite state: {state}")


def classify_region(state: PlanarState, cfg: IntegratorConfig = None) -> RegionLabel:
    """Case of the piecewise extension that governs `state`"""
    cfg = cfg or IntegratorConfig()
    _check_state(state)
    y = state.y
    if abs(y - 1.0) <= cfg.boundary_tol:
        return RegionLabel.UPPER_BOUNDARY
    if abs(y) <= cfg.boundary_tol:
        return RegionLabel.LOWER_BOUNDARY
    if y > 1.0:
        return RegionLabel.ABOVE
    if y < 0.0:
        return RegionLabel.BELOW
    return RegionLabel.INTERIOR


def extended_field(
    smooth: SmoothField,
    state: PlanarState,
    cfg: IntegratorConfig = None
) -> Tuple[float, float]:
    """(x-rate, y-rate) of the extended field at `state`"""
    label = classify_region(state, cfg)
    g, h = smooth(state.x, state.y)
    if label is RegionLabel.ABOVE:
        return g, -abs(h)
    if label is RegionLabel.UPPER_BOUNDARY:
        return g, (h - abs(h)) / 2
    if label is RegionLabel.LOWER_BOUNDARY:
        return g, (h + abs(h)) / 2
    if label is RegionLabel.BELOW:
        return g, abs(h)
    return g, h


def boundary_mode(
    smooth: SmoothField,
    x: float,
    which: Boundary,
    cfg: IntegratorConfig = None
) -> BoundaryMode:
    """Attracting, crossing or tangent, from the sign of H on the line"""
    cfg = cfg or IntegratorConfig()
    signed = which.inward * smooth.H(x, which.level)
    if signed < -cfg.tangency_tol:
        return BoundaryMode.ATTRACTING_SLIDING
    if signed > cfg.tangency_tol:
        return BoundaryMode.CROSSING
    return BoundaryMode.TANGENCY


def sliding_field(
    smooth: SmoothField,
    x: float,
    which: Boundary,
    cfg: IntegratorConfig = None
) -> SlidingVelocity:
    """
    Filippov sliding velocity on a boundary

    The weight alpha solves alpha*H_out + (1-alpha)*H_in = 0 where H_out is
    the y-rate of the extension on the far side of the line.
    """
    if boundary_mode(smooth, x, which, cfg) is not BoundaryMode.ATTRACTING_SLIDING:
        raise ModeViolationError(f"no attracting sliding at x={x!r} on the {which.value} boundary")
    g, h_in = smooth(x, which.level)
    h_out = which.inward * abs(h_in)
    alpha = h_in / (h_in - h_out)
    dy = alpha * h_out + (1 - alpha) * h_in
    dx = alpha * g + (1 - alpha) * g
    return SlidingVelocity(dx=dx, dy=dy, alpha=alpha)


def lipschitz_quotient(
    smooth: SmoothField,
    z1: Tuple[float, float],
    z2: Tuple[float, float],
    cfg: IntegratorConfig = None
) -> float:
    """(F(z1) - F(z2)) . (z1 - z2) / |z1 - z2|^2 for the extended field F"""
    f1 = extended_field(smooth, PlanarState(z1[0], z1[1]), cfg)
    f2 = extended_field(smooth, PlanarState(z2[0], z2[1]), cfg)
    dx, dy = z1[0] - z2[0], z1[1] - z2[1]
    norm2 = dx * dx + dy * dy
    if norm2 == 0:
        raise InvalidDomainError("coincident points")
    return ((f1[0] - f2[0]) * dx + (f1[1] - f2[1]) * dy) / norm2


def one_sided_lipschitz_diagnostic(
    smooth: SmoothField,
    box: Tuple[float, float, float, float],
    n_samples: int,
    seed: int = 0,
    cfg: IntegratorConfig = None
) -> float:
    """
    Largest one-sided Lipschitz quotient over random pairs in a box

    Args:
        smooth: Field whose extension is sampled
        box: (x_min, x_max, y_min, y_max)
        n_samples: Number of point pairs, at least 2
        seed: Seed for numpy's default generator

    Returns:
        The maximum quotient seen; bounded above when the one-sided
        Lipschitz condition holds on the box
    """
    x_min, x_max, y_min, y_max = box
    if not (x_min < x_max and y_min < y_max):
        raise InvalidDomainError(f"degenerate box {box}")
    if n_samples < 2:
        raise InvalidDomainError(f"n_samples must be >= 2, got {n_samples}")

    rng = np.random.default_rng(seed)
    lo = np.array([x_min, y_min])
    hi = np.array([x_max, y_max])
    first = rng.uniform(lo, hi, size=(n_samples, 2))
    second = rng.uniform(lo, hi, size=(n_samples, 2))

    worst = -math.inf
    for z1, z2 in zip(first, second):
        if np.array_equal(z1, z2):
            continue
        worst = max(worst, lipschitz_quotient(smooth, tuple(z1), tuple(z2), cfg))
    return worst


class _Branch(Enum):
    INSIDE = "inside"
    ABOVE = "above"
    BELOW = "below"


@dataclass
class _Monitor:
    """Event function that is positive until its event happens"""
    fn: Callable[[np.ndarray], np.ndarray]
    armed: bool
    boundary: Optional[Boundary] = None  # None for the Poincare section


class FilippovIntegrator:
    """
    Event-driven integrator for the extended field

    Smooth pieces are integrated with scipy's RK45 (Dormand-Prince 5(4),
    dense output). Crossings of y=0, y=1 and the optional section are
    bracketed on the dense output and located with brentq; the step is cut
    there and the motion switches between interior flow and sliding.

    Listeners on `emitter` see every event as it is logged and may return
    True to stop the integration at that event.
    """

    def __init__(
        self,
        smooth: SmoothField,
        cfg: IntegratorConfig = None,
        emitter: EventEmitter = None,
        section: Optional[float] = None
    ):
        """
        Args:
            smooth: The smooth field to extend
            cfg: Tolerances; defaults to IntegratorConfig()
            emitter: Receives events as they happen
            section: Log SECTION_CROSS when y crosses this level upward
        """
        self.smooth = smooth
        self.cfg = cfg or IntegratorConfig()
        self.emitter = emitter or EventEmitter()
        self.section = section

        self.state: Optional[PlanarState] = None
        self.trajectory = Trajectory()
        self._t_max = math.inf
        self._t_grid0 = 0.0
        self._next_k = 0
        self._solver = None
        self._branch: Optional[_Branch] = None
        self._slide_on: Optional[Boundary] = None
        self._slide_start = 0.0
        self._monitors: List[_Monitor] = []
        self._stopped = False

    @property
    def stopped(self) -> bool:
        """True once a listener asked to stop"""
        return self._stopped

    # ==================== Public API ====================

    def reset(self, ic: PlanarState, t_max: float, dt_out: float = 1.0) -> List[Event]:
        """Start a fresh trajectory at `ic`; returns events logged at the start"""
        _check_state(ic)
        if not t_max >= ic.t:
            raise InvalidDomainError(
                f"t_max={t_max!r} is before the initial time {ic.t!r}; only forward integration is supported"
            )
        if not dt_out > 0:
            raise InvalidDomainError(f"dt_out must be > 0, got {dt_out!r}")

        self.trajectory = Trajectory(dt_out=dt_out)
        self._t_max = t_max
        self._t_grid0 = ic.t
        self._next_k = 1
        self._stopped = False
        self.state = ic
        self.trajectory.samples.append(ic)
        return self._start(ic)

    def step(self) -> Tuple[PlanarState, List[Event]]:
        """Advance by one adaptive step; returns the new state and its events"""
        if self.state is None:
            raise InvalidStateError("call reset() before step()")
        if self._stopped or self.state.t >= self._t_max:
            return self.state, []
        n_before = len(self.trajectory.events)
        try:
            if self._slide_on is not None:
                self._advance_slide()
            else:
                self._advance_interior()
        except IntegrationError as e:
            e.partial = self.trajectory
            raise
        return self.state, self.trajectory.events[n_before:]

    def integrate(
        self,
        ic: PlanarState,
        t_max: float,
        dt_out: float = 1.0,
        stop_when: Optional[Callable[[PlanarState], bool]] = None
    ) -> Trajectory:
        """
        Step from `ic` until t_max, a listener stops the run, or
        `stop_when(state)` is true after a step
        """
        self.reset(ic, t_max, dt_out)
        while not self._stopped and self.state.t < t_max:
            self.step()
            if stop_when is not None and stop_when(self.state):
                self._stopped = True
        last = self.trajectory.samples[-1]
        if last.t < self.state.t:
            self.trajectory.samples.append(self.state)
        logger.debug(
            "Integrated %s to t=%g: %d samples, %d events",
            self.smooth.name, self.state.t, len(self.trajectory.samples), len(self.trajectory.events)
        )
        return self.trajectory

    # ==================== Segment setup ====================

    def _start(self, state: PlanarState) -> List[Event]:
        """Pick the dynamics that govern `state` and set up a solver for them"""
        cfg = self.cfg
        boundary = Boundary.of_mode(state.mode)
        if boundary is not None:
            if abs(state.y - boundary.level) > cfg.boundary_tol:
                raise InvalidStateError(f"{state.mode.value} state is off its boundary: {state}")
            if boundary_mode(self.smooth, state.x, boundary, cfg) is not BoundaryMode.ATTRACTING_SLIDING:
                raise InvalidStateError(f"{state.mode.value} state is not at an attracting sliding point: {state}")
            state = replace(state, y=boundary.level)
            self.state = state
            self._begin_slide(state, boundary)
            return []

        region = classify_region(state, cfg)
        if region is RegionLabel.ABOVE:
            self._begin_interior(state, _Branch.ABOVE)
            return []
        if region is RegionLabel.BELOW:
            self._begin_interior(state, _Branch.BELOW)
            return []
        if region is RegionLabel.INTERIOR:
            self._begin_interior(state, _Branch.INSIDE)
            return []

        boundary = Boundary.LOWER if region is RegionLabel.LOWER_BOUNDARY else Boundary.UPPER
        on_line = replace(state, y=boundary.level)
        self.state = on_line
        mode = boundary_mode(self.smooth, on_line.x, boundary, cfg)
        if mode is BoundaryMode.ATTRACTING_SLIDING:
            sliding = replace(on_line, mode=boundary.sliding_mode)
            self.state = sliding
            self._begin_slide(sliding, boundary)
            self._log(Event(EventKind.SLIDING_ENTRY, sliding.t, sliding, boundary))
            return self.trajectory.events[-1:]
        if mode is BoundaryMode.TANGENCY:
            if abs(self.smooth.G(on_line.x, boundary.level)) <= cfg.tangency_tol:
                raise DegenerateBoundaryError(
                    f"start at x={on_line.x!r} on the {boundary.value} boundary is a tangency "
                    "where neither G nor H moves the state"
                )
            self._begin_interior(on_line, _Branch.INSIDE, disarmed=boundary)
            self._log(Event(EventKind.TANGENCY_CROSS, on_line.t, on_line, boundary))
            return self.trajectory.events[-1:]
        self._begin_interior(on_line, _Branch.INSIDE, disarmed=boundary)
        return []

    def _rhs(self, branch: _Branch):
        G, H = self.smooth.G, self.smooth.H
        if branch is _Branch.ABOVE:
            return lambda t, z: np.array([G(z[0], z[1]), -abs(H(z[0], z[1]))])
        if branch is _Branch.BELOW:
            return lambda t, z: np.array([G(z[0], z[1]), abs(H(z[0], z[1]))])
        return lambda t, z: np.array([G(z[0], z[1]), H(z[0], z[1])])

    def _new_solver(self, fun, t0: float, z0) -> RK45:
        cfg = self.cfg
        return RK45(
            fun, t0, np.asarray(z0, dtype=float), self._t_max,
            max_step=cfg.max_step, rtol=cfg.rel_tol, atol=cfg.abs_tol,
        )

    def _begin_interior(self, state: PlanarState, branch: _Branch, disarmed: Optional[Boundary] = None) -> None:
        btol = self.cfg.boundary_tol
        y = state.y
        self.state = replace(state, mode=Mode.INTERIOR)
        self._branch = branch
        self._slide_on = None
        if branch is _Branch.INSIDE:
            monitors = [
                _Monitor(lambda z: z[1], y > 2 * btol, Boundary.LOWER),
                _Monitor(lambda z: 1.0 - z[1], 1.0 - y > 2 * btol, Boundary.UPPER),
            ]
            if self.section is not None:
                level = self.section
                monitors.append(_Monitor(lambda z: level - z[1], level - y > 2 * btol))
        elif branch is _Branch.ABOVE:
            monitors = [_Monitor(lambda z: z[1] - 1.0, True, Boundary.UPPER)]
        else:
            monitors = [_Monitor(lambda z: -z[1], True, Boundary.LOWER)]
        for m in monitors:
            if m.boundary is disarmed and m.boundary is not None:
                m.armed = False
        self._monitors = monitors
        if self.state.t < self._t_max:
            self._solver = self._new_solver(self._rhs(branch), self.state.t, [state.x, y])

    def _begin_slide(self, state: PlanarState, boundary: Boundary) -> None:
        G = self.smooth.G
        level = boundary.level
        self._slide_on = boundary
        self._slide_start = state.t
        self._branch = None
        self._monitors = []
        if state.t < self._t_max:
            self._solver = self._new_solver(lambda t, x: np.array([G(x[0], level)]), state.t, [state.x])

    # ==================== Stepping ====================

    def _solver_step(self):
        solver = self._solver
        t_old = solver.t
        message = solver.step()
        if solver.status == 'failed':
            raise StiffnessError(f"step size underflow ({message})", t=t_old)
        return solver.dense_output(), t_old, solver.t

    def _advance_interior(self) -> None:
        dense, t_old, t_new = self._solver_step()
        self._scan_interior(dense, t_old, t_new)

    def _scan_interior(self, dense, ta: float, tb: float) -> None:
        btol = self.cfg.boundary_tol
        ts = np.linspace(ta, tb, _SUBDIVISIONS + 1)
        zs = dense(ts)
        values = [np.asarray(m.fn(zs), dtype=float) for m in self._monitors]

        for i in range(1, len(ts)):
            hit = None
            for m, v in zip(self._monitors, values):
                threshold = 0.0 if m.armed else -btol
                if m.boundary is None and not m.armed:
                    continue
                if v[i - 1] > threshold and v[i] <= threshold:
                    t_root = brentq(
                        lambda t, m=m, thr=threshold: float(m.fn(dense(t))) - thr,
                        ts[i - 1], ts[i], xtol=_ROOT_XTOL, rtol=_ROOT_RTOL,
                    )
                    if hit is None or t_root < hit[0]:
                        hit = (t_root, m)
            if hit is not None:
                t_root, m = hit
                self._sample_until(t_root, self._interior_states(dense))
                z = dense(t_root)
                if m.boundary is None:
                    crossing = PlanarState(float(z[0]), float(self.section), Mode.INTERIOR, t_root)
                    m.armed = False
                    self.state = crossing
                    self._log(Event(EventKind.SECTION_CROSS, t_root, crossing))
                    if self._stopped:
                        return
                    self._scan_interior(dense, t_root, tb)
                    return
                self._on_boundary(float(z[0]), t_root, m.boundary)
                return
            for m, v in zip(self._monitors, values):
                if not m.armed and v[i] > 2 * btol:
                    m.armed = True

        z = dense(tb)
        self.state = PlanarState(float(z[0]), float(z[1]), Mode.INTERIOR, tb)
        self._sample_until(tb, self._interior_states(dense))

    def _on_boundary(self, x: float, t: float, boundary: Boundary) -> None:
        """Cut the step at a boundary and choose what happens next"""
        on_line = PlanarState(x, boundary.level, Mode.INTERIOR, t)
        self.state = on_line
        self._log(Event(EventKind.BOUNDARY_HIT, t, on_line, boundary))
        mode = boundary_mode(self.smooth, x, boundary, self.cfg)
        logger.debug("Boundary hit at t=%g x=%g on %s: %s", t, x, boundary.value, mode.value)

        if mode is BoundaryMode.ATTRACTING_SLIDING:
            sliding = replace(on_line, mode=boundary.sliding_mode)
            self.state = sliding
            self._begin_slide(sliding, boundary)
            self._log(Event(EventKind.SLIDING_ENTRY, t, sliding, boundary))
            return
        self._begin_interior(on_line, _Branch.INSIDE, disarmed=boundary)
        if mode is BoundaryMode.TANGENCY:
            self._log(Event(EventKind.TANGENCY_CROSS, t, on_line, boundary))

    def _advance_slide(self) -> None:
        boundary = self._slide_on
        level = boundary.level
        H = self.smooth.H
        dense, t_old, t_new = self._solver_step()

        def attraction(t: float) -> float:
            # positive while the inside field still pushes into the line
            return -boundary.inward * H(float(dense(t)[0]), level)

        ts = np.linspace(t_old, t_new, _SUBDIVISIONS + 1)
        values = [attraction(t) for t in ts]
        states = self._sliding_states(dense, boundary)
        for i in range(1, len(ts)):
            if values[i - 1] > 0 and values[i] <= 0:
                t_exit = brentq(attraction, ts[i - 1], ts[i], xtol=_ROOT_XTOL, rtol=_ROOT_RTOL)
                self._check_slide_time(t_exit)
                self._sample_until(t_exit, states)
                leaving = PlanarState(float(dense(t_exit)[0]), level, Mode.INTERIOR, t_exit)
                self._begin_interior(leaving, _Branch.INSIDE, disarmed=boundary)
                self._log(Event(EventKind.SLIDING_EXIT, t_exit, leaving, boundary))
                return

        self._check_slide_time(t_new)
        self.state = PlanarState(float(dense(t_new)[0]), level, boundary.sliding_mode, t_new)
        self._sample_until(t_new, states)

    def _check_slide_time(self, t: float) -> None:
        if t - self._slide_start > self.cfg.max_slide_time:
            raise RunawaySlideError(
                f"slide on the {self._slide_on.value} boundary lasted longer than "
                f"max_slide_time={self.cfg.max_slide_time!r} (check eta_c)",
                t=t,
            )

    # ==================== Output ====================

    @staticmethod
    def _interior_states(dense):
        def make(ts: np.ndarray) -> List[PlanarState]:
            zs = dense(ts)
            return [PlanarState(float(zs[0, k]), float(zs[1, k]), Mode.INTERIOR, float(t)) for k, t in enumerate(ts)]
        return make

    @staticmethod
    def _sliding_states(dense, boundary: Boundary):
        level, mode = boundary.level, boundary.sliding_mode

        def make(ts: np.ndarray) -> List[PlanarState]:
            xs = dense(ts)
            return [PlanarState(float(xs[0, k]), level, mode, float(t)) for k, t in enumerate(ts)]
        return make

    def _sample_until(self, t_end: float, make_states) -> None:
        """Append grid samples with t0 + k*dt_out <= t_end"""
        dt = self.trajectory.dt_out
        k_last = math.floor((t_end - self._t_grid0) / dt + 1e-9)
        if k_last < self._next_k:
            return
        ks = np.arange(self._next_k, k_last + 1)
        ts = np.minimum(self._t_grid0 + ks * dt, t_end)
        self.trajectory.samples.extend(make_states(ts))
        self._next_k = k_last + 1

    def _log(self, event: Event) -> None:
        samples = self.trajectory.samples
        if samples and samples[-1].t == event.t:
            samples[-1] = event.state
        else:
            samples.append(event.state)
        self.trajectory.events.append(event)
        logger.debug("%s at t=%g (x=%g, y=%g)", event.kind.value, event.t, event.state.x, event.state.y)
        if self.emitter.emit(event):
            self._stopped = True


def step(
    smooth: SmoothField,
    state: PlanarState,
    cfg: IntegratorConfig = None
) -> Tuple[PlanarState, List[Event]]:
    """One adaptive step from `state`; events logged on the way are returned"""
    cfg = cfg or IntegratorConfig()
    integrator = FilippovIntegrator(smooth, cfg)
    start_events = integrator.reset(state, state.t + cfg.max_step, dt_out=math.inf)
    new_state, events = integrator.step()
    return new_state, list(start_events) + list(events)


def integrate(
    smooth: SmoothField,
    ic: PlanarState,
    t_max: float,
    cfg: IntegratorConfig = None,
    dt_out: float = 1.0,
    section: Optional[float] = None,
    emitter: EventEmitter = None
) -> Trajectory:
    """Integrate the extended field from `ic` to t_max"""
    integrator = FilippovIntegrator(smooth, cfg, emitter=emitter, section=section)
    return integrator.integrate(ic, t_max, dt_out)
