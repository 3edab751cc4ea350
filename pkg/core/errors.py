"""
Exception hierarchy for IceLine
Every failure raised by the library derives from IceLineError so callers
(the CLI, the sweep runner) can catch one type and keep going.
"""
from typing import Optional


class IceLineError(Exception):
    """Base class for all IceLine errors"""


class InvalidStateError(IceLineError, ValueError):
    """A state is non-finite or inconsistent with its motion mode"""


class InvalidDomainError(IceLineError, ValueError):
    """A sampling box, grid or time span is empty or inverted"""


class ConfigError(IceLineError, ValueError):
    """A configuration document or parameter record is invalid"""


class ModeViolationError(IceLineError):
    """Sliding dynamics requested at a boundary point that does not slide"""


class PreconditionError(IceLineError):
    """A hypothesis of an experiment does not hold (e.g. eta_c <= 0)"""


class DegenerateBoundaryError(PreconditionError):
    """Start on a boundary point where neither H nor G moves the state"""


class NoFoldError(IceLineError):
    """The nullcline derivative has no sign change in (0, 1)"""


class NoEntryError(IceLineError):
    """The orbit never reached the requested boundary"""


class NonRecurrentError(IceLineError):
    """Fewer than two section crossings before t_max"""


class QuadratureError(IceLineError):
    """Adaptive quadrature did not reach its accuracy target"""

    def __init__(self, message: str, estimate: float, abserr: float):
        super().__init__(f"{message} (estimate={estimate!r}, abserr={abserr!r})")
        self.estimate = estimate
        self.abserr = abserr


class IntegrationError(IceLineError):
    """
    Integration failed at time t

    The trajectory computed up to the failure is attached as `partial`
    so the CLI can still write it out.
    """

    def __init__(self, message: str, t: Optional[float] = None, partial=None):
        suffix = f" at t={t!r}" if t is not None else ""
        super().__init__(f"{message}{suffix}")
        self.t = t
        self.partial = partial


class StiffnessError(IntegrationError):
    """Step size underflow in the Runge-Kutta stepper"""


class RunawaySlideError(IntegrationError):
    """A sliding segment lasted longer than max_slide_time"""
