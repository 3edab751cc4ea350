"""
Ice-line model interface
What the analysis and sweep services need from a climate model, plus the
equilibrium report both models produce
"""
import cmath
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Protocol, Tuple, runtime_checkable

import numpy as np

from core.config import ClimateParams
from core.filippov import SmoothField

logger = logging.getLogger(__name__)

DEGENERATE_RE_TOL = 1e-9


class Stability(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class EquilibriumReport:
    """Interior fixed point (A_c, eta_c) and its linearization"""
    A_c: float
    eta_c: float
    jacobian: np.ndarray
    eigenvalues: Tuple[complex, complex]
    stability: Stability

    @property
    def lambda_re_max(self) -> float:
        return max(ev.real for ev in self.eigenvalues)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'A_c': self.A_c,
            'eta_c': self.eta_c,
            'jacobian': [[float(v) for v in row] for row in self.jacobian],
            'eigenvalues': [{'re': ev.real, 'im': ev.imag} for ev in self.eigenvalues],
            'lambda_re_max': self.lambda_re_max,
            'stability': self.stability.value,
        }


def equilibrium_report(A_c: float, eta_c: float, delta: float, rho: float, B: float, dh_deta: float) -> EquilibriumReport:
    """
    Build the report from the analytic Jacobian [[0, delta], [-rho/B, dh/deta]]

    Eigenvalues come from the trace and determinant. The slope-stability
    rule (stable iff dh/deta < 0) is checked against them.
    """
    jacobian = np.array([[0.0, delta], [-rho / B, dh_deta]])
    trace = dh_deta
    det = delta * rho / B
    root = cmath.sqrt(trace * trace - 4 * det)
    eigenvalues = ((trace + root) / 2, (trace - root) / 2)
    re_max = max(ev.real for ev in eigenvalues)

    if not 0 < eta_c < 1 or abs(re_max) < DEGENERATE_RE_TOL:
        stability = Stability.DEGENERATE
    elif re_max < 0:
        stability = Stability.STABLE
    else:
        stability = Stability.UNSTABLE

    if stability is not Stability.DEGENERATE and (dh_deta < 0) != (stability is Stability.STABLE):
        logger.warning(
            "Slope-stability disagrees with eigenvalues at eta_c=%g (dh/deta=%g, max Re=%g)",
            eta_c, dh_deta, re_max
        )
    return EquilibriumReport(A_c, eta_c, jacobian, eigenvalues, stability)


@runtime_checkable
class IceLineModel(Protocol):
    """A named (g, h) pair with the nullcline helpers the experiments use"""
    name: str
    params: ClimateParams

    def field(self) -> SmoothField: ...

    def h(self, A: float, eta: float) -> float: ...

    def g(self, A: float, eta: float) -> float: ...

    def nullcline_A(self, eta: float) -> float: ...

    def dh_deta(self, eta: float) -> float: ...

    def equilibrium(self) -> EquilibriumReport: ...

    def folds(self) -> List[float]: ...

    def lower_tangency(self) -> float: ...

    def upper_tangency(self) -> float: ...

    def with_eta_c(self, eta_c: float) -> "IceLineModel": ...
