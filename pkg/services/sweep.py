"""
Sweep Service
Classify the attractor for each eta_c on a grid: a stable fixed point, a
periodic orbit, or undetermined with a reason
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from core.config import IntegratorConfig
from core.errors import IceLineError, InvalidDomainError
from .analysis import DEFAULT_T_MAX, PeriodicOrbitReport, detect_periodic_orbit
from .model import EquilibriumReport, IceLineModel, Stability

logger = logging.getLogger(__name__)

CANARD_WINDOW = 1e-3


class Attractor(Enum):
    EQUILIBRIUM = "equilibrium"
    PERIODIC_ORBIT = "periodic_orbit"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class BifurcationRow:
    """One eta_c of a sweep"""
    eta_c: float
    attractor: Attractor
    report: Optional[Union[EquilibriumReport, PeriodicOrbitReport]] = None
    equilibrium: Optional[EquilibriumReport] = None
    reason: Optional[str] = None

    @property
    def orbit(self) -> Optional[PeriodicOrbitReport]:
        return self.report if isinstance(self.report, PeriodicOrbitReport) else None

    def to_dict(self) -> Dict[str, Any]:
        orbit = self.orbit
        return {
            'eta_c': self.eta_c,
            'attractor': self.attractor.value,
            'A_c': self.equilibrium.A_c if self.equilibrium else None,
            'lambda_re_max': self.equilibrium.lambda_re_max if self.equilibrium else None,
            'period': orbit.period if orbit else None,
            'eta_min': orbit.eta_min if orbit else None,
            'eta_max': orbit.eta_max if orbit else None,
            'reason': self.reason,
        }


def eta_c_grid(eta_c_min: float, eta_c_max: float, steps: int) -> List[float]:
    """`steps` evenly spaced values; a single step gives [eta_c_min]"""
    if steps < 1:
        raise InvalidDomainError(f"steps must be >= 1, got {steps}")
    if steps > 1 and not eta_c_min < eta_c_max:
        raise InvalidDomainError(f"need eta_c_min < eta_c_max, got {eta_c_min!r} and {eta_c_max!r}")
    if steps == 1:
        return [float(eta_c_min)]
    return [float(v) for v in np.linspace(eta_c_min, eta_c_max, steps)]


def in_canard_window(model: IceLineModel, eta_c: float) -> bool:
    return any(abs(eta_c - f) < CANARD_WINDOW for f in model.folds())


def classify(
    model: IceLineModel,
    eta_c: float,
    cfg: IntegratorConfig = None,
    t_max: float = DEFAULT_T_MAX
) -> BifurcationRow:
    """Classify one eta_c; failures come back as UNDETERMINED rows"""
    try:
        if not 0 < eta_c < 1:
            raise InvalidDomainError(f"eta_c={eta_c!r} outside (0, 1)")
        member = model.with_eta_c(eta_c)
        fixed_point = member.equilibrium()
        if fixed_point.stability is Stability.STABLE:
            return BifurcationRow(eta_c, Attractor.EQUILIBRIUM, fixed_point, fixed_point)
        if fixed_point.stability is Stability.DEGENERATE:
            return BifurcationRow(eta_c, Attractor.UNDETERMINED, fixed_point, fixed_point,
                                  reason="degenerate fixed point")

        orbit = detect_periodic_orbit(member, cfg=cfg, t_max=t_max)
        if orbit.converged:
            return BifurcationRow(eta_c, Attractor.PERIODIC_ORBIT, orbit, fixed_point)
        reason = "return map not converged"
        if in_canard_window(member, eta_c):
            reason += " (canard window)"
        return BifurcationRow(eta_c, Attractor.UNDETERMINED, orbit, fixed_point, reason=reason)
    except IceLineError as e:
        logger.warning("Sweep row eta_c=%g undetermined: %s", eta_c, e)
        return BifurcationRow(eta_c, Attractor.UNDETERMINED, reason=str(e))
    except (ArithmeticError, ValueError) as e:
        logger.warning("Sweep row eta_c=%g failed numerically: %s", eta_c, e)
        return BifurcationRow(eta_c, Attractor.UNDETERMINED, reason=f"{type(e).__name__}: {e}")


def sweep_eta_c(
    model: IceLineModel,
    grid: Sequence[float],
    cfg: IntegratorConfig = None,
    jobs: int = 1,
    progress: bool = False,
    t_max: float = DEFAULT_T_MAX
) -> List[BifurcationRow]:
    """
    Classify every eta_c in `grid`; rows come back in grid order

    Args:
        model: Model family; eta_c is replaced per row
        grid: eta_c values in (0, 1)
        jobs: Worker processes; 1 runs in this process
        progress: Show a tqdm bar
        t_max: Horizon for each periodic-orbit search
    """
    grid = [float(v) for v in grid]
    n = len(grid)
    if jobs <= 1:
        rows = [classify(model, e, cfg, t_max) for e in tqdm(grid, disable=not progress, desc="sweep")]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(classify, [model] * n, grid, [cfg] * n, [t_max] * n)
            rows = list(tqdm(results, total=n, disable=not progress, desc="sweep"))
    for row in rows:
        logger.info("eta_c=%g: %s", row.eta_c, row.attractor.value)
    return rows
