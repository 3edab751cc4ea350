"""
Jormungand ice-line model
Bare sea ice is darker than snow-covered ice; a tanh snow line at y_snow
blends the two. The mean albedo has no closed form, so it is integrated
with adaptive quadrature, and tabulated on a Hermite spline for the
integrator's right-hand side.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import ClassVar, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from core.config import JormungandParams
from core.errors import InvalidDomainError, QuadratureError
from core.filippov import SmoothField
from .budyko import g, insolation, insolation_integral
from .model import EquilibriumReport, equilibrium_report

logger = logging.getLogger(__name__)

QUAD_ABS_TARGET = 1e-10
QUAD_LIMIT = 1000
TABLE_POINTS = 2001
FOLD_GRID = 1001

# parameters the mean albedo depends on; tables are shared across eta_c, delta and rho
_ALBEDO_KEYS = ("s2", "M", "alpha_w", "alpha_i", "alpha_s", "y_snow")


def alpha2_J(y: float, p: JormungandParams = None) -> float:
    """Ice albedo: bare ice toward the equator, snow poleward of y_snow"""
    p = p or JormungandParams()
    return (p.alpha_s + p.alpha_i) / 2 + (p.alpha_s - p.alpha_i) / 2 * math.tanh(p.M * (y - p.y_snow))


def dalpha2_J(y: float, p: JormungandParams = None) -> float:
    p = p or JormungandParams()
    # sech^2 as 1 - tanh^2; cosh overflows for steep snow lines
    t = math.tanh(p.M * (y - p.y_snow))
    return (p.alpha_s - p.alpha_i) / 2 * p.M * (1 - t * t)


def albedo_J(eta: float, y: float, p: JormungandParams = None) -> float:
    """Open water below the ice line, ice albedo above, their mean on it"""
    p = p or JormungandParams()
    if y < eta:
        return p.alpha_w
    if y > eta:
        return alpha2_J(y, p)
    return (p.alpha_w + alpha2_J(eta, p)) / 2


def _ice_integral(a: float, b: float, p: JormungandParams) -> float:
    """Integral of s*alpha2_J over [a, b], split at the snow line"""
    points = [p.y_snow] if a < p.y_snow < b else None
    result = quad(
        lambda y: insolation(y, p.s2) * alpha2_J(y, p), a, b,
        points=points, epsabs=1e-12, epsrel=1e-12, limit=QUAD_LIMIT, full_output=1,
    )
    value, abserr = result[0], result[1]
    # a fourth element is quad's warning message
    if len(result) > 3 or abserr > QUAD_ABS_TARGET:
        raise QuadratureError(f"quadrature over [{a}, {b}] missed its accuracy target", value, abserr)
    return value


def alpha_bar_J(eta: float, p: JormungandParams = None) -> float:
    """Mean albedo alpha_w*S(eta) + integral of s*alpha2_J over [eta, 1]"""
    p = p or JormungandParams()
    if not 0 <= eta <= 1:
        raise InvalidDomainError(f"alpha_bar_J needs 0 <= eta <= 1, got {eta!r}")
    return p.alpha_w * insolation_integral(eta, p.s2) + _ice_integral(eta, 1.0, p)


def dalpha_bar_J(eta: float, p: JormungandParams = None) -> float:
    """d(alpha_bar_J)/d(eta) = -s(eta)*(alpha2_J(eta) - alpha_w)"""
    p = p or JormungandParams()
    return -insolation(eta, p.s2) * (alpha2_J(eta, p) - p.alpha_w)


class AlbedoMeanTable:
    """
    alpha_bar_J on a cubic Hermite spline

    Knot values are panel quadratures accumulated from eta=1 down; knot
    slopes are the analytic derivative. Agrees with alpha_bar_J to about
    1e-12 on the default grid.
    """

    def __init__(self, p: JormungandParams = None, points: int = TABLE_POINTS):
        if points < 2:
            raise InvalidDomainError(f"need at least 2 table points, got {points}")
        p = p or JormungandParams()
        etas = np.linspace(0.0, 1.0, points)
        tails = np.zeros(points)
        for k in range(points - 2, -1, -1):
            tails[k] = tails[k + 1] + _ice_integral(etas[k], etas[k + 1], p)
        values = np.array([p.alpha_w * insolation_integral(e, p.s2) for e in etas]) + tails
        slopes = np.array([dalpha_bar_J(e, p) for e in etas])
        self._spline = CubicHermiteSpline(etas, values, slopes)
        logger.debug("Built alpha_bar_J table on %d points", points)

    def __call__(self, eta: float) -> float:
        return float(self._spline(eta))


@lru_cache(maxsize=8)
def _cached_table(key: Tuple[float, ...]) -> AlbedoMeanTable:
    return AlbedoMeanTable(JormungandParams(**dict(zip(_ALBEDO_KEYS, key))))


def albedo_mean_table(p: JormungandParams = None) -> AlbedoMeanTable:
    """Shared table for the albedo parameters of `p`"""
    p = p or JormungandParams()
    return _cached_table(tuple(getattr(p, k) for k in _ALBEDO_KEYS))


def _clamp(eta: float) -> float:
    return min(max(eta, 0.0), 1.0)


def _forcing(eta: float, p: JormungandParams, table: Optional[AlbedoMeanTable]) -> float:
    """Q/(B+C)*(absorbed radiation) - Tc, with eta clamped to [0, 1]"""
    e = _clamp(eta)
    abar = table(e) if table is not None else alpha_bar_J(e, p)
    absorbed = insolation(e, p.s2) * (1 - albedo_J(e, e, p)) + p.C / p.B * (1 - abar)
    return p.Q / (p.B + p.C) * absorbed - p.Tc


def h_J(A: float, eta: float, p: JormungandParams = None, table: Optional[AlbedoMeanTable] = None) -> float:
    """
    Ice-line rate with the Jormungand albedo

    eta outside [0, 1] is clamped inside the albedo terms so the field
    stays total for the extension.

    Args:
        A: Reradiation coefficient
        eta: Ice line
        p: Parameters
        table: Spline for alpha_bar_J; direct quadrature when None
    """
    p = p or JormungandParams()
    return p.rho * (_forcing(eta, p, table) - A / p.B)


def nullcline_A_J(eta: float, p: JormungandParams = None, table: Optional[AlbedoMeanTable] = None) -> float:
    """The A with h_J(A, eta) = 0"""
    p = p or JormungandParams()
    return p.B * _forcing(eta, p, table)


def dh_J_deta(eta: float, p: JormungandParams = None) -> float:
    p = p or JormungandParams()
    s = insolation(eta, p.s2)
    ds = 3 * p.s2 * eta
    a2 = alpha2_J(eta, p)
    on_line = (p.alpha_w + a2) / 2
    return p.rho * p.Q / (p.B + p.C) * (
        ds * (1 - on_line)
        - s * dalpha2_J(eta, p) / 2
        + p.C / p.B * s * (a2 - p.alpha_w)
    )


def folds_J(p: JormungandParams = None, grid: int = FOLD_GRID) -> List[float]:
    """Every interior critical point of the nullcline, in increasing eta"""
    p = p or JormungandParams()
    etas = np.linspace(0.0, 1.0, grid)
    slopes = [dh_J_deta(e, p) for e in etas]
    folds = []
    for k in range(1, grid):
        if slopes[k - 1] * slopes[k] < 0:
            folds.append(brentq(dh_J_deta, etas[k - 1], etas[k], args=(p,), xtol=1e-14))
    return folds


def equilibrium_J(p: JormungandParams = None) -> EquilibriumReport:
    """Fixed point at eta = eta_c with its eigenvalues and stability"""
    p = p or JormungandParams()
    return equilibrium_report(
        A_c=nullcline_A_J(p.eta_c, p, albedo_mean_table(p)),
        eta_c=p.eta_c,
        delta=p.delta,
        rho=p.rho,
        B=p.B,
        dh_deta=dh_J_deta(p.eta_c, p),
    )


def as_ice_line_model_J(p: JormungandParams = None, exact: bool = False) -> SmoothField:
    """
    (G, H) = (g, h_J) with x = A and y = eta

    Args:
        p: Parameters
        exact: Integrate alpha_bar_J on every call instead of using the spline
    """
    p = p or JormungandParams()
    table = None if exact else albedo_mean_table(p)
    return SmoothField(
        G=lambda A, eta: g(A, eta, p),
        H=lambda A, eta: h_J(A, eta, p, table),
        lipschitz_hint=p.rho / p.B,
        name=f"jormungand(eta_c={p.eta_c:g})",
    )


@dataclass(frozen=True)
class JormungandModel:
    """Jormungand model as an IceLineModel"""
    params: JormungandParams = JormungandParams()
    name: ClassVar[str] = "jormungand"

    @property
    def table(self) -> AlbedoMeanTable:
        return albedo_mean_table(self.params)

    def field(self) -> SmoothField:
        return as_ice_line_model_J(self.params)

    def h(self, A: float, eta: float) -> float:
        return h_J(A, eta, self.params, self.table)

    def g(self, A: float, eta: float) -> float:
        return g(A, eta, self.params)

    def nullcline_A(self, eta: float) -> float:
        return nullcline_A_J(eta, self.params, self.table)

    def dh_deta(self, eta: float) -> float:
        return dh_J_deta(eta, self.params)

    def equilibrium(self) -> EquilibriumReport:
        return equilibrium_J(self.params)

    def folds(self) -> List[float]:
        return folds_J(self.params)

    def lower_tangency(self) -> float:
        return self.nullcline_A(0.0)

    def upper_tangency(self) -> float:
        return self.nullcline_A(1.0)

    def with_eta_c(self, eta_c: float) -> "JormungandModel":
        return JormungandModel(self.params.with_eta_c(eta_c))
