"""
Budyko ice-line model
Step albedo, the tabulated cubic h(A, eta), the greenhouse equation
g(A, eta) = delta*(eta - eta_c) and the fixed-point analysis built on them
"""
import logging
from dataclasses import dataclass
from typing import ClassVar, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from core.config import BudykoParams, ClimateParams
from core.errors import NoFoldError
from core.filippov import SmoothField
from .model import EquilibriumReport, equilibrium_report

logger = logging.getLogger(__name__)

# h(A, eta) = rho*(c0 + c1*eta + c2*eta^2 + c3*eta^3 - A/A_SCALE)
H_COEFFS: Tuple[float, float, float, float] = (112.88, 56.91, -24.31, -11.05)
A_SCALE = 1.5


def insolation(y: float, s2: float = -0.482) -> float:
    """Annual mean insolation distribution s(y) = 1 + (s2/2)(3y^2 - 1)"""
    return 1 + s2 / 2 * (3 * y * y - 1)


def insolation_integral(eta: float, s2: float = -0.482) -> float:
    """S(eta), the integral of s over [0, eta]"""
    return eta + s2 / 2 * (eta ** 3 - eta)


def albedo(eta: float, y: float, p: ClimateParams = None) -> float:
    """alpha1 below the ice line, alpha2 above, their mean on it"""
    p = p or BudykoParams()
    if y < eta:
        return p.alpha1
    if y > eta:
        return p.alpha2
    return (p.alpha1 + p.alpha2) / 2


def alpha_bar(eta: float, p: BudykoParams = None) -> float:
    """Insolation-weighted mean albedo; eta outside [0, 1] is clamped"""
    p = p or BudykoParams()
    if not 0 <= eta <= 1:
        logger.warning("alpha_bar: eta=%g outside [0, 1], clamping", eta)
        eta = min(max(eta, 0.0), 1.0)
    S = insolation_integral(eta, p.s2)
    return p.alpha1 * S + p.alpha2 * (1 - S)


def h_poly(A: float, eta: float, rho: float = 1.0) -> float:
    """Tabulated cubic for h; the one every Budyko simulation uses"""
    c0, c1, c2, c3 = H_COEFFS
    return rho * (c0 + eta * (c1 + eta * (c2 + eta * c3)) - A / A_SCALE)


def h_constructed(A: float, eta: float, p: BudykoParams = None) -> float:
    """h built from insolation and albedo; a diagnostic next to h_poly"""
    p = p or BudykoParams()
    absorbed = (
        insolation(eta, p.s2) * (1 - albedo(eta, eta, p))
        + p.C / p.B * (1 - alpha_bar(eta, p))
    )
    return p.rho * (p.Q / (p.B + p.C) * absorbed - A / p.B - p.Tc)


@dataclass(frozen=True)
class ConstructedFit:
    """Cubic in eta fitted to h_constructed and its offset from H_COEFFS"""
    coefficients: Tuple[float, float, float, float]  # c0..c3
    residual: Tuple[float, float, float, float]  # H_COEFFS - coefficients

    @property
    def constant_residual(self) -> float:
        return self.residual[0]

    def relative_error(self, power: int) -> float:
        return abs(self.residual[power] / H_COEFFS[power])


def h_constructed_fit(p: BudykoParams = None, samples: int = 201) -> ConstructedFit:
    """
    Fit a cubic in eta to the A-independent part of h_constructed

    The fitted constant term does not match the tabulated one for the
    default parameters; the offset is returned and logged, never absorbed.
    """
    p = p or BudykoParams()
    etas = np.linspace(0.0, 1.0, samples)
    values = np.array([h_constructed(0.0, e, p) / p.rho for e in etas])
    # polyfit returns the highest power first
    coefficients = tuple(float(c) for c in np.polyfit(etas, values, 3)[::-1])
    residual = tuple(t - c for t, c in zip(H_COEFFS, coefficients))
    logger.info(
        "h_constructed fit: coefficients=%s, residual vs table=%s",
        ["%.4f" % c for c in coefficients], ["%.4f" % r for r in residual]
    )
    return ConstructedFit(coefficients, residual)


def g(A: float, eta: float, p: ClimateParams = None) -> float:
    """Greenhouse equation delta*(eta - eta_c); does not depend on A"""
    p = p or BudykoParams()
    return p.delta * (eta - p.eta_c)


def nullcline_A(eta: float) -> float:
    """The A with h_poly(A, eta) = 0"""
    return A_SCALE * h_poly(0.0, eta)


def dh_deta(eta: float, rho: float = 1.0) -> float:
    c0, c1, c2, c3 = H_COEFFS
    return rho * (c1 + 2 * c2 * eta + 3 * c3 * eta * eta)


def fold(coeffs: Optional[Sequence[float]] = None) -> float:
    """
    Fold of the nullcline: root of its eta-derivative in (0, 1)

    Raises:
        NoFoldError: if the derivative keeps one sign on [0, 1]
    """
    _, c1, c2, c3 = coeffs if coeffs is not None else H_COEFFS

    def slope(eta: float) -> float:
        return c1 + 2 * c2 * eta + 3 * c3 * eta * eta

    if slope(0.0) * slope(1.0) > 0:
        raise NoFoldError(f"nullcline slope has no sign change on [0, 1] for coefficients {coeffs}")
    return brentq(slope, 0.0, 1.0, xtol=1e-14)


def equilibrium(p: BudykoParams = None) -> EquilibriumReport:
    """Fixed point at eta = eta_c with its eigenvalues and stability"""
    p = p or BudykoParams()
    return equilibrium_report(
        A_c=nullcline_A(p.eta_c),
        eta_c=p.eta_c,
        delta=p.delta,
        rho=p.rho,
        B=A_SCALE,
        dh_deta=dh_deta(p.eta_c, p.rho),
    )


def as_ice_line_model(p: BudykoParams = None) -> SmoothField:
    """(G, H) = (g, h_poly) with x = A and y = eta"""
    p = p or BudykoParams()
    rho, delta, eta_c = p.rho, p.delta, p.eta_c
    return SmoothField(
        G=lambda A, eta: delta * (eta - eta_c),
        H=lambda A, eta: h_poly(A, eta, rho),
        lipschitz_hint=rho / A_SCALE,
        name=f"budyko(eta_c={eta_c:g})",
    )


@dataclass(frozen=True)
class BudykoModel:
    """Budyko model as an IceLineModel"""
    params: BudykoParams = BudykoParams()
    name: ClassVar[str] = "budyko"

    def field(self) -> SmoothField:
        return as_ice_line_model(self.params)

    def h(self, A: float, eta: float) -> float:
        return h_poly(A, eta, self.params.rho)

    def g(self, A: float, eta: float) -> float:
        return g(A, eta, self.params)

    def nullcline_A(self, eta: float) -> float:
        return nullcline_A(eta)

    def dh_deta(self, eta: float) -> float:
        return dh_deta(eta, self.params.rho)

    def equilibrium(self) -> EquilibriumReport:
        return equilibrium(self.params)

    def folds(self) -> List[float]:
        return [fold()]

    def lower_tangency(self) -> float:
        return nullcline_A(0.0)

    def upper_tangency(self) -> float:
        return nullcline_A(1.0)

    def with_eta_c(self, eta_c: float) -> "BudykoModel":
        return BudykoModel(self.params.with_eta_c(eta_c))
