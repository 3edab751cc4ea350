"""
Configuration management for IceLine
Parameter records, integrator settings and the JSON run configuration
"""
import json
import math
from dataclasses import dataclass, field, asdict, fields, replace
from pathlib import Path
from typing import Optional, Dict, Any, Type, Union

from .errors import ConfigError


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and limits for the Filippov integrator"""
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    boundary_tol: float = 1e-10  # |y - y_b| band treated as "on the boundary"
    tangency_tol: float = 1e-9  # |H| band treated as tangency, in H units
    max_step: float = 100.0
    max_slide_time: float = 1e5  # 1000 / delta for the default delta

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "boundary_tol", "tangency_tol",
                     "max_step", "max_slide_time"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"integrator.{name} must be a positive finite number, got {value!r}")
        if self.boundary_tol > 10 * self.abs_tol:
            raise ConfigError(
                f"boundary_tol={self.boundary_tol!r} exceeds 10*abs_tol={10 * self.abs_tol!r}"
            )


@dataclass(frozen=True)
class ClimateParams:
    """Parameters shared by the Budyko and Jormungand ice-line models"""
    Q: float = 321.0  # W m^-2
    s2: float = -0.482
    B: float = 1.5  # W m^-2 K^-1
    C: float = 3.75  # 2.5 * B
    Tc: float = -10.0  # degC
    rho: float = 1.0  # ice-line relaxation rate
    delta: float = 0.01  # greenhouse rate scale
    eta_c: float = 0.85  # volcanism / weathering

    def __post_init__(self):
        for name in ("Q", "B", "C", "rho", "delta"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)!r}")
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ConfigError(f"{f.name} must be finite, got {value!r}")

    def with_eta_c(self, eta_c: float):
        return replace(self, eta_c=float(eta_c))

    def with_rates(self, volcanism: float, weathering: float):
        """Set eta_c from the volcanism and weathering rates"""
        return self.with_eta_c(eta_c_from_rates(volcanism, weathering))


@dataclass(frozen=True)
class BudykoParams(ClimateParams):
    """Budyko step-albedo model"""
    alpha1: float = 0.32  # ice free
    alpha2: float = 0.62  # ice covered

    def __post_init__(self):
        super().__post_init__()
        if not (0 <= self.alpha1 < self.alpha2 <= 1):
            raise ConfigError(
                f"need 0 <= alpha1 < alpha2 <= 1, got alpha1={self.alpha1!r}, alpha2={self.alpha2!r}"
            )


@dataclass(frozen=True)
class JormungandParams(ClimateParams):
    """Jormungand albedo: open water, bare ice and snow-covered ice"""
    Tc: float = 0.0
    M: float = 25.0
    alpha_w: float = 0.35
    alpha_i: float = 0.45
    alpha_s: float = 0.8
    y_snow: float = 0.35  # sea ice is snow covered above this latitude

    def __post_init__(self):
        super().__post_init__()
        if not (self.alpha_w < self.alpha_i < self.alpha_s):
            raise ConfigError(
                "need alpha_w < alpha_i < alpha_s, got "
                f"{self.alpha_w!r}, {self.alpha_i!r}, {self.alpha_s!r}"
            )
        if not self.M > 0:
            raise ConfigError(f"M must be > 0, got {self.M!r}")


MODEL_PARAMS: Dict[str, Type[ClimateParams]] = {
    "budyko": BudykoParams,
    "jormungand": JormungandParams,
}


def eta_c_from_rates(volcanism: float, weathering: float) -> float:
    """eta_c = V / W"""
    if not weathering > 0:
        raise ConfigError(f"weathering rate must be > 0, got {weathering!r}")
    if volcanism < 0:
        raise ConfigError(f"volcanism rate must be >= 0, got {volcanism!r}")
    return volcanism / weathering


@dataclass
class SweepConfig:
    """eta_c grid for bifurcation sweeps"""
    eta_c_min: float = 0.5
    eta_c_max: float = 0.9
    steps: int = 5
    jobs: int = 1


@dataclass
class RunConfig:
    """Everything a CLI run needs, as one JSON document"""
    model: str = "budyko"
    params: Dict[str, float] = field(default_factory=dict)  # overrides
    integrator: Dict[str, float] = field(default_factory=dict)  # overrides
    ic: Dict[str, float] = field(default_factory=lambda: {"A": 210.0, "eta": 0.95})
    t_max: float = 5000.0
    dt_out: float = 1.0
    seed: Optional[int] = None
    section_eta: Optional[float] = None
    samples: int = 101
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def __post_init__(self):
        if self.model not in MODEL_PARAMS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {sorted(MODEL_PARAMS)}")
        _check_keys("params", self.params, MODEL_PARAMS[self.model])
        _check_keys("integrator", self.integrator, IntegratorConfig)
        unknown = set(self.ic) - {"A", "eta"}
        if unknown:
            raise ConfigError(f"unknown key(s) in ic: {sorted(unknown)}")
        if not (math.isfinite(self.t_max) and self.t_max >= 0):
            raise ConfigError(f"t_max must be >= 0, got {self.t_max!r}")
        if not self.dt_out > 0:
            raise ConfigError(f"dt_out must be > 0, got {self.dt_out!r}")

    def model_params(self) -> ClimateParams:
        return MODEL_PARAMS[self.model](**self.params)

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(**self.integrator)

    def resolved(self) -> "RunConfig":
        """Copy with params, integrator and ic filled in from defaults"""
        return replace(
            self,
            params=asdict(self.model_params()),
            integrator=asdict(self.integrator_config()),
            ic={"A": float(self.ic.get("A", 210.0)), "eta": float(self.ic.get("eta", 0.95))},
            sweep=replace(self.sweep),
        )


def _check_keys(section: str, data: Dict[str, Any], record: type) -> None:
    allowed = {f.name for f in fields(record)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {sorted(unknown)}")


def run_config_from_dict(data: Dict[str, Any]) -> RunConfig:
    """Build a RunConfig from a parsed JSON document; unknown keys are fatal"""
    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object")
    _check_keys("config", data, RunConfig)
    data = dict(data)
    sweep = data.pop("sweep", {}) or {}
    if not isinstance(sweep, dict):
        raise ConfigError("sweep must be a JSON object")
    _check_keys("sweep", sweep, SweepConfig)
    try:
        return RunConfig(sweep=SweepConfig(**sweep), **data)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Load a run configuration from a JSON file"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e}") from e
    return run_config_from_dict(data)


def dump_config(config: RunConfig) -> str:
    """Canonical serialization of the effective configuration"""
    return json.dumps(asdict(config.resolved()), indent=2, sort_keys=True) + "\n"


def save_run_config(config: RunConfig, path: Union[str, Path]) -> None:
    """Save the effective configuration to a file"""
    Path(path).write_text(dump_config(config), encoding='utf-8')


def update_config(config: RunConfig, updates: Dict[str, Any]) -> RunConfig:
    """
    Apply dotted-key overrides such as {'params.eta_c': 0.6, 't_max': 100}

    None values are skipped so unset command-line flags leave the file
    values alone.
    """
    data = asdict(config)
    for key, value in updates.items():
        if value is None:
            continue
        parts = key.split('.')
        target = data
        for part in parts[:-1]:
            target = target.setdefault(part, {})
        target[parts[-1]] = value
    return run_config_from_dict(data)
