"""
IceLine Controller
Resolves a RunConfig into a model and integrator and runs the experiments
the command line exposes
"""
import logging
from typing import List, Optional

from .config import RunConfig, IntegratorConfig, ClimateParams
from .events import EventEmitter
from .filippov import FilippovIntegrator, PlanarState, Trajectory

logger = logging.getLogger(__name__)


class IceLineController:
    """
    Central controller for one run configuration

    Responsibilities:
    - Build the model named in the config with its parameter overrides
    - Integrate trajectories, sweep eta_c, tabulate nullclines
    - Hand results to the export service
    """

    def __init__(self, config: RunConfig = None, emitter: EventEmitter = None):
        self.config = config or RunConfig()
        self.emitter = emitter or EventEmitter()

        # lazy loaded
        self._model = None
        self._integrator_config: Optional[IntegratorConfig] = None

    # ==================== Service Accessors ====================

    @property
    def params(self) -> ClimateParams:
        return self.model.params

    @property
    def integrator_config(self) -> IntegratorConfig:
        if self._integrator_config is None:
            self._integrator_config = self.config.integrator_config()
        return self._integrator_config

    @property
    def model(self):
        """Lazy load the configured IceLineModel"""
        if self._model is None:
            params = self.config.model_params()
            if self.config.model == "jormungand":
                from services.jormungand import JormungandModel
                self._model = JormungandModel(params)
            else:
                from services.budyko import BudykoModel
                self._model = BudykoModel(params)
            logger.debug("Model %s with %s", self._model.name, params)
        return self._model

    def exporter(self, prefix: str):
        from services.exporter import ExportService
        return ExportService(prefix)

    # ==================== Runs ====================

    def initial_state(self) -> PlanarState:
        ic = self.config.resolved().ic
        return PlanarState(ic["A"], ic["eta"])

    def simulate(self) -> Trajectory:
        """Integrate from the configured initial condition to t_max"""
        integrator = FilippovIntegrator(
            self.model.field(),
            self.integrator_config,
            emitter=self.emitter,
            section=self.config.section_eta,
        )
        trajectory = integrator.integrate(self.initial_state(), self.config.t_max, self.config.dt_out)
        logger.info(
            "Simulated %s to t=%g: %d samples, %d events",
            self.model.name, trajectory.final.t, len(trajectory.samples), len(trajectory.events)
        )
        return trajectory

    def sweep(self, progress: bool = False) -> List:
        from services.sweep import eta_c_grid, sweep_eta_c
        s = self.config.sweep
        grid = eta_c_grid(s.eta_c_min, s.eta_c_max, s.steps)
        return sweep_eta_c(self.model, grid, self.integrator_config, jobs=s.jobs, progress=progress)

    def nullcline(self) -> List:
        from services.analysis import nullcline_curve
        return nullcline_curve(self.model, self.config.samples)

    def equilibrium(self):
        return self.model.equilibrium()
