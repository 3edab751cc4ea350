"""
IceLine Core Package
Filippov integrator, configuration, events and orchestration
"""
from .controller import IceLineController
from .config import RunConfig, IntegratorConfig, load_run_config, save_run_config
from .events import EventEmitter, Event, EventKind
from .filippov import FilippovIntegrator, PlanarState, SmoothField, Trajectory

__all__ = [
    'IceLineController',
    'RunConfig',
    'IntegratorConfig',
    'load_run_config',
    'save_run_config',
    'EventEmitter',
    'Event',
    'EventKind',
    'FilippovIntegrator',
    'PlanarState',
    'SmoothField',
    'Trajectory'
]
