"""
IceLine Services Package
Climate models and the experiments run on them
"""
# Models
from .model import IceLineModel, EquilibriumReport, Stability
from .budyko import BudykoModel
from .jormungand import JormungandModel

# Experiments
from .analysis import (
    ExitReport,
    PeriodicOrbitReport,
    SlidingSegment,
    snowball_exit_experiment,
    detect_periodic_orbit,
    sliding_segments,
    nullcline_curve,
)
from .sweep import Attractor, BifurcationRow, sweep_eta_c
from .exporter import ExportService, ExportResult

__all__ = [
    'IceLineModel',
    'EquilibriumReport',
    'Stability',
    'BudykoModel',
    'JormungandModel',

    'ExitReport',
    'PeriodicOrbitReport',
    'SlidingSegment',
    'snowball_exit_experiment',
    'detect_periodic_orbit',
    'sliding_segments',
    'nullcline_curve',
    'Attractor',
    'BifurcationRow',
    'sweep_eta_c',
    'ExportService',
    'ExportResult'
]
