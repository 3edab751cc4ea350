import pytest

from core.config import BudykoParams, IntegratorConfig, JormungandParams
from services.budyko import BudykoModel
from services.jormungand import JormungandModel


@pytest.fixture
def cfg():
    return IntegratorConfig()


@pytest.fixture
def budyko():
    """Budyko model at the small-ice-cap default eta_c=0.85"""
    return BudykoModel(BudykoParams())


@pytest.fixture
def budyko_osc():
    """Budyko model at eta_c=0.6, below the fold"""
    return BudykoModel(BudykoParams(eta_c=0.6))


@pytest.fixture
def jormungand():
    return JormungandModel(JormungandParams(eta_c=0.8))


@pytest.fixture
def a_star():
    return 1.5 * 112.88
