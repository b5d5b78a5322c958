"""Pytest configuration and fixtures."""
import numpy as np
import pytest

from core.config import settings
from models.domain import QGaussianParams
from services.qgaussian import make_params

SEED = 12345


@pytest.fixture
def standard() -> QGaussianParams:
    """N_1(0, 1)."""
    return make_params(1.0)


@pytest.fixture
def cauchy() -> QGaussianParams:
    """N_2(0, 1), the standard Cauchy law."""
    return make_params(2.0)


@pytest.fixture
def heavy() -> QGaussianParams:
    """N_1.3(0.7, 1.3): finite fourth moment, non-trivial location and scale."""
    return make_params(1.3, 0.7, 1.3)


@pytest.fixture
def compact() -> QGaussianParams:
    """N_0.5(0.7, 1.3), with compact support."""
    return make_params(0.5, 0.7, 1.3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def fixed_seed(monkeypatch):
    """Pin the default seed every command and experiment falls back to."""
    monkeypatch.setattr(settings, "seed", SEED)
    return SEED
