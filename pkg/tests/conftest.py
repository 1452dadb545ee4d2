"""Shared fixtures."""
import numpy as np
import pytest

from src.core.models import HeatParams, MarketParams, RCDParams


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def market() -> MarketParams:
    return MarketParams(mu=0.10, r=0.05, sigma=0.2, T=1.0, x0=1.0)


@pytest.fixture
def rcd() -> RCDParams:
    return RCDParams(r=0.05, sigma=0.2)


@pytest.fixture
def heat() -> HeatParams:
    return HeatParams(k=1.0)


@pytest.fixture
def no_settings(tmp_path):
    """Path of a settings file that does not exist, so built-in defaults apply."""
    return str(tmp_path / "missing-settings.yaml")


@pytest.fixture(autouse=True)
def _clear_lab_env(monkeypatch):
    for name in ("LAB_OUTPUT_DIR", "LAB_LOG_LEVEL", "LAB_SEED"):
        monkeypatch.delenv(name, raising=False)
