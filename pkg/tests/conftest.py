"""
Shared fixtures
"""
from pathlib import Path

import numpy as np
import pytest

from polylift.config import reset_settings
from polylift.models.dsl import parse_dsl
from polylift.models.ode import Monomial, compile_system

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

VANDERPOL_DSL = """\
# Van der Pol oscillator
param omega = 1
param r = 0.6
x1' = x2
x2' = -omega^2*x1 + r*(1 - x1^2)*x2
"""


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees default settings unless it overrides them"""
    for name in ("MAX_INDEX_SPACE", "OVERFLOW_THRESHOLD", "SOUNDNESS_ATOL", "LOG_LEVEL"):
        monkeypatch.delenv(f"POLYLIFT_{name}", raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def vanderpol():
    return parse_dsl(VANDERPOL_DSL).compile()


@pytest.fixture
def vanderpol_x0():
    return np.array([0.0, 0.5])


@pytest.fixture
def config_dir() -> Path:
    return CONFIG_DIR


def scalar_system(*coeffs: float):
    """x' = coeffs[0] x + coeffs[1] x^2 + ..."""
    terms = [Monomial(c, (j,)) for j, c in enumerate(coeffs, start=1) if c != 0.0]
    return compile_system([terms], 1)


@pytest.fixture
def logistic():
    """x' = -x + x^2"""
    return scalar_system(-1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
