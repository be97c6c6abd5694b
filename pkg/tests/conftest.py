# -*- coding: utf-8 -*-
import numpy as np
import pytest

from setfn.config import get_settings
from setfn.generators import power_of_measure
from setfn.lorentz import StepFunction
from setfn.setfunctions import SetFunction


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    for name in ("SETFN_WORKERS", "SETFN_TOL", "SETFN_C_STAR", "SETFN_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def uniform_measure():
    return power_of_measure(np.full(3, 1.0 / 3.0), 1.0)


@pytest.fixture
def two_step():
    """f* = 2 on [0, 1), 1 on [1, 2)"""
    return StepFunction(steps=[(2.0, 1.0), (1.0, 1.0)])


@pytest.fixture
def not_monotone():
    return SetFunction(n=2, values=[0.0, 1.0, 0.5, 0.2])
