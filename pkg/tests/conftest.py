"""Shared fixtures: built-in models and their assembled scale functions.

Everything heavy (root finding, partial fractions) is computed once per
session; the benchmark discount rate is q = 0.05 throughout.
"""
import pytest

from phscale.models import builtin_model
from phscale.scale import build_scale

Q = 0.05
MODEL_NAMES = ("exp1", "weibull-fit", "pareto-fit")
SIGMAS = (0.0, 1.0)


@pytest.fixture(scope="session")
def models():
    """{(name, sigma): SnLevyModel} for the three built-in jump laws."""
    return {
        (name, sigma): builtin_model(name, sigma=sigma)
        for name in MODEL_NAMES
        for sigma in SIGMAS
    }


@pytest.fixture(scope="session")
def scales(models):
    """{(name, sigma): ScaleFunction} at q = 0.05."""
    return {key: build_scale(model, Q) for key, model in models.items()}
