import sys
from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from softscat.config import preset_config
from softscat.experiment import run_experiment
from softscat.forward import evaluate_nearfield, solve_forward
from softscat.geometry import make_shape, source_circle

settings.register_profile("suite", deadline=None, max_examples=25)
settings.load_profile("suite")

K = 4.0
RADIUS = 5.0
N = 64


@pytest.fixture(scope="session")
def gamma():
    return source_circle(RADIUS, N)


@pytest.fixture(scope="session")
def forward_case(gamma):
    """Memoized noiseless forward solutions keyed by shape name."""
    cache = {}

    def get(shape_name):
        if shape_name not in cache:
            shape = make_shape(shape_name)
            sol = solve_forward(shape, gamma, K)
            cache[shape_name] = (shape, sol, evaluate_nearfield(sol, gamma))
        return cache[shape_name]

    return get


@pytest.fixture(scope="session")
def pipeline():
    """Memoized full experiment runs keyed by preset name and overrides."""
    cache = {}

    def get(preset, **overrides):
        key = (preset, tuple(sorted(overrides.items())))
        if key not in cache:
            config = preset_config(preset)
            if overrides:
                config = replace(config, **overrides)
            cache[key] = run_experiment(config)
        return cache[key]

    return get
