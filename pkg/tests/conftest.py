import numpy as np
import pytest

import pogorelov as pg


@pytest.fixture(scope="session")
def unit_profile():
    return pg.make_pogorelov_profile(1.0)


@pytest.fixture(scope="session")
def unit_curve(unit_profile):
    return pg.integrate_profile(unit_profile, 0.7)


@pytest.fixture(scope="session")
def field25():
    return pg.make_metric_field(25)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
