"""Shared fixtures: small models, KIDs and one solved warp factor."""

import pytest

import config
import models
from run_config import build_run_config
from trig import TrigPolynomial
from warp_solver import WarpProblem, WarpSolver, fixed_point, warped_from_solution

SAMPLES = 12
SEED = 7


@pytest.fixture(scope="session")
def sphere3():
    return models.sphere(3, 1.0)


@pytest.fixture(scope="session")
def torus3():
    return models.flat_torus(3, config.TWO_PI)


@pytest.fixture(scope="session")
def random3():
    return models.random_model(3, config.TWO_PI, 0.1, 3)


@pytest.fixture(scope="session")
def obata(sphere3):
    return models.obata_kid(sphere3, 4, 1.0)


@pytest.fixture(scope="session")
def warped_trig():
    """a0 + amp cos t over the unit 2-sphere; Scal is not constant."""
    h = TrigPolynomial.cosine(0.3, 1, config.TWO_PI, 1.5)
    return models.warped(models.sphere(2, 1.0), h, scal0=2.0)


@pytest.fixture(scope="session")
def warp_problem():
    return WarpProblem(n=3, scal_target=6.0, scal0=2.0, h0=fixed_point(6.0, 2.0), dh0=0.1)


@pytest.fixture(scope="session")
def warp_solution(warp_problem):
    return WarpSolver().solve_h(warp_problem)


@pytest.fixture(scope="session")
def warped_ode(warp_solution):
    return warped_from_solution(warp_solution, "warped:ode,n=3,scal=6,dh0=0.1")


@pytest.fixture(scope="session")
def product3():
    return models.product(3, config.TWO_PI)


@pytest.fixture
def make_config():
    """RunConfig with small sample counts unless overridden."""
    def build(**fields):
        fields.setdefault("samples", SAMPLES)
        fields.setdefault("seed", SEED)
        return build_run_config(fields)
    return build
