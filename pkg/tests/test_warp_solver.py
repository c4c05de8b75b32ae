import csv
import math

import numpy as np
import pytest

import config
import models
from errors import NoPeriodicOrbit, ParamError
from geometry import LocalGeometry
from trig import TrigPolynomial
from warp_solver import (WarpProblem, WarpSolver, base_sphere_radius, first_integral, fixed_point,
                         linearized_period, warped_scal_formula)


def test_closed_forms():
    assert fixed_point(6.0, 2.0) == pytest.approx(1.0 / math.sqrt(3.0))
    assert linearized_period(3, 6.0) == pytest.approx(config.TWO_PI / math.sqrt(3.0))
    assert base_sphere_radius(3, 2.0) == pytest.approx(1.0)
    h = fixed_point(6.0, 2.0)
    assert warped_scal_formula(h, 0.0, 0.0, 3, 2.0) == pytest.approx(6.0)
    assert first_integral(3, 6.0, 2.0, h, 0.0) < 0.0
    with pytest.raises(ParamError):
        first_integral(2, 6.0, 2.0, 1.0, 0.0)
    with pytest.raises(ParamError):
        warped_scal_formula(-1.0, 0.0, 0.0, 3, 2.0)


def test_problem_validation():
    with pytest.raises(ParamError):
        WarpProblem(n=2, scal_target=6.0, scal0=2.0, h0=1.0, dh0=0.0)
    with pytest.raises(ParamError):
        WarpProblem(n=3, scal_target=-1.0, scal0=2.0, h0=1.0, dh0=0.0)
    with pytest.raises(ParamError):
        WarpProblem(n=3, scal_target=6.0, scal0=2.0, h0=0.0, dh0=0.0)


def test_fixed_point_is_a_constant_solution():
    problem = WarpProblem(n=3, scal_target=6.0, scal0=2.0, h0=fixed_point(6.0, 2.0), dh0=0.0)
    solution = WarpSolver(samples=20).solve_h(problem)
    assert solution.constant
    assert solution.period == pytest.approx(linearized_period(3, 6.0))
    assert solution.scal_variation <= 1e-12
    np.testing.assert_allclose(solution.h, 1.0 / math.sqrt(3.0))


def test_periodic_orbit(warp_solution, warp_problem):
    assert not warp_solution.constant
    assert warp_solution.gap <= config.PERIODICITY_TOL
    assert warp_solution.drift <= 1e-10
    assert warp_solution.scal_variation <= config.SCAL_VARIATION_TOL
    assert warp_solution.scal_mean == pytest.approx(6.0, abs=1e-7)
    assert np.all(warp_solution.h > 0.0)
    assert warp_solution.period == pytest.approx(linearized_period(3, 6.0), rel=0.05)
    energy = warp_problem.energy(warp_solution.h, warp_solution.dh)
    np.testing.assert_allclose(energy, warp_solution.energy[0], atol=1e-10)


def test_collapsing_orbit_has_no_period():
    problem = WarpProblem(n=3, scal_target=6.0, scal0=2.0, h0=fixed_point(6.0, 2.0), dh0=3.0)
    with pytest.raises(NoPeriodicOrbit):
        WarpSolver().solve_h(problem)


def test_warped_model_has_the_target_curvature(warped_ode):
    for point in warped_ode.sample(4, 2):
        geo = LocalGeometry(warped_ode.metric, point, order=2)
        assert float(geo.scal.value) == pytest.approx(6.0, abs=config.SCAL_VARIATION_TOL)


def test_formula_matches_engine_on_nonconstant_warp(warped_trig):
    h = warped_trig.warp.h
    for point in warped_trig.sample(5, 3):
        t = point[0]
        engine = float(LocalGeometry(warped_trig.metric, point, order=2).scal.value)
        formula = float(warped_scal_formula(h(t), h.evaluate(t, 1), h.evaluate(t, 2), 3, 2.0))
        assert engine == pytest.approx(formula, abs=1e-9)


@pytest.mark.slow
def test_formula_matches_engine_on_random_warps():
    rng = np.random.default_rng(17)
    for _ in range(10):
        base_dim = int(rng.integers(2, 4))
        radius = float(rng.uniform(0.5, 2.0))
        scal0 = base_dim * (base_dim - 1) / radius ** 2
        h = TrigPolynomial(float(rng.uniform(2.0, 6.0)), float(rng.uniform(1.0, 2.0)),
                           tuple(rng.uniform(-0.2, 0.2, 2)), tuple(rng.uniform(-0.2, 0.2, 2)))
        model = models.warped(models.sphere(base_dim, radius), h, scal0=scal0)
        for point in model.sample(20, int(rng.integers(1000))):
            t = point[0]
            engine = float(LocalGeometry(model.metric, point, order=2).scal.value)
            formula = float(warped_scal_formula(h(t), h.evaluate(t, 1), h.evaluate(t, 2),
                                                base_dim + 1, scal0))
            assert engine == pytest.approx(formula, rel=1e-9, abs=1e-9)


def test_csv_columns(warp_solution, tmp_path):
    path = warp_solution.to_csv(tmp_path / "out" / "warp.csv")
    with path.open() as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["t", "h", "dh", "E"]
    assert len(rows) == config.CSV_SAMPLES + 1
    assert float(rows[-1][0]) == pytest.approx(warp_solution.period)
