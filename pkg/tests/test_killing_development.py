import numpy as np
import pytest

import config
import models
from errors import DegenerateError, NonConstantError
from fields import Signature
from killing_development import (admissible_points, determinant_identity, develop, einstein_residual,
                                 is_stationary, slice_matches, slice_restriction, staticity_residual)

SAMPLES = 15


@pytest.fixture(scope="module")
def de_sitter(sphere3, obata):
    return develop(sphere3, obata, samples=SAMPLES)


def test_de_sitter_constants(de_sitter):
    assert de_sitter.lam == pytest.approx(6.0, abs=1e-8)
    assert de_sitter.einstein_constant == pytest.approx(6.0, abs=1e-8)
    assert de_sitter.metric.signature is Signature.LORENTZIAN
    assert de_sitter.metric.dim == 4
    assert de_sitter.descriptor == "develop[sphere:n=3,r=1|obata:i=4,c=1]"


def test_de_sitter_is_einstein_and_static(de_sitter):
    points = de_sitter.sample(SAMPLES, 5)
    einstein = einstein_residual(de_sitter, points, seed=5)
    assert einstein.verdict
    assert einstein.sup_norm <= config.EINSTEIN_TOL
    assert einstein.details["lambda"] == pytest.approx(6.0)
    staticity = staticity_residual(de_sitter, points, seed=5)
    assert staticity.sup_norm <= config.STATICITY_TOL


def test_structural_checks(de_sitter, sphere3):
    assert slice_matches(de_sitter)
    assert is_stationary(de_sitter)
    assert slice_restriction(de_sitter).chart == sphere3.chart
    assert determinant_identity(de_sitter, de_sitter.sample(SAMPLES, 5)) <= config.DETERMINANT_TOL


def test_lapse_floor_excludes_points(de_sitter):
    points = de_sitter.sample(40, 9)
    kept, notes = admissible_points(de_sitter, points)
    assert all(abs(de_sitter.lapse(p)) >= de_sitter.f_floor for p in kept)
    excluded = int(notes[0].split()[1]) if notes else 0
    assert len(kept) + excluded == len(points)
    near_equator = np.array([[0.0, 0.0, 0.0, 1.0]])
    with pytest.raises(DegenerateError):
        admissible_points(de_sitter, near_equator)


def test_shift_perturbation_breaks_staticity(sphere3, obata):
    lm = develop(sphere3, models.perturb_shift(sphere3, obata, amplitude=0.2), samples=SAMPLES)
    assert staticity_residual(lm, lm.sample(SAMPLES, 5), seed=5).sup_norm > 1e-4


@pytest.mark.slow
def test_warped_development(warped_ode):
    lm = develop(warped_ode, models.warp_kid(warped_ode, 0.7), samples=SAMPLES)
    assert lm.lam == pytest.approx(0.5 * (6.0 + 6.0 * 0.49), abs=1e-6)
    points = lm.sample(SAMPLES, 5)
    assert einstein_residual(lm, points, config.WARPED_EINSTEIN_TOL, 5).verdict
    assert staticity_residual(lm, points, seed=5).sup_norm <= config.STATICITY_TOL


def test_constancy_and_degeneracy_errors(sphere3, warped_trig):
    with pytest.raises(NonConstantError):
        develop(sphere3, models.nonconstant_c_kid(sphere3, 1), samples=SAMPLES)
    with pytest.raises(NonConstantError):
        develop(warped_trig, models.warp_kid(warped_trig, 0.5), samples=SAMPLES)
    with pytest.raises(DegenerateError):
        develop(sphere3, models.killing_kid(sphere3, "rot12", 1.0), samples=SAMPLES)
