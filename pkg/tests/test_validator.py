import pytest

import config
import models
from errors import ModelError
from validator import KidValidator, sigma_residual

SAMPLES = 12


@pytest.fixture(scope="module")
def sphere_validator(sphere3):
    return KidValidator.sampled(sphere3.metric, sphere3.descriptor, SAMPLES, 7)


def test_sigma1_on_sphere_passes(sphere_validator, obata):
    report = sphere_validator.sigma_residual("sigma1", obata)
    assert report.verdict
    assert report.sup_norm <= config.SPHERE_KID_TOL
    assert report.sample_count == SAMPLES
    assert set(report.equation_sup) == {"first", "second"}
    assert report.seed == 7


def test_perturbed_lapse_fails(sphere3, sphere_validator, obata):
    report = sphere_validator.sigma_residual("sigma1", models.perturb_kid(sphere3, obata))
    assert not report.verdict
    assert report.sup_norm > config.NEGATIVE_CONTROL_FLOOR


def test_sigma1_on_warped_product(warped_ode):
    kid = models.warp_kid(warped_ode, 0.7)
    points = warped_ode.sample(SAMPLES, 7)
    report = sigma_residual("sigma1", warped_ode.metric, kid, points, config.WARP_KID_TOL,
                            warped_ode.descriptor)
    assert report.verdict, report.summary()


def test_kernel_forms_agree_on_obata(sphere_validator, obata):
    report = sphere_validator.compare_kernel_forms(obata)
    assert report.verdict
    assert report.details["agree"] is True


def test_umbilical_constraints(sphere_validator, obata):
    assert sphere_validator.umbilical_constraints(obata.c).verdict


def test_closed_conformal_identities_on_sphere(sphere3, sphere_validator):
    alpha, psi = sphere3.closed_conformal_pair()
    assert sphere_validator.lemma1(alpha, psi).sup_norm <= config.IDENTITY_TOL
    assert sphere_validator.lemma2(alpha, psi).verdict
    assert sphere_validator.constant_scal_variant(alpha, psi).verdict
    assert sphere_validator.conformal_premise(alpha, psi).verdict
    assert sphere_validator.scal_flow(alpha, psi).verdict


def test_constant_scal_variant_needs_constant_scal(warped_trig):
    validator = KidValidator.sampled(warped_trig.metric, warped_trig.descriptor, SAMPLES, 7)
    alpha, psi = warped_trig.closed_conformal_pair()
    assert validator.lemma2(alpha, psi).verdict
    assert not validator.constant_scal_variant(alpha, psi).verdict


def test_hessian_divergence_negative_control(random3):
    validator = KidValidator.sampled(random3.metric, random3.descriptor, SAMPLES, 7)
    trial = random3.scalar("trial")
    assert validator.hessian_divergence(trial).verdict
    assert not validator.hessian_divergence(trial, "flipped").verdict
    with pytest.raises(ValueError):
        validator.hessian_divergence(trial, "sideways")


def test_structure_checks_on_sphere(sphere_validator):
    bundle = sphere_validator.structure_checks()
    assert bundle.scal_mean == pytest.approx(6.0, abs=1e-10)
    assert bundle.scal_positive
    assert all(report.verdict for report in bundle.reports())


def test_structure_checks_on_random_torus(random3):
    bundle = KidValidator.sampled(random3.metric, random3.descriptor, SAMPLES, 7).structure_checks()
    assert bundle.bianchi.verdict
    assert bundle.bianchi.sup_norm <= config.BIANCHI_TOL
    assert not bundle.scal_variation.verdict


def test_chart_mismatch(torus3, obata):
    validator = KidValidator.sampled(torus3.metric, torus3.descriptor, SAMPLES, 7)
    with pytest.raises(ModelError):
        validator.sigma_residual("sigma1", obata)


@pytest.mark.parametrize("radius", [1.0, 2.0])
def test_obata_equation_scales_with_the_radius(radius):
    sphere = models.sphere(3, radius)
    validator = KidValidator.sampled(sphere.metric, sphere.descriptor, SAMPLES, 7)
    assert validator.obata(sphere.scalar("x1"), config.IDENTITY_TOL).verdict
    shifted = validator.obata(sphere.scalar("x1") + 0.5, config.IDENTITY_TOL)
    assert not shifted.verdict
    assert shifted.sup_norm > 1e-3
