import math

import numpy as np
import pytest

import config
import models
from errors import ModelError, ParamError
from trig import TrigPolynomial
from validator import KidValidator


def test_sphere_descriptor_and_parameters():
    assert models.sphere(3, 1.0).descriptor == "sphere:n=3,r=1"
    assert models.sphere(2, 0.5, "south").descriptor == "sphere:n=2,r=0.5,chart=south"
    with pytest.raises(ParamError):
        models.sphere(1, 1.0)
    with pytest.raises(ParamError):
        models.sphere(3, -1.0)
    with pytest.raises(ParamError):
        models.sphere(3, 1.0, "east")


def test_ambient_coordinates_lie_on_the_sphere():
    sphere = models.sphere(3, 2.0)
    for point in sphere.sample(6, 1):
        ambient = [float(sphere.scalar(f"x{i}").value(point)) for i in range(1, 5)]
        assert math.fsum(x * x for x in ambient) == pytest.approx(4.0, abs=1e-12)


def test_chart_transition_maps_ambient_coordinates():
    north, south = models.sphere(3, 1.5), models.sphere(3, 1.5, "south")
    point = np.array([0.4, -0.3, 0.9])
    image = models.sphere_chart_transition(point, 1.5)
    for i in range(1, 5):
        assert float(south.scalar(f"x{i}").value(image)) == pytest.approx(
            float(north.scalar(f"x{i}").value(point)), abs=1e-12)
    with pytest.raises(ParamError):
        models.sphere_chart_transition([0.0, 0.0, 0.0], 1.0)


def test_closed_conformal_pair(sphere3, warped_trig, torus3):
    alpha, psi = sphere3.closed_conformal_pair()
    assert alpha is sphere3.oneform("dx4")
    alpha, psi = warped_trig.closed_conformal_pair()
    assert psi is warped_trig.scalar("dh")
    with pytest.raises(ModelError):
        torus3.closed_conformal_pair()


def test_named_field_lookup_fails_loudly(sphere3):
    with pytest.raises(ModelError, match="available"):
        sphere3.scalar("x9")
    with pytest.raises(ModelError):
        sphere3.oneform("rot34")


def test_obata_kid(sphere3, torus3):
    kid = models.obata_kid(models.sphere(3, 2.0), 2, 0.5)
    assert kid.label == "obata:i=2,c=0.5"
    with pytest.raises(ParamError):
        models.obata_kid(sphere3, 4, 0.0)
    with pytest.raises(ParamError):
        models.obata_kid(sphere3, 5, 1.0)
    with pytest.raises(ParamError):
        models.obata_kid(torus3, 1, 1.0)


def test_warp_kid_on_any_warp_factor(warped_trig):
    kid = models.warp_kid(warped_trig, -0.4)
    assert kid.label == "warp:c=-0.4"


def test_random_metric_limits():
    with pytest.raises(ParamError):
        models.random_analytic_metric(3, config.TWO_PI, 0.5, 1)
    metric = models.random_analytic_metric(3, config.TWO_PI, 0.25, 1)
    metric.check_samples(metric.chart.sample(20, 2))


def test_warp_factor_must_stay_positive():
    h = TrigPolynomial.cosine(2.0, 1, config.TWO_PI, 1.0)
    with pytest.raises(ParamError):
        models.warped(models.sphere(2, 1.0), h)


def test_product_model(product3):
    assert product3.kind == "product"
    assert product3.descriptor.startswith("product:n=3")
    assert product3.warp.scal0 == 2.0
    assert "kernel_cos" in product3.named_scalars
    with pytest.raises(ParamError):
        models.product(2, 1.0)


def test_windowed_warp_is_the_round_sphere():
    polar = models.warped(models.sphere(2, 1.0), TrigPolynomial.sine(), scal0=2.0, t_window=(0.2, 2.9))
    assert polar.chart.periods[0] is None
    scal = KidValidator.sampled(polar.metric, polar.descriptor, 8, 1, order=2).scal_values()
    np.testing.assert_allclose(scal, 6.0, atol=1e-9)


def test_perturbations_relabel(sphere3, obata):
    assert models.perturb_kid(sphere3, obata, 0.02).label == "obata:i=4,c=1+perturb=0.02"
    shifted = models.perturb_shift(sphere3, obata)
    assert shifted.label == "obata:i=4,c=1+rot12=0.05"
    assert shifted.f is obata.f
