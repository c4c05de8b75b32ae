import numpy as np
import pytest

import operators as ops
from geometry import LocalGeometry, dnabla, frame_sup_norm

POINT = [0.3, -0.5, 0.8]


def _sup(geo: LocalGeometry, terms: dict) -> float:
    return max(frame_sup_norm(v, geo.metric.value) for v in terms.values())


def test_ustar_kills_ambient_coordinates(sphere3):
    for name in ("x1", "x4"):
        value = ops.ustar(sphere3.metric, sphere3.scalar(name), POINT)
        assert np.max(np.abs(value)) <= 1e-10


def test_ustar_trace_defect_vanishes(random3):
    geo = LocalGeometry(random3.metric, [1.0, 2.0, 0.5])
    assert abs(ops.ustar_trace_defect(geo, geo.lift(random3.scalar("trial")))) <= 1e-10


def test_ustar0_is_traceless(random3):
    geo = LocalGeometry(random3.metric, [0.2, 4.0, 3.1])
    u0 = ops.ustar0_jet(geo, geo.lift(random3.scalar("trial")))
    assert abs(float(geo.trace(u0).value)) <= 1e-10


def test_umbilical_constraints_closed_form(sphere3, obata):
    k = obata.second_fundamental_form(sphere3.metric)
    phi1, phi2 = ops.constraint_map(sphere3.metric, k, POINT)
    expected1, expected2 = ops.umbilical_constraints(sphere3.metric, obata.c, POINT)
    assert phi1 == pytest.approx(expected1, abs=1e-10)
    assert phi1 == pytest.approx(12.0, abs=1e-10)
    np.testing.assert_allclose(phi2, expected2, atol=1e-12)


def test_obata_kid_is_in_the_kernel_of_lstar(sphere3, obata):
    k = obata.second_fundamental_form(sphere3.metric)
    l1, l2 = ops.lstar(sphere3.metric, k, obata.f, obata.alpha, POINT)
    assert np.max(np.abs(l1)) <= 1e-10
    assert np.max(np.abs(l2)) <= 1e-10
    first, second = ops.kernel_system_residual(sphere3.metric, k, obata.f, obata.alpha, POINT)
    assert np.max(np.abs(first)) <= 1e-10
    assert np.max(np.abs(second)) <= 1e-10


def test_lemma1_on_sphere_and_negative_control(sphere3):
    alpha, psi = sphere3.closed_conformal_pair()
    geo = LocalGeometry(sphere3.metric, POINT)
    assert _sup(geo, ops.lemma1_terms(geo, geo.lift(alpha), geo.lift(psi))) <= 1e-9
    broken = alpha + sphere3.oneform("rot12")
    assert _sup(geo, ops.lemma1_terms(geo, geo.lift(broken), geo.lift(psi))) > 1e-3


def test_lemma2_and_constant_scal_on_warped(warped_ode):
    alpha, psi = warped_ode.closed_conformal_pair()
    point = warped_ode.sample(1, 3)[0]
    geo = LocalGeometry(warped_ode.metric, point)
    assert _sup(geo, ops.lemma2_terms(geo, geo.lift(psi))) <= 1e-8
    assert _sup(geo, ops.scal_flow_terms(geo, geo.lift(alpha), geo.lift(psi))) <= 1e-6


def test_pointwise_front_doors_on_sphere(sphere3):
    alpha, psi = sphere3.closed_conformal_pair()
    assert np.max(np.abs(ops.ustar0(sphere3.metric, sphere3.scalar("x2"), POINT))) <= 1e-10
    lemma1 = ops.lemma1_residuals(sphere3.metric, alpha, psi, POINT)
    assert max(np.max(np.abs(v)) for v in lemma1.values()) <= 1e-9
    assert np.max(np.abs(ops.lemma2_residual(sphere3.metric, alpha, psi, POINT))) <= 1e-8
    assert np.max(np.abs(dnabla(sphere3.metric, sphere3.metric, POINT))) <= 1e-11


def test_hessian_divergence_sign(random3):
    geo = LocalGeometry(random3.metric, [1.0, 2.0, 3.0])
    terms = ops.hessian_divergence_terms(geo, geo.lift(random3.scalar("trial")))
    assert frame_sup_norm(terms["printed"], geo.metric.value) <= 1e-8
    assert frame_sup_norm(terms["flipped"], geo.metric.value) > 1e-3


def test_bourguignon_on_random_metric(random3):
    geo = LocalGeometry(random3.metric, [0.5, 5.0, 2.0])
    assert _sup(geo, ops.bourguignon_terms(geo, geo.lift(random3.scalar("trial")))) <= 1e-8
