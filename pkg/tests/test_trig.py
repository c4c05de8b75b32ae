import numpy as np
import pytest

import config
import expr as ex
from errors import ParamError
from trig import TrigPolynomial

H = TrigPolynomial(2.0, 1.2, (0.3, 0.0, -0.05), (0.1, 0.02, 0.0))


def test_fit_recovers_coefficients():
    t = np.arange(64) * H.period / 64
    fit = TrigPolynomial.fit(H(t), H.period, modes=8)
    assert fit.a0 == pytest.approx(H.a0, abs=1e-14)
    np.testing.assert_allclose(fit.cos_coeffs[:3], H.cos_coeffs, atol=1e-14)
    np.testing.assert_allclose(fit.sin_coeffs[:3], H.sin_coeffs, atol=1e-14)
    np.testing.assert_allclose(fit.cos_coeffs[3:], 0.0, atol=1e-14)


def test_derivatives_agree():
    t = np.linspace(0.0, 2.0, 17)
    np.testing.assert_allclose(H.derivative()(t), H.evaluate(t, 1), atol=1e-13)
    np.testing.assert_allclose(H.derivative().derivative()(t), H.evaluate(t, 2), atol=1e-12)


def test_closed_form_matches_evaluation():
    e = H.to_expr(ex.var(0))
    for t in (0.0, 0.37, 1.9):
        assert e.evaluate([t]) == pytest.approx(float(H(t)), abs=1e-14)


def test_constant_and_extremes():
    assert TrigPolynomial.constant(2.0, 1.0).is_constant()
    assert not H.is_constant()
    assert TrigPolynomial.cosine(0.5, 1, config.TWO_PI, 1.0).min_value() == pytest.approx(0.5, abs=1e-4)


def test_invalid_parameters():
    with pytest.raises(ParamError):
        TrigPolynomial(0.0, 1.0)
    with pytest.raises(ParamError):
        TrigPolynomial(1.0, 1.0, (0.1,), ())
    with pytest.raises(ParamError):
        TrigPolynomial.fit(np.ones(10), 1.0, modes=8)
