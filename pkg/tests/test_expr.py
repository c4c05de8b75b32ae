import math

import numpy as np
import pytest

import expr as ex
from errors import DomainError


def test_constant_folding():
    x = ex.var(0)
    assert (x + 0) is x
    assert (1 * x) is x
    assert (ex.const(2.0) * ex.const(3.0)).payload == 6.0
    assert (x * 0).is_value(0.0)
    assert (x ** 1) is x
    assert (x ** 0).is_value(1.0)


def test_evaluate_matches_math():
    x, y = ex.var(0), ex.var(1)
    e = ex.sqrt(x * x + y * y) * ex.cos(y) - ex.exp(x) / (1.0 + y)
    point = (0.7, 0.2)
    expected = math.hypot(*point) * math.cos(0.2) - math.exp(0.7) / 1.2
    assert e.evaluate(point) == pytest.approx(expected, abs=1e-14)


def test_domain_errors():
    x = ex.var(0)
    with pytest.raises(DomainError):
        ex.sqrt(x).evaluate([-1.0])
    with pytest.raises(DomainError):
        (1.0 / x).evaluate([0.0])
    with pytest.raises(DomainError):
        (x ** 0.5).evaluate([-2.0])
    with pytest.raises(DomainError):
        ex.var(3).evaluate([0.0, 1.0])


def test_variables_and_shift():
    e = ex.var(0) * ex.sin(ex.var(2))
    assert e.variables() == frozenset({0, 2})
    shifted = e.shift(1)
    assert shifted.variables() == frozenset({1, 3})
    assert not shifted.depends_on(0)
    assert shifted.evaluate([9.0, 0.5, 9.0, 1.2]) == pytest.approx(e.evaluate([0.5, 9.0, 1.2]))


def test_same_tree():
    x, y = ex.var(0), ex.var(1)
    e = ex.cos(x) * y + 2.0
    assert ex.same_tree(e, e.shift(1).shift(-1))
    assert not ex.same_tree(e, ex.cos(y) * x + 2.0)
    assert not ex.same_tree(e, ex.cos(x) * y + 3.0)


def test_symbolic_inverse_matches_numpy():
    x, y = ex.var(0), ex.var(1)
    matrix = [[2.0 + x, y, ex.const(0.0)],
              [y, 3.0 + x * y, x],
              [ex.const(0.0), x, 1.5]]
    point = (0.3, -0.6)
    values = np.array([[ex.wrap(v).evaluate(point) for v in row] for row in matrix])
    inverse = np.array([[v.evaluate(point) for v in row] for row in ex.inverse(matrix)])
    np.testing.assert_allclose(inverse, np.linalg.inv(values), rtol=1e-12, atol=1e-14)
    assert ex.determinant(matrix).evaluate(point) == pytest.approx(np.linalg.det(values))


def test_total_of_nothing_is_zero():
    assert ex.total([]).is_value(0.0)
    assert ex.total([1.0, 2.0, 3.0]).payload == 6.0


def test_shared_subtrees_lift_once_consistently():
    x = ex.var(0)
    shared = ex.sin(x) * ex.sin(x)
    lifted = ex.lift_all([shared, shared + 1.0], [0.4], 2)
    assert float(lifted[1].value - lifted[0].value) == pytest.approx(1.0)


def test_power_exponents_must_be_small_rationals():
    x = ex.var(0)
    assert (x ** (1.0 / 3.0)).evaluate([8.0]) == pytest.approx(2.0)
    assert (x ** 1.5).evaluate([4.0]) == pytest.approx(8.0)
    with pytest.raises(DomainError):
        x ** 0.3333
    with pytest.raises(DomainError):
        x ** math.pi
