import math

import numpy as np
import pytest

import config
import expr as ex
import jet as jets
from errors import DomainError, OrderError
from jet import Jet, coefficient_count, contract, multi_indices

STEP = 1e-5


def _function() -> ex.Expr:
    x, y = ex.var(0), ex.var(1)
    return ex.sin(x * y) + ex.exp(x) / (2.0 + ex.cos(y)) + (1.0 + x * x) ** 0.5


def test_multi_indices_are_graded_and_counted():
    exponents = multi_indices(3, 3)
    assert len(exponents) == coefficient_count(3, 3) == math.comb(6, 3)
    degrees = [sum(e) for e in exponents]
    assert degrees == sorted(degrees)
    assert multi_indices(3, 2) == exponents[:coefficient_count(3, 2)]


@pytest.mark.parametrize("order", [1, 2, 3])
def test_partials_match_central_difference_of_lower_order(order):
    f = _function()
    point = np.array([0.4, -0.7])
    exact = f.lift(point, order).partials(order)
    for axis in range(2):
        offset = np.zeros(2)
        offset[axis] = STEP
        forward = f.lift(point + offset, order - 1).partials(order - 1)
        backward = f.lift(point - offset, order - 1).partials(order - 1)
        np.testing.assert_allclose((forward - backward) / (2 * STEP), exact[axis],
                                   rtol=1e-6, atol=1e-8)


def test_value_matches_float_evaluation():
    f = _function()
    point = [0.3, 1.1]
    assert float(f.lift(point, 3).value) == pytest.approx(f.evaluate(point), abs=1e-14)


def test_integer_power_is_exact():
    u = Jet.variable(0, 0.5, 2, 3) + 1.0
    cube = u ** 3
    assert float(cube.coefficient((2, 0))) == pytest.approx(4.5)
    assert float(cube.coefficient((3, 0))) == pytest.approx(1.0)
    assert float(cube.coefficient((0, 1))) == 0.0


def test_derivative_lowers_order():
    u = Jet.variable(1, 2.0, 2, 3)
    square = u * u
    d = square.derivative(1)
    assert d.order == 2
    assert float(d.value) == pytest.approx(4.0)
    with pytest.raises(OrderError):
        Jet.constant(1.0, 2, 0).derivative(0)


def test_matrix_inverse_times_matrix_is_identity():
    x, y = Jet.variable(0, 0.2, 2, 3), Jet.variable(1, -0.4, 2, 3)
    a = jets.stack([jets.stack([2.0 + x, y]), jets.stack([y, 3.0 + x * y])])
    product = contract("ij,jk->ik", a, jets.matrix_inverse(a))
    assert product.allclose(Jet.constant(np.eye(2), 2, 3))


def test_align_truncates_to_common_order():
    a = Jet.variable(0, 1.0, 2, 3)
    b = Jet.variable(1, 1.0, 2, 1)
    assert (a * b).order == 1


def test_domain_errors():
    negative = Jet.variable(0, -1.0, 1, 2)
    with pytest.raises(DomainError):
        jets.sqrt(negative)
    with pytest.raises(DomainError):
        jets.reciprocal(Jet.variable(0, 0.0, 1, 2))
    with pytest.raises(DomainError):
        jets.matrix_inverse(Jet.constant(np.zeros((2, 2)), 1, 2))


def test_order_limits():
    with pytest.raises(OrderError):
        Jet.constant(1.0, 2, config.MAX_JET_ORDER + 1)
    with pytest.raises(OrderError):
        Jet.constant(1.0, 2, 2).truncate(3)


def test_reserved_index_is_rejected():
    u = Jet.constant(np.ones(2), 2, 1)
    with pytest.raises(ValueError):
        contract("z->z", u)


def test_jet_arith_dispatch():
    u = Jet.variable(0, 0.3, 1, 2)
    assert jet_value(jets.jet_arith(u, None, "sin")) == pytest.approx(math.sin(0.3))
    assert jet_value(jets.jet_arith(u, 2.0, "pow")) == pytest.approx(0.09)
    with pytest.raises(ValueError):
        jets.jet_arith(u, None, "tan")


def jet_value(u: Jet) -> float:
    return float(u.value)


def _random_expr(rng: np.random.Generator, depth: int) -> ex.Expr:
    if depth == 0:
        return float(rng.uniform(0.5, 1.5)) * ex.var(int(rng.integers(2))) + float(rng.uniform(-1.0, 1.0))
    u = _random_expr(rng, depth - 1)
    kind = int(rng.integers(8))
    if kind == 0:
        return ex.sin(u)
    if kind == 1:
        return ex.cos(u)
    if kind == 2:
        return ex.exp(0.5 * u)
    if kind == 3:
        return ex.sqrt(1.0 + u * u)
    if kind == 4:
        return 1.0 / (2.0 + ex.cos(u))
    v = _random_expr(rng, depth - 1)
    if kind == 5:
        return u + v
    if kind == 6:
        return u - v
    return u * v


def _random_pairs(count: int, seed: int) -> list[tuple[ex.Expr, list[float]]]:
    rng = np.random.default_rng(seed)
    return [(_random_expr(rng, int(rng.integers(1, 4))), list(rng.uniform(-1.0, 1.0, 2)))
            for _ in range(count)]


def test_first_coefficients_match_central_differences():
    h = 1e-4
    for e, point in _random_pairs(100, 11):
        u = e.lift(point, 2)
        assert float(u.value) == pytest.approx(e.evaluate(point), rel=1e-12, abs=1e-12)
        for axis in range(2):
            up, down = list(point), list(point)
            up[axis] += h
            down[axis] -= h
            fd = (e.evaluate(up) - e.evaluate(down)) / (2.0 * h)
            exponent = tuple(int(i == axis) for i in range(2))
            assert float(u.coefficient(exponent)) == pytest.approx(fd, rel=1e-5, abs=1e-8)


def test_lifting_is_linear_and_satisfies_leibniz():
    pairs = _random_pairs(40, 23)
    for (e1, point), (e2, _) in zip(pairs[::2], pairs[1::2]):
        u1, u2 = e1.lift(point, 3), e2.lift(point, 3)
        assert ex.lift(2.5 * e1 + e2, point, 3).allclose(2.5 * u1 + u2)
        assert ex.lift(e1 * e2, point, 3).allclose(jets.jet_arith(u1, u2, "*"))


def test_sqrt_of_a_square_recovers_the_variable():
    x = Jet.variable(0, 3.0, 1, 3)
    assert jets.sqrt(x * x).allclose(x)
    assert ex.lift(ex.sqrt(ex.var(0) * ex.var(0)), [3.0], 3).allclose(x)


def test_exp_of_sin_taylor_coefficients():
    x0 = 0.7
    u = ex.lift(ex.exp(ex.sin(ex.var(0))), [x0], 3)
    s, c = math.sin(x0), math.cos(x0)
    f = math.exp(s)
    derivatives = [f, c * f, (c * c - s) * f, (c ** 3 - 3.0 * s * c - c) * f]
    for k, d in enumerate(derivatives):
        assert float(u.coefficient((k,))) == pytest.approx(d / math.factorial(k), rel=1e-12)
    h = 1e-4
    g = lambda t: math.exp(math.sin(t))
    first = (g(x0 + h) - g(x0 - h)) / (2.0 * h)
    second = (g(x0 + h) - 2.0 * f + g(x0 - h)) / (h * h)
    assert float(u.coefficient((1,))) == pytest.approx(first, rel=1e-5)
    assert 2.0 * float(u.coefficient((2,))) == pytest.approx(second, rel=1e-5)
