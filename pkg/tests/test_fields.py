import numpy as np
import pytest

import expr as ex
from errors import DefinitenessError, ModelError, ParamError, SingularMetric
from fields import Chart, KidData, MetricField, OneFormField, ScalarField, Signature, SymTensorField


def test_chart_validation():
    with pytest.raises(ParamError):
        Chart.box([1.0], [0.0])
    with pytest.raises(ParamError):
        Chart.torus([0.0, 1.0])
    with pytest.raises(ParamError):
        Chart.box([0.0], [1.0], margin=0.6)


def test_sampling_is_seeded_and_inside():
    chart = Chart.box([-1.0, 0.0], [1.0, 2.0])
    first = chart.sample(16, 3)
    assert first.shape == (16, 2)
    np.testing.assert_array_equal(first, chart.sample(16, 3))
    assert not np.array_equal(first, chart.sample(16, 4))
    assert all(chart.contains(p) for p in first)


def test_product_chart_keeps_axis_order():
    chart = Chart.torus([2.0]).product(Chart.box([-1.0, -1.0], [1.0, 1.0]))
    assert chart.dim == 3
    assert chart.periods == (2.0, None, None)
    assert chart.within([17.0, 0.5, -0.5])
    assert not chart.within([0.0, 1.5, 0.0])


def test_symmetric_tensor_reads_upper_triangle():
    chart = Chart.box([0.0, 0.0], [1.0, 1.0])
    field = SymTensorField(chart, [[1.0, 2.0], [99.0, 3.0]])
    value = field.value([0.5, 0.5])
    np.testing.assert_array_equal(value, [[1.0, 2.0], [2.0, 3.0]])


def test_metric_checks():
    chart = Chart.box([0.0, 0.0], [1.0, 1.0])
    point = [0.5, 0.5]
    singular = MetricField(chart, [[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(SingularMetric):
        singular.check_value(singular.value(point), point)
    lorentz_values = MetricField.diagonal(chart, [-1.0, 1.0])
    with pytest.raises(DefinitenessError):
        lorentz_values.check_value(lorentz_values.value(point), point)
    lorentz = MetricField.diagonal(chart, [-1.0, 1.0], Signature.LORENTZIAN)
    lorentz.check_value(lorentz.value(point), point)


def test_jet_of_field_has_tensor_shape():
    chart = Chart.box([0.0, 0.0], [1.0, 1.0])
    x, y = ex.var(0), ex.var(1)
    alpha = OneFormField(chart, [x * y, ex.sin(x)])
    lifted = alpha.jet([0.2, 0.3], 2)
    assert lifted.shape == (2,)
    np.testing.assert_allclose(lifted.value, alpha.value([0.2, 0.3]))


def test_field_errors():
    chart = Chart.box([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ModelError):
        OneFormField(chart, [1.0])
    with pytest.raises(ModelError):
        ScalarField(chart, 1.0).value([0.1, 0.2, 0.3])
    other = Chart.box([0.0, 0.0], [2.0, 2.0])
    with pytest.raises(ModelError):
        KidData(ScalarField(chart, 1.0), OneFormField.zero(other), ScalarField(chart, 0.0))


def test_kid_second_fundamental_form_is_c_times_metric():
    chart = Chart.box([0.0, 0.0], [1.0, 1.0])
    metric = MetricField.diagonal(chart, [2.0, 3.0])
    kid = KidData(ScalarField(chart, 1.0), OneFormField.zero(chart), ScalarField(chart, 0.5))
    k = kid.second_fundamental_form(metric)
    np.testing.assert_allclose(k.value([0.5, 0.5]), [[1.0, 0.0], [0.0, 1.5]])
