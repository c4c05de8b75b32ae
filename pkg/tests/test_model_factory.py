import math

import pytest

import config
from errors import ConfigError, ParamError
from model_factory import ModelDescriptor, ModelFactory
from warp_solver import fixed_point


@pytest.fixture(scope="module")
def factory():
    return ModelFactory()


def test_descriptor_parsing():
    d = ModelDescriptor.parse(" warped:ode,n=3,scal=6,dh0=0.1 ")
    assert (d.kind, d.variant) == ("warped", "ode")
    assert d.get("scal", 0.0, float) == 6.0
    assert d.get("h0", 0.5, float) == 0.5
    assert str(d) == "warped:ode,n=3,scal=6,dh0=0.1"
    assert str(ModelDescriptor.parse("static")) == "static"


@pytest.mark.parametrize("text", ["", "sphere:n=3,,r=1", "sphere:n=3,n=4", "sphere:n=3,ode", "sphere:=3"])
def test_malformed_descriptors(text):
    with pytest.raises(ConfigError):
        ModelDescriptor.parse(text)


def test_build_models(factory):
    assert factory.build("sphere:n=3,r=1").descriptor == "sphere:n=3,r=1"
    assert factory.build("torus:n=2").dim == 2
    product = factory.build("product:n=4")
    assert product.warp.period == pytest.approx(config.TWO_PI / math.sqrt(2.0))
    assert factory.build("warped:sin,n=3").chart.periods[0] is None
    assert factory.build("warped:random,n=3,seed=2").warp.scal0 is None


def test_build_errors(factory):
    with pytest.raises(ConfigError):
        factory.build("cube:n=3")
    with pytest.raises(ConfigError):
        factory.build("sphere:n=3,q=1")
    with pytest.raises(ConfigError):
        factory.build("sphere:n=three")
    with pytest.raises(ConfigError):
        factory.build("warped:bogus")
    with pytest.raises(ParamError):
        factory.build("sphere:n=1")


def test_warp_problem_defaults(factory):
    problem = factory.warp_problem("warped:ode")
    assert (problem.n, problem.scal_target, problem.scal0) == (3, 6.0, 2.0)
    assert problem.h0 == pytest.approx(fixed_point(6.0, 2.0))
    assert problem.dh0 == config.WARP_DEFAULT_DH0
    loose = ModelFactory(ode_rtol=1e-8).warp_problem("warped:ode,dh0=0.2")
    assert loose.rtol == 1e-8
    assert loose.drift_tol > config.FIRST_INTEGRAL_TOL
    with pytest.raises(ConfigError):
        factory.warp_problem("sphere:n=3")


def test_warped_ode_keeps_its_solution():
    factory = ModelFactory()
    model = factory.build("warped:ode,n=3,scal=6,dh0=0.1")
    assert factory.last_solution is not None
    assert model.warp.h is factory.last_solution.fit
    assert model.descriptor == "warped:ode,n=3,scal=6,dh0=0.1"


def test_build_kid(factory, sphere3):
    assert factory.build_kid(sphere3, "obata:i=4,c=1").label == "obata:i=4,c=1"
    assert factory.build_kid(sphere3, "obata").label == "obata:i=4,c=1"
    perturbed = factory.build_kid(sphere3, "obata:i=4,c=1,perturb=0.01,shift=0.05")
    assert perturbed.label == "obata:i=4,c=1+perturb=0.01+rot12=0.05"
    assert factory.build_kid(sphere3, "killing:form=rot12").f.is_constant()
    with pytest.raises(ConfigError):
        factory.build_kid(sphere3, "lapse:i=1")
    with pytest.raises(ConfigError):
        factory.build_kid(sphere3, "static:c=1")
