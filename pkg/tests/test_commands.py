import pytest

import config
from commands import COMMANDS, DevelopCommand, RefineCommand, VerifyCommand, WarpCommand, suite_names
from commands.command import einstein_tolerance, sigma_tolerance
from commands.refine_command import growth_excesses
from commands.suites import SuiteContext
from errors import ConfigError
from run_config import Tolerances
from validator import KidValidator


def test_registry_and_suite_names():
    assert set(COMMANDS) == {"verify", "warp", "develop", "refine"}
    names = suite_names()
    assert "sigma4p" in names and "lemma1" in names and "structure" in names
    assert len(names) == len(set(names))


def test_verify_defaults_to_sigma1(make_config):
    command = VerifyCommand(make_config(kid="obata:i=4,c=1"))
    assert command.suites(True) == ["sigma1"]
    report = command.execute()
    assert report.verdict
    assert [r.name for r in report.reports] == ["sigma1"]
    assert report.details["kid"] == "obata:i=4,c=1"
    assert report.details["sigma_tolerance"] == config.SPHERE_KID_TOL
    assert "Verify sigma1" in command.get_description()


def test_verify_without_kid_checks_structure(make_config):
    report = VerifyCommand(make_config()).execute()
    assert report.verdict, report.summary()
    assert [r.name for r in report.reports] == ["bianchi", "harmonic_curvature", "scal_variation"]
    report = VerifyCommand(make_config(model="random:n=3,amp=0.1,seed=3")).execute()
    assert report.reports[0].verdict
    assert not report.verdict


def test_verify_requested_suites(make_config):
    cfg = make_config(kid="obata:i=4,c=1", systems=["sigma1", "sigma4"],
                      identities=["lstar", "umbilical", "lemma1"])
    report = VerifyCommand(cfg).execute()
    assert report.verdict, report.summary()
    assert [r.name for r in report.reports][:2] == ["sigma1", "sigma4"]


def test_configuration_problems_raise(make_config):
    with pytest.raises(ConfigError):
        VerifyCommand(make_config(identities=["wobble"])).execute()
    with pytest.raises(ConfigError):
        VerifyCommand(make_config(identities=["lstar"])).execute()
    with pytest.raises(ConfigError):
        VerifyCommand(make_config(model="cube:n=3")).execute()


def test_module_errors_are_recorded(make_config):
    report = VerifyCommand(make_config(model="torus:n=3", identities=["lemma1"])).execute()
    assert not report.verdict
    assert report.errors and report.errors[0].startswith("ModelError:")


def test_runs_are_deterministic(make_config):
    cfg = make_config(kid="obata:i=4,c=1", identities=["kernel_forms"])
    first = VerifyCommand(cfg).execute()
    second = VerifyCommand(cfg).execute()
    assert first.comparable() == second.comparable()


def test_develop_command(make_config):
    report = DevelopCommand(make_config(command="develop", kid="obata:i=4,c=1", samples=15)).execute()
    assert report.verdict, report.summary()
    assert report.details["lambda"] == pytest.approx(6.0)
    assert report.details["stationary"] and report.details["slice_matches"]
    assert [r.name for r in report.reports] == ["einstein", "staticity"]


def test_develop_records_nonconstant_mean_curvature(make_config):
    report = DevelopCommand(make_config(command="develop", kid="nonconstant_c:i=1")).execute()
    assert not report.verdict
    assert report.errors[0].startswith("NonConstantError:")


def test_refine_command(make_config):
    cfg = make_config(command="refine", model="random:n=3,amp=0.1,seed=3",
                      refine={"suite": "bianchi", "sample_counts": [10, 20]})
    report = RefineCommand(cfg).execute()
    assert report.verdict, report.summary()
    assert [level["samples"] for level in report.details["levels"]] == [10, 20]
    assert report.reports[0].name == "refine:bianchi"
    assert report.reports[0].sample_count == 2


@pytest.mark.slow
def test_warp_command(make_config):
    command = WarpCommand(make_config(command="warp", model="warped:ode,n=3,scal=6,dh0=0.1"))
    report = command.execute()
    assert report.verdict, report.summary()
    assert command.solution is not None
    assert report.details["kernel"]["dimension"] == 1
    assert report.details["scal"]["target"] == 6.0


def test_warp_command_needs_an_ode_model(make_config):
    with pytest.raises(ConfigError):
        WarpCommand(make_config(command="warp", model="sphere:n=3")).execute()


def test_default_tolerances(make_config, sphere3, warped_ode):
    cfg = make_config()
    assert sigma_tolerance(cfg, sphere3) == config.SPHERE_KID_TOL
    assert sigma_tolerance(cfg, warped_ode) == config.WARP_KID_TOL
    assert einstein_tolerance(cfg, warped_ode) == config.WARPED_EINSTEIN_TOL
    tight = make_config(tolerances={"sigma": 1e-3})
    assert sigma_tolerance(tight, warped_ode) == 1e-3


def test_suite_test_function_priority(sphere3, obata):
    validator = KidValidator.sampled(sphere3.metric, sphere3.descriptor, 10, 1)
    with_kid = SuiteContext(validator, sphere3, obata, Tolerances(), 1e-10)
    assert with_kid.test_function() is obata.f
    bare = SuiteContext(validator, sphere3, None, Tolerances(), 1e-10)
    assert bare.test_function() is sphere3.scalar("x4")
    with pytest.raises(ConfigError):
        bare.require_kid("lstar")


def test_warp_command_records_invalid_initial_data(make_config):
    command = WarpCommand(make_config(command="warp", model="warped:ode,n=3,scal=6,h0=-1"))
    report = command.execute()
    assert not report.verdict
    assert command.solution is None
    assert report.errors[0].startswith("ParamError:")


def test_growth_excesses():
    assert growth_excesses([], 0.1, 1e-9) == []
    assert growth_excesses([1e-8, 5e-9, 1e-9], 0.1, 1e-9) == [0.0, 0.0, 0.0]
    assert growth_excesses([1e-8, 1.05e-8], 0.1, 1e-9) == [0.0, 0.0]
    assert growth_excesses([1e-13, 8e-10], 0.1, 1e-9) == [0.0, 0.0]
    excesses = growth_excesses([1e-8, 9e-8, 8e-7], 0.1, 1e-9)
    assert excesses[0] == 0.0
    assert excesses[1] == pytest.approx(9e-8 - 1.1e-8)
    assert excesses[2] == pytest.approx(8e-7 - 9.9e-8)


def test_refine_fails_on_a_growing_residual(make_config):
    command = RefineCommand(make_config(command="refine", refine={"suite": "bianchi"}))
    levels = [{"samples": s, "ode_rtol": None, "sup": sup}
              for s, sup in zip([25, 50, 100], [1e-8, 9e-8, 8e-7])]
    trend = command._trend(levels)[0]
    assert not trend.verdict
    assert trend.sup_norm > 0.0
    flat = command._trend([dict(level, sup=1e-8) for level in levels])[0]
    assert flat.verdict
