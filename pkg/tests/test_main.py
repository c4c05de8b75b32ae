import json

import pytest

import config
from main import build_parser, main, overrides_from
from managers import ReportManager
from run_config import build_run_config
from toolkit import KidToolkit


def test_parser_and_overrides():
    args = build_parser().parse_args(["verify", "--model", "torus:n=2", "--system", "sigma1",
                                      "--system", "sigma2", "--tol", "1e-6"])
    overrides = overrides_from(args)
    assert overrides["command"] == "verify"
    assert overrides["systems"] == ["sigma1", "sigma2"]
    assert overrides["tolerances"] == {"sigma": 1e-6}
    assert overrides["samples"] is None
    warp = overrides_from(build_parser().parse_args(["warp", "--no-csv"]))
    assert warp["warp"] == {"csv": False, "kernel": None}
    assert warp["systems"] is None


def test_a_passing_run_exits_zero(tmp_path, capsys):
    status = main(["verify", "--kid", "obata:i=4,c=1", "--samples", "12", "--output", str(tmp_path)])
    assert status == config.EXIT_PASS
    assert "PASS" in capsys.readouterr().out
    report = json.loads((tmp_path / "verify_report.json").read_text(encoding="utf-8"))
    assert report["run_config"]["samples"] == 12
    assert report["tool"] == config.TOOL_NAME


def test_a_failing_run_exits_one(tmp_path):
    status = main(["verify", "--kid", "obata:i=4,c=1,perturb=0.01", "--samples", "20",
                   "--output", str(tmp_path / "fail.json")])
    assert status == config.EXIT_FAIL
    assert (tmp_path / "fail.json").exists()


@pytest.mark.parametrize("argv", [
    ["verify", "--model", "cube:n=3"],
    ["verify", "--system", "sigma1"],
    ["verify", "--samples", "5"],
    ["develop"],
])
def test_configuration_errors_exit_two(argv, tmp_path, capsys):
    assert main(argv + ["--output", str(tmp_path)]) == config.EXIT_ERROR
    assert "configuration error" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('[run]\ncommand = "verify"\nsamples = 40\n[model]\ndescriptor = "torus:n=2"\n')
    assert main(["verify", "--config", str(path), "--samples", "10", "--output", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify_report.json").read_text(encoding="utf-8"))
    assert report["run_config"]["samples"] == 10
    assert report["run_config"]["model"] == "torus:n=2"


def test_toolkit_writes_through_its_manager(tmp_path):
    run_config = build_run_config({"kid": "obata:i=4,c=1", "samples": 12})
    toolkit = KidToolkit(run_config, ReportManager(str(tmp_path)))
    report = toolkit.run()
    assert KidToolkit.exit_status(report) == config.EXIT_PASS
    assert toolkit.written() == [tmp_path / "verify_report.json"]
    assert toolkit.command.get_description().startswith("Verify")
    assert not KidToolkit(run_config, ReportManager(str(tmp_path / "dry"))).run(write=False).errors
    assert not (tmp_path / "dry").exists()


def test_invalid_warp_data_exits_one_with_a_report(tmp_path):
    status = main(["warp", "--model", "warped:ode,n=3,scal=6,h0=-1", "--output", str(tmp_path)])
    assert status == config.EXIT_FAIL
    report = json.loads((tmp_path / "warp_report.json").read_text(encoding="utf-8"))
    assert report["errors"][0].startswith("ParamError:")
