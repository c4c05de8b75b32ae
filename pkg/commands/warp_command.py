"""
WarpCommand module for KID Verifier.
Implements the warp verb: solve for a periodic warp factor, then check the
resulting warped product's curvature and t-dependent kernel.
"""

import logging
from typing import Optional

import config
from commands.command import Command
from kernel import kernel_dim_t
from model_factory import ModelFactory
from models import Model
from report import ReportFile, ResidualPoint, ResidualReport
from run_config import RunConfig
from validator import KidValidator
from warp_solver import HSolution, WarpProblem, WarpSolver, warped_from_solution

logger = logging.getLogger(__name__)


class WarpCommand(Command):
    """
    Command to solve and check a warp factor.

    Responsibility: Drive solve_h, structure_checks and kernel_dim_t for "warped:ode" models

    OOP Principles Applied:
    - Command Pattern: Encapsulates one warp run
    - Encapsulation: The solution is kept for the CSV writer

    Attributes:
        _solution: HSolution of the last execute(), if the solver succeeded
    """

    def __init__(self, run_config: RunConfig, factory: Optional[ModelFactory] = None):
        super().__init__(run_config, factory)
        self._solution: Optional[HSolution] = None

    @property
    def solution(self) -> Optional[HSolution]:
        return self._solution

    def execute(self) -> ReportFile:
        cfg = self._run_config
        reports: list[ResidualReport] = []
        errors: list[str] = []
        details: dict[str, object] = {}
        state: dict[str, object] = {}
        solver = WarpSolver(samples=cfg.warp.csv_samples)

        def solve() -> list[ResidualReport]:
            problem = self._factory.warp_problem(cfg.model)
            state["problem"] = problem
            self._solution = solver.solve_h(problem)
            details["warp"] = self._solution.details()
            details["constant"] = self._solution.constant
            state["model"] = warped_from_solution(self._solution, cfg.model)
            return []

        if not self._collect(reports, errors, solve, "solve_h"):
            return self._assemble(reports, errors, details)

        problem: WarpProblem = state["problem"]
        model: Model = state["model"]

        def structure() -> list[ResidualReport]:
            validator = KidValidator.sampled(model.metric, model.descriptor, cfg.samples, cfg.seed,
                                             cfg.jet_order)
            bundle = validator.structure_checks(cfg.tolerances.bianchi, cfg.tolerances.harmonic,
                                                cfg.tolerances.scal_variation)
            details["scal"] = {"min": bundle.scal_min, "mean": bundle.scal_mean, "max": bundle.scal_max,
                               "target": problem.scal_target}
            return bundle.reports()

        self._collect(reports, errors, structure, "structure")
        if cfg.warp.kernel:
            self._collect(reports, errors, lambda: self._kernel(model, problem.rtol, details), "kernel")
        return self._assemble(reports, errors, details)

    def _kernel(self, model: Model, rtol: float, details: dict) -> list[ResidualReport]:
        result = kernel_dim_t(model, rtol=rtol)
        details["kernel"] = result.details()
        point = ResidualPoint(point=[], norm=result.reduction_error,
                              components={"reduction": result.reduction_error},
                              raw=result.reduction_error)
        return [ResidualReport.from_points("kernel_reduction", model.descriptor, self._run_config.seed,
                                           config.REDUCTION_TOL, [point], result.notes,
                                           {"dimension": result.dimension})]

    def get_description(self) -> str:
        return f"Solve the warp factor of {self._run_config.model} and check the warped product"
