"""
DevelopCommand module for KID Verifier.
Implements the develop verb: build the Killing development of a KID and check
that it is a static Einstein metric.
"""

import logging

import config
from commands.command import Command, einstein_tolerance
from killing_development import (determinant_identity, develop, einstein_residual, is_stationary,
                                 slice_matches, staticity_residual)
from report import ReportFile, ResidualReport

logger = logging.getLogger(__name__)


class DevelopCommand(Command):
    """
    Command to develop KID data into a spacetime.

    Responsibility: Drive develop, einstein_residual and staticity_residual

    OOP Principles Applied:
    - Command Pattern: Encapsulates one development run

    Structural checks (stationarity, slice isometry, the determinant identity) are
    recorded in the details; a failed one is also recorded as an error.
    """

    def execute(self) -> ReportFile:
        cfg = self._run_config
        reports: list[ResidualReport] = []
        errors: list[str] = []
        details: dict[str, object] = {}

        def run() -> list[ResidualReport]:
            model = self._factory.build(cfg.model)
            kid = self._factory.build_kid(model, cfg.kid)
            lm = develop(model, kid, cfg.samples, cfg.seed)
            points = lm.sample(cfg.samples, cfg.seed)
            gap = determinant_identity(lm, points)
            details.update({
                "development": lm.descriptor,
                "lambda": lm.lam,
                "einstein_constant": lm.einstein_constant,
                "f_floor": lm.f_floor,
                "stationary": is_stationary(lm),
                "slice_matches": slice_matches(lm),
                "determinant_gap": gap,
            })
            if not details["stationary"]:
                errors.append("development metric depends on the development time")
            if not details["slice_matches"]:
                errors.append("t = const slices do not carry the model metric")
            if gap > config.DETERMINANT_TOL:
                errors.append(f"det of the development differs from -f^2 det g by {gap:.3e}")
            return [
                einstein_residual(lm, points, einstein_tolerance(cfg, model), cfg.seed),
                staticity_residual(lm, points, cfg.tolerances.staticity, cfg.seed),
            ]

        self._collect(reports, errors, run, "develop")
        return self._assemble(reports, errors, details)

    def get_description(self) -> str:
        return f"Develop {self._run_config.kid} on {self._run_config.model}"
