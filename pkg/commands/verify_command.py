"""
VerifyCommand module for KID Verifier.
Implements the verify verb: KID systems and identity suites on one model.
"""

import logging
from typing import Optional

from commands.command import Command, sigma_tolerance
from commands.suites import SuiteContext, run_suite
from fields import KidData
from models import Model
from report import ReportFile, ResidualReport
from validator import KidValidator

logger = logging.getLogger(__name__)


class VerifyCommand(Command):
    """
    Command to verify systems and identities.

    Responsibility: Evaluate every requested suite on shared sample points

    OOP Principles Applied:
    - Command Pattern: Encapsulates one verification run
    - Delegation: Suite dispatch lives in commands.suites

    With no suites requested, a KID run checks sigma1 and a bare model run checks
    the curvature structure.
    """

    def execute(self) -> ReportFile:
        cfg = self._run_config
        reports: list[ResidualReport] = []
        errors: list[str] = []
        state: dict[str, object] = {}

        def prepare() -> list[ResidualReport]:
            model = self._factory.build(cfg.model)
            validator = KidValidator.sampled(model.metric, model.descriptor, cfg.samples, cfg.seed,
                                             cfg.jet_order)
            model.metric.check_samples(validator.points)
            state["model"] = model
            state["validator"] = validator
            state["kid"] = self._factory.build_kid(model, cfg.kid) if cfg.kid else None
            return []

        if not self._collect(reports, errors, prepare, "prepare"):
            return self._assemble(reports, errors)

        model: Model = state["model"]
        kid: Optional[KidData] = state["kid"]
        ctx = SuiteContext(state["validator"], model, kid, cfg.tolerances, sigma_tolerance(cfg, model))
        for name in self.suites(kid is not None):
            self._collect(reports, errors, lambda name=name: run_suite(name, ctx), name)
        details = {"kid": kid.label if kid else None, "sigma_tolerance": ctx.sigma_tol}
        return self._assemble(reports, errors, details)

    def suites(self, has_kid: bool) -> list[str]:
        requested = list(self._run_config.systems) + list(self._run_config.identities)
        if requested:
            return requested
        return ["sigma1"] if has_kid else ["structure"]

    def get_description(self) -> str:
        return f"Verify {', '.join(self.suites(bool(self._run_config.kid)))} on {self._run_config.model}"
