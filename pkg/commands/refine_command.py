"""
RefineCommand module for KID Verifier.
Implements the refine verb: rerun one suite at increasing sample counts (and
tighter integrator tolerances for ODE-built models) and report the trend.
"""

import logging
from typing import Optional, Sequence

from commands.command import Command, sigma_tolerance
from commands.suites import SuiteContext, run_suite
from model_factory import ModelDescriptor, ModelFactory
from report import ReportFile, ResidualPoint, ResidualReport
from validator import KidValidator

logger = logging.getLogger(__name__)


class RefineCommand(Command):
    """
    Command to study residual convergence.

    Responsibility: Turn per-level sup-norms into a pass/fail trend

    OOP Principles Applied:
    - Command Pattern: Encapsulates one refinement study
    - Reuse: Each level runs the same suite dispatch as verify

    A level fails when its residual rises above (1 + growth_slack) times the previous one
    and also the noise floor; the trend report has tolerance 0 on that excess.
    """

    def execute(self) -> ReportFile:
        cfg = self._run_config
        settings = cfg.refine
        errors: list[str] = []
        levels: list[dict[str, object]] = []
        ode_model = self._is_ode_model()

        def run_levels() -> list[ResidualReport]:
            for index, samples in enumerate(settings.sample_counts):
                rtol = settings.ode_rtols[min(index, len(settings.ode_rtols) - 1)] if ode_model else None
                levels.append(self._level(samples, rtol))
            return []

        self._collect([], errors, run_levels, f"refine {settings.suite}")
        reports = self._trend(levels) if levels else []
        return self._assemble(reports, errors, {"suite": settings.suite, "levels": levels})

    def _is_ode_model(self) -> bool:
        descriptor = ModelDescriptor.parse(self._run_config.model)
        return descriptor.kind == "warped" and descriptor.variant == "ode"

    def _level(self, samples: int, rtol: Optional[float]) -> dict[str, object]:
        cfg = self._run_config
        factory = ModelFactory(ode_rtol=rtol) if rtol is not None else self._factory
        model = factory.build(cfg.model)
        kid = factory.build_kid(model, cfg.kid) if cfg.kid else None
        validator = KidValidator.sampled(model.metric, model.descriptor, samples, cfg.seed, cfg.jet_order)
        ctx = SuiteContext(validator, model, kid, cfg.tolerances, sigma_tolerance(cfg, model))
        reports = run_suite(cfg.refine.suite, ctx)
        sup = max(r.sup_norm for r in reports)
        logger.info("refine level samples=%d rtol=%s: sup %.3e", samples, rtol, sup)
        return {"samples": samples, "ode_rtol": rtol, "sup": sup}

    def _trend(self, levels: list[dict[str, object]]) -> list[ResidualReport]:
        settings = self._run_config.refine
        sups = [float(level["sup"]) for level in levels]
        excesses = growth_excesses(sups, settings.growth_slack, settings.noise_floor)
        points = [
            ResidualPoint(point=[float(level["samples"]), float(level["ode_rtol"] or 0.0)],
                          norm=excess, components={"growth_excess": excess}, raw=sup)
            for level, sup, excess in zip(levels, sups, excesses)
        ]
        return [ResidualReport.from_points(f"refine:{settings.suite}", self._run_config.model,
                                           self._run_config.seed, 0.0, points,
                                           [f"growth slack {settings.growth_slack:g}, "
                                            f"noise floor {settings.noise_floor:.1e}"])]

    def get_description(self) -> str:
        return f"Refine {self._run_config.refine.suite} on {self._run_config.model}"


def growth_excesses(sups: Sequence[float], slack: float, noise_floor: float) -> list[float]:
    """
    Amount by which each level's residual rises above its predecessor.

    A level may reach (1 + slack) times the previous residual, or the noise floor,
    whichever is larger; anything beyond that counts as growth. The first level
    has no predecessor and never grows.
    """
    excesses = [0.0]
    for previous, sup in zip(sups, sups[1:]):
        excesses.append(max(0.0, sup - max((1.0 + slack) * previous, noise_floor)))
    return excesses[:len(sups)]
