"""
Suites module for KID Verifier.
Maps suite names (KID systems and identity families) to KidValidator calls, so
verify and refine run exactly the same evaluations.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import operators as ops
from errors import ConfigError, ModelError
from fields import KidData, ScalarField
from models import Model
from report import ResidualReport
from run_config import Tolerances
from systems import SystemId
from validator import KidValidator

logger = logging.getLogger(__name__)

Suite = Callable[["SuiteContext"], list[ResidualReport]]


@dataclass(frozen=True)
class SuiteContext:
    """Everything a suite may read: validator, model, optional KID and tolerances."""

    validator: KidValidator
    model: Model
    kid: Optional[KidData]
    tolerances: Tolerances
    sigma_tol: float

    def require_kid(self, suite: str) -> KidData:
        if self.kid is None:
            raise ConfigError(f"suite '{suite}' needs a kid descriptor")
        return self.kid

    def test_function(self) -> ScalarField:
        """The KID lapse, else the model's trial function, else its last ambient coordinate or h."""
        if self.kid is not None:
            return self.kid.f
        for name in ("trial", f"x{self.model.dim + 1}", "h"):
            if name in self.model.named_scalars:
                return self.model.named_scalars[name]
        raise ModelError(f"{self.model.descriptor} has no test function for this suite")


def _conformal(ctx: SuiteContext):
    return ctx.model.closed_conformal_pair()


SUITES: dict[str, Suite] = {
    "lstar": lambda ctx: [ctx.validator.lstar_residual(ctx.require_kid("lstar"), ctx.sigma_tol)],
    "kernel_system": lambda ctx: [ctx.validator.kernel_system_residual(ctx.require_kid("kernel_system"),
                                                                       ctx.sigma_tol)],
    "kernel_forms": lambda ctx: [ctx.validator.compare_kernel_forms(ctx.require_kid("kernel_forms"),
                                                                    ctx.sigma_tol)],
    "umbilical": lambda ctx: [ctx.validator.umbilical_constraints(ctx.require_kid("umbilical").c,
                                                                  ctx.tolerances.identity)],
    "lemma1": lambda ctx: [ctx.validator.lemma1(*_conformal(ctx), ctx.tolerances.identity)],
    "lemma2": lambda ctx: [ctx.validator.lemma2(*_conformal(ctx), ctx.tolerances.bianchi)],
    "constant_scal": lambda ctx: [ctx.validator.constant_scal_variant(*_conformal(ctx),
                                                                      ctx.tolerances.bianchi)],
    "conformal_premise": lambda ctx: [ctx.validator.conformal_premise(*_conformal(ctx), ctx.sigma_tol)],
    "scal_flow": lambda ctx: [ctx.validator.scal_flow(*_conformal(ctx), ctx.tolerances.identity)],
    "bourguignon": lambda ctx: [ctx.validator.bourguignon(ctx.test_function(), ctx.tolerances.bianchi)],
    "obata": lambda ctx: [ctx.validator.obata(ctx.test_function(), ctx.sigma_tol)],
    "trace": lambda ctx: [ctx.validator.trace_identity(ctx.test_function(), ctx.tolerances.identity)],
    "hessian_divergence": lambda ctx: [ctx.validator.hessian_divergence(ctx.test_function(), "printed",
                                                                        ctx.tolerances.bianchi)],
    "hessian_divergence_flipped": lambda ctx: [ctx.validator.hessian_divergence(
        ctx.test_function(), "flipped", ctx.tolerances.bianchi)],
    "bianchi": lambda ctx: [ctx.validator.tensor_residual("bianchi", ctx.tolerances.bianchi, ops.bianchi_terms)],
    "structure": lambda ctx: ctx.validator.structure_checks(
        ctx.tolerances.bianchi, ctx.tolerances.harmonic, ctx.tolerances.scal_variation).reports(),
}


def suite_names() -> list[str]:
    return [s.value for s in SystemId] + list(SUITES)


def run_suite(name: str, ctx: SuiteContext) -> list[ResidualReport]:
    """
    Evaluate one suite.

    Raises:
        ConfigError: Unknown name, or a system or KID-only suite without a KID
    """
    if name in {s.value for s in SystemId}:
        return [ctx.validator.sigma_residual(name, ctx.require_kid(name), ctx.sigma_tol)]
    if name not in SUITES:
        raise ConfigError(f"unknown suite '{name}' (expected one of {', '.join(suite_names())})")
    logger.debug("Running suite %s on %s", name, ctx.model.descriptor)
    return SUITES[name](ctx)
