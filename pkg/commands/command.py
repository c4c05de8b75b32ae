"""
Command module for KID Verifier.
Implements the Command abstract base class for the Command Pattern: one class
per command-line verb, each turning a RunConfig into a ReportFile.
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, Optional

import config
from errors import ConfigError, KidVerifyError
from managers.timer import Timer
from model_factory import ModelFactory
from models import Model
from report import ReportFile, ResidualReport
from run_config import RunConfig

logger = logging.getLogger(__name__)


class Command(ABC):
    """
    Abstract base class for all commands.

    Responsibility: Define the interface of a batch verb and its shared plumbing

    OOP Principles Applied:
    - Command Pattern: Encapsulates one run as an object
    - Abstraction: Defines the interface for all commands
    - Polymorphism: main() executes any command the same way
    - Template Method: _collect() records module errors uniformly

    This pattern enables:
    - Serializing module errors into the report instead of crashing
    - Reusing one configuration across several verbs (refine reruns verify suites)

    Attributes:
        _run_config: Validated run configuration
        _factory: Model factory
        _timer: Per-suite wall clock (logged, never reported)
    """

    def __init__(self, run_config: RunConfig, factory: Optional[ModelFactory] = None):
        self._run_config = run_config
        self._factory = factory or ModelFactory()
        self._timer = Timer()

    @property
    def run_config(self) -> RunConfig:
        return self._run_config

    @property
    def timer(self) -> Timer:
        return self._timer

    @abstractmethod
    def execute(self) -> ReportFile:
        """
        Run the command.

        Returns:
            ReportFile with every report and recorded error

        Raises:
            ConfigError: The configuration cannot be acted on
        """
        pass

    @abstractmethod
    def get_description(self) -> str:
        """
        Get a human-readable description of the command.

        Returns:
            str: Description of what this command does
        """
        pass

    # Shared plumbing

    def _collect(self, reports: list[ResidualReport], errors: list[str],
                 step: Callable[[], list[ResidualReport]], label: str) -> bool:
        """
        Run one step, appending its reports or its error message.

        ConfigError propagates; other KidVerifyErrors are recorded.

        Returns:
            True if the step completed
        """
        self._timer.start(label)
        try:
            reports.extend(step())
            return True
        except ConfigError:
            raise
        except KidVerifyError as exc:
            message = f"{type(exc).__name__}: {exc}"
            logger.error("%s failed: %s", label, message)
            errors.append(message)
            return False
        finally:
            logger.info("%s took %.2fs", label, self._timer.stop(label))

    def _assemble(self, reports: list[ResidualReport], errors: list[str],
                  details: Optional[dict] = None) -> ReportFile:
        report = ReportFile.assemble(self._run_config.command, self._run_config.echo(),
                                     reports, errors, details)
        logger.info(report.summary().splitlines()[0])
        return report

    def __repr__(self) -> str:
        return f"{type(self).__name__}(model={self._run_config.model!r})"


def sigma_tolerance(run_config: RunConfig, model: Model) -> float:
    """Configured KID tolerance, or the per-geometry default."""
    if run_config.tolerances.sigma is not None:
        return run_config.tolerances.sigma
    return config.WARP_KID_TOL if model.kind in ("warped", "product") else config.SPHERE_KID_TOL


def einstein_tolerance(run_config: RunConfig, model: Model) -> float:
    if run_config.tolerances.einstein is not None:
        return run_config.tolerances.einstein
    return config.WARPED_EINSTEIN_TOL if model.kind in ("warped", "product") else config.EINSTEIN_TOL
