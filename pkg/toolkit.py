"""
Toolkit module for KID Verifier.
Implements the KidToolkit class - the batch run controller.
"""

import logging
from pathlib import Path
from typing import Optional

import config
from commands import COMMANDS, Command, WarpCommand
from errors import ConfigError
from managers.report_manager import ReportManager
from model_factory import ModelFactory
from report import ReportFile
from run_config import RunConfig

logger = logging.getLogger(__name__)


class KidToolkit:
    """
    Main controller for one batch run.

    Responsibility: Coordinate configuration, command and output
    - Pick the command class for the configured verb
    - Execute it and write the report (and the warp CSV)
    - Map the outcome to an exit status

    OOP Principles Applied:
    - Facade Pattern: main() talks to this class only
    - Dependency Injection: Factory and report manager are created here and injected

    Attributes:
        _run_config: Validated run configuration
        _factory: Shared model factory
        _reports: Output manager
        _command: Command of the current run
    """

    def __init__(self, run_config: RunConfig, report_manager: Optional[ReportManager] = None):
        self._run_config = run_config
        self._factory = ModelFactory()
        self._reports = report_manager or ReportManager(run_config.output)
        self._command = self._create_command()

    def _create_command(self) -> Command:
        verb = self._run_config.command
        if verb not in COMMANDS:
            raise ConfigError(f"unknown command '{verb}'")
        return COMMANDS[verb](self._run_config, self._factory)

    @property
    def command(self) -> Command:
        return self._command

    @property
    def report_manager(self) -> ReportManager:
        return self._reports

    def run(self, write: bool = True) -> ReportFile:
        """
        Execute the configured command.

        Args:
            write: Write the JSON report (and warp CSV) through the report manager

        Returns:
            ReportFile

        Raises:
            ConfigError: The configuration cannot be acted on
        """
        logger.info("%s", self._command.get_description())
        report = self._command.execute()
        if write:
            self._reports.write_report(report)
            if (isinstance(self._command, WarpCommand) and self._command.solution is not None
                    and self._run_config.warp.csv):
                self._reports.write_csv(self._command.solution)
        logger.debug("Timings:\n%s", self._command.timer.get_summary())
        return report

    @staticmethod
    def exit_status(report: ReportFile) -> int:
        return config.EXIT_PASS if report.verdict else config.EXIT_FAIL

    def written(self) -> list[Path]:
        return self._reports.written
