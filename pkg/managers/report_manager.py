"""
ReportManager module for KID Verifier.
Implements writing of JSON reports and warp CSV files.
"""

import logging
import os
from pathlib import Path
from typing import Optional

import config
from report import ReportFile
from warp_solver import HSolution

logger = logging.getLogger(__name__)


class ReportManager:
    """
    Manages report output.

    Responsibility: Decide where results go and write them

    OOP Principles Applied:
    - Single Responsibility: Only file output
    - Encapsulation: Path resolution is private

    Resolution order for the destination:
    - An explicit output path ending in .json is the report file itself
    - Any other explicit output is a directory
    - Otherwise KIDVERIFY_OUTPUT_DIR, then DEFAULT_OUTPUT_DIR

    Attributes:
        _output: Explicit output path, if any
        _written: Paths written so far
    """

    def __init__(self, output: Optional[str] = None):
        """
        Initialize ReportManager.

        Args:
            output: Report file or directory; None to use the environment
        """
        self._output = output
        self._written: list[Path] = []

    @property
    def written(self) -> list[Path]:
        return list(self._written)

    def output_dir(self) -> Path:
        if self._output:
            path = Path(self._output)
            return path.parent if path.suffix == ".json" else path
        return Path(os.environ.get(config.OUTPUT_DIR_ENV) or config.DEFAULT_OUTPUT_DIR)

    def report_path(self, report: ReportFile) -> Path:
        if self._output and Path(self._output).suffix == ".json":
            return Path(self._output)
        return self.output_dir() / f"{report.command}_report.json"

    def write_report(self, report: ReportFile) -> Path:
        """
        Write a report as JSON.

        Returns:
            Path: Location written
        """
        path = self.report_path(report)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_json() + "\n", encoding="utf-8")
        self._written.append(path)
        logger.info("Wrote %s", path)
        return path

    def write_csv(self, solution: HSolution, stem: str = "warp") -> Path:
        """Write t, h, dh, E samples next to the report."""
        path = solution.to_csv(self.output_dir() / f"{stem}.csv")
        self._written.append(path)
        return path

    def get_summary(self) -> str:
        return "\n".join(f"wrote {path}" for path in self._written)
