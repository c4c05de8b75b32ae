"""
Report module for KID Verifier.
Implements the ResidualReport, StructureBundle and ReportFile records that every
verification produces and the JSON files the command line writes.
"""

import logging
from datetime import datetime, timezone
from typing import Any, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

import config

logger = logging.getLogger(__name__)


class ResidualPoint(BaseModel):
    """
    Residual of one suite at one sample point.

    Attributes:
        point: Chart coordinates
        norm: Largest frame norm over the suite's equations
        components: Frame norm per equation (e.g. "first", "second", "t1")
        raw: Largest coordinate-component magnitude over the equations
    """

    model_config = ConfigDict(frozen=True)

    point: list[float]
    norm: float = Field(ge=0.0)
    components: dict[str, float] = Field(default_factory=dict)
    raw: float = Field(default=0.0, ge=0.0)


class ResidualReport(BaseModel):
    """
    Aggregated residuals of one system or identity over the sample set.

    Responsibility: Carry one verdict with everything needed to reproduce it
    - Per-point norms with a per-equation breakdown
    - Sup-norm per equation and overall
    - Tolerance, seed and model descriptor

    OOP Principles Applied:
    - Validation: The sup-norm and verdict are checked against the points
    - Immutability: Reports are frozen once built

    Attributes:
        name: System or identity name
        model: Model descriptor
        seed: Sampling seed
        tolerance: Pass threshold for the sup-norm
        sample_count: Number of evaluated points
        points: Per-point residuals
        equation_sup: Sup-norm of each equation
        raw_sup: Sup of coordinate components
        sup_norm: Max of the per-point norms
        verdict: sup_norm <= tolerance
        notes: Free-text remarks (excluded points, conventions used)
        details: Extra numbers specific to the suite
    """

    model_config = ConfigDict(frozen=True)

    name: str
    model: str
    seed: int
    tolerance: float = Field(ge=0.0)
    sample_count: int = Field(ge=0)
    points: list[ResidualPoint] = Field(default_factory=list)
    equation_sup: dict[str, float] = Field(default_factory=dict)
    raw_sup: float = 0.0
    sup_norm: float = 0.0
    verdict: bool = True
    notes: list[str] = Field(default_factory=list)
    details: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_aggregates(self) -> "ResidualReport":
        if self.sample_count != len(self.points):
            raise ValueError(f"sample_count {self.sample_count} != {len(self.points)} points")
        expected = max((p.norm for p in self.points), default=0.0)
        if self.sup_norm != expected:
            raise ValueError(f"sup_norm {self.sup_norm} is not the max point norm {expected}")
        if self.verdict != (self.sup_norm <= self.tolerance):
            raise ValueError("verdict disagrees with sup_norm and tolerance")
        return self

    @classmethod
    def from_points(cls, name: str, model: str, seed: int, tolerance: float,
                    points: Sequence[ResidualPoint], notes: Optional[list[str]] = None,
                    details: Optional[dict[str, Any]] = None) -> "ResidualReport":
        """Aggregate point residuals into a report."""
        points = list(points)
        equation_sup: dict[str, float] = {}
        for p in points:
            for key, value in p.components.items():
                equation_sup[key] = max(equation_sup.get(key, 0.0), value)
        sup_norm = max((p.norm for p in points), default=0.0)
        report = cls(
            name=name,
            model=model,
            seed=seed,
            tolerance=tolerance,
            sample_count=len(points),
            points=points,
            equation_sup=equation_sup,
            raw_sup=max((p.raw for p in points), default=0.0),
            sup_norm=sup_norm,
            verdict=sup_norm <= tolerance,
            notes=notes or [],
            details=details or {},
        )
        logger.debug("%s on %s: sup %.3e (tol %.1e)", name, model, sup_norm, tolerance)
        return report

    def worst_point(self) -> Optional[ResidualPoint]:
        return max(self.points, key=lambda p: p.norm, default=None)

    def summary(self) -> str:
        status = "PASS" if self.verdict else "FAIL"
        return f"{status} {self.name} [{self.model}] sup={self.sup_norm:.3e} tol={self.tolerance:.1e}"


class StructureBundle(BaseModel):
    """
    Curvature structure of a metric over the samples.

    Attributes:
        bianchi: delta Ric + 1/2 dScal
        harmonic: d^nabla Ric
        scal_variation: |Scal(p) - mean Scal|
        scal_min: Smallest sampled Scal
        scal_mean: Mean sampled Scal
        scal_max: Largest sampled Scal
        scal_positive: True if every sampled Scal is positive
    """

    model_config = ConfigDict(frozen=True)

    bianchi: ResidualReport
    harmonic: ResidualReport
    scal_variation: ResidualReport
    scal_min: float
    scal_mean: float
    scal_max: float
    scal_positive: bool

    def reports(self) -> list[ResidualReport]:
        return [self.bianchi, self.harmonic, self.scal_variation]


class ReportFile(BaseModel):
    """
    Everything one command run writes to disk.

    Responsibility: Make a run self-describing and comparable
    - Echo the resolved configuration and the convention table
    - Hold every ResidualReport and every recorded error
    - Overall verdict is the conjunction of the member verdicts, failing on errors

    OOP Principles Applied:
    - Validation: The overall verdict is re-derived on construction
    - Serialization: Lossless JSON round trip through pydantic

    Attributes:
        schema_version: Version of docs/report_schema.md
        tool: Tool name
        tool_version: Tool version
        timestamp: UTC creation time (ignored by comparable())
        command: Command verb
        run_config: Resolved run configuration
        conventions: Sign convention table
        reports: Member reports
        errors: Messages of KidVerifyErrors raised during the run
        details: Command-specific extras (periods, kernel dimensions, lambda)
        verdict: Overall verdict
    """

    model_config = ConfigDict(frozen=True)

    schema_version: int = config.REPORT_SCHEMA_VERSION
    tool: str = config.TOOL_NAME
    tool_version: str = config.TOOL_VERSION
    timestamp: str = ""
    command: str
    run_config: dict[str, Any] = Field(default_factory=dict)
    conventions: dict[str, str] = Field(default_factory=lambda: dict(config.CONVENTIONS))
    reports: list[ResidualReport] = Field(default_factory=list)
    errors: list[str] = Field(default_factory=list)
    details: dict[str, Any] = Field(default_factory=dict)
    verdict: bool = False

    @model_validator(mode="after")
    def _check_verdict(self) -> "ReportFile":
        if self.verdict != self.expected_verdict(self.reports, self.errors):
            raise ValueError("overall verdict disagrees with member reports")
        return self

    @staticmethod
    def expected_verdict(reports: Sequence[ResidualReport], errors: Sequence[str]) -> bool:
        return bool(reports) and all(r.verdict for r in reports) and not errors

    @classmethod
    def assemble(cls, command: str, run_config: dict[str, Any], reports: Sequence[ResidualReport],
                 errors: Sequence[str] = (), details: Optional[dict[str, Any]] = None) -> "ReportFile":
        """Build a report file with the verdict derived and a fresh timestamp."""
        reports = list(reports)
        errors = list(errors)
        return cls(
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            command=command,
            run_config=run_config,
            reports=reports,
            errors=errors,
            details=details or {},
            verdict=cls.expected_verdict(reports, errors),
        )

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReportFile":
        return cls.model_validate_json(text)

    def comparable(self) -> dict[str, Any]:
        """Contents without the timestamp, for determinism checks."""
        return self.model_dump(mode="json", exclude={"timestamp"})

    def failing(self) -> list[ResidualReport]:
        return [r for r in self.reports if not r.verdict]

    def summary(self) -> str:
        status = "PASS" if self.verdict else "FAIL"
        lines = [f"{self.tool} {self.command}: {status} ({len(self.reports)} reports, "
                 f"{len(self.errors)} errors)"]
        lines.extend(f"  {r.summary()}" for r in self.reports)
        lines.extend(f"  ERROR {e}" for e in self.errors)
        return "\n".join(lines)
