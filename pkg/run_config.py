"""
Run Config module for KID Verifier.
Implements the RunConfig record: one batch run described by a TOML file plus
command-line overrides, validated with pydantic and echoed into every report.
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

import config
from errors import ConfigError
from systems import SystemId

logger = logging.getLogger(__name__)

CommandName = Literal["verify", "warp", "develop", "refine"]


class Tolerances(BaseModel):
    """
    Pass thresholds; None means the per-model default chosen by the command.

    Attributes:
        sigma: KID systems and L*
        identity: Closed conformal identities (t1..t7 and friends)
        bianchi: Bianchi, Bourguignon and lemma2 identities
        harmonic: d^nabla Ric
        scal_variation: Spread of Scal around its mean
        einstein: Einstein equation of a development
        staticity: Frobenius residual of a development
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    sigma: Optional[float] = Field(default=None, gt=0.0)
    identity: float = Field(default=config.IDENTITY_TOL, gt=0.0)
    bianchi: float = Field(default=config.BIANCHI_TOL, gt=0.0)
    harmonic: float = Field(default=config.HARMONIC_TOL, gt=0.0)
    scal_variation: float = Field(default=config.SCAL_VARIATION_TOL, gt=0.0)
    einstein: Optional[float] = Field(default=None, gt=0.0)
    staticity: float = Field(default=config.STATICITY_TOL, gt=0.0)


class WarpSettings(BaseModel):
    """Options of the warp command."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    csv: bool = True
    csv_samples: int = Field(default=config.CSV_SAMPLES, ge=10)
    kernel: bool = True


class RefineSettings(BaseModel):
    """
    Options of the refine command.

    Attributes:
        suite: System or identity rerun at every level
        sample_counts: Increasing sample counts
        ode_rtols: Integrator tolerances for ODE-built models (one per level)
        growth_slack: Relative rise of the residual tolerated between levels
        noise_floor: Residuals below this count as flat
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    suite: str = "sigma1"
    sample_counts: list[int] = Field(default_factory=lambda: [25, 50, 100])
    ode_rtols: list[float] = Field(default_factory=lambda: list(config.REFINE_ODE_RTOLS))
    growth_slack: float = Field(default=config.REFINE_GROWTH_SLACK, ge=0.0, lt=1.0)
    noise_floor: float = Field(default=config.REFINE_NOISE_FLOOR, gt=0.0)

    @field_validator("sample_counts")
    @classmethod
    def _increasing(cls, counts: list[int]) -> list[int]:
        if not counts or any(c < config.MIN_SAMPLES for c in counts):
            raise ValueError(f"sample counts must be non-empty and >= {config.MIN_SAMPLES}")
        if counts != sorted(counts):
            raise ValueError("sample counts must increase")
        return counts

    @field_validator("ode_rtols")
    @classmethod
    def _decreasing(cls, rtols: list[float]) -> list[float]:
        if any(r <= 0.0 for r in rtols) or rtols != sorted(rtols, reverse=True):
            raise ValueError("ODE tolerances must be positive and decreasing")
        return rtols


class RunConfig(BaseModel):
    """
    One batch run.

    Responsibility: Describe a run completely enough to reproduce it
    - Command, model and KID descriptors, suites to evaluate
    - Sampling (count and seed), jet order, tolerances, output location

    OOP Principles Applied:
    - Validation: pydantic rejects unknown keys and out-of-range values
    - Immutability: A run's configuration never changes once loaded

    Attributes:
        command: verify, warp, develop or refine
        model: Model descriptor (e.g. "sphere:n=3,r=1")
        kid: KID descriptor, when the command needs one
        systems: KID systems to evaluate
        identities: Identity suites to evaluate
        samples: Sample count (>= MIN_SAMPLES)
        seed: Sampling seed, echoed verbatim
        jet_order: Jet order override
        output: Report path or directory (defaults to the environment setting)
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: CommandName = "verify"
    model: str = "sphere:n=3,r=1"
    kid: Optional[str] = None
    systems: list[str] = Field(default_factory=list)
    identities: list[str] = Field(default_factory=list)
    samples: int = Field(default=config.DEFAULT_SAMPLES, ge=config.MIN_SAMPLES)
    seed: int = config.DEFAULT_SEED
    jet_order: int = Field(default=config.DEFAULT_JET_ORDER, ge=2, le=config.MAX_JET_ORDER)
    output: Optional[str] = None
    tolerances: Tolerances = Field(default_factory=Tolerances)
    warp: WarpSettings = Field(default_factory=WarpSettings)
    refine: RefineSettings = Field(default_factory=RefineSettings)

    @field_validator("systems")
    @classmethod
    def _known_systems(cls, systems: list[str]) -> list[str]:
        known = {s.value for s in SystemId}
        unknown = [s for s in systems if s not in known]
        if unknown:
            raise ValueError(f"unknown system(s) {unknown}; expected some of {sorted(known)}")
        return systems

    @model_validator(mode="after")
    def _needs_kid(self) -> "RunConfig":
        if self.command == "develop" and not self.kid:
            raise ValueError("develop needs a kid descriptor")
        if self.command == "verify" and self.systems and not self.kid:
            raise ValueError("verifying a system needs a kid descriptor")
        return self

    def echo(self) -> dict[str, Any]:
        """Every setting, defaults included, for the report header."""
        return self.model_dump(mode="json")


def _flatten(document: Mapping[str, Any]) -> dict[str, Any]:
    """Map the [run]/[model]/[tolerances]/[warp]/[refine] sections onto RunConfig fields."""
    unknown = set(document) - {"run", "model", "tolerances", "warp", "refine"}
    if unknown:
        raise ConfigError(f"unknown config section(s) {sorted(unknown)}")
    data: dict[str, Any] = dict(document.get("run", {}))
    model_section = dict(document.get("model", {}))
    if "descriptor" in model_section:
        model_section["model"] = model_section.pop("descriptor")
    data.update(model_section)
    for section in ("tolerances", "warp", "refine"):
        if section in document:
            data[section] = dict(document[section])
    return data


def build_run_config(data: Mapping[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(dict(data))
    except ValidationError as exc:
        raise ConfigError(f"invalid run configuration: {exc}") from exc


def load_run_config(path: Optional[Path] = None,
                    overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    Read a TOML run file and apply overrides.

    Args:
        path: TOML file, or None for defaults only
        overrides: Flat field values (None entries are ignored); tolerance, warp and
            refine overrides are mappings under their section name

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: Missing or malformed file, unknown keys, invalid values
    """
    data: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            with path.open("rb") as handle:
                data = _flatten(tomllib.load(handle))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file {path} not found") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
        logger.info("Loaded run configuration from %s", path)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in ("tolerances", "warp", "refine"):
            data[key] = {**data.get(key, {}), **{k: v for k, v in value.items() if v is not None}}
        else:
            data[key] = value
    return build_run_config(data)
