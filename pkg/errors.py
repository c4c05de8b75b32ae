"""
Errors module for KID Verifier.
Implements the exception hierarchy shared by every layer of the toolkit.
"""


class KidVerifyError(Exception):
    """
    Base class for all toolkit errors.

    Responsibility: Give commands a single type to catch
    - Module errors are serialized into the report
    - Anything else is treated as an internal failure

    OOP Principles Applied:
    - Inheritance: Every domain error derives from this class
    - Polymorphism: Callers handle the family uniformly
    """


# Jet algebra

class DomainError(KidVerifyError):
    """Evaluation hit a pole, a branch point or a non-positive radicand."""


class OrderError(KidVerifyError):
    """Requested jet order is outside the supported range."""


# Geometry and models

class SingularMetric(KidVerifyError):
    """Metric is not invertible at the evaluation point."""


class DefinitenessError(KidVerifyError):
    """Metric has the wrong signature at a sampled point."""


class ParamError(KidVerifyError):
    """A model or problem parameter is out of range."""


class ModelError(KidVerifyError):
    """Fields live on different charts, or a model lacks a required structure."""


class SelfCheckError(KidVerifyError):
    """A fixture failed its own construction check (convention drift)."""


# Warp ODE

class NoPeriodicOrbit(KidVerifyError):
    """The warp trajectory collapsed, escaped or never returned."""


class ToleranceError(KidVerifyError):
    """A numerical result missed its declared tolerance."""


# Killing development

class NonConstantError(KidVerifyError):
    """Mean curvature or scalar curvature varies over the samples."""


class DegenerateError(KidVerifyError):
    """No admissible sample point remains after the lapse floor."""


# Command line

class ConfigError(KidVerifyError):
    """Run configuration is malformed or inconsistent."""
