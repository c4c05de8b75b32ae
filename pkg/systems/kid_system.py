"""
KID System module for KID Verifier.
Implements the Strategy Pattern for the KID systems: each system is a pair of
equations in (f, alpha, c) evaluated as left-minus-right residual tensors.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np

from geometry import LocalGeometry
from jet import Jet


class SystemId(str, Enum):
    """Identifiers used on the command line and in reports."""

    SIGMA = "sigma"
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"
    SIGMA3 = "sigma3"
    SIGMA4 = "sigma4"
    SIGMA4_PRIME = "sigma4p"


@dataclass(frozen=True)
class KidJets:
    """
    KID data lifted at one point.

    Attributes:
        f: Lapse jet
        alpha: Shift jet
        c: Mean-curvature jet
    """

    f: Jet
    alpha: Jet
    c: Jet


class KidSystem(ABC):
    """
    Abstract base class for KID systems.

    Responsibility: Define the interface every system shares
    - First equation: a condition on alpha (conformal Killing or closed conformal)
    - Second equation: U*_g(f) against a right-hand side
    - Both return residual jets whose value is zero on solutions

    OOP Principles Applied:
    - Strategy Pattern: The validator evaluates any system the same way
    - Open/Closed Principle: New systems subclass without touching the validator
    - Polymorphism: All systems share the same interface
    """

    @abstractmethod
    def get_id(self) -> SystemId:
        pass

    @abstractmethod
    def first_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        """
        Residual of the equation on alpha.

        Args:
            geo: Local geometry at the point
            kid: Lifted KID data

        Returns:
            Symmetric or general 2-tensor jet
        """
        pass

    @abstractmethod
    def second_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        """Residual of the equation on U*_g(f)."""
        pass

    @abstractmethod
    def get_description(self) -> str:
        pass

    def residuals(self, geo: LocalGeometry, kid: KidJets) -> dict[str, np.ndarray]:
        """Values of both residuals at the geometry's point."""
        return {
            "first": self.first_equation(geo, kid).value,
            "second": self.second_equation(geo, kid).value,
        }

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(id='{self.get_id().value}')"
