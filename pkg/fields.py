"""
Fields module for KID Verifier.
Implements the Chart, field and KidData classes: closed-form tensor fields on a
single coordinate box, ready to be evaluated or lifted to jets at sample points.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
from scipy.stats import qmc

import config
from errors import DefinitenessError, ModelError, ParamError, SingularMetric
from expr import Expr, const, evaluate_all, lift_all, wrap
from jet import Jet, coefficient_count

logger = logging.getLogger(__name__)

ExprLike = Union[Expr, float, int]


class Signature(Enum):
    """Metric signature."""

    RIEMANNIAN = "riemannian"
    LORENTZIAN = "lorentzian"


@dataclass(frozen=True)
class Chart:
    """
    Axis-aligned coordinate box.

    Responsibility: Say where fields may be evaluated
    - Per-axis bounds and optional periods
    - Interior sampling with a safety margin on non-periodic axes

    Attributes:
        lower: Lower bound per axis
        upper: Upper bound per axis (lower + period on periodic axes)
        periods: Period per axis, or None
        margin: Fraction of each non-periodic axis excluded from sampling
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    periods: tuple[Optional[float], ...]
    margin: float = config.DEFAULT_MARGIN

    def __post_init__(self):
        n = len(self.lower)
        if not 1 <= n <= config.MAX_CHART_DIM:
            raise ParamError(f"chart dimension {n} outside 1..{config.MAX_CHART_DIM}")
        if len(self.upper) != n or len(self.periods) != n:
            raise ParamError("chart bounds and periods must have one entry per axis")
        if not 0.0 < self.margin < 0.5:
            raise ParamError(f"chart margin must lie in (0, 0.5), got {self.margin}")
        for lo, hi, period in zip(self.lower, self.upper, self.periods):
            if not lo < hi:
                raise ParamError(f"empty chart axis [{lo}, {hi}]")
            if period is not None and period <= 0.0:
                raise ParamError(f"period must be positive, got {period}")

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float],
            margin: float = config.DEFAULT_MARGIN) -> "Chart":
        """Non-periodic box."""
        return cls(tuple(map(float, lower)), tuple(map(float, upper)),
                   (None,) * len(lower), margin)

    @classmethod
    def torus(cls, periods: Sequence[float], margin: float = config.DEFAULT_MARGIN) -> "Chart":
        """Fully periodic box [0, L_i)."""
        periods = tuple(map(float, periods))
        if any(p <= 0.0 for p in periods):
            raise ParamError(f"torus periods must be positive, got {periods}")
        return cls((0.0,) * len(periods), periods, periods, margin)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def product(self, other: "Chart") -> "Chart":
        """Chart of the product: axes of self first, then other's."""
        return Chart(self.lower + other.lower, self.upper + other.upper,
                     self.periods + other.periods, min(self.margin, other.margin))

    def interior_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower = np.array(self.lower)
        upper = np.array(self.upper)
        shrink = np.array([0.0 if p is not None else self.margin for p in self.periods])
        width = upper - lower
        return lower + shrink * width, upper - shrink * width

    def contains(self, point: Sequence[float]) -> bool:
        """True if the point lies in the margin-shrunk sampling box."""
        lower, upper = self.interior_bounds()
        p = np.asarray(point, dtype=float)
        return p.shape == lower.shape and bool(np.all((p >= lower) & (p <= upper)))

    def within(self, point: Sequence[float]) -> bool:
        """True if the point lies in the domain; periodic axes accept any value."""
        p = np.asarray(point, dtype=float)
        if p.shape != (self.dim,):
            return False
        for x, lo, hi, period in zip(p, self.lower, self.upper, self.periods):
            if period is None and not lo <= x <= hi:
                return False
        return True

    def sample(self, count: int, seed: int) -> np.ndarray:
        """
        Scrambled Halton points in the chart interior.

        Args:
            count: Number of points
            seed: Scrambling seed (recorded in every report)

        Returns:
            Array of shape (count, dim)
        """
        sampler = qmc.Halton(d=self.dim, scramble=True, seed=seed)
        lower, upper = self.interior_bounds()
        return qmc.scale(sampler.random(count), lower, upper)


class TensorField:
    """
    Covariant tensor field given by closed-form components.

    Responsibility: Evaluate or lift every component at a point
    - Components stored flat, reshaped to the tensor shape on output
    - Shared subtrees are lifted once per point

    OOP Principles Applied:
    - Inheritance: Scalar, one-form and symmetric fields specialize the shape
    - Encapsulation: Components are fixed at construction

    Attributes:
        _chart: Chart the components are written in
        _shape: Tensor shape
        _components: Flat tuple of Expr
    """

    def __init__(self, chart: Chart, shape: tuple[int, ...], components: Sequence[ExprLike]):
        if int(np.prod(shape)) != len(components):
            raise ModelError(f"{len(components)} components do not fill shape {shape}")
        self._chart = chart
        self._shape = shape
        self._components = tuple(wrap(c) for c in components)

    @property
    def chart(self) -> Chart:
        return self._chart

    @property
    def shape(self) -> tuple[int, ...]:
        return self._shape

    @property
    def components(self) -> tuple[Expr, ...]:
        return self._components

    def _check_point(self, point: Sequence[float]) -> None:
        if len(point) != self._chart.dim:
            raise ModelError(f"point of length {len(point)} on a {self._chart.dim}-dimensional chart")

    def value(self, point: Sequence[float]) -> np.ndarray:
        self._check_point(point)
        return np.array(evaluate_all(self._components, point)).reshape(self._shape)

    def jet(self, point: Sequence[float], order: int) -> Jet:
        """Jet of the whole tensor at a point."""
        self._check_point(point)
        lifted = lift_all(self._components, point, order)
        coeffs = np.stack([j.coeffs for j in lifted]).reshape(
            self._shape + (coefficient_count(len(point), order),))
        return Jet(coeffs, len(point), order)

    def variables(self) -> frozenset[int]:
        used: set[int] = set()
        for c in self._components:
            used |= c.variables()
        return frozenset(used)


class ScalarField(TensorField):
    """Scalar function on a chart (f, psi, c, warp factors)."""

    def __init__(self, chart: Chart, expr: ExprLike):
        super().__init__(chart, (), [expr])

    @property
    def expr(self) -> Expr:
        return self._components[0]

    def is_constant(self) -> bool:
        return not self.expr.variables()

    def __add__(self, other: Union["ScalarField", float]) -> "ScalarField":
        other_expr = other.expr if isinstance(other, ScalarField) else wrap(other)
        return ScalarField(self._chart, self.expr + other_expr)

    def __mul__(self, other: Union["ScalarField", float]) -> "ScalarField":
        other_expr = other.expr if isinstance(other, ScalarField) else wrap(other)
        return ScalarField(self._chart, self.expr * other_expr)

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return ScalarField(self._chart, -self.expr)


class OneFormField(TensorField):
    """One-form alpha = alpha_i dx^i."""

    def __init__(self, chart: Chart, components: Sequence[ExprLike]):
        if len(components) != chart.dim:
            raise ModelError(f"one-form needs {chart.dim} components, got {len(components)}")
        super().__init__(chart, (chart.dim,), components)

    @classmethod
    def zero(cls, chart: Chart) -> "OneFormField":
        return cls(chart, [const(0.0)] * chart.dim)

    def __add__(self, other: "OneFormField") -> "OneFormField":
        return OneFormField(self._chart, [a + b for a, b in zip(self._components, other.components)])

    def scaled(self, factor: Union[ScalarField, float]) -> "OneFormField":
        factor_expr = factor.expr if isinstance(factor, ScalarField) else wrap(factor)
        return OneFormField(self._chart, [factor_expr * a for a in self._components])


class SymTensorField(TensorField):
    """Symmetric 2-tensor; only the upper triangle is read, so symmetry holds by construction."""

    def __init__(self, chart: Chart, components: Sequence[Sequence[ExprLike]]):
        n = chart.dim
        if len(components) != n or any(len(row) != n for row in components):
            raise ModelError(f"symmetric tensor needs {n}x{n} components")
        upper = [[wrap(components[min(i, j)][max(i, j)]) for j in range(n)] for i in range(n)]
        super().__init__(chart, (n, n), [c for row in upper for c in row])

    def entry(self, i: int, j: int) -> Expr:
        return self._components[i * self._chart.dim + j]

    def rows(self) -> list[list[Expr]]:
        n = self._chart.dim
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def scaled(self, factor: Union[ScalarField, float]) -> "SymTensorField":
        factor_expr = factor.expr if isinstance(factor, ScalarField) else wrap(factor)
        return SymTensorField(self._chart, [[factor_expr * e for e in row] for row in self.rows()])


class MetricField(SymTensorField):
    """
    Metric tensor on a chart.

    Responsibility: Carry the components and signature of g
    - Riemannian or Lorentzian
    - Pointwise invertibility and signature checks

    Attributes:
        _signature: Expected signature
    """

    def __init__(self, chart: Chart, components: Sequence[Sequence[ExprLike]],
                 signature: Signature = Signature.RIEMANNIAN):
        super().__init__(chart, components)
        self._signature = signature

    @classmethod
    def diagonal(cls, chart: Chart, entries: Sequence[ExprLike],
                 signature: Signature = Signature.RIEMANNIAN) -> "MetricField":
        n = chart.dim
        rows = [[entries[i] if i == j else const(0.0) for j in range(n)] for i in range(n)]
        return cls(chart, rows, signature)

    @classmethod
    def euclidean(cls, chart: Chart) -> "MetricField":
        return cls.diagonal(chart, [const(1.0)] * chart.dim)

    @property
    def dim(self) -> int:
        return self._chart.dim

    @property
    def signature(self) -> Signature:
        return self._signature

    def scaled(self, factor: Union[ScalarField, float]) -> "MetricField":
        scaled = super().scaled(factor)
        return MetricField(self._chart, scaled.rows(), self._signature)

    def check_value(self, value: np.ndarray, point: Sequence[float]) -> None:
        """
        Raise if the metric value at a point is singular or has the wrong signature.

        Raises:
            SingularMetric: Condition number above config.SINGULAR_COND_LIMIT
            DefinitenessError: Wrong count of negative eigenvalues
        """
        eigenvalues = np.linalg.eigvalsh(value)
        magnitudes = np.abs(eigenvalues)
        if magnitudes.min() == 0.0 or magnitudes.max() / magnitudes.min() > config.SINGULAR_COND_LIMIT:
            raise SingularMetric(f"metric is singular at {list(point)}")
        negatives = int(np.sum(eigenvalues < 0.0))
        expected = 0 if self._signature is Signature.RIEMANNIAN else 1
        if negatives != expected:
            raise DefinitenessError(
                f"{self._signature.value} metric has {negatives} negative eigenvalues at {list(point)}"
            )

    def check_samples(self, points: np.ndarray) -> None:
        for point in points:
            self.check_value(self.value(point), point)


@dataclass(frozen=True)
class KidData:
    """
    Candidate Killing Initial Data on an umbilical slice (k = c g).

    Attributes:
        f: Lapse function
        alpha: Shift one-form
        c: Mean-curvature function
        label: Descriptor for reports
    """

    f: ScalarField
    alpha: OneFormField
    c: ScalarField
    label: str = field(default="kid")

    def __post_init__(self):
        if not (self.f.chart == self.alpha.chart == self.c.chart):
            raise ModelError("KID fields live on different charts")

    @property
    def chart(self) -> Chart:
        return self.f.chart

    def second_fundamental_form(self, metric: MetricField) -> SymTensorField:
        """k = c g."""
        if metric.chart != self.chart:
            raise ModelError("KID and metric charts differ")
        return SymTensorField(metric.chart, metric.scaled(self.c).rows())

    def with_lapse(self, f: ScalarField, label: Optional[str] = None) -> "KidData":
        return KidData(f, self.alpha, self.c, label or self.label)

    def with_shift(self, alpha: OneFormField, label: Optional[str] = None) -> "KidData":
        return KidData(self.f, alpha, self.c, label or self.label)
