"""
Killing development module for KID Verifier.
Implements the LorentzModel class and the construction of the stationary metric
(|alpha|^2 - f^2) dt^2 + 2 dt alpha + g on R x M from umbilical KID data, with
its Einstein, staticity, slice and determinant checks.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

import config
import expr as ex
from errors import DegenerateError, NonConstantError
from fields import Chart, KidData, MetricField, Signature
from geometry import LocalGeometry
from models import Model
from report import ResidualReport
from validator import KidValidator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LorentzModel:
    """
    Killing development of a KID slice.

    Responsibility: Hold the Lorentzian metric and what it was built from
    - Chart (t, x) = development interval x model chart
    - Cosmological constant Lambda = (Scal + n(n-1)c^2) / 2
    - Lapse floor below which points are not sampled

    OOP Principles Applied:
    - Immutability: Frozen after develop()
    - Composition: Wraps the source Model and KidData instead of extending them

    Attributes:
        metric: Lorentzian metric on the development chart
        lam: Cosmological constant
        kid: Source KID
        f_floor: Minimum |f| at sampled points
        model: Source model
    """

    metric: MetricField
    lam: float
    kid: KidData
    f_floor: float
    model: Model

    @property
    def descriptor(self) -> str:
        return f"develop[{self.model.descriptor}|{self.kid.label}]"

    @property
    def slice_dim(self) -> int:
        return self.model.dim

    @property
    def einstein_constant(self) -> float:
        """2 Lambda / (n - 1): Ric = this times the metric in dimension n + 1."""
        return 2.0 * self.lam / (self.slice_dim - 1)

    def lapse(self, point) -> float:
        """f at the spatial part of a development point."""
        return float(self.kid.f.value(np.asarray(point)[1:]))

    def sample(self, count: int = config.DEFAULT_SAMPLES, seed: int = config.DEFAULT_SEED) -> np.ndarray:
        return self.metric.chart.sample(count, seed)


def development_metric(model: Model, kid: KidData) -> MetricField:
    """Components of the development with the spatial variables shifted by one."""
    n = model.dim
    g = model.metric.rows()
    g_inv = ex.inverse(g)
    alpha = kid.alpha.components
    alpha_squared = ex.total(g_inv[a][b] * alpha[a] * alpha[b]
                             for a in range(n) for b in range(n)
                             if not alpha[a].is_value(0) and not alpha[b].is_value(0))
    f = kid.f.expr
    rows: list[list[ex.Expr]] = [[ex.const(0.0)] * (n + 1) for _ in range(n + 1)]
    rows[0][0] = (alpha_squared - f * f).shift(1)
    for a in range(n):
        rows[0][a + 1] = alpha[a].shift(1)
        for b in range(a, n):
            rows[a + 1][b + 1] = g[a][b].shift(1)
    lower, upper = config.DEVELOPMENT_T_RANGE
    chart = Chart.box([lower], [upper]).product(model.chart)
    return MetricField(chart, rows, Signature.LORENTZIAN)


def develop(model: Model, kid: KidData, samples: int = config.DEFAULT_SAMPLES,
            seed: int = config.DEFAULT_SEED) -> LorentzModel:
    """
    Build the Killing development of (model, kid).

    Args:
        model: Riemannian slice
        kid: Umbilical KID with constant mean curvature
        samples: Points used for the constancy checks and the lapse floor
        seed: Sampling seed

    Returns:
        LorentzModel

    Raises:
        NonConstantError: c or Scal varies beyond DEVELOPMENT_CONSTANCY_TOL
        DegenerateError: f vanishes at every sample
    """
    points = model.sample(samples, seed)
    c_values = np.array([float(kid.c.value(p)) for p in points])
    if np.ptp(c_values) > config.DEVELOPMENT_CONSTANCY_TOL:
        raise NonConstantError(f"mean curvature of {kid.label} varies by {np.ptp(c_values):.3e}")
    scal = KidValidator(model.metric, model.descriptor, points, seed,
                        config.DEVELOPMENT_JET_ORDER).scal_values()
    if np.ptp(scal) > config.DEVELOPMENT_CONSTANCY_TOL:
        raise NonConstantError(f"Scal of {model.descriptor} varies by {np.ptp(scal):.3e}")
    f_values = np.abs([float(kid.f.value(p)) for p in points])
    if f_values.max() == 0.0:
        raise DegenerateError(f"lapse of {kid.label} vanishes at every sample")

    n = model.dim
    c = float(c_values.mean())
    lam = 0.5 * (float(scal.mean()) + n * (n - 1) * c * c)
    development = LorentzModel(development_metric(model, kid), lam, kid,
                               config.F_FLOOR_FRACTION * float(f_values.max()), model)
    logger.info("Developed %s: Lambda = %.12g, f_floor = %.3g",
                development.descriptor, lam, development.f_floor)
    return development


def admissible_points(lm: LorentzModel, points: np.ndarray) -> tuple[np.ndarray, list[str]]:
    """
    Points with |f| >= f_floor and a note on how many were excluded.

    Raises:
        DegenerateError: No point survives
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    keep = np.array([abs(lm.lapse(p)) >= lm.f_floor for p in points], dtype=bool)
    if not keep.any():
        raise DegenerateError(f"no sample of {lm.descriptor} has |f| >= {lm.f_floor:.3g}")
    notes = []
    if not keep.all():
        notes.append(f"excluded {int((~keep).sum())} of {len(points)} points with |f| < {lm.f_floor:.3g}")
    return points[keep], notes


def _validator(lm: LorentzModel, points: np.ndarray, seed: int) -> tuple[KidValidator, list[str]]:
    kept, notes = admissible_points(lm, points)
    return KidValidator(lm.metric, lm.descriptor, kept, seed, config.DEVELOPMENT_JET_ORDER), notes


def einstein_residual(lm: LorentzModel, points: Optional[np.ndarray] = None,
                      tolerance: float = config.EINSTEIN_TOL,
                      seed: int = config.DEFAULT_SEED) -> ResidualReport:
    """Ric - (2 Lambda / (n - 1)) metric over the admissible points."""
    points = lm.sample(seed=seed) if points is None else points
    validator, notes = _validator(lm, points, seed)
    constant = lm.einstein_constant

    def evaluate(geo: LocalGeometry) -> dict[str, np.ndarray]:
        return {"einstein": (geo.ricci - constant * geo.metric).value}

    return validator.tensor_residual("einstein", tolerance, evaluate, notes,
                                     {"lambda": lm.lam, "einstein_constant": constant})


def staticity_residual(lm: LorentzModel, points: Optional[np.ndarray] = None,
                       tolerance: float = config.STATICITY_TOL,
                       seed: int = config.DEFAULT_SEED) -> ResidualReport:
    """w ^ dw with w the metric dual of d/dt (Frobenius integrability of its orthogonal)."""
    points = lm.sample(seed=seed) if points is None else points
    validator, notes = _validator(lm, points, seed)

    def evaluate(geo: LocalGeometry) -> dict[str, np.ndarray]:
        omega = geo.metric[0]
        d_omega = geo.exterior_derivative(omega).value
        w = omega.value
        three_form = (np.einsum("a,bc->abc", w, d_omega)
                      + np.einsum("b,ca->abc", w, d_omega)
                      + np.einsum("c,ab->abc", w, d_omega))
        return {"frobenius": three_form}

    return validator.tensor_residual("staticity", tolerance, evaluate, notes)


def slice_restriction(lm: LorentzModel) -> MetricField:
    """Spatial block of the development, moved back onto the model chart."""
    n = lm.slice_dim
    rows = lm.metric.rows()
    return MetricField(lm.model.chart, [[rows[a + 1][b + 1].shift(-1) for b in range(n)]
                                        for a in range(n)])


def slice_matches(lm: LorentzModel) -> bool:
    """True if the {t = const} slices carry exactly the model metric (expression level)."""
    restricted = slice_restriction(lm).components
    return all(ex.same_tree(a, b) for a, b in zip(restricted, lm.model.metric.components))


def is_stationary(lm: LorentzModel) -> bool:
    """No component depends on the development time."""
    return not any(component.depends_on(0) for component in lm.metric.components)


def determinant_identity(lm: LorentzModel, points: Optional[np.ndarray] = None,
                         seed: int = config.DEFAULT_SEED) -> float:
    """
    Worst relative gap between det(metric) and -f^2 det(g).

    Returns:
        max over admissible points of |det + f^2 det g| / |f^2 det g|
    """
    points = lm.sample(seed=seed) if points is None else points
    kept, _ = admissible_points(lm, points)
    worst = 0.0
    for p in kept:
        expected = -lm.lapse(p) ** 2 * float(np.linalg.det(lm.model.metric.value(p[1:])))
        actual = float(np.linalg.det(lm.metric.value(p)))
        worst = max(worst, abs(actual - expected) / abs(expected))
    return worst
