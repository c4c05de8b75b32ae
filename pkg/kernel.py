"""
Kernel module for KID Verifier.
Implements the t-dependent kernel finder for U*_g on warped products: the
reduction of U*_g(f(t)) = 0 to a linear ODE, its validation against the full
curvature engine, and the monodromy count of periodic solutions.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

import config
import expr as ex
from errors import ModelError, ToleranceError
from fields import ScalarField
from geometry import LocalGeometry
from models import Model
from operators import ustar_jet
from trig import TrigPolynomial
from warp_solver import warped_scal_formula

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReducedCoefficients:
    """
    Warp data entering the reduced kernel equations at times t.

    U*_g(f)_tt = (n-1)((h''/h) f - (h'/h) f')
    U*_g(f)_ab = -(f'' + (n-2)(h'/h) f' + q f) g_ab,
    q = rho / h^2 - h''/h - (n-2) h'^2 / h^2, rho = scal0 / (n-1)
    """

    n: int
    h: np.ndarray
    dh: np.ndarray
    ddh: np.ndarray
    rho: float

    @property
    def damping(self) -> np.ndarray:
        return (self.n - 2) * self.dh / self.h

    @property
    def potential(self) -> np.ndarray:
        return (self.rho / self.h ** 2 - self.ddh / self.h
                - (self.n - 2) * self.dh ** 2 / self.h ** 2)

    def tt(self, f, df) -> np.ndarray:
        return (self.n - 1) * (self.ddh / self.h * f - self.dh / self.h * df)

    def ab(self, f, df, ddf) -> np.ndarray:
        """Bracket of the spatial block; U*_ab = -ab g_ab."""
        return ddf + self.damping * df + self.potential * f


@dataclass(frozen=True)
class KernelResult:
    """
    Periodic t-dependent kernel of U*_g.

    Attributes:
        dimension: Number of independent L-periodic solutions
        t: Sample grid over [0, L)
        basis: Array (dimension, len(t)) of orthonormalized samples
        monodromy: Period map of the reduced ODE
        determinant: det(monodromy)
        singular_values: Singular values of monodromy - identity
        reduction_error: Worst disagreement with the full engine
        correlation: Share of h' inside the kernel span (warped models)
    """

    dimension: int
    t: np.ndarray
    basis: np.ndarray
    monodromy: np.ndarray
    determinant: float
    singular_values: np.ndarray
    reduction_error: float
    correlation: float | None = None
    notes: list[str] = field(default_factory=list)

    def details(self) -> dict[str, object]:
        return {
            "dimension": self.dimension,
            "determinant": self.determinant,
            "singular_values": [float(s) for s in self.singular_values],
            "reduction_error": self.reduction_error,
            "correlation": self.correlation,
        }


def _warp_of(model: Model):
    if model.warp is None or model.warp.scal0 is None:
        raise ModelError(f"{model.descriptor} is not a warped product over an Einstein base")
    if model.warp.t_window is not None:
        raise ModelError(f"{model.descriptor} covers only a t-window, not a full period")
    return model.warp


def reduced_coefficients(model: Model, t) -> ReducedCoefficients:
    warp = _warp_of(model)
    h = warp.h
    n = model.dim
    return ReducedCoefficients(n, h.evaluate(t), h.evaluate(t, 1), h.evaluate(t, 2),
                               warp.scal0 / (n - 1))


def _check_constant_scal(model: Model, tolerance: float) -> None:
    warp = _warp_of(model)
    t = np.linspace(0.0, warp.period, config.KERNEL_GRID, endpoint=False)
    scal = warped_scal_formula(warp.h.evaluate(t), warp.h.evaluate(t, 1), warp.h.evaluate(t, 2),
                               model.dim, warp.scal0)
    spread = float(np.max(scal) - np.min(scal))
    if spread > tolerance:
        raise ModelError(f"{model.descriptor} has non-constant Scal (spread {spread:.3e})")


def validate_reduction(model: Model, trials: int = config.REDUCTION_TRIALS,
                       seed: int = config.DEFAULT_SEED) -> float:
    """
    Compare the reduced tt and ab expressions with the full-chart U*_g.

    Each trial draws a random trigonometric f(t) and a random point; the
    discrepancy covers the tt entry, the spatial block and the mixed entries.

    Returns:
        Worst discrepancy over all trials

    Raises:
        ToleranceError: Discrepancy above config.REDUCTION_TOL
    """
    warp = _warp_of(model)
    rng = np.random.default_rng(seed)
    t = ex.var(0)
    points = model.sample(trials, seed)
    worst = 0.0
    for point in points:
        frequency = int(rng.integers(1, 4))
        trial = TrigPolynomial(warp.period, float(rng.uniform(-1, 1)),
                               tuple(float(v) for v in rng.uniform(-1, 1, frequency)),
                               tuple(float(v) for v in rng.uniform(-1, 1, frequency)))
        geo = LocalGeometry(model.metric, point, order=2)
        full = ustar_jet(geo, geo.lift(ScalarField(model.chart, trial.to_expr(t)))).value
        coefficients = reduced_coefficients(model, point[0])
        f, df, ddf = (trial.evaluate(point[0], k) for k in range(3))
        expected = -float(coefficients.ab(f, df, ddf)) * geo.metric.value
        expected[0, :] = 0.0
        expected[:, 0] = 0.0
        expected[0, 0] = float(coefficients.tt(f, df))
        scale = max(1.0, float(np.max(np.abs(full))))
        worst = max(worst, float(np.max(np.abs(full - expected))) / scale)
    if worst > config.REDUCTION_TOL:
        raise ToleranceError(f"reduced kernel equations disagree with the engine ({worst:.3e})")
    logger.info("Kernel reduction validated on %d trials (worst %.2e)", trials, worst)
    return worst


def kernel_dim_t(model: Model, tol: float = config.KERNEL_SVD_TOL,
                 scal_tol: float = config.SCAL_VARIATION_TOL,
                 rtol: float = config.ODE_RTOL) -> KernelResult:
    """
    Count L-periodic solutions f(t) of U*_g(f) = 0.

    The spatial equation is a linear second-order ODE; its monodromy M over one
    period fixes the periodic candidates (null space of M - I), and the tt
    equation is then imposed on the sampled candidates.

    Args:
        model: Warped or product model over an Einstein base
        tol: Relative singular-value threshold
        scal_tol: Allowed spread of the scalar curvature

    Returns:
        KernelResult

    Raises:
        ModelError: Not a full-period warp over an Einstein base, or Scal not constant
        ToleranceError: Reduction check or det(M) = 1 check failed
    """
    _check_constant_scal(model, scal_tol)
    reduction_error = validate_reduction(model)
    warp = _warp_of(model)
    period = warp.period

    def rhs(t, y):
        c = reduced_coefficients(model, t)
        f1, df1, f2, df2 = y
        return [df1, -c.damping * df1 - c.potential * f1,
                df2, -c.damping * df2 - c.potential * f2]

    solution = solve_ivp(rhs, (0.0, period), [1.0, 0.0, 0.0, 1.0], method=config.ODE_METHOD,
                         rtol=rtol, atol=config.ODE_ATOL, dense_output=True)
    if solution.status != 0:
        raise ToleranceError(f"fundamental system integration failed: {solution.message}")
    end = solution.y[:, -1]
    monodromy = np.array([[end[0], end[2]], [end[1], end[3]]])
    determinant = float(np.linalg.det(monodromy))
    if abs(determinant - 1.0) > config.MONODROMY_DET_TOL:
        raise ToleranceError(f"monodromy determinant {determinant:.12g} differs from 1")

    _, singular, vt = np.linalg.svd(monodromy - np.eye(2))
    scale = max(1.0, float(np.max(np.abs(monodromy))))
    candidates = vt[singular <= tol * scale]

    grid = np.linspace(0.0, period, config.KERNEL_GRID, endpoint=False)
    states = solution.sol(grid)
    fundamental = np.stack([states[0], states[2]])
    derivatives = np.stack([states[1], states[3]])
    basis = np.zeros((0, grid.size))
    notes = []
    if len(candidates):
        values = candidates @ fundamental
        slopes = candidates @ derivatives
        coefficients = reduced_coefficients(model, grid)
        constraint = np.stack([coefficients.tt(v, s) for v, s in zip(values, slopes)], axis=1)
        _, tt_singular, tt_vt = np.linalg.svd(constraint, full_matrices=True)
        tt_scale = max(1.0, float(np.max(np.abs(values))))
        rank = int(np.sum(tt_singular > tol * tt_scale * np.sqrt(grid.size)))
        combos = tt_vt[rank:]
        if rank:
            notes.append(f"tt equation removed {rank} periodic candidate(s)")
        basis = _orthonormalize(combos @ values)

    correlation = None
    if not warp.h.is_constant():
        dh = warp.h.evaluate(grid, 1)
        correlation = _span_share(basis, dh)
    result = KernelResult(basis.shape[0], grid, basis, monodromy, determinant, singular,
                          reduction_error, correlation, notes)
    logger.info("t-kernel of %s has dimension %d (det M = %.12g)",
                model.descriptor, result.dimension, determinant)
    return result


def correlation(a: np.ndarray, b: np.ndarray) -> float:
    """|<a, b>| / (|a| |b|) on a common grid."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(abs(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def _orthonormalize(rows: np.ndarray) -> np.ndarray:
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    q, _ = np.linalg.qr(rows.T)
    return q.T


def _span_share(basis: np.ndarray, samples: np.ndarray) -> float:
    """Norm of the projection of samples onto the basis span over the norm of samples."""
    norm = float(np.linalg.norm(samples))
    if basis.shape[0] == 0 or norm == 0.0:
        return 0.0
    return float(np.linalg.norm(basis @ samples) / norm)
