"""
Warp Solver module for KID Verifier.
Implements the WarpSolver class: shooting for periodic warp factors h(t) whose
warped product dt^2 + h^2 g0 has a prescribed constant scalar curvature.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

import config
from errors import NoPeriodicOrbit, ParamError, ToleranceError
from models import Model, sphere, warped
from trig import TrigPolynomial

logger = logging.getLogger(__name__)


# Closed forms

def warped_scal_formula(h, dh, ddh, n: int, scal0: float):
    """
    Scalar curvature of dt^2 + h(t)^2 g0 with g0 of constant scalar curvature scal0.

    Scal = scal0 / h^2 - 2(n-1) h'' / h - (n-1)(n-2) h'^2 / h^2

    Args:
        h, dh, ddh: Warp factor and its derivatives (scalars or arrays)
        n: Dimension of the warped product
        scal0: Scalar curvature of the (n-1)-dimensional base

    Raises:
        ParamError: h <= 0 somewhere
    """
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0.0):
        raise ParamError("warped scalar curvature needs h > 0")
    return scal0 / h ** 2 - 2.0 * (n - 1) * ddh / h - (n - 1) * (n - 2) * np.asarray(dh) ** 2 / h ** 2


def warp_acceleration(h, dh, n: int, scal_target: float, scal0: float):
    """h'' that makes the warped scalar curvature equal scal_target."""
    return (scal0 - (n - 1) * (n - 2) * dh * dh - scal_target * h * h) / (2.0 * (n - 1) * h)


def first_integral(n: int, scal_target: float, scal0: float, h, dh):
    """
    Conserved quantity of the warp ODE (n >= 3).

    E = h^(n-2) h'^2 - scal0 h^(n-2) / ((n-1)(n-2)) + scal_target h^n / (n(n-1))

    Bounded orbits around the fixed point have E < 0.

    Raises:
        ParamError: h <= 0 or n < 3
    """
    if n < 3:
        raise ParamError(f"the first integral needs n >= 3, got {n}")
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0.0):
        raise ParamError("first integral needs h > 0")
    dh = np.asarray(dh, dtype=float)
    return (h ** (n - 2) * dh * dh - scal0 * h ** (n - 2) / ((n - 1) * (n - 2))
            + scal_target * h ** n / (n * (n - 1)))


def fixed_point(scal_target: float, scal0: float) -> float:
    """Constant warp factor sqrt(scal0 / scal_target)."""
    return math.sqrt(scal0 / scal_target)


def linearized_period(n: int, scal_target: float) -> float:
    """2 pi / sqrt(lambda) with lambda = scal_target / (n - 1), the Jacobian eigenvalue at the fixed point."""
    return config.TWO_PI / math.sqrt(scal_target / (n - 1))


# Problem and solution records

@dataclass(frozen=True)
class WarpProblem:
    """
    Initial value problem for the warp factor.

    Attributes:
        n: Dimension of the warped product
        scal_target: Prescribed scalar curvature
        scal0: Scalar curvature of the Einstein base
        h0: Initial warp factor
        dh0: Initial derivative
        period_hint: Expected period (defaults to the linearized period)
        tol: Periodicity tolerance
        rtol: Integrator relative tolerance
        atol: Integrator absolute tolerance
        drift_tol: Allowed relative first-integral drift
        fit_tol: Allowed error of the trigonometric fit
    """

    n: int
    scal_target: float
    scal0: float
    h0: float
    dh0: float
    period_hint: Optional[float] = None
    tol: float = config.PERIODICITY_TOL
    rtol: float = config.ODE_RTOL
    atol: float = config.ODE_ATOL
    drift_tol: float = config.FIRST_INTEGRAL_TOL
    fit_tol: float = config.FIT_TOL

    def __post_init__(self):
        if self.n < 3:
            raise ParamError(f"warp problems need n >= 3, got {self.n}")
        if not self.scal_target > 0.0:
            raise ParamError(f"target scalar curvature must be positive, got {self.scal_target}")
        if not self.scal0 > 0.0:
            raise ParamError(f"base scalar curvature must be positive, got {self.scal0}")
        if not self.h0 > 0.0:
            raise ParamError(f"initial warp factor must be positive, got {self.h0}")
        if not self.tol > 0.0:
            raise ParamError(f"tolerance must be positive, got {self.tol}")

    @property
    def hint(self) -> float:
        return self.period_hint or linearized_period(self.n, self.scal_target)

    def energy(self, h, dh):
        return first_integral(self.n, self.scal_target, self.scal0, h, dh)

    def rhs(self, t: float, y: np.ndarray) -> list[float]:
        return [y[1], warp_acceleration(y[0], y[1], self.n, self.scal_target, self.scal0)]


@dataclass(frozen=True)
class HSolution:
    """
    One period of a warp factor.

    Attributes:
        problem: Source problem
        period: Period L
        t: Sample times over [0, L]
        h: h at the samples
        dh: h' at the samples
        energy: First integral at the samples
        fit: Trigonometric interpolant of h
        gap: |(h, h')(L) - (h0, dh0)|
        drift: Relative first-integral drift
        scal_mean: Mean achieved scalar curvature (through the fit)
        scal_variation: Max deviation of the achieved scalar curvature
        constant: True for the fixed-point solution
    """

    problem: WarpProblem
    period: float
    t: np.ndarray
    h: np.ndarray
    dh: np.ndarray
    energy: np.ndarray
    fit: TrigPolynomial
    gap: float
    drift: float
    scal_mean: float
    scal_variation: float
    constant: bool = False
    notes: list[str] = field(default_factory=list)

    def to_csv(self, path: Path) -> Path:
        """Write columns t, h, dh, E."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["t", "h", "dh", "E"])
            for row in zip(self.t, self.h, self.dh, self.energy):
                writer.writerow([repr(float(v)) for v in row])
        logger.info("Wrote %d warp samples to %s", len(self.t), path)
        return path

    def details(self) -> dict[str, float]:
        return {
            "period": self.period,
            "gap": self.gap,
            "drift": self.drift,
            "scal_mean": self.scal_mean,
            "scal_variation": self.scal_variation,
            "h_min": float(self.h.min()),
            "h_max": float(self.h.max()),
            "energy": float(self.energy[0]),
            "fit_modes": self.fit.modes,
        }


class WarpSolver:
    """
    Finds periodic warp factors by shooting.

    Responsibility: Turn a WarpProblem into a verified periodic HSolution
    - Integrate h'' = F(h, h') with an adaptive embedded pair (DOP853)
    - Detect the first return to the initial state on a Poincare section and refine it
    - Check the periodicity gap, first-integral drift and trigonometric fit

    OOP Principles Applied:
    - Single Responsibility: Only solves the warp ODE
    - Encapsulation: Event handling and refinement stay private

    Attributes:
        _samples: Samples written per period
    """

    def __init__(self, samples: int = config.CSV_SAMPLES):
        self._samples = samples

    def solve_h(self, problem: WarpProblem) -> HSolution:
        """
        Solve for one period of h.

        Args:
            problem: Warp problem

        Returns:
            HSolution with h > 0 throughout

        Raises:
            NoPeriodicOrbit: h collapses to 0, escapes, or never returns
            ToleranceError: Periodicity gap, drift or fit above tolerance
        """
        h_star = fixed_point(problem.scal_target, problem.scal0)
        if (abs(problem.h0 - h_star) <= config.FIXED_POINT_TOL * h_star
                and abs(problem.dh0) <= config.FIXED_POINT_TOL):
            logger.info("Initial state is the fixed point h* = %.12g", h_star)
            return self._constant_solution(problem, h_star)

        logger.info("Shooting warp orbit n=%d scal=%g h0=%g dh0=%g",
                    problem.n, problem.scal_target, problem.h0, problem.dh0)
        window = 1.5 * problem.hint
        for _ in range(config.PERIOD_SEARCH_DOUBLINGS):
            trajectory = self._integrate(problem, window)
            period = self._first_return(problem, trajectory, window)
            if period is not None:
                return self._build(problem, trajectory, period)
            window *= 2.0
        raise NoPeriodicOrbit(f"no return to the initial state within t = {window / 2.0:.6g}")

    # Integration

    def _integrate(self, problem: WarpProblem, window: float):
        def collapse(t, y):
            return y[0] - config.H_COLLAPSE
        collapse.terminal = True
        collapse.direction = -1

        def escape(t, y):
            return y[0] - config.H_ESCAPE
        escape.terminal = True
        escape.direction = 1

        result = solve_ivp(problem.rhs, (0.0, window), [problem.h0, problem.dh0],
                           method=config.ODE_METHOD, rtol=problem.rtol, atol=problem.atol,
                           dense_output=True, events=(collapse, escape))
        if result.status == 1:
            which = "collapses to h = 0" if result.t_events[0].size else "escapes to infinity"
            raise NoPeriodicOrbit(f"warp orbit {which} at t = {result.t[-1]:.6g}")
        if result.status != 0:
            raise NoPeriodicOrbit(f"integration failed: {result.message}")
        return result.sol

    def _section(self, problem: WarpProblem):
        """Poincare section through the initial state and its crossing direction."""
        if problem.dh0 != 0.0:
            return (lambda y: y[0] - problem.h0), math.copysign(1.0, problem.dh0)
        acceleration = warp_acceleration(problem.h0, 0.0, problem.n, problem.scal_target, problem.scal0)
        return (lambda y: y[1]), math.copysign(1.0, acceleration)

    def _first_return(self, problem: WarpProblem, trajectory, window: float) -> Optional[float]:
        """First crossing of the section in the initial direction after the guard time."""
        crossing, direction = self._section(problem)
        guard = config.EVENT_GUARD_FRACTION * problem.hint
        grid = np.linspace(guard, window, config.KERNEL_GRID * 4)
        values = direction * crossing(trajectory(grid))
        hits = np.nonzero((values[:-1] < 0.0) & (values[1:] >= 0.0))[0]
        if hits.size == 0:
            return None
        j = hits[0]
        return brentq(lambda t: crossing(trajectory(t)), grid[j], grid[j + 1],
                      xtol=1e-15, rtol=4 * np.finfo(float).eps)

    # Solution assembly

    def _build(self, problem: WarpProblem, trajectory, period: float) -> HSolution:
        end = trajectory(period)
        scale = max(1.0, abs(problem.h0), abs(problem.dh0))
        gap = float(math.hypot(end[0] - problem.h0, end[1] - problem.dh0))
        if gap > problem.tol * scale:
            raise ToleranceError(f"periodicity gap {gap:.3e} exceeds {problem.tol:.1e}")

        t = np.linspace(0.0, period, self._samples)
        states = trajectory(t)
        h, dh = states[0], states[1]
        if np.any(h <= 0.0):
            raise NoPeriodicOrbit("warp factor reaches zero within the period")
        energy = problem.energy(h, dh)
        drift = float(np.max(np.abs(energy - energy[0])) / max(1.0, abs(float(energy[0]))))
        if drift > problem.drift_tol:
            raise ToleranceError(f"first-integral drift {drift:.3e} exceeds {problem.drift_tol:.1e}")

        fit = self._fit(trajectory, period, problem.fit_tol)
        scal_mean, scal_variation = self._achieved_scal(problem, fit)
        logger.info("Periodic orbit L=%.12g gap=%.2e drift=%.2e scal variation=%.2e",
                    period, gap, drift, scal_variation)
        return HSolution(problem, period, t, h, dh, energy, fit, gap, drift, scal_mean, scal_variation)

    def _fit(self, trajectory, period: float, tolerance: float) -> TrigPolynomial:
        nodes = np.arange(config.FIT_SAMPLES) * period / config.FIT_SAMPLES
        fit = TrigPolynomial.fit(trajectory(nodes)[0], period)
        midpoints = nodes + 0.5 * period / config.FIT_SAMPLES
        error = fit.max_error(midpoints, trajectory(midpoints)[0])
        if error > tolerance:
            raise ToleranceError(f"trigonometric fit error {error:.3e} exceeds {tolerance:.1e}")
        return fit

    def _achieved_scal(self, problem: WarpProblem, fit: TrigPolynomial) -> tuple[float, float]:
        t = np.linspace(0.0, fit.period, config.KERNEL_GRID, endpoint=False)
        scal = warped_scal_formula(fit.evaluate(t), fit.evaluate(t, 1), fit.evaluate(t, 2),
                                   problem.n, problem.scal0)
        return float(scal.mean()), float(np.max(np.abs(scal - problem.scal_target)))

    def _constant_solution(self, problem: WarpProblem, h_star: float) -> HSolution:
        period = problem.hint
        t = np.linspace(0.0, period, self._samples)
        h = np.full_like(t, h_star)
        dh = np.zeros_like(t)
        energy = problem.energy(h, dh)
        fit = TrigPolynomial.constant(h_star, period)
        scal_mean, scal_variation = self._achieved_scal(problem, fit)
        notes = ["fixed point: period is the declared or linearized period"]
        return HSolution(problem, period, t, h, dh, energy, fit, 0.0, 0.0, scal_mean, scal_variation,
                         constant=True, notes=notes)


def solve_h(problem: WarpProblem) -> HSolution:
    return WarpSolver().solve_h(problem)


def base_sphere_radius(n: int, scal0: float) -> float:
    """Radius of S^(n-1) with scalar curvature scal0."""
    return math.sqrt((n - 1) * (n - 2) / scal0)


def warped_from_solution(solution: HSolution, descriptor: Optional[str] = None) -> Model:
    """
    Warped model over the round (n-1)-sphere with the solution's warp factor.

    Raises:
        ParamError: The fitted warp factor is not positive
    """
    problem = solution.problem
    base = sphere(problem.n - 1, base_sphere_radius(problem.n, problem.scal0))
    return warped(base, solution.fit, scal0=problem.scal0, descriptor=descriptor)
