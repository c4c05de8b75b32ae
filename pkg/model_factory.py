"""
Model Factory module for KID Verifier.
Implements the ModelDescriptor value type and the ModelFactory class using the
Factory Method pattern: descriptor strings from configs and flags become Models,
KID fixtures and warp problems.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, TypeVar

import config
import models
from errors import ConfigError
from fields import KidData
from models import Model
from trig import TrigPolynomial
from warp_solver import HSolution, WarpProblem, WarpSolver, fixed_point, warped_from_solution

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class ModelDescriptor:
    """
    Parsed "kind[:variant][,key=value...]" string.

    Examples: "sphere:n=3,r=1", "warped:ode,n=3,scal=6,dh0=0.1", "obata:i=4,c=1", "static".

    Attributes:
        kind: Leading name
        variant: Optional bare word after the colon
        params: Ordered key/value pairs as written
    """

    kind: str
    variant: Optional[str] = None
    params: tuple[tuple[str, str], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "ModelDescriptor":
        """
        Parse a descriptor string.

        Raises:
            ConfigError: Empty text, a repeated key or a malformed token
        """
        text = text.strip()
        if not text:
            raise ConfigError("empty descriptor")
        kind, _, rest = text.partition(":")
        variant = None
        params: list[tuple[str, str]] = []
        tokens = [token.strip() for token in rest.split(",")] if rest else []
        for position, token in enumerate(tokens):
            if "=" not in token:
                if position != 0 or not token:
                    raise ConfigError(f"malformed descriptor token '{token}' in '{text}'")
                variant = token
                continue
            key, _, value = token.partition("=")
            if not key or not value:
                raise ConfigError(f"malformed descriptor token '{token}' in '{text}'")
            if any(key == existing for existing, _ in params):
                raise ConfigError(f"repeated key '{key}' in '{text}'")
            params.append((key, value))
        return cls(kind.strip(), variant, tuple(params))

    def __str__(self) -> str:
        tokens = ([self.variant] if self.variant else []) + [f"{k}={v}" for k, v in self.params]
        return self.kind + (":" + ",".join(tokens) if tokens else "")

    def keys(self) -> set[str]:
        return {key for key, _ in self.params}

    def get(self, key: str, default: T, cast: Callable[[str], T]) -> T:
        """Typed parameter lookup; missing keys give the default."""
        for name, value in self.params:
            if name == key:
                try:
                    return cast(value)
                except ValueError as exc:
                    raise ConfigError(f"parameter {key}='{value}' of '{self}' is not valid") from exc
        return default

    def require_keys(self, allowed: set[str]) -> None:
        unknown = self.keys() - allowed
        if unknown:
            raise ConfigError(f"unknown parameter(s) {sorted(unknown)} in '{self}'")


class ModelFactory:
    """
    Builds models, KID fixtures and warp problems from descriptors.

    Responsibility: Be the single place descriptor names map to constructors
    - Geometries: sphere, torus, random, product, warped (ode, trig, sin, random)
    - KIDs: obata, warp, killing, static, nonconstant_c, with optional perturbations
    - Warp problems for the ODE-built fixture, at a chosen integrator tolerance

    OOP Principles Applied:
    - Factory Method Pattern: build() and build_kid() dispatch on the kind
    - Dependency Injection: The WarpSolver is supplied by the caller

    Attributes:
        _solver: Solver for "warped:ode"
        _ode_rtol: Integrator tolerance for warp problems
        _last_solution: Warp solution behind the most recent "warped:ode" model
    """

    def __init__(self, solver: Optional[WarpSolver] = None, ode_rtol: float = config.ODE_RTOL):
        self._solver = solver or WarpSolver()
        self._ode_rtol = ode_rtol
        self._last_solution: Optional[HSolution] = None

    @property
    def last_solution(self) -> Optional[HSolution]:
        return self._last_solution

    # Models

    def build(self, text: str) -> Model:
        """
        Build a model from its descriptor.

        Raises:
            ConfigError: Unknown kind, variant or parameter
            ParamError: Out-of-range parameter (from the constructors)
        """
        descriptor = ModelDescriptor.parse(text)
        builders = {
            "sphere": self._sphere,
            "torus": self._torus,
            "random": self._random,
            "product": self._product,
            "warped": self._warped,
        }
        if descriptor.kind not in builders:
            raise ConfigError(f"unknown model kind '{descriptor.kind}' "
                              f"(expected one of {', '.join(builders)})")
        model = builders[descriptor.kind](descriptor)
        logger.info("Model %s ready (dimension %d)", descriptor, model.dim)
        return dataclasses.replace(model, descriptor=str(descriptor))

    def _sphere(self, d: ModelDescriptor) -> Model:
        d.require_keys({"n", "r", "chart"})
        return models.sphere(d.get("n", 3, int), d.get("r", 1.0, float), d.get("chart", "north", str))

    def _torus(self, d: ModelDescriptor) -> Model:
        d.require_keys({"n", "L"})
        return models.flat_torus(d.get("n", 3, int), d.get("L", config.TWO_PI, float))

    def _random(self, d: ModelDescriptor) -> Model:
        d.require_keys({"n", "amp", "seed", "L"})
        return models.random_model(d.get("n", 3, int), d.get("L", config.TWO_PI, float),
                                   d.get("amp", 0.1, float), d.get("seed", config.DEFAULT_SEED, int))

    def _product(self, d: ModelDescriptor) -> Model:
        d.require_keys({"n", "L"})
        n = d.get("n", 3, int)
        resonant = config.TWO_PI / math.sqrt(max(n - 2, 1))
        return models.product(n, d.get("L", resonant, float))

    def _warped(self, d: ModelDescriptor) -> Model:
        variants = {
            "ode": self._warped_ode,
            "trig": self._warped_trig,
            "sin": self._warped_sin,
            "random": self._warped_random,
        }
        if d.variant not in variants:
            raise ConfigError(f"warped models need a variant in {', '.join(variants)}, got '{d.variant}'")
        return variants[d.variant](d)

    def _warped_ode(self, d: ModelDescriptor) -> Model:
        problem = self.warp_problem(str(d))
        self._last_solution = self._solver.solve_h(problem)
        return warped_from_solution(self._last_solution, str(d))

    def _warped_trig(self, d: ModelDescriptor) -> Model:
        """a0 + amp cos(t) over the unit round sphere: Scal is not constant."""
        d.require_keys({"n", "a0", "amp", "L"})
        n = d.get("n", 3, int)
        h = TrigPolynomial.cosine(d.get("amp", 0.3, float), 1, d.get("L", config.TWO_PI, float),
                                  d.get("a0", 1.5, float))
        return models.warped(models.sphere(n - 1, 1.0), h, scal0=float((n - 1) * (n - 2)))

    def _warped_sin(self, d: ModelDescriptor) -> Model:
        """sin t over the unit sphere on a t-window: the round n-sphere in polar form."""
        d.require_keys({"n", "margin"})
        n = d.get("n", 3, int)
        margin = d.get("margin", 0.2, float)
        return models.warped(models.sphere(n - 1, 1.0), TrigPolynomial.sine(), scal0=float((n - 1) * (n - 2)),
                             t_window=(margin, math.pi - margin))

    def _warped_random(self, d: ModelDescriptor) -> Model:
        """a0 + amp cos(t) over a random (non-Einstein) torus metric."""
        d.require_keys({"n", "seed", "base_amp", "a0", "amp"})
        n = d.get("n", 3, int)
        base = models.random_model(n - 1, config.TWO_PI, d.get("base_amp", 0.1, float),
                                   d.get("seed", config.DEFAULT_SEED, int))
        h = TrigPolynomial.cosine(d.get("amp", 0.3, float), 1, config.TWO_PI, d.get("a0", 1.5, float))
        return models.warped(base, h)

    # Warp problems

    def warp_problem(self, text: str) -> WarpProblem:
        """
        Warp problem of a "warped:ode" descriptor over the unit round (n-1)-sphere.

        Keys: n, scal (target), dh0, h0 (defaults to the fixed point), L (period hint).
        """
        d = ModelDescriptor.parse(text)
        if d.kind != "warped" or d.variant != "ode":
            raise ConfigError(f"'{text}' is not a warped:ode descriptor")
        d.require_keys({"n", "scal", "dh0", "h0", "L"})
        n = d.get("n", config.WARP_DEFAULT_N, int)
        scal = d.get("scal", config.WARP_DEFAULT_SCAL, float)
        scal0 = float((n - 1) * (n - 2))
        if n < 3 or scal <= 0.0:
            raise ConfigError(f"'{text}' needs n >= 3 and scal > 0")
        h0 = d.get("h0", fixed_point(scal, scal0), float)
        rtol = self._ode_rtol
        return WarpProblem(n=n, scal_target=scal, scal0=scal0, h0=h0,
                           dh0=d.get("dh0", config.WARP_DEFAULT_DH0, float),
                           period_hint=d.get("L", None, float),
                           tol=max(config.PERIODICITY_TOL, 100.0 * rtol),
                           rtol=rtol, atol=rtol * config.ODE_ATOL / config.ODE_RTOL,
                           drift_tol=max(config.FIRST_INTEGRAL_TOL, 100.0 * rtol),
                           fit_tol=max(config.FIT_TOL, 10.0 * rtol))

    # KID fixtures

    def build_kid(self, model: Model, text: str) -> KidData:
        """
        Build a KID fixture on a model.

        Optional keys on every kind: perturb (lapse bump amplitude), shift (amplitude
        of an added Killing form) with shift_form (default rot12).

        Raises:
            ConfigError: Unknown kind or parameter
        """
        d = ModelDescriptor.parse(text)
        common = {"perturb", "shift", "shift_form"}
        if d.kind == "obata":
            d.require_keys({"i", "c"} | common)
            kid = models.obata_kid(model, d.get("i", model.dim + 1, int), d.get("c", 1.0, float))
        elif d.kind == "warp":
            d.require_keys({"c"} | common)
            kid = models.warp_kid(model, d.get("c", config.WARP_DEFAULT_C, float))
        elif d.kind == "killing":
            d.require_keys({"form", "c"} | common)
            kid = models.killing_kid(model, d.get("form", "rot12", str), d.get("c", 1.0, float))
        elif d.kind == "static":
            d.require_keys(common)
            kid = models.static_kid(model)
        elif d.kind == "nonconstant_c":
            d.require_keys({"i", "f"} | common)
            kid = models.nonconstant_c_kid(model, d.get("i", 1, int), d.get("f", 1.0, float))
        else:
            raise ConfigError(f"unknown KID kind '{d.kind}' "
                              "(expected obata, warp, killing, static or nonconstant_c)")
        amplitude = d.get("perturb", 0.0, float)
        if amplitude:
            kid = models.perturb_kid(model, kid, amplitude)
        shift = d.get("shift", 0.0, float)
        if shift:
            kid = models.perturb_shift(model, kid, d.get("shift_form", "rot12", str), shift)
        logger.info("KID %s on %s", kid.label, model.descriptor)
        return kid
