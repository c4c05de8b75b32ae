"""
Models module for KID Verifier.
Implements the Model class and its constructors (round spheres, flat and random
tori, S1 x S^(n-1) products, warped products) together with the KID fixtures each
geometry is known to carry.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

import config
import expr as ex
from errors import ModelError, ParamError, SelfCheckError
from expr import Expr
from fields import Chart, KidData, MetricField, OneFormField, ScalarField
from geometry import LocalGeometry, frame_sup_norm
from operators import closed_conformal_equation
from trig import TrigPolynomial

logger = logging.getLogger(__name__)

SPHERE_CHARTS = ("north", "south")


@dataclass(frozen=True)
class WarpData:
    """
    Warp factor of dt^2 + h(t)^2 g0.

    Attributes:
        h: Warp factor
        scal0: Scalar curvature of the base (None if the base is not Einstein)
        base_dim: Dimension of the base
        t_window: Non-periodic t-range, or None for the full period
    """

    h: TrigPolynomial
    scal0: Optional[float]
    base_dim: int
    t_window: Optional[tuple[float, float]] = None

    @property
    def period(self) -> float:
        return self.h.period


@dataclass(frozen=True)
class Model:
    """
    A metric on one chart with its named fields.

    Responsibility: Bundle a geometry with the functions and forms it is known for
    - Ambient coordinate pullbacks on spheres, warp factors on warps
    - Killing and closed conformal Killing forms
    - A descriptor string that round-trips through the model factory

    OOP Principles Applied:
    - Immutability: Models are frozen after construction
    - Encapsulation: Named fields are reached through lookups that fail loudly

    Attributes:
        descriptor: Human-readable parameters (e.g. "sphere:n=3,r=1")
        kind: sphere, torus, random, product or warped
        metric: Metric field
        named_scalars: Functions on the chart
        named_oneforms: One-forms on the chart
        params: Construction parameters
        warp: Warp data for product and warped models
    """

    descriptor: str
    kind: str
    metric: MetricField
    named_scalars: Mapping[str, ScalarField] = field(default_factory=dict)
    named_oneforms: Mapping[str, OneFormField] = field(default_factory=dict)
    params: Mapping[str, object] = field(default_factory=dict)
    warp: Optional[WarpData] = None

    def __post_init__(self):
        for name, f in list(self.named_scalars.items()) + list(self.named_oneforms.items()):
            if f.chart != self.metric.chart:
                raise ModelError(f"named field '{name}' is not on the chart of {self.descriptor}")

    @property
    def chart(self) -> Chart:
        return self.metric.chart

    @property
    def dim(self) -> int:
        return self.metric.dim

    def scalar(self, name: str) -> ScalarField:
        if name not in self.named_scalars:
            raise ModelError(f"{self.descriptor} has no scalar '{name}' "
                             f"(available: {', '.join(sorted(self.named_scalars))})")
        return self.named_scalars[name]

    def oneform(self, name: str) -> OneFormField:
        if name not in self.named_oneforms:
            raise ModelError(f"{self.descriptor} has no one-form '{name}' "
                             f"(available: {', '.join(sorted(self.named_oneforms))})")
        return self.named_oneforms[name]

    def closed_conformal_pair(self) -> tuple[OneFormField, ScalarField]:
        """
        (alpha, psi) with nabla alpha = psi g.

        Raises:
            ModelError: The model carries no such form
        """
        if self.kind == "warped":
            return self.oneform("h_dt"), self.scalar("dh")
        if self.kind == "sphere":
            n = self.dim
            r = float(self.params["r"])
            return self.oneform(f"dx{n + 1}"), self.scalar(f"x{n + 1}") * (-1.0 / r ** 2)
        raise ModelError(f"{self.descriptor} has no closed conformal Killing form with psi != 0")

    def sample(self, count: int = config.DEFAULT_SAMPLES, seed: int = config.DEFAULT_SEED) -> np.ndarray:
        return self.chart.sample(count, seed)


# Spheres

def _chart_variables(dim: int, offset: int = 0) -> list[Expr]:
    return [ex.var(offset + i) for i in range(dim)]


def sphere_metric(n: int, r: float, offset: int = 0) -> tuple[Expr, list[Expr]]:
    """
    Conformal factor 4 r^4 / (r^2 + |y|^2)^2 of the stereographic chart.

    Args:
        n: Dimension
        r: Radius
        offset: Index of the first chart variable (for product charts)

    Returns:
        (conformal factor, chart variables)
    """
    y = _chart_variables(n, offset)
    denominator = r * r + ex.total(v * v for v in y)
    return (4.0 * r ** 4) / (denominator * denominator), y


def sphere(n: int, r: float = 1.0, chart: str = "north") -> Model:
    """
    Round sphere of radius r in a stereographic chart over [-2r, 2r]^n.

    The chart origin maps to x_{n+1} = -r in the north chart and to +r in the
    south chart; y -> r^2 y / |y|^2 relates the two.

    Raises:
        ParamError: n < 2, r <= 0 or an unknown chart name
    """
    if n < 2 or n > config.MAX_CHART_DIM:
        raise ParamError(f"sphere dimension must lie in 2..{config.MAX_CHART_DIM}, got {n}")
    if not r > 0.0:
        raise ParamError(f"sphere radius must be positive, got {r}")
    if chart not in SPHERE_CHARTS:
        raise ParamError(f"sphere chart must be one of {SPHERE_CHARTS}, got '{chart}'")
    box = Chart.box([-2.0 * r] * n, [2.0 * r] * n)
    factor, y = sphere_metric(n, r)
    metric = MetricField.diagonal(box, [factor] * n)
    s = ex.total(v * v for v in y)
    d = r * r + s
    sign = 1.0 if chart == "north" else -1.0

    scalars: dict[str, ScalarField] = {}
    oneforms: dict[str, OneFormField] = {}
    for i in range(n):
        scalars[f"x{i + 1}"] = ScalarField(box, (2.0 * r * r) * y[i] / d)
        oneforms[f"dx{i + 1}"] = OneFormField(box, [
            (2.0 * r * r if i == j else 0.0) / d - (4.0 * r * r) * y[i] * y[j] / (d * d)
            for j in range(n)
        ])
    scalars[f"x{n + 1}"] = ScalarField(box, (sign * r) * (s - r * r) / d)
    oneforms[f"dx{n + 1}"] = OneFormField(box, [(sign * 4.0 * r ** 3) * y[j] / (d * d) for j in range(n)])
    rotation = [-y[1], y[0]] + [ex.const(0.0)] * (n - 2)
    oneforms["rot12"] = OneFormField(box, [factor * comp for comp in rotation])
    scalars["one"] = ScalarField(box, 1.0)
    scalars[f"x{n + 1}_squared"] = ScalarField(box, scalars[f"x{n + 1}"].expr ** 2)

    descriptor = f"sphere:n={n},r={_fmt(r)}" + (",chart=south" if chart == "south" else "")
    logger.info("Built %s", descriptor)
    return Model(descriptor, "sphere", metric, scalars, oneforms, {"n": n, "r": r, "chart": chart})


def sphere_chart_transition(point, r: float) -> np.ndarray:
    """Map a point of one stereographic chart to the same sphere point in the other."""
    y = np.asarray(point, dtype=float)
    s = float(y @ y)
    if s == 0.0:
        raise ParamError("the chart origin has no image in the other chart")
    return r * r * y / s


# Tori

def flat_torus(n: int, periods) -> Model:
    """Identity metric on [0, L_1) x ... x [0, L_n)."""
    periods = _periods(n, periods)
    chart = Chart.torus(periods)
    metric = MetricField.euclidean(chart)
    scalars = {"one": ScalarField(chart, 1.0)}
    oneforms = {f"dx{i + 1}": OneFormField(chart, [1.0 if j == i else 0.0 for j in range(n)])
                for i in range(n)}
    descriptor = f"torus:n={n},L={_fmt(periods[0])}"
    return Model(descriptor, "torus", metric, scalars, oneforms, {"n": n, "L": periods[0]})


def random_analytic_metric(n: int, periods, amplitude: float, seed: int) -> MetricField:
    """
    g = identity + amplitude * P with P a random symmetric trig polynomial.

    Each entry of P has at most RANDOM_MODES_PER_ENTRY modes with coefficients
    summing to 1/n in absolute value, so g stays positive definite for amplitude < 1.

    Raises:
        ParamError: amplitude outside [0, RANDOM_AMPLITUDE_LIMIT)
    """
    if not 0.0 <= amplitude < config.RANDOM_AMPLITUDE_LIMIT:
        raise ParamError(f"amplitude must lie in [0, {config.RANDOM_AMPLITUDE_LIMIT}), got {amplitude}")
    periods = _periods(n, periods)
    chart = Chart.torus(periods)
    rng = np.random.default_rng(seed)
    x = _chart_variables(n)
    rows: list[list[Expr]] = [[ex.const(0.0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            waves = rng.integers(-1, 2, size=(config.RANDOM_MODES_PER_ENTRY, n))
            phases = rng.uniform(0.0, config.TWO_PI, size=config.RANDOM_MODES_PER_ENTRY)
            weights = rng.uniform(-1.0, 1.0, size=config.RANDOM_MODES_PER_ENTRY)
            weights = weights / (np.sum(np.abs(weights)) * n)
            terms = []
            for wave, phase, weight in zip(waves, phases, weights):
                argument = ex.total((config.TWO_PI * int(k) / periods[m]) * x[m]
                                    for m, k in enumerate(wave) if k != 0) + float(phase)
                terms.append(float(weight) * ex.cos(argument))
            perturbation = amplitude * ex.total(terms)
            rows[i][j] = (1.0 if i == j else 0.0) + perturbation
    return MetricField(chart, rows)


def random_model(n: int, periods, amplitude: float, seed: int) -> Model:
    """Random analytic torus metric with a random trial function for identity tests."""
    periods = _periods(n, periods)
    metric = random_analytic_metric(n, periods, amplitude, seed)
    chart = metric.chart
    x = _chart_variables(n)
    rng = np.random.default_rng(seed + 1)
    trial = ex.total(
        float(rng.uniform(-1.0, 1.0)) * ex.sin((config.TWO_PI / periods[m]) * x[m] + float(rng.uniform(0, 3)))
        for m in range(n)
    ) + 1.5
    scalars = {"one": ScalarField(chart, 1.0), "trial": ScalarField(chart, trial)}
    descriptor = f"random:n={n},amp={_fmt(amplitude)},seed={seed},L={_fmt(periods[0])}"
    return Model(descriptor, "random", metric, scalars, {},
                 {"n": n, "amp": amplitude, "seed": seed, "L": periods[0]})


# Warped products

def warped(base: Model, h: TrigPolynomial, scal0: Optional[float] = None,
           t_window: Optional[tuple[float, float]] = None,
           descriptor: Optional[str] = None, kind: str = "warped") -> Model:
    """
    dt^2 + h(t)^2 g0 on the chart (t, y).

    Args:
        base: Model providing g0 (its chart supplies the y-axes)
        h: Positive periodic warp factor
        scal0: Base scalar curvature when the base is Einstein
        t_window: Restrict t to an interval instead of a full period
        descriptor: Descriptor override

    Raises:
        ParamError: h not positive on the t-range
    """
    lower, upper = t_window if t_window is not None else (0.0, h.period)
    if h.min_value(lower, upper) <= 0.0:
        raise ParamError(f"warp factor is not positive on [{lower}, {upper}]")
    t_chart = (Chart.torus([h.period]) if t_window is None else Chart.box([lower], [upper]))
    chart = t_chart.product(base.chart)
    n = chart.dim
    t = ex.var(0)
    h_expr = h.to_expr(t)
    h_squared = h_expr * h_expr
    base_rows = base.metric.rows()
    rows: list[list[Expr]] = [[ex.const(0.0)] * n for _ in range(n)]
    rows[0][0] = ex.const(1.0)
    for a in range(1, n):
        for b in range(a, n):
            rows[a][b] = h_squared * base_rows[a - 1][b - 1].shift(1)
    metric = MetricField(chart, rows)

    dh = h.derivative()
    scalars = {
        "one": ScalarField(chart, 1.0),
        "h": ScalarField(chart, h_expr),
        "dh": ScalarField(chart, dh.to_expr(t)),
        "ddh": ScalarField(chart, dh.derivative().to_expr(t)),
    }
    oneforms = {"h_dt": OneFormField(chart, [h_expr] + [ex.const(0.0)] * (n - 1))}
    if kind == "product":
        frequency = math.sqrt(n - 2)
        scalars["kernel_cos"] = ScalarField(chart, ex.cos(frequency * t))
        scalars["kernel_sin"] = ScalarField(chart, ex.sin(frequency * t))
    warp = WarpData(h, scal0, base.dim, t_window)
    descriptor = descriptor or f"warped:base={base.descriptor}"
    return Model(descriptor, kind, metric, scalars, oneforms,
                 {"n": n, "L": h.period, "base": base.descriptor}, warp)


def product(n: int, period: float) -> Model:
    """S1(L) x S^(n-1)(1): the warped product with h = 1."""
    if n < 3:
        raise ParamError(f"product needs n >= 3, got {n}")
    base = sphere(n - 1, 1.0)
    model = warped(base, TrigPolynomial.constant(1.0, period), scal0=float((n - 1) * (n - 2)),
                   descriptor=f"product:n={n},L={_fmt(period)}", kind="product")
    return model


# KID fixtures

def obata_kid(model: Model, i: int, c: float) -> KidData:
    """
    (f, alpha, c) = (x_i, c r^2 dx_i, c) on a sphere.

    Hess x_i = -(x_i / r^2) g, so nabla alpha + c f g = 0.

    Raises:
        ParamError: c = 0, wrong model or index
        SelfCheckError: The first Sigma1 equation does not vanish
    """
    _require(model, "sphere")
    if c == 0.0:
        raise ParamError("obata_kid needs c != 0")
    n = model.dim
    if not 1 <= i <= n + 1:
        raise ParamError(f"ambient index must lie in 1..{n + 1}, got {i}")
    r = float(model.params["r"])
    chart = model.chart
    kid = KidData(model.scalar(f"x{i}"), model.oneform(f"dx{i}").scaled(c * r * r),
                  ScalarField(chart, c), f"obata:i={i},c={_fmt(c)}")
    _self_check(model, kid)
    return kid


def warp_kid(model: Model, c: float) -> KidData:
    """
    (f, alpha, c) = (h', -c h dt, c) on a warped model.

    nabla(h dt) = h' g, so nabla alpha + c f g = 0 on any base.
    """
    _require(model, "warped", "product")
    if c == 0.0:
        raise ParamError("warp_kid needs c != 0")
    kid = KidData(model.scalar("dh"), model.oneform("h_dt").scaled(-c),
                  ScalarField(model.chart, c), f"warp:c={_fmt(c)}")
    _self_check(model, kid)
    return kid


def killing_kid(model: Model, form: str, c: float = 1.0) -> KidData:
    """(0, Killing form, c): solves Sigma for any c."""
    chart = model.chart
    return KidData(ScalarField(chart, 0.0), model.oneform(form), ScalarField(chart, c),
                   f"killing:form={form},c={_fmt(c)}")


def static_kid(model: Model) -> KidData:
    """(1, 0, 0): the static k = 0 data of a Ricci-flat model."""
    chart = model.chart
    return KidData(ScalarField(chart, 1.0), OneFormField.zero(chart), ScalarField(chart, 0.0), "static")


def nonconstant_c_kid(model: Model, i: int, f_value: float = 1.0) -> KidData:
    """
    (f, f r^2 dx_i, x_i) on a sphere with f a nonzero constant.

    nabla alpha = -f x_i g = -c f g with the non-constant mean curvature c = x_i.
    """
    _require(model, "sphere")
    if f_value == 0.0:
        raise ParamError("nonconstant_c_kid needs f != 0")
    r = float(model.params["r"])
    chart = model.chart
    return KidData(ScalarField(chart, f_value), model.oneform(f"dx{i}").scaled(f_value * r * r),
                   model.scalar(f"x{i}"), f"nonconstant_c:i={i},f={_fmt(f_value)}")


def bump(chart: Chart, width: float = config.BUMP_WIDTH) -> ScalarField:
    """
    Gaussian bump at the chart center.

    Periodic axes use the squared chord distance (L / 2 pi)^2 2 (1 - cos) so the
    bump stays periodic.
    """
    lower, upper = chart.interior_bounds()
    center = 0.5 * (lower + upper)
    squared = []
    for m, period in enumerate(chart.periods):
        x = ex.var(m)
        if period is None:
            squared.append((x - float(center[m])) ** 2)
        else:
            scale = (period / config.TWO_PI) ** 2
            squared.append((2.0 * scale) * (1.0 - ex.cos((config.TWO_PI / period) * (x - float(center[m])))))
    return ScalarField(chart, ex.exp(-(1.0 / width ** 2) * ex.total(squared)))


def perturb_kid(model: Model, kid: KidData, amplitude: float = config.PERTURBATION_AMPLITUDE) -> KidData:
    """f -> f + amplitude * bump: a negative control."""
    return kid.with_lapse(kid.f + bump(model.chart) * amplitude,
                          f"{kid.label}+perturb={_fmt(amplitude)}")


def perturb_shift(model: Model, kid: KidData, form: str = "rot12", amplitude: float = 0.05) -> KidData:
    """alpha -> alpha + amplitude * (a non-closed Killing form)."""
    return kid.with_shift(kid.alpha + model.oneform(form).scaled(amplitude),
                          f"{kid.label}+{form}={_fmt(amplitude)}")


# Helpers

def _require(model: Model, *kinds: str) -> None:
    if model.kind not in kinds:
        raise ParamError(f"{model.descriptor} is not a {' or '.join(kinds)} model")


def _self_check(model: Model, kid: KidData, samples: int = 5) -> None:
    """Raise SelfCheckError if nabla alpha + c f g does not vanish on a few points."""
    worst = 0.0
    for point in model.sample(samples, config.DEFAULT_SEED):
        geo = LocalGeometry(model.metric, point)
        residual = closed_conformal_equation(geo, geo.lift(kid.alpha), geo.lift(kid.f), geo.lift(kid.c))
        worst = max(worst, frame_sup_norm(residual.value, geo.metric.value))
    if worst > config.SELF_CHECK_TOL:
        raise SelfCheckError(f"{kid.label} on {model.descriptor}: first equation residual {worst:.3e}")
    logger.debug("%s passed its self-check (%.2e)", kid.label, worst)


def _periods(n: int, periods) -> tuple[float, ...]:
    if n < 1 or n > config.MAX_CHART_DIM:
        raise ParamError(f"dimension must lie in 1..{config.MAX_CHART_DIM}, got {n}")
    if np.isscalar(periods):
        periods = [periods] * n
    periods = tuple(float(p) for p in periods)
    if len(periods) != n or any(p <= 0.0 for p in periods):
        raise ParamError(f"need {n} positive periods, got {periods}")
    return periods


def _fmt(value: float) -> str:
    """Compact descriptor formatting (1.0 -> 1, 0.7 -> 0.7)."""
    return f"{float(value):g}"
