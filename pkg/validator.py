"""
Validator module for KID Verifier.
Implements the KidValidator class: evaluates systems and identities at every
sample point of a model and aggregates the residuals into ResidualReports.
"""

import logging
from typing import Callable, Optional, Sequence

import numpy as np

import config
import operators as ops
from errors import ModelError
from fields import KidData, MetricField, OneFormField, ScalarField
from geometry import LocalGeometry, frame_sup_norm, raw_sup_norm
from report import ResidualPoint, ResidualReport, StructureBundle
from systems import KidJets, KidSystem, SystemId, get_system

logger = logging.getLogger(__name__)

Evaluator = Callable[[LocalGeometry], dict[str, np.ndarray]]


class KidValidator:
    """
    Checks systems and identities over a fixed set of sample points.

    Responsibility: Turn pointwise residual tensors into reports
    - Sample once (seeded Halton points) and reuse the points for every suite
    - Measure each residual by its largest orthonormal-frame component
    - Keep the raw coordinate magnitude alongside

    OOP Principles Applied:
    - Single Responsibility: Only evaluates and aggregates
    - Strategy Pattern: KID systems are pluggable KidSystem objects
    - Encapsulation: Sampling details stay private

    Attributes:
        _metric: Metric of the model
        _label: Model descriptor used in reports
        _points: Sample points
        _seed: Sampling seed
        _order: Jet order for every evaluation
    """

    def __init__(self, metric: MetricField, label: str, points: np.ndarray,
                 seed: int = config.DEFAULT_SEED, order: int = config.DEFAULT_JET_ORDER):
        """
        Initialize a validator over explicit points.

        Args:
            metric: Metric field
            label: Model descriptor
            points: Array of shape (count, dim)
            seed: Seed the points were drawn with (recorded in reports)
            order: Jet order (>= 3 for the third-derivative identities)
        """
        self._metric = metric
        self._label = label
        self._points = np.atleast_2d(np.asarray(points, dtype=float))
        self._seed = seed
        self._order = order

    @classmethod
    def sampled(cls, metric: MetricField, label: str, samples: int = config.DEFAULT_SAMPLES,
                seed: int = config.DEFAULT_SEED,
                order: int = config.DEFAULT_JET_ORDER) -> "KidValidator":
        """Validator over scrambled Halton points of the metric's chart."""
        return cls(metric, label, metric.chart.sample(samples, seed), seed, order)

    @property
    def metric(self) -> MetricField:
        return self._metric

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def seed(self) -> int:
        return self._seed

    # Core loop

    def _run(self, name: str, tolerance: float, evaluate: Evaluator,
             notes: Optional[list[str]] = None, details: Optional[dict] = None) -> ResidualReport:
        """
        Evaluate one suite at every point.

        Args:
            name: Report name
            tolerance: Pass threshold for the sup-norm
            evaluate: Maps a LocalGeometry to named residual tensors

        Returns:
            Aggregated ResidualReport
        """
        results = []
        for point in self._points:
            geo = LocalGeometry(self._metric, point, self._order)
            terms = evaluate(geo)
            metric_value = geo.metric.value
            components = {key: frame_sup_norm(value, metric_value) for key, value in terms.items()}
            raw = max((raw_sup_norm(value) for value in terms.values()), default=0.0)
            results.append(ResidualPoint(point=point.tolist(),
                                         norm=max(components.values(), default=0.0),
                                         components=components, raw=raw))
        report = ResidualReport.from_points(name, self._label, self._seed, tolerance, results,
                                            notes, details)
        logger.info(report.summary())
        return report

    def tensor_residual(self, name: str, tolerance: float, evaluate: Evaluator,
                        notes: Optional[list[str]] = None,
                        details: Optional[dict] = None) -> ResidualReport:
        """Report for caller-supplied residual tensors (used by the Killing development)."""
        return self._run(name, tolerance, evaluate, notes, details)

    def _check_chart(self, *fields) -> None:
        for f in fields:
            if f.chart != self._metric.chart:
                raise ModelError(f"field chart differs from the metric chart of {self._label}")

    # KID systems

    def sigma_residual(self, system: SystemId | str | KidSystem, kid: KidData,
                       tolerance: float = config.SPHERE_KID_TOL) -> ResidualReport:
        """
        Residuals of both equations of a KID system.

        Raises:
            ModelError: KID and metric charts differ
        """
        strategy = system if isinstance(system, KidSystem) else get_system(system)
        self._check_chart(kid.f, kid.alpha, kid.c)
        notes = [strategy.get_description(), f"kid: {kid.label}"]
        if strategy.get_id() is SystemId.SIGMA4:
            notes.append("mean curvature normalized to c = 1")

        def evaluate(geo: LocalGeometry) -> dict[str, np.ndarray]:
            f, alpha, c = ops.lift_kid(geo, kid)
            return strategy.residuals(geo, KidJets(f, alpha, c))

        return self._run(strategy.get_id().value, tolerance, evaluate, notes)

    def lstar_residual(self, kid: KidData, tolerance: float = config.SPHERE_KID_TOL) -> ResidualReport:
        """L*(f, alpha) at k = c g."""
        self._check_chart(kid.f, kid.alpha, kid.c)
        k_field = kid.second_fundamental_form(self._metric)

        def evaluate(geo: LocalGeometry) -> dict[str, np.ndarray]:
            l1, l2 = ops.lstar_jet(geo, geo.lift(k_field), geo.lift(kid.f), geo.lift(kid.alpha))
            return {"l1": l1.value, "l2": l2.value}

        return self._run("lstar", tolerance, evaluate, [f"kid: {kid.label}", "k = c g"])

    def kernel_system_residual(self, kid: KidData,
                               tolerance: float = config.SPHERE_KID_TOL) -> ResidualReport:
        """The displayed two-equation kernel system at k = c g."""
        self._check_chart(kid.f, kid.alpha, kid.c)
        k_field = kid.second_fundamental_form(self._metric)

        def evaluate(geo: LocalGeometry) -> dict[str, np.ndarray]:
            first, second = ops.kernel_system_jet(geo, geo.lift(k_field), geo.lift(kid.f),
                                                  geo.lift(kid.alpha))
            return {"hessian_equation": first.value, "conformal_equation": second.value}

        return self._run("kernel_system", tolerance, evaluate, [f"kid: {kid.label}", "k = c g"])

    def compare_kernel_forms(self, kid: KidData,
                             tolerance: float = config.SPHERE_KID_TOL) -> ResidualReport:
        """
        Evaluate L* = 0 and the displayed kernel system side by side.

        The two forms weight (tr k) k differently, so they are not assumed
        equivalent; details record whether their verdicts agree.
        """
        lstar = self.lstar_residual(kid, tolerance)
        kernel = self.kernel_system_residual(kid, tolerance)
        points = []
        for a, b in zip(lstar.points, kernel.points):
            points.append(ResidualPoint(point=a.point, norm=max(a.norm, b.norm),
                                        components={"lstar": a.norm, "kernel_system": b.norm},
                                        raw=max(a.raw, b.raw)))
        agree = lstar.verdict == kernel.verdict
        if not agree:
            logger.warning("L* and the kernel system disagree on %s (%.3e vs %.3e)",
                           kid.label, lstar.sup_norm, kernel.sup_norm)
        details = {"lstar_sup": lstar.sup_norm, "kernel_system_sup": kernel.sup_norm, "agree": agree}
        return ResidualReport.from_points("kernel_forms", self._label, self._seed, tolerance, points,
                                          [f"kid: {kid.label}"], details)

    def umbilical_constraints(self, c: ScalarField,
                              tolerance: float = config.IDENTITY_TOL) -> ResidualReport:
        """Constraint map at k = c g against its closed form."""
        self._check_chart(c)
        k_field = self._metric.scaled(c)

        def evaluate(geo: LocalGeometry) -> dict[str, np.ndarray]:
            phi1, phi2 = ops.constraint_map_jet(geo, geo.lift(k_field))
            c_jet = geo.lift(c)
            n = geo.dim
            expected1 = float(geo.scal.value) + n * (n - 1) * float(c_jet.value) ** 2
            expected2 = -2.0 * (n - 1) * c_jet.differential().value
            return {"phi1": np.asarray(float(phi1.value) - expected1),
                    "phi2": phi2.value - expected2}

        return self._run("umbilical_constraints", tolerance, evaluate)

    # Closed conformal identities

    def lemma1(self, alpha: OneFormField, psi: ScalarField,
               tolerance: float = config.IDENTITY_TOL) -> ResidualReport:
        """The seven identities t1..t7 for nabla alpha = psi g data."""
        self._check_chart(alpha, psi)
        return self._run("lemma1", tolerance,
                         lambda geo: ops.lemma1_terms(geo, geo.lift(alpha), geo.lift(psi)))

    def lemma2(self, alpha: OneFormField, psi: ScalarField,
               tolerance: float = config.BIANCHI_TOL) -> ResidualReport:
        """psi d^nabla U*(psi) against its expansion."""
        self._check_chart(alpha, psi)
        return self._run("lemma2", tolerance, lambda geo: ops.lemma2_terms(geo, geo.lift(psi)))

    def constant_scal_variant(self, alpha: OneFormField, psi: ScalarField,
                              tolerance: float = config.BIANCHI_TOL) -> ResidualReport:
        """Constant-Scal identity together with Delta psi = Scal psi / (n - 1)."""
        self._check_chart(alpha, psi)
        return self._run("constant_scal_variant", tolerance,
                         lambda geo: ops.constant_scal_terms(geo, geo.lift(psi)))

    def conformal_premise(self, alpha: OneFormField, psi: ScalarField,
                          tolerance: float = config.SPHERE_KID_TOL) -> ResidualReport:
        self._check_chart(alpha, psi)
        return self._run("conformal_premise", tolerance,
                         lambda geo: ops.conformal_premise_terms(geo, geo.lift(alpha), geo.lift(psi)))

    def scal_flow(self, alpha: OneFormField, psi: ScalarField,
                  tolerance: float = config.IDENTITY_TOL) -> ResidualReport:
        self._check_chart(alpha, psi)
        return self._run("scal_flow", tolerance,
                         lambda geo: ops.scal_flow_terms(geo, geo.lift(alpha), geo.lift(psi)))

    # Identities for arbitrary functions

    def bourguignon(self, f: ScalarField, tolerance: float = config.BIANCHI_TOL) -> ResidualReport:
        self._check_chart(f)
        return self._run("bourguignon", tolerance, lambda geo: ops.bourguignon_terms(geo, geo.lift(f)))

    def obata(self, f: ScalarField, tolerance: float = config.SPHERE_KID_TOL) -> ResidualReport:
        self._check_chart(f)
        return self._run("obata", tolerance, lambda geo: ops.obata_terms(geo, geo.lift(f)))

    def trace_identity(self, f: ScalarField, tolerance: float = config.TRACE_TOL) -> ResidualReport:
        self._check_chart(f)
        return self._run("trace", tolerance, lambda geo: ops.trace_terms(geo, geo.lift(f)))

    def hessian_divergence(self, f: ScalarField, sign: str = "printed",
                           tolerance: float = config.BIANCHI_TOL) -> ResidualReport:
        """delta Hess f with the printed sign, or the flipped sign as a negative control."""
        self._check_chart(f)
        if sign not in ("printed", "flipped"):
            raise ValueError(f"sign must be 'printed' or 'flipped', got '{sign}'")

        def evaluate(geo: LocalGeometry) -> dict[str, np.ndarray]:
            return {sign: ops.hessian_divergence_terms(geo, geo.lift(f))[sign]}

        return self._run(f"hessian_divergence_{sign}", tolerance, evaluate)

    # Curvature structure

    def structure_checks(self, bianchi_tol: float = config.BIANCHI_TOL,
                         harmonic_tol: float = config.HARMONIC_TOL,
                         scal_tol: float = config.SCAL_VARIATION_TOL) -> StructureBundle:
        """
        Bianchi identity, harmonic curvature and Scal statistics.

        Returns:
            StructureBundle with three reports and the Scal range
        """
        bianchi = self._run("bianchi", bianchi_tol, ops.bianchi_terms)
        harmonic = self._run("harmonic_curvature", harmonic_tol,
                             lambda geo: {"dnabla_ric": geo.dnabla_ricci.value})
        scal = self.scal_values()
        mean = float(scal.mean())
        variation = [
            ResidualPoint(point=p.tolist(), norm=abs(s - mean), components={"scal": abs(s - mean)},
                          raw=abs(s - mean))
            for p, s in zip(self._points, scal)
        ]
        scal_report = ResidualReport.from_points(
            "scal_variation", self._label, self._seed, scal_tol, variation,
            details={"scal_mean": mean},
        )
        logger.info(scal_report.summary())
        return StructureBundle(bianchi=bianchi, harmonic=harmonic, scal_variation=scal_report,
                               scal_min=float(scal.min()), scal_mean=mean, scal_max=float(scal.max()),
                               scal_positive=bool(np.all(scal > 0.0)))

    def scal_values(self) -> np.ndarray:
        return np.array([float(LocalGeometry(self._metric, p, self._order).scal.value)
                         for p in self._points])


def sigma_residual(system: SystemId | str, metric: MetricField, kid: KidData,
                   points: Sequence[Sequence[float]], tolerance: float = config.SPHERE_KID_TOL,
                   label: str = "model", seed: int = config.DEFAULT_SEED) -> ResidualReport:
    """Functional front door to KidValidator.sigma_residual."""
    return KidValidator(metric, label, np.asarray(points), seed).sigma_residual(system, kid, tolerance)


def structure_checks(metric: MetricField, points: Sequence[Sequence[float]],
                     label: str = "model", seed: int = config.DEFAULT_SEED) -> StructureBundle:
    return KidValidator(metric, label, np.asarray(points), seed).structure_checks()
