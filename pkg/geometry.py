"""
Geometry module for KID Verifier.
Implements the LocalGeometry class: Christoffel symbols, curvature and covariant
calculus of a chart metric at one point, computed entirely with jets.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

import config
from errors import DomainError, SingularMetric
from fields import MetricField, OneFormField, SymTensorField, TensorField
from jet import Jet, contract, matrix_inverse

logger = logging.getLogger(__name__)

# Tensor slot letters for generated einsum strings; 'a' (derivative), 'k' (dummy)
# and 'z' (coefficient axis) are reserved.
_SLOT_LETTERS = "bcdefghij"


@dataclass(frozen=True)
class CurvaturePack:
    """
    All curvature data of a metric at one point.

    Attributes:
        point: Chart coordinates
        metric: g_ij
        inverse: g^ij
        christoffel: Gamma^k_ij stored as [k, i, j]
        riemann: R_ijkl = g_km R^m_ijl
        ricci: Ric_ij
        ricci0: Ric_ij - (Scal / n) g_ij
        scal: Scalar curvature
        dscal: d Scal
        dnabla_ric: (d^nabla Ric)_kij = nabla_k Ric_ij - nabla_i Ric_kj
    """

    point: np.ndarray
    metric: np.ndarray
    inverse: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    ricci0: np.ndarray
    scal: float
    dscal: np.ndarray
    dnabla_ric: np.ndarray


class LocalGeometry:
    """
    Jet-level Riemannian (or Lorentzian) calculus at one point.

    Responsibility: Derive every curvature quantity from the metric jet
    - Metric and inverse jets of order K
    - Christoffel (order K-1), Riemann and Ricci (order K-2), their derivatives
    - Covariant derivative, Hessian, Laplacian, divergence, d^nabla, Lie derivative

    OOP Principles Applied:
    - Single Responsibility: Only pointwise differential geometry
    - Lazy Evaluation: Curvature pieces are computed on first use and cached
    - Encapsulation: Jets are exposed through read-only properties

    Conventions:
        R^m_ijl = d_i Gamma^m_jl - d_j Gamma^m_il + Gamma^m_ia Gamma^a_jl - Gamma^m_ja Gamma^a_il
        R_ijkl = g_km R^m_ijl, Ric_jl = R^i_ijl, Delta = -tr Hess, delta S = -g^ab nabla_a S_b...

    Attributes:
        _metric_field: Source MetricField
        _point: Evaluation point
        _order: Jet order of the metric
        _g: Metric jet
        _g_inv: Inverse metric jet
    """

    def __init__(self, metric: MetricField, point: Sequence[float],
                 order: int = config.DEFAULT_JET_ORDER):
        """
        Lift the metric at a point and check it.

        Args:
            metric: Metric field
            point: Chart coordinates
            order: Jet order (>= 2 for curvature, >= 3 for d^nabla Ric)

        Raises:
            DomainError: Point outside the chart, or a component is undefined there
            SingularMetric: Metric not invertible at the point
            DefinitenessError: Wrong signature at the point
        """
        point = np.asarray(point, dtype=float)
        if not metric.chart.within(point):
            raise DomainError(f"point {point.tolist()} lies outside the chart")
        self._metric_field = metric
        self._point = point
        self._order = order
        self._g = metric.jet(point, order)
        metric.check_value(self._g.value, point)
        try:
            self._g_inv = matrix_inverse(self._g)
        except DomainError as exc:
            raise SingularMetric(str(exc)) from exc

    # Basic accessors

    @property
    def point(self) -> np.ndarray:
        return self._point

    @property
    def dim(self) -> int:
        return self._metric_field.dim

    @property
    def order(self) -> int:
        return self._order

    @property
    def metric(self) -> Jet:
        return self._g

    @property
    def inverse(self) -> Jet:
        return self._g_inv

    def lift(self, field: TensorField) -> Jet:
        """Jet of a field at this point, at the metric's order."""
        if field.chart != self._metric_field.chart:
            raise DomainError("field and metric live on different charts")
        return field.jet(self._point, self._order)

    # Curvature

    @cached_property
    def christoffel(self) -> Jet:
        dg = self._g.differential()                      # dg[a, i, j] = d_a g_ij
        lowered = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
        return 0.5 * contract("kl,ijl->kij", self._g_inv, lowered)

    @cached_property
    def riemann_up(self) -> Jet:
        """R^m_ijl as [m, i, j, l]."""
        gamma = self.christoffel
        derivative = gamma.differential().transpose(1, 0, 2, 3)   # [m, i, j, l] = d_i Gamma^m_jl
        quadratic = contract("mia,ajl->mijl", gamma, gamma)
        return (derivative - derivative.transpose(0, 2, 1, 3)
                + quadratic - quadratic.transpose(0, 2, 1, 3))

    @cached_property
    def riemann(self) -> Jet:
        return contract("km,mijl->ijkl", self._g, self.riemann_up)

    @cached_property
    def ricci(self) -> Jet:
        return contract("iijl->jl", self.riemann_up)

    @cached_property
    def scal(self) -> Jet:
        return contract("jl,jl->", self._g_inv, self.ricci)

    @cached_property
    def ricci0(self) -> Jet:
        return self.ricci - self.scal * self._g * (1.0 / self.dim)

    @cached_property
    def nabla_ricci(self) -> Jet:
        return self.nabla(self.ricci)

    @cached_property
    def dnabla_ricci(self) -> Jet:
        return self.dnabla(self.ricci)

    def pack(self) -> CurvaturePack:
        """Freeze the curvature values at this point."""
        return CurvaturePack(
            point=self._point,
            metric=self._g.value,
            inverse=self._g_inv.value,
            christoffel=self.christoffel.value,
            riemann=self.riemann.value,
            ricci=self.ricci.value,
            ricci0=self.ricci0.value,
            scal=float(self.scal.value),
            dscal=self.scal.differential().value,
            dnabla_ric=self.dnabla_ricci.value,
        )

    # Covariant calculus

    def nabla(self, tensor: Jet) -> Jet:
        """
        Covariant derivative of a covariant tensor; the new first slot is the direction.

        Args:
            tensor: Jet of shape (n,)*rank

        Returns:
            Jet of shape (n,)*(rank + 1), one order lower
        """
        rank = len(tensor.shape)
        slots = _SLOT_LETTERS[:rank]
        result = tensor.differential()
        for s in range(rank):
            source = slots[:s] + "k" + slots[s + 1:]
            result = result - contract(f"ka{slots[s]},{source}->a{slots}",
                                       self.christoffel, tensor)
        return result

    def hessian(self, f: Jet) -> Jet:
        return self.nabla(self.nabla(f))

    def laplacian(self, f: Jet) -> Jet:
        """Positive Laplacian."""
        return -self.trace(self.hessian(f))

    def trace(self, tensor: Jet) -> Jet:
        return contract("ij,ij->", self._g_inv, tensor)

    def inner(self, left: Jet, right: Jet) -> Jet:
        """<S, T> = g^ia g^jb S_ij T_ab for 2-tensors, g^ij a_i b_j for one-forms."""
        if len(left.shape) == 1:
            return contract("i,i->", self.sharp(left), right)
        raised = contract("ia,ab->ib", self._g_inv, contract("ij,jb->ib", left, self._g_inv))
        return contract("ib,ib->", raised, right)

    def sharp(self, form: Jet) -> Jet:
        return contract("ab,b->a", self._g_inv, form)

    def divergence(self, tensor: Jet) -> Jet:
        """delta T = -g^ab nabla_a T_b..."""
        rank = len(tensor.shape)
        if rank == 0:
            raise ValueError("divergence needs a tensor of rank >= 1")
        slots = _SLOT_LETTERS[:rank]
        return -contract(f"ab,a{slots}->{slots[1:]}", self._g_inv, self.nabla(tensor))

    def dnabla(self, tensor: Jet) -> Jet:
        """d^nabla S(X, Y, ...) = nabla_X S(Y, ...) - nabla_Y S(X, ...)."""
        derivative = self.nabla(tensor)
        axes = list(range(len(derivative.shape)))
        axes[0], axes[1] = 1, 0
        return derivative - derivative.transpose(*axes)

    def delta_star(self, alpha: Jet) -> Jet:
        derivative = self.nabla(alpha)
        return 0.5 * (derivative + derivative.transpose(1, 0))

    def lie_metric(self, alpha: Jet) -> Jet:
        """L_alpha g = 2 delta* alpha."""
        return 2.0 * self.delta_star(alpha)

    def exterior_derivative(self, alpha: Jet) -> Jet:
        partial = alpha.differential()
        return partial - partial.transpose(1, 0)

    def lie_derivative(self, alpha: Jet, tensor: Jet) -> Jet:
        """L_X k for X the metric dual of alpha and k a symmetric 2-tensor."""
        field = self.sharp(alpha)
        nabla_field = contract("ab,ib->ia", self._g_inv, self.nabla(alpha))   # nabla_i X^a
        transport = contract("a,aij->ij", field, self.nabla(tensor))
        rotation = contract("aj,ia->ij", tensor, nabla_field)
        return transport + rotation + rotation.transpose(1, 0)

    def composition(self, left: Jet, right: Jet) -> Jet:
        """(k o k)_ij = k_ir g^rs k_sj."""
        return contract("ir,rj->ij", contract("ir,rs->is", left, self._g_inv), right)


# Pointwise operations on fields

def curvature_pack(metric: MetricField, point: Sequence[float],
                   order: int = config.DEFAULT_JET_ORDER) -> CurvaturePack:
    """Curvature data of a metric at a point."""
    return LocalGeometry(metric, point, order).pack()


def hessian(metric: MetricField, f: TensorField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return geo.hessian(geo.lift(f)).value


def laplacian(metric: MetricField, f: TensorField, point: Sequence[float]) -> float:
    geo = LocalGeometry(metric, point)
    return float(geo.laplacian(geo.lift(f)).value)


def divergence(metric: MetricField, tensor: TensorField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return geo.divergence(geo.lift(tensor)).value


def nabla_oneform(metric: MetricField, alpha: OneFormField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return geo.nabla(geo.lift(alpha)).value


def delta_star(metric: MetricField, alpha: OneFormField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return geo.delta_star(geo.lift(alpha)).value


def lie_metric(metric: MetricField, alpha: OneFormField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return geo.lie_metric(geo.lift(alpha)).value


def dnabla(metric: MetricField, tensor: SymTensorField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return geo.dnabla(geo.lift(tensor)).value


def wedge_ts(omega: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """(w ^ S)(X, Y, Z) = w(X) S(Y, Z) - w(Y) S(X, Z)."""
    omega = np.asarray(omega)
    tensor = np.asarray(tensor)
    return np.einsum("a,bc->abc", omega, tensor) - np.einsum("b,ac->abc", omega, tensor)


def wedge_forms(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)."""
    outer = np.outer(left, right)
    return outer - outer.T


# Norms and invariants

def orthonormal_frame(metric_value: np.ndarray) -> np.ndarray:
    """Columns form a g-orthonormal frame (|g(e_i, e_i)| = 1), any signature."""
    eigenvalues, vectors = np.linalg.eigh(metric_value)
    return vectors / np.sqrt(np.abs(eigenvalues))


def frame_sup_norm(tensor: np.ndarray, metric_value: np.ndarray) -> float:
    """
    Largest frame component of a covariant tensor.

    Every slot is evaluated on an orthonormal frame, so the norm does not
    depend on the chart scaling.

    Args:
        tensor: Covariant tensor value
        metric_value: Metric at the same point

    Returns:
        max |T(e_i1, ..., e_ip)|
    """
    values = np.asarray(tensor, dtype=float)
    if values.ndim == 0:
        return abs(float(values))
    frame = orthonormal_frame(metric_value)
    for _ in range(values.ndim):
        values = np.tensordot(values, frame, axes=([0], [0]))
    return float(np.max(np.abs(values)))


def raw_sup_norm(tensor: np.ndarray) -> float:
    values = np.asarray(tensor, dtype=float)
    return float(np.max(np.abs(values))) if values.size else 0.0


def symmetry_residuals(pack: CurvaturePack) -> dict[str, float]:
    """
    Algebraic curvature identities at one point.

    Returns:
        Coordinate sup-norms of each defect: skew in the first pair, skew in the
        second pair, pair symmetry, first Bianchi, relative Ricci trace, Ric0 trace
    """
    r = pack.riemann
    scale = max(1.0, abs(pack.scal))
    return {
        "skew_first": raw_sup_norm(r + r.transpose(1, 0, 2, 3)),
        "skew_second": raw_sup_norm(r + r.transpose(0, 1, 3, 2)),
        "pair_symmetry": raw_sup_norm(r - r.transpose(2, 3, 0, 1)),
        "first_bianchi": raw_sup_norm(r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3)),
        "ricci_trace": abs(float(np.einsum("ij,ij->", pack.inverse, pack.ricci)) - pack.scal) / scale,
        "ricci0_trace": abs(float(np.einsum("ij,ij->", pack.inverse, pack.ricci0))),
    }
