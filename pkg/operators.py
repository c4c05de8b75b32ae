"""
Operators module for KID Verifier.
Implements U*_g, the constraint map, the adjoint L*, the displayed kernel system
and the closed-conformal identity suites as pointwise residual evaluators.

Functions taking a LocalGeometry work on jets and are shared by the systems and the
validator; functions taking (metric, field, point) are the pointwise front door.
"""

import logging
from typing import Sequence

import numpy as np

from fields import KidData, MetricField, OneFormField, ScalarField, SymTensorField
from geometry import LocalGeometry, wedge_forms, wedge_ts
from jet import Jet, contract

logger = logging.getLogger(__name__)


# U*_g

def ustar_jet(geo: LocalGeometry, f: Jet) -> Jet:
    """U*_g(f) = Hess f - f Ric + (Delta f) g."""
    return geo.hessian(f) - f * geo.ricci + geo.laplacian(f) * geo.metric


def ustar0_jet(geo: LocalGeometry, f: Jet) -> Jet:
    """Traceless part: Hess f - f Ric0 + (Delta f / n) g."""
    return geo.hessian(f) - f * geo.ricci0 + geo.laplacian(f) * geo.metric * (1.0 / geo.dim)


def ustar(metric: MetricField, f: ScalarField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return ustar_jet(geo, geo.lift(f)).value


def ustar0(metric: MetricField, f: ScalarField, point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return ustar0_jet(geo, geo.lift(f)).value


def ustar_trace_defect(geo: LocalGeometry, f: Jet) -> float:
    """tr U*(f) - ((n - 1) Delta f - f Scal); zero by construction."""
    expected = (geo.dim - 1) * geo.laplacian(f) - f * geo.scal
    return float((geo.trace(ustar_jet(geo, f)) - expected).value)


# Constraint map and its adjoint

def constraint_map_jet(geo: LocalGeometry, k: Jet) -> tuple[Jet, Jet]:
    """
    Hamiltonian and momentum constraints.

    Returns:
        (Phi1, Phi2) with Phi1 = Scal + (tr k)^2 - |k|^2 and Phi2 = -2(delta k + d tr k)
    """
    trace_k = geo.trace(k)
    phi1 = geo.scal + trace_k * trace_k - geo.inner(k, k)
    phi2 = -2.0 * (geo.divergence(k) + trace_k.differential())
    return phi1, phi2


def constraint_map(metric: MetricField, k: SymTensorField,
                   point: Sequence[float]) -> tuple[float, np.ndarray]:
    geo = LocalGeometry(metric, point)
    phi1, phi2 = constraint_map_jet(geo, geo.lift(k))
    return float(phi1.value), phi2.value


def umbilical_constraints(metric: MetricField, c: ScalarField,
                          point: Sequence[float]) -> tuple[float, np.ndarray]:
    """Closed form for k = c g: (Scal + n(n-1)c^2, -2(n-1) dc)."""
    geo = LocalGeometry(metric, point)
    c_jet = geo.lift(c)
    n = geo.dim
    phi1 = float(geo.scal.value) + n * (n - 1) * float(c_jet.value) ** 2
    phi2 = -2.0 * (n - 1) * c_jet.differential().value
    return phi1, phi2


def lstar_jet(geo: LocalGeometry, k: Jet, f: Jet, alpha: Jet) -> tuple[Jet, Jet]:
    """
    Formal adjoint of the linearized constraint map.

    Args:
        geo: Local geometry
        k: Second fundamental form jet
        f: Lapse jet
        alpha: Shift jet

    Returns:
        (L1*, L2*) as symmetric 2-tensor jets
    """
    g = geo.metric
    shear = geo.delta_star(alpha) + f * k
    l2 = -2.0 * shear + 2.0 * geo.trace(shear) * g
    trace_k = geo.trace(k)
    potential = geo.ricci + 2.0 * trace_k * k - 2.0 * geo.composition(k, k)
    e = (geo.hessian(f) - f * potential + geo.lie_derivative(alpha, k)
         + geo.divergence(alpha) * k)
    phi1, phi2 = constraint_map_jet(geo, k)
    pairing = geo.inner(l2, k) + geo.inner(alpha, phi2) + 2.0 * f * phi1
    l1 = e - geo.trace(e) * g - 0.5 * pairing * g
    return l1, l2


def lstar(metric: MetricField, k: SymTensorField, f: ScalarField, alpha: OneFormField,
          point: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    geo = LocalGeometry(metric, point)
    l1, l2 = lstar_jet(geo, geo.lift(k), geo.lift(f), geo.lift(alpha))
    return l1.value, l2.value


def kernel_system_jet(geo: LocalGeometry, k: Jet, f: Jet, alpha: Jet) -> tuple[Jet, Jet]:
    """
    The two-equation form of Ker L*, written out independently of lstar_jet.

    Hess f + L_alpha k - f(Ric + (tr k) k - 2 k o k) + (<alpha, Phi2> + 2 f Phi1) g / (2(n-1))
    and L_alpha g + 2 f k.
    """
    n = geo.dim
    trace_k = geo.trace(k)
    phi1, phi2 = constraint_map_jet(geo, k)
    potential = geo.ricci + trace_k * k - 2.0 * geo.composition(k, k)
    correction = (geo.inner(alpha, phi2) + 2.0 * f * phi1) * (1.0 / (2.0 * (n - 1)))
    first = geo.hessian(f) + geo.lie_derivative(alpha, k) - f * potential + correction * geo.metric
    second = geo.lie_metric(alpha) + 2.0 * f * k
    return first, second


def kernel_system_residual(metric: MetricField, k: SymTensorField, f: ScalarField,
                           alpha: OneFormField, point: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    geo = LocalGeometry(metric, point)
    first, second = kernel_system_jet(geo, geo.lift(k), geo.lift(f), geo.lift(alpha))
    return first.value, second.value


# KID equation pieces shared by the systems

def conformal_killing_equation(geo: LocalGeometry, alpha: Jet, f: Jet, c: Jet) -> Jet:
    """L_alpha g + 2 c f g."""
    return geo.lie_metric(alpha) + 2.0 * c * f * geo.metric


def closed_conformal_equation(geo: LocalGeometry, alpha: Jet, f: Jet, c: Jet) -> Jet:
    """nabla alpha + c f g."""
    return geo.nabla(alpha) + c * f * geo.metric


def lift_kid(geo: LocalGeometry, kid: KidData) -> tuple[Jet, Jet, Jet]:
    return geo.lift(kid.f), geo.lift(kid.alpha), geo.lift(kid.c)


# Closed conformal Killing form identities

def lemma1_terms(geo: LocalGeometry, alpha: Jet, psi: Jet) -> dict[str, np.ndarray]:
    """
    Left-minus-right values of the seven identities for data with nabla alpha = psi g.

    Returns:
        Mapping t1..t7 to tensor values at the point
    """
    n = geo.dim
    g = geo.metric.value
    a = alpha.value
    a_sharp = geo.inverse.value @ a
    psi_value = float(psi.value)
    dpsi = psi.differential().value
    ricci = geo.ricci.value
    ustar_psi = ustar_jet(geo, psi).value
    lap = float(geo.laplacian(psi).value)
    nabla_ric = geo.nabla_ricci.value
    dnabla_ric = geo.dnabla_ricci.value
    trace_part = n * psi_value * ricci - (n - 1) * lap * g
    return {
        "t1": np.einsum("ijkl,l->ijk", geo.riemann.value, a_sharp) - wedge_ts(dpsi, g),
        "t2": wedge_forms(dpsi, a),
        "t3": ricci @ a_sharp + (n - 1) * dpsi,
        "t4": np.einsum("abc,c->ab", nabla_ric, a_sharp) + (n - 1) * ustar_psi + trace_part,
        "t5": np.einsum("a,abc->bc", a_sharp, nabla_ric) + (n - 2) * ustar_psi + trace_part,
        "t6": np.einsum("a,abc->bc", a_sharp, dnabla_ric) - ustar_psi,
        "t7": np.einsum("abc,c->ab", dnabla_ric, a_sharp),
    }


def lemma1_residuals(metric: MetricField, alpha: OneFormField, psi: ScalarField,
                     point: Sequence[float]) -> dict[str, np.ndarray]:
    geo = LocalGeometry(metric, point)
    return lemma1_terms(geo, geo.lift(alpha), geo.lift(psi))


def _lemma2_pieces(geo: LocalGeometry, psi: Jet) -> dict[str, np.ndarray]:
    u = ustar_jet(geo, psi)
    lap = geo.laplacian(psi)
    psi_value = float(psi.value)
    dpsi = psi.differential().value
    return {
        "lhs": psi_value * geo.dnabla(u).value,
        "core": wedge_ts(dpsi, u.value) - psi_value ** 2 * geo.dnabla_ricci.value,
        "laplacian_term": wedge_ts(psi_value * lap.differential().value - float(lap.value) * dpsi,
                                   geo.metric.value),
        "eigen": np.asarray(float(lap.value) - float(geo.scal.value) / (geo.dim - 1) * psi_value),
    }


def lemma2_terms(geo: LocalGeometry, psi: Jet) -> dict[str, np.ndarray]:
    """psi d^nabla U*(psi) - [dpsi ^ U*(psi) - psi^2 d^nabla Ric + (psi dDelta psi - Delta psi dpsi) ^ g]."""
    pieces = _lemma2_pieces(geo, psi)
    return {"identity": pieces["lhs"] - pieces["core"] - pieces["laplacian_term"]}


def constant_scal_terms(geo: LocalGeometry, psi: Jet) -> dict[str, np.ndarray]:
    """Constant-Scal form of the identity plus the eigen-equation Delta psi = Scal psi / (n-1)."""
    pieces = _lemma2_pieces(geo, psi)
    return {"identity": pieces["lhs"] - pieces["core"], "eigen": pieces["eigen"]}


def lemma2_residual(metric: MetricField, alpha: OneFormField, psi: ScalarField,
                    point: Sequence[float]) -> np.ndarray:
    geo = LocalGeometry(metric, point)
    return lemma2_terms(geo, geo.lift(psi))["identity"]


def constant_scal_variant(metric: MetricField, alpha: OneFormField, psi: ScalarField,
                          point: Sequence[float]) -> tuple[np.ndarray, float]:
    geo = LocalGeometry(metric, point)
    terms = constant_scal_terms(geo, geo.lift(psi))
    return terms["identity"], float(terms["eigen"])


def conformal_premise_terms(geo: LocalGeometry, alpha: Jet, psi: Jet) -> dict[str, np.ndarray]:
    """nabla alpha - psi g."""
    return {"premise": (geo.nabla(alpha) - psi * geo.metric).value}


def scal_flow_terms(geo: LocalGeometry, alpha: Jet, psi: Jet) -> dict[str, np.ndarray]:
    """dScal(alpha) - 2(n-1) Delta psi + 2 psi Scal, for nabla alpha = psi g."""
    n = geo.dim
    dscal = geo.scal.differential().value
    flow = (float(dscal @ (geo.inverse.value @ alpha.value))
            - 2.0 * (n - 1) * float(geo.laplacian(psi).value)
            + 2.0 * float(psi.value) * float(geo.scal.value))
    return {"flow": np.asarray(flow)}


# Identities valid for every metric

def bianchi_terms(geo: LocalGeometry) -> dict[str, np.ndarray]:
    """delta Ric + 1/2 dScal."""
    return {"bianchi": (geo.divergence(geo.ricci) + 0.5 * geo.scal.differential()).value}


def bourguignon_terms(geo: LocalGeometry, f: Jet) -> dict[str, np.ndarray]:
    """delta U*(f) - 1/2 f dScal."""
    return {"divergence": (geo.divergence(ustar_jet(geo, f))
                           - 0.5 * f * geo.scal.differential()).value}


def hessian_divergence_terms(geo: LocalGeometry, f: Jet) -> dict[str, np.ndarray]:
    """
    delta Hess f against both sign candidates.

    "printed" is delta Hess f - d(Delta f) + Ric(grad f); "flipped" is
    delta Hess f + d(Delta f) - Ric(grad f). Only the first vanishes with the
    positive Laplacian.
    """
    divergence = geo.divergence(geo.hessian(f))
    d_laplacian = geo.laplacian(f).differential()
    ricci_gradient = contract("ab,b->a", geo.ricci, geo.sharp(f.differential()))
    return {
        "printed": (divergence - d_laplacian + ricci_gradient).value,
        "flipped": (divergence + d_laplacian - ricci_gradient).value,
    }


def obata_terms(geo: LocalGeometry, f: Jet) -> dict[str, np.ndarray]:
    """Hess f + kappa f g with kappa = Scal / (n(n-1)); on a sphere of radius r, kappa = 1/r^2."""
    kappa = float(geo.scal.value) / (geo.dim * (geo.dim - 1))
    return {"obata": (geo.hessian(f) + (kappa * f) * geo.metric).value}


def trace_terms(geo: LocalGeometry, f: Jet) -> dict[str, np.ndarray]:
    return {"trace": np.asarray(ustar_trace_defect(geo, f))}
