"""
Sigma2 system for KID Verifier.
"""

from geometry import LocalGeometry
from jet import Jet
from operators import closed_conformal_equation, ustar_jet
from systems.kid_system import KidJets, KidSystem, SystemId


class Sigma2System(KidSystem):
    """
    Closed conformal shift with only the traceless part of U*_g(f) prescribed.

    Equations:
    - nabla alpha + c f g = 0
    - U*_g(f) = (1/n)((n - 1) Delta f - f Scal) g

    The right-hand side is the trace part of U*_g(f), so the second residual is
    (U*_g f)_0. Mean curvature c may be non-constant here.
    """

    def get_id(self) -> SystemId:
        return SystemId.SIGMA2

    def first_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return closed_conformal_equation(geo, kid.alpha, kid.f, kid.c)

    def second_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        n = geo.dim
        trace_part = ((n - 1) * geo.laplacian(kid.f) - kid.f * geo.scal) * (1.0 / n)
        return ustar_jet(geo, kid.f) - trace_part * geo.metric

    def get_description(self) -> str:
        return "nabla alpha + cfg = 0, U*(f) = ((n-1) Delta f - f Scal) g / n"
