"""
Sigma3 system for KID Verifier.
"""

from geometry import LocalGeometry
from jet import Jet
from operators import closed_conformal_equation, ustar_jet
from systems.kid_system import KidJets, KidSystem, SystemId


class Sigma3System(KidSystem):
    """
    Constraint map restricted to constant scalar curvature metrics.

    Equations:
    - nabla alpha + c f g = 0
    - U*_g(f) = Ric_0
    """

    def get_id(self) -> SystemId:
        return SystemId.SIGMA3

    def first_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return closed_conformal_equation(geo, kid.alpha, kid.f, kid.c)

    def second_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return ustar_jet(geo, kid.f) - geo.ricci0

    def get_description(self) -> str:
        return "nabla alpha + cfg = 0, U*(f) = Ric_0"
