"""
Sigma system for KID Verifier.
"""

from geometry import LocalGeometry
from jet import Jet
from operators import conformal_killing_equation, ustar_jet
from systems.kid_system import KidJets, KidSystem, SystemId


class SigmaSystem(KidSystem):
    """
    The umbilical KID system.

    Equations:
    - L_alpha g + 2 c f g = 0
    - U*_g(f) = 0

    Any Killing form gives the solution (0, alpha) whatever c is.
    """

    def get_id(self) -> SystemId:
        return SystemId.SIGMA

    def first_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return conformal_killing_equation(geo, kid.alpha, kid.f, kid.c)

    def second_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return ustar_jet(geo, kid.f)

    def get_description(self) -> str:
        return "L_alpha g + 2cfg = 0, U*(f) = 0"
