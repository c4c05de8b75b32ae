"""
Relaxed Sigma4 system for KID Verifier.
"""

from geometry import LocalGeometry
from jet import Jet
from operators import conformal_killing_equation, ustar_jet
from systems.kid_system import KidJets, KidSystem, SystemId


class Sigma4PrimeSystem(KidSystem):
    """
    Sigma4 before closing alpha and fixing c.

    Equations:
    - L_alpha g + 2 c f g = 0
    - U*_g(f) = f Ric_0

    Solved by (0, Killing alpha) for any c and, on the sphere, by (f, c df)
    for f in Ker U*_g.
    """

    def get_id(self) -> SystemId:
        return SystemId.SIGMA4_PRIME

    def first_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return conformal_killing_equation(geo, kid.alpha, kid.f, kid.c)

    def second_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return ustar_jet(geo, kid.f) - kid.f * geo.ricci0

    def get_description(self) -> str:
        return "L_alpha g + 2cfg = 0, U*(f) = f Ric_0"
