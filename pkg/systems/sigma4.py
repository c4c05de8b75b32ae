"""
Sigma4 system for KID Verifier.
"""

from geometry import LocalGeometry
from jet import Jet
from operators import closed_conformal_equation, ustar_jet
from systems.kid_system import KidJets, KidSystem, SystemId


class Sigma4System(KidSystem):
    """
    U*_g with the traceless Ricci potential, mean curvature normalized to 1.

    Equations:
    - nabla alpha + f g = 0
    - U*_g(f) = f Ric_0

    The c carried by the KID is ignored; the round sphere is the only compact
    manifold with non-trivial solutions.
    """

    def get_id(self) -> SystemId:
        return SystemId.SIGMA4

    def first_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        unit = Jet.constant(1.0, geo.dim, geo.order)
        return closed_conformal_equation(geo, kid.alpha, kid.f, unit)

    def second_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return ustar_jet(geo, kid.f) - kid.f * geo.ricci0

    def get_description(self) -> str:
        return "nabla alpha + fg = 0, U*(f) = f Ric_0 (c = 1)"
