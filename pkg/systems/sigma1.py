"""
Sigma1 system for KID Verifier.
"""

from geometry import LocalGeometry
from jet import Jet
from operators import closed_conformal_equation, ustar_jet
from systems.kid_system import KidJets, KidSystem, SystemId


class Sigma1System(KidSystem):
    """
    Umbilical KIDs with a closed conformal Killing shift.

    Equations:
    - nabla alpha + c f g = 0
    - U*_g(f) = 0

    Stronger than Sigma: nabla alpha is required to be pure trace, which also
    makes alpha closed.
    """

    def get_id(self) -> SystemId:
        return SystemId.SIGMA1

    def first_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return closed_conformal_equation(geo, kid.alpha, kid.f, kid.c)

    def second_equation(self, geo: LocalGeometry, kid: KidJets) -> Jet:
        return ustar_jet(geo, kid.f)

    def get_description(self) -> str:
        return "nabla alpha + cfg = 0, U*(f) = 0"
