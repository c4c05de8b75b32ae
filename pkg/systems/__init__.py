"""
Systems package for the KID systems.
Contains the Strategy Pattern implementation for Sigma and Sigma1 through Sigma4.
"""

from errors import ConfigError
from systems.kid_system import KidJets, KidSystem, SystemId
from systems.sigma import SigmaSystem
from systems.sigma1 import Sigma1System
from systems.sigma2 import Sigma2System
from systems.sigma3 import Sigma3System
from systems.sigma4 import Sigma4System
from systems.sigma4_prime import Sigma4PrimeSystem

_REGISTRY = {
    SystemId.SIGMA: SigmaSystem,
    SystemId.SIGMA1: Sigma1System,
    SystemId.SIGMA2: Sigma2System,
    SystemId.SIGMA3: Sigma3System,
    SystemId.SIGMA4: Sigma4System,
    SystemId.SIGMA4_PRIME: Sigma4PrimeSystem,
}


def get_system(system_id) -> KidSystem:
    """
    Build the strategy for a system id or its string name.

    Raises:
        ConfigError: Unknown system name
    """
    try:
        key = SystemId(system_id)
    except ValueError as exc:
        names = ", ".join(s.value for s in SystemId)
        raise ConfigError(f"unknown system '{system_id}' (expected one of {names})") from exc
    return _REGISTRY[key]()


__all__ = ['SystemId', 'KidJets', 'KidSystem', 'SigmaSystem', 'Sigma1System', 'Sigma2System',
           'Sigma3System', 'Sigma4System', 'Sigma4PrimeSystem', 'get_system']
