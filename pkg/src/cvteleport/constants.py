"""Physical constants (SI, CODATA 2018).

``eps0`` and ``c`` carry the CODATA values; ``mu0`` and ``Z0`` default to the
values derived from them so that c = 1/sqrt(mu0*eps0) and Z0 = sqrt(mu0/eps0)
hold to machine precision rather than only to the CODATA uncertainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

_C = 299792458.0            # m/s, exact
_EPS0 = 8.8541878128e-12    # F/m


@dataclass(frozen=True)
class PhysicalConstants:
    q: float = 1.602176634e-19       # elementary charge, C (exact)
    hbar: float = 1.054571817e-34    # reduced Planck constant, J*s
    k_B: float = 1.380649e-23        # Boltzmann constant, J/K (exact)
    eps0: float = _EPS0              # vacuum permittivity, F/m
    c: float = _C                    # speed of light, m/s (exact)
    mu0: float = field(default=1.0 / (_EPS0 * _C**2))   # vacuum permeability, H/m
    Z0: float = field(default=1.0 / (_EPS0 * _C))       # free-space impedance, Ohm

    def validate(self, rtol: float = 1e-12) -> None:
        """Check the electromagnetic consistency relations."""
        z0 = math.sqrt(self.mu0 / self.eps0)
        cc = 1.0 / math.sqrt(self.mu0 * self.eps0)
        if abs(self.Z0 - z0) > rtol * z0:
            raise DomainError(f"Z0={self.Z0} inconsistent with sqrt(mu0/eps0)={z0}")
        if abs(self.c - cc) > rtol * cc:
            raise DomainError(f"c={self.c} inconsistent with 1/sqrt(mu0*eps0)={cc}")


CONSTANTS = PhysicalConstants()
