"""Physical constants (CODATA 2018, SI units)."""

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """Fixed SI constants used throughout. Not user-configurable."""

    hbar: float = 1.054571817e-34   # J s
    mu0: float = 1.25663706212e-6   # N / A^2
    c: float = 2.99792458e8         # m / s
    kB: float = 1.380649e-23        # J / K


CONST = PhysicalConstants()

# Derived / auxiliary values.
AVOGADRO = 6.02214076e23  # 1 / mol
