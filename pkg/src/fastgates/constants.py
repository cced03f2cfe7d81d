"""Physical constants (SI) and default ion parameters."""

import math

HBAR = 1.054571817e-34  # J s
ELEMENTARY_CHARGE = 1.602176634e-19  # C
EPSILON_0 = 8.8541878128e-12  # F/m
ATOMIC_MASS = 1.66053906660e-27  # kg

# e^2 / (4 pi eps0), the Coulomb coupling prefactor in J m
COULOMB_COUPLING = ELEMENTARY_CHARGE**2 / (4.0 * math.pi * EPSILON_0)

# Default Ca-40 parameter set: axial trap at 2*pi*1.2 MHz, kicks on the
# 393 nm S->P transition.
CA40_MASS_AMU = 40.0
CA40_WAVELENGTH_M = 393e-9
DEFAULT_AXIAL_FREQUENCY = 2.0 * math.pi * 1.2e6  # rad/s
DEFAULT_NBAR = 0.1
