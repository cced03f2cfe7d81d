"""Design, simulation and optimization of pulsed fast entangling gates
for linear trapped-ion crystals."""

from .constants import ATOMIC_MASS, ELEMENTARY_CHARGE, EPSILON_0, HBAR
from .crystal import (IonCrystal, TrapConfig, build_crystal, min_radial_ratio,
                      trap_frequency_for_separation)
from .errors import (FastGateError, InfeasibleError, NumericalError,
                     OverlapError)
from .schemes import (ASYMMETRIC, SYMMETRIC, GateScheme, KickGroup, PulseTrain,
                      build_duan, build_frag, build_gzc, classify_symmetry,
                      expand)
from .dynamics import (GateResult, coherent_trajectory, driven_displacement,
                       entangling_phase, evaluate_gate, mode_sums,
                       oracle_compose, phase_sums, trajectory_points)
from .fidelity import (ThermalState, fidelity_2, fidelity_3, fidelity_general,
                       fidelity_monte_carlo)
from .config import (ConfigError, RunConfig, load_config, parse_config,
                     serialize_config, with_seed)
from .optimizer import (AnnealConfig, DesignProblem, SweepTable, design,
                        duan_comb_scheme, optimize, perturbation_sweep,
                        run_manifest, sweep_gate_time_distant,
                        sweep_ion_number, sweep_repetition_rate)

__version__ = "0.1.0"
