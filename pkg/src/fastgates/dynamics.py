"""Condition equations, phases and phase-space dynamics of a pulse train.

The per-mode reduced sums are

    S_p = sum_k z_k exp(i nu_p t_k)
    D_p = sum_{m>k} z_m z_k sin(nu_p (t_m - t_k))

from which the residual displacement of mode p for internal state s is
``C_p(s) = -2i eta_p g_p(s) S_p`` and the state phase is
``4 eta_p^2 g_p(s)^2 D_p``, with g_p the state factor of the kick
convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crystal import IonCrystal
from .fidelity import ThermalState, fidelity_general
from .schemes import ASYMMETRIC, SYMMETRIC, PulseTrain

BASIS_STATES = ("gg", "ge", "eg", "ee")

TARGET_PHASE = math.pi / 4.0


def state_signs(state: str) -> tuple[int, int]:
    """sigma-z eigenvalues (+1 excited, -1 ground) of the two target ions."""
    if state not in BASIS_STATES:
        raise ValueError(f"unknown internal state {state!r}")
    return tuple(1 if c == "e" else -1 for c in state)


def state_factors(crystal: IonCrystal, pair: tuple[int, int], state: str,
                  convention: str) -> np.ndarray:
    """Per-mode kick factor g_p(s) multiplying 2 z_k eta_p."""
    e1, e2 = state_signs(state)
    b1 = crystal.mode_vectors[pair[0] - 1, :]
    b2 = crystal.mode_vectors[pair[1] - 1, :]
    if convention == SYMMETRIC:
        return b1 * e1 + b2 * e2
    if convention == ASYMMETRIC:
        # Force acts on the ground state only.
        a1, a2 = (1 - e1) // 2, (1 - e2) // 2
        return b1 * a1 + b2 * a2
    raise ValueError(f"unknown kick convention {convention!r}")


def mode_sums(train: PulseTrain, frequencies: np.ndarray) -> np.ndarray:
    """S_p = sum_k z_k exp(i nu_p t_k) for each requested mode frequency."""
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if len(train.times) == 0:
        return np.zeros(len(freqs), dtype=complex)
    phases = np.exp(1j * np.outer(freqs, train.times))
    return phases @ train.weights.astype(complex)


def phase_sums(train: PulseTrain, frequencies: np.ndarray) -> np.ndarray:
    """D_p = sum_{m>k} z_m z_k sin(nu_p (t_m - t_k)); events time-ordered."""
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=float))
    out = np.zeros(len(freqs))
    t, z = train.times, train.weights
    if len(t) < 2:
        return out
    for idx, nu in enumerate(freqs):
        e = np.exp(1j * nu * t)
        w = z * np.conj(e)
        prefix = np.concatenate(([0.0], np.cumsum(w)[:-1]))
        out[idx] = float(np.imag(np.sum(z * e * prefix)))
    return out


def mode_displacement(train: PulseTrain, crystal: IonCrystal, state: str,
                      mode: int, pair: tuple[int, int] = (1, 2),
                      convention: str = SYMMETRIC) -> complex:
    """Residual phase-space displacement C_p for one mode (1-based)."""
    return complex(displacements(train, crystal, state, pair, convention)[mode - 1])


def displacements(train: PulseTrain, crystal: IonCrystal, state: str,
                  pair: tuple[int, int] = (1, 2),
                  convention: str = SYMMETRIC) -> np.ndarray:
    """Residual displacements C_p(s) for every mode."""
    g = state_factors(crystal, pair, state, convention)
    s = mode_sums(train, crystal.mode_frequencies)
    return -2j * crystal.lamb_dicke * g * s


def entangling_phase(train: PulseTrain, crystal: IonCrystal,
                     pair: tuple[int, int] = (1, 2),
                     convention: str = SYMMETRIC) -> float:
    """Conditional phase Theta; pi/4 performs the ideal gate."""
    d = phase_sums(train, crystal.mode_frequencies)
    b1 = crystal.mode_vectors[pair[0] - 1, :]
    b2 = crystal.mode_vectors[pair[1] - 1, :]
    prefactor = 8.0 if convention == SYMMETRIC else 2.0
    return prefactor * float(np.sum(crystal.lamb_dicke**2 * b1 * b2 * d))


def two_ion_conditions(train: PulseTrain, nu: float, eta: float):
    """Closed-form two-ion condition equations (symmetric convention).

    Returns (Theta, C_c, C_r): the phase sum with the COM/stretch bracket,
    and the COM and stretch restoration sums.
    """
    if len(train.times) == 0:
        return 0.0, 0j, 0j
    d_com, d_str = phase_sums(train, np.array([nu, math.sqrt(3.0) * nu]))
    theta = 4.0 * eta**2 * (d_com - d_str / math.sqrt(3.0))
    c_c = complex(np.sum(train.weights * np.exp(-1j * nu * train.times)))
    c_r = complex(np.sum(train.weights * np.exp(-1j * math.sqrt(3.0) * nu * train.times)))
    return theta, c_c, c_r


def single_ion_phase(train: PulseTrain, crystal: IonCrystal, state: str,
                     alphas, pair: tuple[int, int] = (1, 2),
                     convention: str = SYMMETRIC) -> np.ndarray:
    """Non-entangling phase Re[alpha_p sum_k c_pk exp(-i nu_p t_k)] per mode.

    Vanishes whenever the motion is restored; correctable by single-qubit
    rotations otherwise.
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    g = state_factors(crystal, pair, state, convention)
    s_conj = np.conj(mode_sums(train, crystal.mode_frequencies))
    return np.real(alphas * 2.0 * crystal.lamb_dicke * g * s_conj)


def coherent_trajectory(train: PulseTrain, crystal: IonCrystal, state: str,
                        mode: int, grid, frame: str = "rotating",
                        pair: tuple[int, int] = (1, 2),
                        convention: str = SYMMETRIC,
                        alpha0: complex = 0j) -> np.ndarray:
    """Coherent-state centre alpha(t) of one mode sampled on a time grid.

    The lab frame alternates displacement kicks with free rotation; the
    rotating frame multiplies by exp(+i nu_p t) so free evolution is a
    fixed point.
    """
    grid = np.asarray(grid, dtype=float)
    nu = float(crystal.mode_frequencies[mode - 1])
    g = float(state_factors(crystal, pair, state, convention)[mode - 1])
    eta = float(crystal.lamb_dicke[mode - 1])
    c = 2.0 * train.weights * g * eta
    # Rotating-frame accumulant referenced to t = 0.
    jumps = -1j * c * np.exp(1j * nu * train.times)
    acc = np.concatenate(([0j], np.cumsum(jumps)))
    idx = np.searchsorted(train.times, grid, side="right")
    alpha_rot = alpha0 + acc[idx]
    if frame == "rotating":
        return alpha_rot
    if frame == "lab":
        return alpha_rot * np.exp(-1j * nu * grid)
    raise ValueError(f"unknown frame {frame!r}")


def trajectory_points(alpha: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dimensionless (position, momentum) of coherent-centre samples."""
    return math.sqrt(2.0) * np.real(alpha), math.sqrt(2.0) * np.imag(alpha)


def driven_displacement(train: PulseTrain, crystal: IonCrystal, state: str,
                        grid, pair: tuple[int, int] = (1, 2),
                        convention: str = SYMMETRIC) -> np.ndarray:
    """Per-ion displacement from free evolution, metres; shape (L, len(grid)).

    All mode centres start at the origin, so the sampled motion is exactly
    the laser-driven part.
    """
    grid = np.asarray(grid, dtype=float)
    k = crystal.config.laser_wavenumber
    out = np.zeros((crystal.ion_count, len(grid)))
    for p in range(1, crystal.ion_count + 1):
        alpha = coherent_trajectory(train, crystal, state, p, grid,
                                    frame="lab", pair=pair, convention=convention)
        q = 2.0 * np.real(alpha) * crystal.lamb_dicke[p - 1] / k
        out += np.outer(crystal.mode_vectors[:, p - 1], q)
    return out


def oracle_compose(train: PulseTrain, crystal: IonCrystal, state: str,
                   pair: tuple[int, int] = (1, 2),
                   convention: str = SYMMETRIC) -> tuple[np.ndarray, float]:
    """Event-by-event operator composition; independent of the closed forms.

    Composes displacement and rotation operators per mode using
    D(a)D(b) = exp((a b* - a* b)/2) D(a+b) and R(th)D(B) = D(B e^{-i th})R(th),
    accumulating the scalar phase explicitly.  Returns (C_p, total phase).
    """
    g = state_factors(crystal, pair, state, convention)
    c_all = np.zeros(crystal.ion_count, dtype=complex)
    total_phase = 0.0
    for p in range(crystal.ion_count):
        nu = float(crystal.mode_frequencies[p])
        eta = float(crystal.lamb_dicke[p])
        acc = 0j      # accumulated lab-frame displacement
        phase = 0.0
        t_prev = 0.0  # rotations anchored at t = 0
        for t_k, z_k in zip(train.times, train.weights):
            acc *= np.exp(-1j * nu * (t_k - t_prev))
            kick = -1j * 2.0 * z_k * g[p] * eta
            phase += float(np.imag(kick * np.conj(acc)))
            acc += kick
            t_prev = t_k
        c_all[p] = acc * np.exp(1j * nu * t_prev)
        total_phase += phase
    return c_all, total_phase


@dataclass(frozen=True)
class GateResult:
    """Evaluated gate: residuals, phases, duration and fidelity."""

    entangling_phase: float
    gate_time: float
    fidelity: float
    mode_sums: np.ndarray
    displacements: dict
    mean_occupations: np.ndarray

    def __post_init__(self):
        self.mode_sums.setflags(write=False)
        self.mean_occupations.setflags(write=False)

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity

    @property
    def phi_gg(self) -> float:
        """Entangling phase component in the phi_gg bookkeeping."""
        return self.entangling_phase

    @property
    def relative_phase_offset(self) -> float:
        """phi' = 2 phi_gg - pi/2; zero for the ideal gate."""
        return 2.0 * self.entangling_phase - math.pi / 2.0

    def to_json_dict(self) -> dict:
        return {
            "fidelity": self.fidelity,
            "infidelity": self.infidelity,
            "entangling_phase_rad": self.entangling_phase,
            "phi_gg_rad": self.phi_gg,
            "gate_time_s": self.gate_time,
            "mean_occupations": [float(n) for n in self.mean_occupations],
            "mode_displacement_abs": {
                s: [float(a) for a in np.abs(c)] for s, c in self.displacements.items()
            },
        }


def evaluate_gate(train: PulseTrain, crystal: IonCrystal,
                  pair: tuple[int, int] = (1, 2),
                  convention: str = SYMMETRIC,
                  thermal: ThermalState | None = None) -> GateResult:
    """Full gate evaluation for a pulse train on a crystal.

    Single-qubit phases (including the asymmetric convention's
    state-dependent but non-entangling terms) are taken as corrected, so
    the realized-minus-ideal phase per basis state is
    eps1 eps2 (Theta - pi/4).
    """
    if thermal is None:
        thermal = ThermalState.uniform(0.0, crystal.ion_count)
    theta = entangling_phase(train, crystal, pair, convention)
    disp = {s: displacements(train, crystal, s, pair, convention)
            for s in BASIS_STATES}
    delta = {s: state_signs(s)[0] * state_signs(s)[1] * (theta - TARGET_PHASE)
             for s in BASIS_STATES}
    fid = fidelity_general(disp, delta, thermal.mean_occupations)
    return GateResult(
        entangling_phase=theta,
        gate_time=train.gate_time,
        fidelity=fid,
        mode_sums=mode_sums(train, crystal.mode_frequencies),
        displacements=disp,
        mean_occupations=thermal.mean_occupations.copy(),
    )
