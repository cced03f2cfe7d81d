"""Equilibrium structure and axial normal modes of a linear ion crystal.

All internal quantities are SI plus the dimensionless position convention
where lengths are scaled by the Coulomb length
``l = (e^2 / (4 pi eps0 M nu^2))**(1/3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import ATOMIC_MASS, COULOMB_COUPLING, HBAR
from .errors import NumericalError


@dataclass(frozen=True)
class TrapConfig:
    """Harmonic linear trap holding ``ion_count`` identical ions.

    axial_frequency : axial (COM) angular frequency, rad/s
    ion_mass        : single-ion mass, kg
    laser_wavenumber: magnitude of the kick-laser wavevector, 1/m
    ion_count       : number of ions in the crystal
    """

    axial_frequency: float
    ion_mass: float
    laser_wavenumber: float
    ion_count: int

    def __post_init__(self):
        if self.axial_frequency <= 0:
            raise ValueError("axial_frequency must be positive")
        if self.ion_mass <= 0:
            raise ValueError("ion_mass must be positive")
        if self.laser_wavenumber <= 0:
            raise ValueError("laser_wavenumber must be positive")
        if self.ion_count < 1:
            raise ValueError("ion_count must be at least 1")

    @property
    def coulomb_length(self) -> float:
        """Length scale l such that metric positions are x = l * u."""
        return (COULOMB_COUPLING / (self.ion_mass * self.axial_frequency**2)) ** (1.0 / 3.0)


@dataclass(frozen=True)
class IonCrystal:
    """Solved crystal: equilibrium positions, axial modes and couplings.

    positions        : dimensionless equilibrium positions u_i, increasing
    positions_m      : metric positions x_i = l * u_i, m
    mode_frequencies : angular mode frequencies nu_p, rad/s, nondecreasing
    mode_vectors     : (L, L) array; column p is the orthonormal mode vector
                       b^(p), sign-fixed so its first nonzero entry is >= 0
    lamb_dicke       : per-mode Lamb-Dicke factors eta_p
    """

    config: TrapConfig
    positions: np.ndarray
    positions_m: np.ndarray
    mode_frequencies: np.ndarray
    mode_vectors: np.ndarray
    lamb_dicke: np.ndarray

    def __post_init__(self):
        for name in ("positions", "positions_m", "mode_frequencies",
                     "mode_vectors", "lamb_dicke"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def ion_count(self) -> int:
        return self.config.ion_count

    def coupling(self, ion: int, mode: int) -> float:
        """Coupling coefficient b_i^(p); ``ion`` and ``mode`` are 1-based."""
        return float(self.mode_vectors[ion - 1, mode - 1])

    def separation(self, i: int, j: int) -> float:
        """Metric distance between ions i and j (1-based)."""
        return abs(float(self.positions_m[j - 1] - self.positions_m[i - 1]))


def _force_residual(u: np.ndarray) -> np.ndarray:
    """Gradient of the dimensionless potential at positions u."""
    d = u[:, None] - u[None, :]
    np.fill_diagonal(d, np.inf)
    return u - np.sum(np.sign(d) / d**2, axis=1)


def _hessian(u: np.ndarray) -> np.ndarray:
    """Analytic Hessian of the dimensionless potential at positions u."""
    d = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(d, np.inf)
    inv3 = 1.0 / d**3
    h = -2.0 * inv3
    np.fill_diagonal(h, 1.0 + 2.0 * np.sum(inv3, axis=1))
    return h


def _equilibrium_positions(count: int, tol: float = 1e-13) -> np.ndarray:
    """Damped Newton solve of the force-balance equations."""
    if count == 1:
        return np.zeros(1)
    # Uniform initial spacing close to the known minimum-spacing trend.
    spacing = 2.018 / count**0.559
    u = spacing * (np.arange(count) - (count - 1) / 2.0)
    res = _force_residual(u)
    norm = np.max(np.abs(res))
    for _ in range(200):
        if norm < tol:
            break
        step = np.linalg.solve(_hessian(u), res)
        lam = 1.0
        while lam > 1e-6:
            trial = u - lam * step
            if np.all(np.diff(trial) > 0):
                trial_res = _force_residual(trial)
                trial_norm = np.max(np.abs(trial_res))
                if trial_norm < norm:
                    u, res, norm = trial, trial_res, trial_norm
                    break
            lam *= 0.5
        else:
            break
    if norm >= 1e-12:
        raise NumericalError(
            f"equilibrium solve did not converge for {count} ions "
            f"(residual {norm:.3e})")
    return u - np.mean(u)


def solve_equilibrium(config: TrapConfig) -> IonCrystal:
    """Solve the equilibrium structure only; mode fields are empty."""
    u = _equilibrium_positions(config.ion_count)
    empty = np.zeros(0)
    return IonCrystal(
        config=config,
        positions=u,
        positions_m=config.coulomb_length * u,
        mode_frequencies=empty,
        mode_vectors=np.zeros((0, 0)),
        lamb_dicke=empty.copy(),
    )


def normal_modes(crystal: IonCrystal) -> tuple[np.ndarray, np.ndarray]:
    """Axial mode frequencies and orthonormal mode vectors.

    Returns (nu_p, b) where b[:, p] is the vector of couplings for mode p.
    """
    cfg = crystal.config
    try:
        mu, vec = np.linalg.eigh(_hessian(crystal.positions))
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"mode eigen-decomposition failed: {exc}") from exc
    # Deterministic sign: first nonzero component of each mode vector >= 0.
    for p in range(vec.shape[1]):
        col = vec[:, p]
        lead = col[np.argmax(np.abs(col) > 1e-12)]
        if lead < 0:
            vec[:, p] = -col
    return cfg.axial_frequency * np.sqrt(np.abs(mu)), vec


def build_crystal(config: TrapConfig) -> IonCrystal:
    """Equilibrium positions plus normal modes and Lamb-Dicke factors."""
    crystal = solve_equilibrium(config)
    freqs, vecs = normal_modes(crystal)
    eta = config.laser_wavenumber * np.sqrt(HBAR / (2.0 * config.ion_mass * freqs))
    return IonCrystal(
        config=config,
        positions=crystal.positions,
        positions_m=crystal.positions_m,
        mode_frequencies=freqs,
        mode_vectors=vecs,
        lamb_dicke=eta,
    )


def min_radial_ratio(ion_count: int) -> float:
    """Lower bound on omega_r / omega_z keeping a linear (non zig-zag) chain."""
    if ion_count < 1:
        raise ValueError("ion_count must be at least 1")
    return 0.63 * ion_count**0.865


def trap_frequency_for_separation(
    target_separation: float,
    ion_count: int,
    pair: tuple[int, int],
    ion_mass: float = 40.0 * ATOMIC_MASS,
) -> float:
    """Axial frequency at which ions ``pair`` sit ``target_separation`` apart.

    Uses the fact that dimensionless positions are frequency independent,
    so metric separations scale as nu**(-2/3).
    """
    i, j = pair
    if not (1 <= i < j <= ion_count):
        raise ValueError(f"pair {pair} invalid for {ion_count} ions")
    if target_separation <= 0:
        raise ValueError("target_separation must be positive")
    u = _equilibrium_positions(ion_count)
    du = u[j - 1] - u[i - 1]
    # d = (C / (M nu^2))^(1/3) * du  =>  nu = sqrt(C / M) * (du / d)^(3/2)
    nu = math.sqrt(COULOMB_COUPLING / ion_mass) * (du / target_separation) ** 1.5
    if not math.isfinite(nu) or nu <= 0:
        raise NumericalError(
            f"separation {target_separation} m is unreachable for pair {pair}")
    return nu
