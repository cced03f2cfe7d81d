"""Pulse-scheme design: exact two-ion seeding, annealing refinement, sweeps.

Two-ion gates on the lowest pair are solved exactly: the three timing
freedoms of the six-group templates match the three condition equations
(entangling phase plus one restoration sum per mode; the reflected
antisymmetry makes the mode sums purely imaginary, so each contributes a
single real equation).  Larger crystals and distant pairs leave more
conditions than freedoms; those are handled by direct fidelity
maximization seeded from the free-evolution-limit timing ratios, with
simulated annealing available for refinement.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq, minimize, root

from .crystal import IonCrystal, TrapConfig, build_crystal, trap_frequency_for_separation
from .dynamics import GateResult, entangling_phase, evaluate_gate, mode_sums
from .errors import InfeasibleError, NumericalError, OverlapError
from .fidelity import ThermalState
from .schemes import (ASYMMETRIC, FAMILY_DUAN, FAMILY_FRAG, FAMILY_GZC,
                      GateScheme, KickGroup, PulseTrain, SYMMETRIC, expand)

INFIDELITY_FLOOR = 1e-14

OBJECTIVE_FIDELITY = "max-fidelity"
OBJECTIVE_TIME = "min-time"

_HALF_COUNTS = {FAMILY_GZC: (-2, 3, -2), FAMILY_FRAG: (-1, 2, -2)}
# Timing ratios (tau2/tau1, tau3/tau1) solving the free-evolution-limit
# conditions sum a_k tau_k = 0, sum a_k tau_k^3 = 0 for each template.
_SEED_RATIOS = {FAMILY_FRAG: (0.80902, 0.30902), FAMILY_GZC: (0.8833, 0.3250)}

_DUAN_CYCLE_SIGNS = {1: (1,), 2: (1, -1), 3: (1, -1, 1), 4: (1, -1, -1, 1)}


@dataclass(frozen=True)
class AnnealConfig:
    """Simulated-annealing settings; defaults give minutes-scale runs."""

    initial_temperature: float = 0.0   # 0 = from the spread of random samples
    cooling_factor: float = 0.97
    steps: int = 200                   # per temperature level
    restarts: int = 8
    rng_seed: int = 0
    time_move_scale: float = 0.0       # s; 0 = 1% of the seed tau1
    n_range: tuple[int, int] = (1, 150)
    infidelity_threshold: float = 1e-8
    overlap_margin: float = 2.0        # min-time margin, repetition periods
    temperature_levels: int = 120

    def __post_init__(self):
        if not 0.0 < self.cooling_factor < 1.0:
            raise ValueError("cooling_factor must be in (0, 1)")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.time_move_scale < 0:
            raise ValueError("time_move_scale must be nonnegative")
        if self.n_range[0] < 1 or self.n_range[0] > self.n_range[1]:
            raise ValueError(f"invalid n_range {self.n_range}")
        if self.overlap_margin < 1.0:
            raise ValueError("overlap_margin must be at least one period")


@dataclass(frozen=True)
class DesignProblem:
    crystal: IonCrystal
    family: str = FAMILY_FRAG
    target_pair: tuple[int, int] = (1, 2)
    repetition_rate: float = math.inf
    convention: str = ASYMMETRIC
    thermal: ThermalState | None = None
    objective: str = OBJECTIVE_TIME
    cycles: int = 1                    # duan family only

    def __post_init__(self):
        i, j = self.target_pair
        if not (1 <= i < j <= self.crystal.ion_count):
            raise ValueError(f"target pair {self.target_pair} outside crystal")
        if self.repetition_rate <= 0:
            raise ValueError("repetition rate must be positive")
        if self.objective not in (OBJECTIVE_FIDELITY, OBJECTIVE_TIME):
            raise ValueError(f"unknown objective {self.objective!r}")

    def thermal_state(self) -> ThermalState:
        if self.thermal is not None:
            return self.thermal
        return ThermalState.uniform(0.0, self.crystal.ion_count)


# --- template expansion without per-candidate validation overhead ---

def _six_group_layout(family: str, n: int, taus) -> tuple[np.ndarray, np.ndarray]:
    half = np.array(_HALF_COUNTS[family]) * n
    counts = np.concatenate([half, -half[::-1]])
    t1, t2, t3 = taus
    times = np.array([-t1, -t2, -t3, t3, t2, t1])
    return counts, times


def _expand_counts(counts, times, repetition_rate):
    """(train, feasible, min gap in periods) for centred group expansion."""
    if math.isinf(repetition_rate):
        return (PulseTrain(np.asarray(times, dtype=float),
                           np.asarray(counts, dtype=float), math.inf),
                True, math.inf)
    tau_r = 1.0 / repetition_rate
    ts, ws = [], []
    min_gap = math.inf
    prev_end = None
    for z, t in zip(counts, times):
        m = abs(int(z))
        offsets = (np.arange(m) - (m - 1) / 2.0) * tau_r
        ts.append(t + offsets)
        ws.append(np.full(m, float(np.sign(z))))
        if prev_end is not None:
            min_gap = min(min_gap, (t + offsets[0]) - prev_end)
        prev_end = t + offsets[-1]
    t_all = np.concatenate(ts)
    w_all = np.concatenate(ws)
    order = np.argsort(t_all, kind="stable")
    feasible = min_gap >= tau_r * (1.0 - 1e-9)
    return (PulseTrain(t_all[order], w_all[order], repetition_rate),
            feasible, min_gap / tau_r)


def _template_train(problem, n, taus):
    counts, times = _six_group_layout(problem.family, n, taus)
    return _expand_counts(counts, times, problem.repetition_rate)


def _template_scheme(problem, n, taus) -> GateScheme:
    counts, times = _six_group_layout(problem.family, n, taus)
    groups = tuple(KickGroup(int(z), float(t)) for z, t in zip(counts, times))
    return GateScheme(groups, target_pair=problem.target_pair,
                      convention=problem.convention, family=problem.family)


# --- timing parametrization: strictly ordered taus from log gaps ---

def _taus_from_log_gaps(x):
    g = np.exp(np.clip(x, -60.0, -4.0))
    return (g[0] + g[1] + g[2], g[0] + g[1], g[0])


def _log_gaps_from_taus(taus):
    t1, t2, t3 = taus
    return np.log(np.maximum([t3, t2 - t3, t1 - t2], 1e-26))


def _seed_taus(family: str, scale: float):
    r2, r3 = _SEED_RATIOS[family]
    return (scale, scale * r2, scale * r3)


def _first_phase_crossing(problem, n, lo=1e-10, hi=5e-6, samples=400):
    """Smallest timing scale where the entangling phase reaches pi/4."""
    def offset(s):
        train, _, _ = _template_train(
            replace(problem, repetition_rate=math.inf), n, _seed_taus(problem.family, s))
        return entangling_phase(train, problem.crystal, problem.target_pair,
                                problem.convention) - math.pi / 4.0
    grid = np.geomspace(lo, hi, samples)
    values = [offset(s) for s in grid]
    for a, b, va, vb in zip(grid, grid[1:], values, values[1:]):
        if va * vb <= 0:
            return brentq(offset, a, b)
    raise NumericalError(
        f"no pi/4 phase crossing for {problem.family} n={n} "
        f"pair {problem.target_pair}")


def _exact_two_ion_taus(problem, n):
    """Solve phase and both restoration sums exactly; two-ion crystals only.

    The reflected-antisymmetric layout forces Re(S_p) = 0, so the solve
    targets Im(S_p) = 0 for both modes plus Theta = pi/4.
    """
    crystal = problem.crystal

    def conditions(x):
        train, _, _ = _template_train(problem, n, _taus_from_log_gaps(x))
        theta = entangling_phase(train, crystal, problem.target_pair,
                                 problem.convention)
        s = mode_sums(train, crystal.mode_frequencies)
        return np.array([theta - math.pi / 4.0,
                         s[0].imag / n, s[1].imag / n])

    scale = _first_phase_crossing(problem, n)
    result = root(conditions, _log_gaps_from_taus(_seed_taus(problem.family, scale)),
                  method="hybr", tol=1e-13)
    if np.max(np.abs(result.fun)) > 1e-9:
        raise NumericalError(
            f"two-ion condition solve failed for {problem.family} n={n} "
            f"(residual {np.max(np.abs(result.fun)):.3e})")
    return _taus_from_log_gaps(result.x)


def _is_exact_two_ion(problem) -> bool:
    return (problem.crystal.ion_count == 2 and problem.target_pair == (1, 2)
            and problem.family in _HALF_COUNTS)


# --- simulated annealing core ---

def _anneal(objective, x0, move, config: AnnealConfig, rng_stream: int):
    """Maximize `objective` from x0; acceptance min(1, exp(delta/T)).

    Returns the best (objective value, x) over all restarts; restarts use
    independent streams derived from (rng_seed, restart index) and the
    reduction prefers higher objective, then lower restart index.
    """
    best_value, best_x = objective(x0), np.asarray(x0, dtype=float)
    for restart in range(config.restarts):
        rng = np.random.default_rng((config.rng_seed, rng_stream, restart))
        x = np.asarray(x0, dtype=float)
        value = objective(x)
        if config.initial_temperature > 0:
            temperature = config.initial_temperature
        else:
            samples = [objective(move(x, rng)) for _ in range(100)]
            spread = float(np.std(samples))
            temperature = max(spread, 1e-3)
        for _ in range(config.temperature_levels):
            for _ in range(config.steps):
                candidate = move(x, rng)
                cand_value = objective(candidate)
                delta = cand_value - value
                if delta >= 0 or rng.random() < math.exp(delta / temperature):
                    x, value = candidate, cand_value
                    if value > best_value:
                        best_value, best_x = value, x.copy()
            temperature *= config.cooling_factor
    return best_value, best_x


def _infidelity(problem, n, taus) -> float:
    train, feasible, _ = _template_train(problem, n, taus)
    if not feasible:
        return 1.0
    result = evaluate_gate(train, problem.crystal, problem.target_pair,
                           problem.convention, problem.thermal_state())
    return result.infidelity


def _refine_fidelity(problem, n, taus, config: AnnealConfig):
    """Nelder-Mead plus optional annealing on the timing log gaps."""
    def loss(x):
        return _infidelity(problem, n, _taus_from_log_gaps(x))

    x0 = _log_gaps_from_taus(taus)
    nm = minimize(loss, x0, method="Nelder-Mead",
                  options=dict(xatol=1e-13, fatol=1e-16, maxiter=4000))
    best_x = nm.x if nm.fun <= loss(x0) else x0
    if loss(best_x) > config.infidelity_threshold:
        scale = config.time_move_scale
        width = 0.05 if scale == 0 else scale / max(taus[0], 1e-12)

        def gain(x):
            return -math.log10(max(loss(x), INFIDELITY_FLOOR))

        def move(x, rng):
            return x + rng.normal(scale=width, size=len(x))

        _, annealed = _anneal(gain, best_x, move, config, rng_stream=1)
        polished = minimize(loss, annealed, method="Nelder-Mead",
                            options=dict(xatol=1e-13, fatol=1e-16, maxiter=4000))
        if polished.fun < loss(best_x):
            best_x = polished.x
    return _taus_from_log_gaps(best_x)


def _evaluate(problem, train) -> GateResult:
    return evaluate_gate(train, problem.crystal, problem.target_pair,
                         problem.convention, problem.thermal_state())


def _candidate_n_values(problem, config) -> list[int]:
    n_lo, n_hi = config.n_range
    if _is_exact_two_ion(problem) or n_hi - n_lo <= 40:
        return list(range(n_lo, n_hi + 1))
    values = np.unique(np.geomspace(n_lo, n_hi, 40).astype(int))
    return [int(v) for v in values]


def _optimize_template(problem, config):
    exact = _is_exact_two_ion(problem)
    candidates = []  # (n, taus, train, result, min_gap)
    for n in _candidate_n_values(problem, config):
        try:
            if exact:
                taus = _exact_two_ion_taus(problem, n)
            else:
                scale = _first_phase_crossing(problem, n)
                taus = _refine_fidelity(problem, n, _seed_taus(problem.family, scale),
                                        config)
        except NumericalError:
            continue
        train, feasible, min_gap = _template_train(problem, n, taus)
        if not feasible:
            continue
        candidates.append((n, taus, train, _evaluate(problem, train), min_gap))
        if not exact and len(candidates) >= 12:
            break
    if not candidates:
        raise InfeasibleError(
            f"no feasible {problem.family} scheme for pair {problem.target_pair} "
            f"at repetition rate {problem.repetition_rate:.3e} Hz "
            f"with n in {config.n_range}")
    if problem.objective == OBJECTIVE_TIME:
        admissible = [c for c in candidates
                      if c[3].infidelity <= config.infidelity_threshold
                      and c[4] >= config.overlap_margin * (1.0 - 1e-9)]
        if not admissible:
            raise InfeasibleError(
                f"no scheme meets infidelity {config.infidelity_threshold:.1e} "
                f"with overlap margin {config.overlap_margin} at repetition "
                f"rate {problem.repetition_rate:.3e} Hz")
        n, taus, train, result, _ = min(admissible, key=lambda c: c[2].gate_time)
    else:
        n, taus, train, result, _ = min(
            candidates, key=lambda c: (max(c[3].infidelity, INFIDELITY_FLOOR),
                                       c[2].gate_time))
    return _template_scheme(problem, n, taus), result


# --- Duan comb construction ---

def duan_comb_scheme(n: int, cycles: int, repetition_rate: float,
                     target_pair=(1, 2), convention=ASYMMETRIC) -> GateScheme:
    """Minimal-time triangle scheme: blocks (n, -2n, n) back to back.

    Every pulse pair is one repetition period from its neighbours, so the
    only free evolution is the period itself and tau1 = 1.5 n tau_r for
    centred groups.  Cycle sign patterns cancel successive orders of the
    restoration error: two cycles negate the first, four negate the
    doubled block again (a doubled-4-block overall).
    """
    if math.isinf(repetition_rate):
        raise ValueError("the comb construction needs a finite repetition rate")
    if cycles not in _DUAN_CYCLE_SIGNS:
        raise ValueError(f"cycles must be in {sorted(_DUAN_CYCLE_SIGNS)}")
    tau_r = 1.0 / repetition_rate
    tau1 = 1.5 * n * tau_r
    cycle_step = 2.0 * tau1 + n * tau_r
    groups = []
    offset = 0.0
    for sign in _DUAN_CYCLE_SIGNS[cycles]:
        for z, t in ((n, 0.0), (-2 * n, tau1), (n, 2.0 * tau1)):
            groups.append(KickGroup(sign * z, offset + t))
        offset += cycle_step
    return GateScheme(tuple(groups), target_pair=target_pair,
                      convention=convention, family=FAMILY_DUAN)


def _optimize_duan(problem, config):
    candidates = []
    for n in range(config.n_range[0], config.n_range[1] + 1):
        scheme = duan_comb_scheme(n, problem.cycles, problem.repetition_rate,
                                  problem.target_pair, problem.convention)
        try:
            train = expand(scheme, problem.repetition_rate)
        except OverlapError:
            continue
        candidates.append((scheme, train, _evaluate(problem, train)))
    if not candidates:
        raise InfeasibleError(
            f"no feasible duan scheme with n in {config.n_range}")
    if problem.objective == OBJECTIVE_TIME:
        admissible = [c for c in candidates
                      if c[2].infidelity <= config.infidelity_threshold]
        if not admissible:
            raise InfeasibleError(
                f"no duan scheme meets infidelity "
                f"{config.infidelity_threshold:.1e}")
        scheme, train, result = min(admissible, key=lambda c: c[1].gate_time)
    else:
        scheme, train, result = min(
            candidates, key=lambda c: (max(c[2].infidelity, INFIDELITY_FLOOR),
                                       c[1].gate_time))
    return scheme, result


def optimize(problem: DesignProblem, config: AnnealConfig | None = None):
    """Best scheme and its evaluation for the given design problem.

    Deterministic for fixed (problem, config): the candidate scan, the
    seeded refinements and the annealing streams all derive from the
    configured seed.
    """
    if config is None:
        config = AnnealConfig()
    if problem.family == FAMILY_DUAN:
        return _optimize_duan(problem, config)
    if problem.family not in _HALF_COUNTS:
        raise ValueError(f"cannot optimize scheme family {problem.family!r}")
    return _optimize_template(problem, config)


# --- sweeps ---

def _power_law_slope(x, y) -> float:
    lx = np.log(np.asarray(x, dtype=float))
    if np.ptp(lx) == 0.0:
        return math.nan
    return float(np.polyfit(lx, np.log(np.asarray(y, dtype=float)), 1)[0])


@dataclass(frozen=True)
class SweepTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    fits: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_json_dict(self) -> dict:
        return {"columns": list(self.columns),
                "rows": [list(r) for r in self.rows],
                "fits": dict(self.fits)}


def sweep_repetition_rate(problem: DesignProblem, rates,
                          config: AnnealConfig | None = None) -> SweepTable:
    """Optimize per repetition rate; fits gate time against rate and
    against total pulse-pair number."""
    rates = list(rates)
    if not rates:
        raise ValueError("repetition rate list is empty")
    rows = []
    for rate in rates:
        scheme, result = optimize(replace(problem, repetition_rate=rate), config)
        rows.append((rate, result.gate_time, result.infidelity,
                     scheme.total_pairs))
    fits = {}
    finite = [r for r in rows if math.isfinite(r[0])]
    if len(finite) >= 2:
        fits["gate_time_vs_rate"] = _power_law_slope(
            [r[0] for r in finite], [r[1] for r in finite])
        fits["gate_time_vs_pairs"] = _power_law_slope(
            [r[3] for r in finite], [r[1] for r in finite])
    return SweepTable(("repetition_rate_hz", "gate_time_s", "infidelity",
                       "total_pairs"), tuple(rows), fits)


def _pair_for(ion_count: int, placement: str) -> tuple[int, int]:
    if placement == "end":
        return (1, 2)
    if placement == "middle":
        lo = max(1, (ion_count + 1) // 2)
        return (lo, lo + 1)
    raise ValueError(f"unknown pair placement {placement!r}")


def sweep_ion_number(problem: DesignProblem, ion_counts, mode: str,
                     placement: str = "end",
                     config: AnnealConfig | None = None) -> SweepTable:
    """Gate performance against crystal size.

    fixed-frequency: re-optimize the gate on each crystal at the same trap
    frequency.  fixed-distance: design once on a two-ion crystal, then
    re-evaluate the identical pulse train on each larger crystal with the
    trap relaxed so the target pair keeps the reference separation.
    """
    ion_counts = list(ion_counts)
    if not ion_counts or any(L < 2 for L in ion_counts):
        raise ValueError("ion counts must be a nonempty list of L >= 2")
    if mode not in ("fixed-frequency", "fixed-distance"):
        raise ValueError(f"unknown ion-number sweep mode {mode!r}")
    base = problem.crystal.config
    rows = []
    if mode == "fixed-frequency":
        for L in ion_counts:
            crystal = build_crystal(replace(base, ion_count=L))
            pair = _pair_for(L, placement)
            sub = replace(problem, crystal=crystal, target_pair=pair,
                          thermal=_thermal_for(problem, L))
            scheme, result = optimize(sub, config)
            rows.append((L, result.gate_time, result.infidelity,
                         float(np.max(np.abs(result.mode_sums)))))
    else:
        two_ion = build_crystal(replace(base, ion_count=2))
        reference = two_ion.separation(1, 2)
        design = replace(problem, crystal=two_ion, target_pair=(1, 2),
                         thermal=_thermal_for(problem, 2))
        scheme, _ = optimize(design, config)
        for L in ion_counts:
            pair = _pair_for(L, placement)
            nu = trap_frequency_for_separation(reference, L, pair, base.ion_mass)
            crystal = build_crystal(replace(base, ion_count=L,
                                            axial_frequency=nu))
            shifted = GateScheme(scheme.groups, target_pair=pair,
                                 convention=scheme.convention,
                                 family=scheme.family)
            train = expand(shifted, problem.repetition_rate)
            result = evaluate_gate(train, crystal, pair, problem.convention,
                                   _thermal_for(problem, L))
            rows.append((L, result.gate_time, result.infidelity,
                         float(np.max(np.abs(result.mode_sums)))))
    return SweepTable(("ion_count", "gate_time_s", "infidelity",
                       "max_mode_sum"), tuple(rows))


def _thermal_for(problem: DesignProblem, mode_count: int) -> ThermalState:
    occ = problem.thermal_state().mean_occupations
    if len(occ) == mode_count:
        return ThermalState(occ.copy())
    return ThermalState.uniform(float(occ[0]), mode_count)


def sweep_gate_time_distant(problem: DesignProblem, gate_times,
                            config: AnnealConfig | None = None) -> SweepTable:
    """Best fidelity at each fixed gate time for a distant target pair.

    tau1 is pinned by the requested span (outer groups included), and the
    remaining timing freedoms are tuned per candidate n.
    """
    if config is None:
        config = AnnealConfig()
    i, j = problem.target_pair
    if j - i < 2:
        raise ValueError("distant-pair sweep needs |i - j| >= 2")
    gate_times = list(gate_times)
    if not gate_times:
        raise ValueError("gate time list is empty")
    outer = abs(_HALF_COUNTS[problem.family][0])
    tau_r = (0.0 if math.isinf(problem.repetition_rate)
             else 1.0 / problem.repetition_rate)
    rows = []
    for total in gate_times:
        best = None
        for n in _distant_n_values(problem, config, total):
            tau1 = 0.5 * (total - (outer * n - 1) * tau_r)
            if tau1 <= 2.0 * max(tau_r, 1e-12):
                continue
            taus = _tune_inner_taus(problem, n, tau1)
            if taus is None:
                continue
            infid = _infidelity(problem, n, taus)
            if best is None or infid < best[0]:
                best = (infid, n, taus)
        if best is None:
            rows.append((total, 0.0, 0))
            continue
        rows.append((total, 1.0 - best[0], best[1]))
    table = SweepTable(("gate_time_s", "fidelity", "n"), tuple(rows))
    fidelities = table.column("fidelity")
    peak = int(np.argmax(fidelities))
    table.fits["peak_gate_time_s"] = float(rows[peak][0])
    table.fits["peak_fidelity"] = float(fidelities[peak])
    return table


def _distant_n_values(problem, config, total):
    if math.isinf(problem.repetition_rate):
        lo, hi = config.n_range
        return [int(v) for v in np.unique(np.geomspace(lo, max(hi, lo), 25)
                                          .astype(int))]
    outer = abs(_HALF_COUNTS[problem.family][0])
    cap = int(total * problem.repetition_rate / (2 * outer)) + 1
    cap = min(cap, config.n_range[1])
    if cap < config.n_range[0]:
        return []
    values = np.unique(np.geomspace(config.n_range[0], cap, 30).astype(int))
    return [int(v) for v in values]


def _tune_inner_taus(problem, n, tau1):
    """Maximize fidelity over (tau2, tau3) at fixed tau1; None if hopeless."""
    def unpack(y):
        f2 = 1.0 / (1.0 + math.exp(-y[0]))
        f3 = 1.0 / (1.0 + math.exp(-y[1]))
        return (tau1, tau1 * f2, tau1 * f2 * f3)

    def loss(y):
        return _infidelity(problem, n, unpack(y))

    best = None
    for f2, f3 in ((0.809, 0.382), (0.6, 0.5), (0.9, 0.3)):
        y0 = np.array([math.log(f2 / (1 - f2)), math.log(f3 / (1 - f3))])
        fit = minimize(loss, y0, method="Nelder-Mead",
                       options=dict(xatol=1e-10, fatol=1e-15, maxiter=600))
        if best is None or fit.fun < best[0]:
            best = (fit.fun, fit.x)
    if best is None or best[0] >= 1.0:
        return None
    return unpack(best[1])


def perturbation_sweep(scheme: GateScheme, crystal: IonCrystal,
                       repetition_rate: float, shifts,
                       thermal: ThermalState | None = None) -> SweepTable:
    """Fidelity under a systematic shift of every event time.

    A global shift leaves |C_p| and Theta unchanged, so for an optimal
    scheme the curve is flat to machine precision; the sweep records the
    realized values as evidence.
    """
    shifts = list(shifts)
    if not shifts:
        raise ValueError("shift list is empty")
    train = expand(scheme, repetition_rate)
    rows = []
    for shift in shifts:
        result = evaluate_gate(train.shifted(shift), crystal,
                               scheme.target_pair, scheme.convention, thermal)
        rows.append((shift, result.fidelity))
    return SweepTable(("shift_s", "fidelity"), tuple(rows))


# --- run manifest ---

def run_manifest(problem: DesignProblem, config: AnnealConfig,
                 scheme: GateScheme, result: GateResult,
                 wall_time_s: float) -> dict:
    cfg = problem.crystal.config
    reported = result.infidelity
    return {
        "problem": {
            "ion_count": cfg.ion_count,
            "axial_frequency_rad_s": cfg.axial_frequency,
            "ion_mass_kg": cfg.ion_mass,
            "laser_wavenumber_per_m": cfg.laser_wavenumber,
            "family": problem.family,
            "target_pair": list(problem.target_pair),
            "repetition_rate_hz": (None if math.isinf(problem.repetition_rate)
                                   else problem.repetition_rate),
            "convention": problem.convention,
            "objective": problem.objective,
            "cycles": problem.cycles,
            "mean_occupations": [float(x) for x in
                                 problem.thermal_state().mean_occupations],
        },
        "config": {
            "initial_temperature": config.initial_temperature,
            "cooling_factor": config.cooling_factor,
            "steps": config.steps,
            "restarts": config.restarts,
            "rng_seed": config.rng_seed,
            "time_move_scale": config.time_move_scale,
            "n_range": list(config.n_range),
            "infidelity_threshold": config.infidelity_threshold,
            "overlap_margin": config.overlap_margin,
        },
        "scheme": scheme.to_json_dict(),
        "result": result.to_json_dict(),
        "infidelity_reported": max(reported, INFIDELITY_FLOOR),
        "wall_time_s": wall_time_s,
    }


def design(problem: DesignProblem, config: AnnealConfig | None = None) -> dict:
    """optimize() plus manifest assembly; the CLI/service entry point."""
    if config is None:
        config = AnnealConfig()
    start = time.perf_counter()
    scheme, result = optimize(problem, config)
    return run_manifest(problem, config, scheme, result,
                        time.perf_counter() - start)
