"""Kick-group gate schemes and their expansion into pulse trains.

A scheme is an ordered list of kick groups (signed pulse-pair count z_k,
nominal centre time t_k).  At a finite laser repetition rate each group is
realised as |z_k| individual pulse pairs spaced by the repetition period
and centred on the nominal time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import OverlapError

SYMMETRIC = "symmetric"
ASYMMETRIC = "asymmetric"

FAMILY_GZC = "gzc"
FAMILY_FRAG = "frag"
FAMILY_DUAN = "duan"
FAMILY_CUSTOM = "custom"

SYMMETRY_NONE = "none"
SYMMETRY_REFLECTED = "reflected-antisymmetric"
SYMMETRY_4BLOCK = "doubled-4-block"


@dataclass(frozen=True)
class KickGroup:
    """A burst of |count| pulse pairs; sign is the direction of the first pulse."""

    count: int
    time: float

    def __post_init__(self):
        if self.count == 0:
            raise ValueError("kick group count must be nonzero")


@dataclass(frozen=True)
class GateScheme:
    groups: tuple[KickGroup, ...]
    target_pair: tuple[int, int] = (1, 2)
    convention: str = ASYMMETRIC
    family: str = FAMILY_CUSTOM

    def __post_init__(self):
        times = [g.time for g in self.groups]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("group times must be strictly increasing")
        i, j = self.target_pair
        if not (1 <= i < j):
            raise ValueError(f"invalid target pair {self.target_pair}")
        if self.convention not in (SYMMETRIC, ASYMMETRIC):
            raise ValueError(f"unknown kick convention {self.convention!r}")

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(g.count for g in self.groups)

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(g.time for g in self.groups)

    @property
    def total_pairs(self) -> int:
        return sum(abs(g.count) for g in self.groups)

    def shifted(self, offset: float) -> "GateScheme":
        groups = tuple(KickGroup(g.count, g.time + offset) for g in self.groups)
        return replace(self, groups=groups)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "counts": list(self.counts),
            "times_s": list(self.times),
            "convention": self.convention,
            "target_pair": list(self.target_pair),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(data: dict) -> "GateScheme":
        groups = tuple(KickGroup(int(z), float(t))
                       for z, t in zip(data["counts"], data["times_s"]))
        return GateScheme(
            groups=groups,
            target_pair=tuple(data.get("target_pair", (1, 2))),
            convention=data.get("convention", ASYMMETRIC),
            family=data.get("family", FAMILY_CUSTOM),
        )

    @staticmethod
    def from_json(text: str) -> "GateScheme":
        return GateScheme.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class PulseTrain:
    """Expanded sequence of pulse-pair events.

    ``weights`` are signed pulse-pair multiplicities per event: +-1 for a
    finite repetition rate; the full group count when groups collapse to a
    single instant (infinite rate).
    """

    times: np.ndarray
    weights: np.ndarray
    repetition_rate: float

    def __post_init__(self):
        self.times.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def total_pairs(self) -> int:
        return int(np.sum(np.abs(self.weights)))

    @property
    def gate_time(self) -> float:
        if len(self.times) == 0:
            return 0.0
        return float(self.times[-1] - self.times[0])

    def shifted(self, offset: float) -> "PulseTrain":
        return PulseTrain(self.times + offset, self.weights.copy(),
                          self.repetition_rate)


def _check_ordered_taus(*taus: float):
    if any(b <= a for a, b in zip(taus[::-1], taus[-2::-1])):
        raise ValueError(f"timing parameters must satisfy tau1 > tau2 > ... > 0, got {taus}")
    if taus[-1] <= 0:
        raise ValueError(f"timing parameters must be positive, got {taus}")


def _antisymmetric_scheme(half_counts, tau1, tau2, tau3, family, pair, convention):
    _check_ordered_taus(tau1, tau2, tau3)
    counts = list(half_counts) + [-z for z in reversed(half_counts)]
    times = [-tau1, -tau2, -tau3, tau3, tau2, tau1]
    groups = tuple(KickGroup(z, t) for z, t in zip(counts, times))
    return GateScheme(groups, target_pair=pair, convention=convention, family=family)


def build_gzc(n: int, tau1: float, tau2: float, tau3: float,
              target_pair=(1, 2), convention=ASYMMETRIC) -> GateScheme:
    """Six-group scheme z = (-2n, 3n, -2n, 2n, -3n, 2n); 14n pulse pairs."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _antisymmetric_scheme([-2 * n, 3 * n, -2 * n], tau1, tau2, tau3,
                                 FAMILY_GZC, target_pair, convention)


def build_frag(n: int, tau1: float, tau2: float, tau3: float,
               target_pair=(1, 2), convention=ASYMMETRIC) -> GateScheme:
    """Six-group scheme z = (-n, 2n, -2n, 2n, -2n, n); 10n pulse pairs."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _antisymmetric_scheme([-n, 2 * n, -2 * n], tau1, tau2, tau3,
                                 FAMILY_FRAG, target_pair, convention)


def build_duan(n: int, tau1: float, cycles: int = 1, repetition_rate: float = math.inf,
               target_pair=(1, 2), convention=ASYMMETRIC) -> GateScheme:
    """Triangle scheme: one cycle is z = (n, -2n, n) at times (0, tau1, 2*tau1).

    Each further cycle repeats the pattern with all kick directions negated.
    Cycles are appended immediately: at a finite repetition rate the first
    event of a cycle follows one repetition period after the last event of
    the previous cycle; for instantaneous groups the cycles are adjacent in
    the zero-period limit.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if tau1 <= 0:
        raise ValueError("tau1 must be positive")
    if cycles < 1:
        raise ValueError("cycles must be at least 1")
    tau_r = 0.0 if math.isinf(repetition_rate) else 1.0 / repetition_rate
    # Gap such that the last event of one cycle and the first event of the
    # next (both groups of n pairs, half-width (n-1)*tau_r/2) sit one
    # repetition period apart.
    cycle_step = 2.0 * tau1 + n * tau_r
    groups = []
    sign = 1
    offset = 0.0
    for _ in range(cycles):
        for z, t in ((n, 0.0), (-2 * n, tau1), (n, 2.0 * tau1)):
            groups.append(KickGroup(sign * z, offset + t))
        sign = -sign
        offset += cycle_step
    if math.isinf(repetition_rate):
        # Adjacent cycles share the boundary instant; merge the coincident
        # +-n groups would cancel them, so keep them distinct by an
        # infinitesimal-free strictly increasing ordering: nudge is not
        # needed because cycle_step == 2*tau1 makes boundary times equal.
        # Collapse the coincident opposite groups into a single ordering by
        # offsetting each later cycle by a negligible fraction of tau1.
        eps = 1e-9 * tau1
        fixed = []
        last_t = -math.inf
        for g in groups:
            t = g.time
            if t <= last_t:
                t = last_t + eps
            fixed.append(KickGroup(g.count, t))
            last_t = t
        groups = fixed
    return GateScheme(tuple(groups), target_pair=target_pair,
                      convention=convention, family=FAMILY_DUAN)


def custom_scheme(counts, times, target_pair=(1, 2), convention=ASYMMETRIC) -> GateScheme:
    """Raw (z, t) scheme; shared representation for templates and optimizer output."""
    groups = tuple(KickGroup(int(z), float(t)) for z, t in zip(counts, times))
    return GateScheme(groups, target_pair=target_pair, convention=convention,
                      family=FAMILY_CUSTOM)


def expand(scheme: GateScheme, repetition_rate: float = math.inf) -> PulseTrain:
    """Realize a scheme as individual pulse-pair events.

    Finite rate: each group of |z| pairs becomes |z| events spaced by the
    repetition period, centred on the group time (even counts straddle the
    nominal time).  Infinite rate: one event per group carrying the full
    signed count.
    """
    if repetition_rate <= 0:
        raise ValueError("repetition rate must be positive")
    if math.isinf(repetition_rate):
        times = np.array([g.time for g in scheme.groups], dtype=float)
        weights = np.array([g.count for g in scheme.groups], dtype=float)
        return PulseTrain(times, weights, math.inf)
    tau_r = 1.0 / repetition_rate
    times = []
    weights = []
    boundaries = []  # (first event, last event) per group
    for g in scheme.groups:
        m = abs(g.count)
        offsets = (np.arange(m) - (m - 1) / 2.0) * tau_r
        ts = g.time + offsets
        times.append(ts)
        weights.append(np.full(m, float(np.sign(g.count))))
        boundaries.append((ts[0], ts[-1]))
    for k in range(len(boundaries) - 1):
        gap = boundaries[k + 1][0] - boundaries[k][1]
        if gap < tau_r * (1.0 - 1e-9):
            raise OverlapError(k, k + 1, gap, tau_r)
    return PulseTrain(np.concatenate(times), np.concatenate(weights), repetition_rate)


def _mirror_times(times: np.ndarray) -> np.ndarray:
    centre = 0.5 * (times[0] + times[-1])
    return times - centre


def classify_symmetry(scheme: GateScheme, rtol: float = 1e-9) -> str:
    """Detect which time-symmetry template the group structure matches."""
    z = np.array(scheme.counts, dtype=float)
    t = _mirror_times(np.array(scheme.times, dtype=float))
    scale = max(abs(t[0]), abs(t[-1]), 1e-300)
    mirrored = np.allclose(t, -t[::-1], rtol=0, atol=rtol * scale)
    if mirrored and len(z) % 4 == 0 and _is_four_block(z, t, rtol * scale):
        return SYMMETRY_4BLOCK
    if mirrored and np.array_equal(z, -z[::-1]):
        return SYMMETRY_REFLECTED
    return SYMMETRY_NONE


def _is_four_block(z: np.ndarray, t: np.ndarray, atol: float) -> bool:
    l = len(z) // 4
    q1, q2, q3, q4 = z[:l], z[l:2 * l], z[2 * l:3 * l], z[3 * l:]
    if not (np.array_equal(q2, -q1[::-1]) and np.array_equal(q3, -q1)
            and np.array_equal(q4, q1[::-1])):
        return False
    t1, t2 = t[:l], t[l:2 * l]
    # Block centre -f between the first two blocks; offsets tau_k from t1.
    f = -0.5 * (t1[-1] + t2[0])
    if f <= 0:
        return False
    tau = -t1 - f
    if tau[-1] <= 0 or np.any(np.diff(tau) >= 0) or f <= tau[0]:
        return False
    expected = np.concatenate([-f - tau, -f + tau[::-1], f - tau, f + tau[::-1]])
    return bool(np.allclose(t, expected, rtol=0, atol=max(atol, 1e-12 * f)))
