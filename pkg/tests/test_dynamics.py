import math

import numpy as np
import pytest

from fastgates.constants import ATOMIC_MASS
from fastgates.crystal import TrapConfig, build_crystal
from fastgates.dynamics import (BASIS_STATES, coherent_trajectory,
                                displacements, driven_displacement,
                                entangling_phase, evaluate_gate, mode_sums,
                                oracle_compose, phase_sums, single_ion_phase,
                                state_factors, state_signs,
                                trajectory_points, two_ion_conditions)
from fastgates.fidelity import ThermalState
from fastgates.schemes import ASYMMETRIC, SYMMETRIC, PulseTrain

NU = 2.0 * math.pi * 1.2e6
MASS = 40.0 * ATOMIC_MASS
K = 2.0 * math.pi / 393e-9


def _crystal(count=2):
    return build_crystal(TrapConfig(NU, MASS, K, count))


def _random_train(rng, events=12, span=2e-7):
    times = np.sort(rng.uniform(0.0, span, events))
    weights = rng.choice([-3, -2, -1, 1, 2, 3], size=events).astype(float)
    return PulseTrain(times, weights, math.inf)


def test_state_signs():
    assert state_signs("gg") == (-1, -1)
    assert state_signs("ge") == (-1, 1)
    assert state_signs("ee") == (1, 1)
    with pytest.raises(ValueError):
        state_signs("xx")


def test_state_factors_two_ion():
    crystal = _crystal(2)
    root2 = math.sqrt(2.0)
    g = state_factors(crystal, (1, 2), "ee", SYMMETRIC)
    assert np.allclose(g, [2.0 / root2, 0.0])
    g = state_factors(crystal, (1, 2), "ge", SYMMETRIC)
    assert np.allclose(np.abs(g), [0.0, 2.0 / root2])
    # Asymmetric kicks act on ground populations only.
    g = state_factors(crystal, (1, 2), "ee", ASYMMETRIC)
    assert np.allclose(g, [0.0, 0.0])
    g = state_factors(crystal, (1, 2), "gg", ASYMMETRIC)
    assert np.allclose(g, [2.0 / root2, 0.0])


def test_mode_sums_against_direct_evaluation():
    rng = np.random.default_rng(3)
    train = _random_train(rng)
    freqs = np.array([NU, math.sqrt(3.0) * NU])
    s = mode_sums(train, freqs)
    for p, nu in enumerate(freqs):
        direct = np.sum(train.weights * np.exp(1j * nu * train.times))
        assert s[p] == pytest.approx(direct, rel=1e-14)


def test_phase_sums_against_double_loop():
    rng = np.random.default_rng(4)
    train = _random_train(rng, events=10)
    freqs = np.array([NU, 2.3 * NU])
    d = phase_sums(train, freqs)
    t, z = train.times, train.weights
    for p, nu in enumerate(freqs):
        direct = sum(z[m] * z[k] * math.sin(nu * (t[m] - t[k]))
                     for m in range(len(t)) for k in range(m))
        assert d[p] == pytest.approx(direct, rel=1e-12, abs=1e-12)


def test_oracle_compose_matches_closed_forms():
    rng = np.random.default_rng(5)
    for count in (2, 3):
        crystal = _crystal(count)
        train = _random_train(rng, events=20)
        for convention in (SYMMETRIC, ASYMMETRIC):
            for state in BASIS_STATES:
                c_closed = displacements(train, crystal, state, (1, 2),
                                         convention)
                c_oracle, phase = oracle_compose(train, crystal, state,
                                                 (1, 2), convention)
                assert np.allclose(c_oracle, c_closed, atol=1e-12)
                g = state_factors(crystal, (1, 2), state, convention)
                d = phase_sums(train, crystal.mode_frequencies)
                closed_phase = float(np.sum(
                    4.0 * crystal.lamb_dicke**2 * g**2 * d))
                assert phase == pytest.approx(closed_phase, rel=1e-10,
                                              abs=1e-12)


def test_entangling_phase_from_state_phases():
    # Theta = (phi_gg + phi_ee - phi_ge - phi_eg) / 4 in both conventions.
    rng = np.random.default_rng(6)
    crystal = _crystal(3)
    train = _random_train(rng, events=15)
    for convention in (SYMMETRIC, ASYMMETRIC):
        phases = {s: oracle_compose(train, crystal, s, (1, 2), convention)[1]
                  for s in BASIS_STATES}
        combo = (phases["gg"] + phases["ee"] - phases["ge"]
                 - phases["eg"]) / 4.0
        theta = entangling_phase(train, crystal, (1, 2), convention)
        assert combo == pytest.approx(theta, rel=1e-10, abs=1e-14)


def test_time_origin_invariance():
    rng = np.random.default_rng(7)
    crystal = _crystal(2)
    train = _random_train(rng)
    shifted = train.shifted(3.7e-7)
    theta0 = entangling_phase(train, crystal)
    theta1 = entangling_phase(shifted, crystal)
    assert theta1 == pytest.approx(theta0, rel=1e-12)
    for state in BASIS_STATES:
        c0 = displacements(train, crystal, state)
        c1 = displacements(shifted, crystal, state)
        assert np.allclose(np.abs(c1), np.abs(c0), rtol=1e-12, atol=1e-14)


def test_two_ion_conditions_consistent():
    rng = np.random.default_rng(8)
    crystal = _crystal(2)
    train = _random_train(rng)
    eta = float(crystal.lamb_dicke[0])
    theta, c_c, c_r = two_ion_conditions(train, NU, eta)
    assert theta == pytest.approx(
        entangling_phase(train, crystal, convention=SYMMETRIC), rel=1e-10)
    s = mode_sums(train, crystal.mode_frequencies)
    assert abs(c_c) == pytest.approx(abs(s[0]), rel=1e-12)
    assert abs(c_r) == pytest.approx(abs(s[1]), rel=1e-12)


def test_trajectory_endpoint_equals_displacement():
    rng = np.random.default_rng(9)
    crystal = _crystal(2)
    train = _random_train(rng)
    t_end = train.times[-1] + 1e-9
    for mode in (1, 2):
        alpha = coherent_trajectory(train, crystal, "gg", mode, [t_end],
                                    frame="rotating", convention=SYMMETRIC)
        c = displacements(train, crystal, "gg", convention=SYMMETRIC)
        assert alpha[0] == pytest.approx(c[mode - 1], rel=1e-12, abs=1e-14)


def test_phase_is_twice_enclosed_area():
    # For a closed loop the accumulated phase equals twice the shoelace
    # area of the rotating-frame polygon, mode by mode.
    rng = np.random.default_rng(10)
    crystal = _crystal(2)
    train = _random_train(rng, events=14)
    eps = 1e-13
    for mode in (1, 2):
        vertices = np.concatenate((
            [0j], coherent_trajectory(train, crystal, "gg", mode,
                                      train.times + eps, frame="rotating")))
        closed = np.append(vertices, vertices[0])
        area = 0.5 * float(np.sum(np.imag(np.conj(closed[:-1]) * closed[1:])))
        g = float(state_factors(crystal, (1, 2), "gg", SYMMETRIC)[mode - 1])
        d = float(phase_sums(train, crystal.mode_frequencies[mode - 1:mode])[0])
        phase = 4.0 * float(crystal.lamb_dicke[mode - 1])**2 * g**2 * d
        assert phase == pytest.approx(2.0 * area, rel=1e-9, abs=1e-9)


def test_lab_frame_rotates():
    rng = np.random.default_rng(11)
    crystal = _crystal(2)
    train = _random_train(rng)
    grid = np.linspace(train.times[0], train.times[-1], 7)
    rot = coherent_trajectory(train, crystal, "ee", 1, grid, frame="rotating")
    lab = coherent_trajectory(train, crystal, "ee", 1, grid, frame="lab")
    nu = crystal.mode_frequencies[0]
    assert np.allclose(lab, rot * np.exp(-1j * nu * grid), atol=1e-14)
    with pytest.raises(ValueError):
        coherent_trajectory(train, crystal, "ee", 1, grid, frame="bogus")


def test_trajectory_points_scaling():
    alpha = np.array([1.0 + 2.0j])
    q, p = trajectory_points(alpha)
    assert q[0] == pytest.approx(math.sqrt(2.0))
    assert p[0] == pytest.approx(2.0 * math.sqrt(2.0))


def test_driven_displacement_shape_and_scale():
    rng = np.random.default_rng(12)
    crystal = _crystal(3)
    train = _random_train(rng)
    grid = np.linspace(0.0, 2e-7, 9)
    x = driven_displacement(train, crystal, "gg", grid)
    assert x.shape == (3, 9)
    # Kicked motion stays well below the micron ion spacing.
    assert np.max(np.abs(x)) < 1e-7
    assert np.max(np.abs(x)) > 0


def test_single_ion_phase_vanishes_for_restored_motion():
    crystal = _crystal(2)
    train = PulseTrain(np.array([0.0]), np.array([0.0]), math.inf)
    phases = single_ion_phase(train, crystal, "ee", [1.0 + 1.0j, 0.5j])
    assert np.allclose(phases, 0.0)


def test_evaluate_gate_structure():
    rng = np.random.default_rng(13)
    crystal = _crystal(2)
    train = _random_train(rng)
    result = evaluate_gate(train, crystal, convention=SYMMETRIC,
                           thermal=ThermalState.uniform(0.1, 2))
    assert -1.0 <= result.fidelity <= 1.0
    assert result.infidelity == pytest.approx(1.0 - result.fidelity)
    assert result.relative_phase_offset == pytest.approx(
        2.0 * result.entangling_phase - math.pi / 2.0)
    payload = result.to_json_dict()
    assert set(payload["mode_displacement_abs"]) == set(BASIS_STATES)
