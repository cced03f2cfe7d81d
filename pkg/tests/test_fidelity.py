import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastgates.constants import ATOMIC_MASS
from fastgates.crystal import TrapConfig, build_crystal
from fastgates.fidelity import (ThermalState, fidelity_2, fidelity_3,
                                fidelity_general, fidelity_monte_carlo,
                                thermal_expectation)

_BASIS = ("gg", "ge", "eg", "ee")
_SIGNS = {"gg": (-1, -1), "ge": (-1, 1), "eg": (1, -1), "ee": (1, 1)}


def _two_ion_model(rng):
    """Random displacement/phase structure of a real two-ion gate."""
    eta = rng.uniform(0.05, 0.3)
    s_com = rng.normal() + 1j * rng.normal()
    s_str = rng.normal() + 1j * rng.normal()
    theta = rng.uniform(0.0, math.pi)
    root2 = math.sqrt(2.0)
    disp = {}
    for state in _BASIS:
        e1, e2 = _SIGNS[state]
        g_com = (e1 + e2) / root2
        g_str = (e1 - e2) / root2
        disp[state] = np.array([-2j * eta * g_com * s_com,
                                -2j * eta * g_str * s_str])
    delta = {s: _SIGNS[s][0] * _SIGNS[s][1] * (theta - math.pi / 4.0)
             for s in _BASIS}
    c1 = disp["ee"][0]
    c2 = disp["ge"][1]
    phi_prime = 2.0 * theta - math.pi / 2.0
    return disp, delta, c1, c2, phi_prime


def _three_ion_couplings():
    crystal = build_crystal(TrapConfig(
        2.0 * math.pi * 1.2e6, 40.0 * ATOMIC_MASS,
        2.0 * math.pi / 393e-9, 3))
    return crystal.mode_vectors


def _three_ion_model(rng, b):
    c = rng.normal(size=3) + 1j * rng.normal(size=3)
    theta = rng.uniform(0.0, math.pi)
    disp = {}
    for state in _BASIS:
        e1, e2 = _SIGNS[state]
        g = b[0, :] * e1 + b[1, :] * e2
        disp[state] = -1j * g * c
    delta = {s: _SIGNS[s][0] * _SIGNS[s][1] * (theta - math.pi / 4.0)
             for s in _BASIS}
    return disp, delta, c, theta


def test_general_matches_two_ion_closed_form():
    rng = np.random.default_rng(21)
    for _ in range(1000):
        disp, delta, c1, c2, phi_prime = _two_ion_model(rng)
        nbar = rng.uniform(0.0, 5.0, size=2)
        expected = fidelity_2(c1, c2, phi_prime, nbar)
        assert fidelity_general(disp, delta, nbar) == pytest.approx(
            expected, abs=1e-12)


def test_general_matches_three_ion_closed_form():
    rng = np.random.default_rng(22)
    b = _three_ion_couplings()
    for _ in range(1000):
        disp, delta, c, theta = _three_ion_model(rng, b)
        nbar = rng.uniform(0.0, 5.0, size=3)
        expected = fidelity_3(c[0], c[1], c[2], theta, nbar)
        assert fidelity_general(disp, delta, nbar) == pytest.approx(
            expected, abs=1e-12)


def test_general_matches_monte_carlo():
    rng = np.random.default_rng(23)
    for _ in range(3):
        disp = {s: rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.3
                for s in _BASIS}
        delta = {s: rng.normal() * 0.2 for s in _BASIS}
        nbar = rng.uniform(0.0, 2.0, size=2)
        exact = fidelity_general(disp, delta, nbar)
        estimate, stderr = fidelity_monte_carlo(disp, delta, nbar,
                                                1_000_000, rng)
        assert abs(estimate - exact) < 3.0 * stderr


def test_ideal_gate_has_unit_fidelity():
    disp = {s: np.zeros(2, dtype=complex) for s in _BASIS}
    delta = {s: 0.0 for s in _BASIS}
    assert fidelity_general(disp, delta, 0.1) == pytest.approx(1.0, abs=1e-15)


def test_closed_forms_at_ideal_point():
    assert fidelity_2(0j, 0j, 0.0, 0.0) == pytest.approx(1.0)
    assert fidelity_3(0j, 0j, 0j, math.pi / 4.0, 0.0) == pytest.approx(1.0)


@settings(max_examples=100, deadline=None)
@given(a=st.floats(0.0, 2.0), b=st.floats(0.0, 2.0),
       phi=st.floats(-math.pi, math.pi), nbar=st.floats(0.0, 10.0))
def test_two_ion_fidelity_bounds(a, b, phi, nbar):
    value = fidelity_2(complex(a), complex(0, b), phi, nbar)
    assert 0.0 <= value <= 1.0 + 1e-12


@settings(max_examples=50, deadline=None)
@given(a=st.floats(0.01, 1.0), phi=st.floats(-0.5, 0.5),
       n1=st.floats(0.0, 5.0), step=st.floats(0.1, 5.0))
def test_fidelity_decreases_with_occupation(a, phi, n1, step):
    low = fidelity_2(complex(a), complex(a / 2), phi, n1)
    high = fidelity_2(complex(a), complex(a / 2), phi, n1 + step)
    assert high <= low + 1e-12


def test_thermal_expectation():
    assert thermal_expectation(0j, 3.0) == pytest.approx(1.0)
    assert thermal_expectation(1.0 + 0j, 0.0) == pytest.approx(math.exp(-0.5))
    with pytest.raises(ValueError):
        thermal_expectation(1j, -0.1)


def test_thermal_state_validation():
    state = ThermalState.uniform(0.1, 4)
    assert state.mode_count == 4
    with pytest.raises(ValueError):
        ThermalState(np.array([-0.5]))


def test_general_rejects_inconsistent_modes():
    disp = {s: np.zeros(2, dtype=complex) for s in _BASIS}
    disp["ee"] = np.zeros(3, dtype=complex)
    with pytest.raises(ValueError):
        fidelity_general(disp, {s: 0.0 for s in _BASIS}, 0.0)
