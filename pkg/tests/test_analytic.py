import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kleinlab.analytic import (
    _kappa_squared,
    averaged_coefficients,
    averaged_rt,
    barrier_coefficients,
    kinematic_kappa,
    mean_transmission,
    resonance_energies,
    step_coefficients,
    step_rt,
)
from kleinlab.core import Barrier, DomainError, Regime, Step, UnitSystem
from kleinlab.solver import solve_scattering


def test_kappa_examples():
    assert kinematic_kappa(2.0, 4.0) == pytest.approx(3.0, rel=1e-15)
    assert kinematic_kappa(1.5, 4.0) == pytest.approx(math.sqrt(35 / 3), rel=1e-15)
    assert kinematic_kappa(1.5, 4.0) == pytest.approx(3.41565, abs=1e-5)
    assert kinematic_kappa(1 + 1e-7, 4.0) > 1e3
    assert kinematic_kappa(3 - 1e-7, 4.0) > 1e3


@pytest.mark.parametrize("E,V", [(0.5, 4.0), (3.5, 4.0), (2.0, 1.5), (1.0, 4.0)])
def test_kappa_outside_zone(E, V):
    with pytest.raises(DomainError, match="Klein zone"):
        kinematic_kappa(E, V)


def test_step_examples():
    r = step_coefficients(2.0, Step(4.0))
    assert (r.kappa, r.R, r.T) == pytest.approx((3.0, 0.25, 0.75), rel=1e-15)
    assert r.regime is Regime.KLEIN
    assert step_rt(1.0) == (0.0, 1.0)
    assert step_coefficients(1 + 1e-8, Step(4.0)).T < 1e-3
    with pytest.raises(DomainError):
        step_coefficients(1.2, Step(2.0))


def test_step_matches_solver():
    for E, V in [(2.0, 4.0), (1.5, 4.0), (5.0, 20.0)]:
        assert solve_scattering(Step(V), E).result.T == pytest.approx(
            step_coefficients(E, Step(V)).T, rel=1e-12)


def test_step_has_nonzero_limit():
    E = 2.0
    k_inf = math.sqrt((E + 1) / (E - 1))
    limit = 4 * k_inf / (1 + k_inf) ** 2
    T = [step_coefficients(E, Step(V)).T for V in (1e2, 1e3, 1e4, 1e6)]
    assert abs(T[-1] - limit) < 1e-5
    assert all(abs(t - limit) > abs(u - limit) for t, u in zip(T, T[1:]))


def test_barrier_examples():
    a = math.pi / (4 * math.sqrt(3))  # sin^2(2pa) = 1 at kappa = 3
    r = barrier_coefficients(2.0, Barrier(4.0, a))
    assert r.T == pytest.approx(0.36, rel=1e-12)
    a_res = math.pi / (2 * math.sqrt(3))
    assert barrier_coefficients(2.0, Barrier(4.0, a_res)).T == pytest.approx(1.0, abs=1e-12)


def test_evanescent_barrier_decays_with_width():
    Ts = [barrier_coefficients(2.0, Barrier(2.5, a)).T for a in (1.0, 2.0, 5.0, 10.0)]
    assert Ts[2] < 1e-3
    assert all(x > y for x, y in zip(Ts, Ts[1:]))
    r = barrier_coefficients(2.0, Barrier(2.5, 5.0))
    assert r.regime is Regime.EVANESCENT
    assert r.T == pytest.approx(solve_scattering(Barrier(2.5, 5.0), 2.0).result.T, rel=1e-10)


def test_very_thick_evanescent_barrier_is_finite():
    r = barrier_coefficients(2.0, Barrier(2.5, 500.0))
    assert 0.0 <= r.T < 1e-300 or r.T == 0.0
    assert r.R == pytest.approx(1.0)


def test_barrier_rejects_boundaries_and_gap():
    with pytest.raises(DomainError):
        barrier_coefficients(3.0, Barrier(4.0, 1.0))
    with pytest.raises(DomainError):
        barrier_coefficients(0.9, Barrier(4.0, 1.0))


@st.composite
def barrier_points(draw):
    V = draw(st.floats(-5.0, 30.0))
    E = draw(st.floats(1.0001, 30.0))
    assume(abs(abs(V - E) - 1.0) > 1e-6)
    a = draw(st.floats(0.01, 20.0))
    return E, V, a


@given(barrier_points())
def test_barrier_unitarity(pt):
    E, V, a = pt
    r = barrier_coefficients(E, Barrier(V, a))
    assert 0.0 <= r.T <= 1.0
    assert r.unitarity_residual < 1e-12


@given(st.floats(2.05, 30.0), st.floats(0.05, 1.0))
def test_step_unitarity(V, frac):
    E = 1.0 + frac * (V - 2.0)
    assume(1.0 + 1e-6 < E < V - 1.0 - 1e-6)
    r = step_coefficients(E, Step(V))
    assert r.unitarity_residual < 1e-12


def test_resonance_examples():
    res = resonance_energies(Barrier(4.0, 1.0))
    assert res[0][0] == 1
    assert res[0][1] == pytest.approx(4.0 - math.sqrt(1 + (math.pi / 2) ** 2), rel=1e-15)
    assert resonance_energies(Barrier(2.05, 1.0)) == []
    assert resonance_energies(Barrier(1.5, 1.0)) == []
    for N, E in res:
        assert barrier_coefficients(E, Barrier(4.0, 1.0)).T == pytest.approx(1.0, abs=1e-12)


def test_resonances_are_the_scan_maxima():
    # Oracle: dense scan of the solver transmission; every local maximum is a
    # resonance and every resonance is a local maximum.
    V, a = 6.0, 3.0
    Es = np.linspace(1.0005, V - 1.0005, 20001)
    T = np.array([solve_scattering(Barrier(V, a), E).result.T for E in Es])
    peaks = Es[1:-1][(T[1:-1] > T[:-2]) & (T[1:-1] > T[2:])]
    res = sorted(E for _, E in resonance_energies(Barrier(V, a)))
    assert len(peaks) == len(res)
    spacing = Es[1] - Es[0]
    assert np.allclose(peaks, res, atol=spacing)
    for E in res:
        h = 1e-5
        T0 = barrier_coefficients(E, Barrier(V, a)).T
        assert T0 >= barrier_coefficients(E - h, Barrier(V, a)).T
        assert T0 >= barrier_coefficients(E + h, Barrier(V, a)).T


def test_averaged_examples():
    R, T = averaged_coefficients(2.0, 4.0)
    assert T == pytest.approx(9 / 17, rel=1e-15)
    assert R + T == pytest.approx(1.0, abs=1e-15)
    assert averaged_rt(1.0) == (0.0, 1.0)


def test_averaged_is_not_the_step_value():
    _, T_inf = averaged_coefficients(2.0, 4.0)
    assert T_inf != pytest.approx(step_coefficients(2.0, Step(4.0)).T, rel=1e-3)


@given(st.floats(2.1, 20.0), st.floats(0.02, 0.98))
def test_mean_transmission_is_the_phase_average(V, frac):
    E = 1.0 + frac * (V - 2.0)
    kappa2 = _kappa_squared(E, V, 1.0)
    phases = np.linspace(0.0, 2 * np.pi, 4097)[:-1]
    X = (1 - kappa2) ** 2 / (4 * kappa2) * np.sin(phases) ** 2
    assert np.mean(1 / (1 + X)) == pytest.approx(mean_transmission(E, V), rel=1e-10)


def test_mass_scaling():
    units = UnitSystem(2.0)
    r1 = barrier_coefficients(2.0, Barrier(4.0, 1.0))
    r2 = barrier_coefficients(4.0, Barrier(8.0, 0.5), units)
    assert r2.T == pytest.approx(r1.T, rel=1e-13)
