import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kleinlab.core import DomainError
from kleinlab.spectrum import delta_well_states, ramp_spectrum, suggested_steps
from kleinlab.supercritical import (
    ChargeLedger,
    RegimeWarning,
    count_positrons,
    count_supercritical,
    critical_potential,
    delta_well_charges,
    emission_spectrum,
    int_part,
    ledger_from_flow,
)


def test_critical_potential_examples():
    assert critical_potential(1, math.pi / (2 * math.sqrt(3))) == pytest.approx(3.0, rel=1e-15)
    assert critical_potential(1, 1e8) == pytest.approx(2.0, rel=1e-12)
    Vs = [critical_potential(N, 2.0) for N in range(1, 20)]
    assert all(x < y for x, y in zip(Vs, Vs[1:]))
    assert all(V > 2.0 for V in Vs)
    with pytest.raises(DomainError):
        critical_potential(0, 1.0)


def test_count_supercritical_examples():
    assert count_supercritical(3.0, 5.0) == 5
    assert count_supercritical(2.0, 5.0) == 0
    assert count_supercritical(1.5, 50.0) == 0


@given(st.floats(0.1, 10.0), st.floats(0.1, 20.0))
def test_count_equals_number_of_critical_depths_passed(V, a):
    n = count_supercritical(V, a)
    assert critical_potential(n + 1, a) > V * (1 - 1e-12)
    if n:
        assert critical_potential(n, a) <= V * (1 + 1e-12)


def test_count_positrons_examples():
    assert count_positrons(4.0, 5.0) == (12, 13)
    assert count_positrons(1.0, 5.0) == (0, 0)
    assert count_positrons(1.01, 0.5) == (0, 1)


@given(st.floats(0.5, 10.0), st.floats(0.1, 20.0), st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_counts_are_monotone(V, a, dV, da):
    assert count_supercritical(V + dV, a + da) >= count_supercritical(V, a)
    assert count_positrons(V + dV, a + da)[0] >= count_positrons(V, a)[0]


def test_int_part_floors_and_flags():
    assert int_part(2.9999) == (2, False)
    assert int_part(3.0) == (3, True)
    assert int_part(-0.5)[0] == -1


def _delta_event_count(lam):
    """Count E = 0 and E = -m crossings as lam ramps from 0, using the
    delta-well levels themselves."""
    qp = qs = 0
    j = 0
    while (j + 0.5) * math.pi <= lam:
        qp += 1
        j += 1
    j = 1
    while j * math.pi <= lam:
        qs += 1
        j += 1
    return qp, qs


@pytest.mark.parametrize("lam", [0.1, 1.0, 1.6, 3.0, 3.5, 5.0, 7.9, 12.0])
def test_delta_well_charges(lam):
    assert delta_well_charges(lam) == _delta_event_count(lam)
    lv = delta_well_states(lam)
    # the current bound level sits below zero exactly when a half-crossing has happened
    qp, qs = delta_well_charges(lam)
    assert (lv.E_bound <= 0) == (qp > qs)


def test_ledger_invariants():
    ChargeLedger.from_particles(5, 3)
    with pytest.raises(ValueError):
        ChargeLedger(3, 1, -2)
    with pytest.raises(ValueError):
        ChargeLedger.from_particles(2, 3)


def test_ledger_along_ramp():
    flow = ramp_spectrum(5.0, suggested_steps(5.0, 2.0), 2.0)
    for V in flow.depths[::7]:
        led = ledger_from_flow(flow, float(V))
        assert led.Q_0 == -led.Q_p
        assert led.Q_S == count_supercritical(float(V), 2.0)


def test_emission_example():
    spec = emission_spectrum(0.1, 100.0)
    assert spec.Q_S_estimate == pytest.approx(12.73, abs=5e-3)
    assert spec.tau == pytest.approx(6366.2, abs=0.05)
    assert spec.tau_bar == pytest.approx(1000.0)
    assert spec.p_bar == 0.1
    assert spec.Q_S_exact == 29 == len(spec.entries)
    N, p1, E1 = spec.entries[0]
    assert N == 1 and p1 == pytest.approx(math.pi / 200)
    for N, p, E in spec.entries:
        assert p == pytest.approx(N * math.pi / 200)
        assert abs(E) > 1.0
        assert E == pytest.approx(2.1 - math.sqrt(p * p + 1))


def test_emission_tau_scales_with_a_squared():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        assert emission_spectrum(0.05, 80.0).tau / emission_spectrum(0.05, 40.0).tau == pytest.approx(4.0)


def test_emission_guards():
    with pytest.raises(DomainError, match="subcritical"):
        emission_spectrum(0.0, 10.0)
    with pytest.warns(RegimeWarning):
        emission_spectrum(0.5, 100.0)
    with pytest.warns(RegimeWarning):
        emission_spectrum(0.1, 5.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        emission_spectrum(0.1, 100.0)
