import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kleinlab.core import DomainError
from kleinlab.coulomb import (
    FINE_STRUCTURE,
    CoulombInput,
    classical_turning_point,
    rho_nonrelativistic,
    rho_relativistic,
)


def test_nonrelativistic_example():
    inp = CoulombInput(Z=0.5 / FINE_STRUCTURE, E=10.0, p=1.0)
    assert rho_nonrelativistic(inp) == pytest.approx(float(mpmath.exp(-10 * mpmath.pi)), rel=1e-12)
    assert rho_nonrelativistic(inp) == pytest.approx(2.27e-14, rel=2e-3)
    assert rho_nonrelativistic(CoulombInput(Z=1e-9, E=1.0, p=1.0)) == pytest.approx(1.0)
    assert rho_nonrelativistic(CoulombInput(Z=1.0, alpha=0.5, E=1.0, p=1e-3)) < 1e-100


def test_relativistic_example():
    inp = CoulombInput(Z=1 / FINE_STRUCTURE)
    assert inp.z_alpha == pytest.approx(1.0)
    assert rho_relativistic(inp) == pytest.approx(1.8674e-3, abs=1e-7)
    assert rho_relativistic(CoulombInput(Z=10.0, f=0.0)) == 0.0
    za = 0.37
    r1 = rho_relativistic(CoulombInput(Z=za / FINE_STRUCTURE))
    r2 = rho_relativistic(CoulombInput(Z=2 * za / FINE_STRUCTURE))
    assert r2 / r1 == pytest.approx(math.exp(-2 * math.pi * za), rel=1e-12)


def test_input_validation():
    with pytest.raises(DomainError):
        CoulombInput(Z=0.0)
    with pytest.raises(DomainError):
        CoulombInput(Z=1.0, alpha=1.0)
    with pytest.raises(DomainError):
        rho_nonrelativistic(CoulombInput(Z=1.0, p=0.0))


def test_turning_point():
    assert classical_turning_point(1 / FINE_STRUCTURE, FINE_STRUCTURE, 1.0) == pytest.approx(1.0)
    assert classical_turning_point(92, 1 / 137.036, 2.0) == pytest.approx(0.33565, abs=5e-5)
    assert classical_turning_point(92, FINE_STRUCTURE, 4.0) == pytest.approx(
        classical_turning_point(92, FINE_STRUCTURE, 2.0) / 2)
    with pytest.raises(DomainError):
        classical_turning_point(92, FINE_STRUCTURE, 0.0)


@given(st.floats(1e-3, 300.0), st.floats(1e-3, 300.0), st.floats(0.0, 1.0))
def test_relativistic_ratio_monotone_and_bounded(Z1, Z2, f):
    lo, hi = sorted((Z1, Z2))
    r_lo = rho_relativistic(CoulombInput(lo, f=f))
    r_hi = rho_relativistic(CoulombInput(hi, f=f))
    assert r_hi <= r_lo
    assert 0.0 <= r_hi <= f


@given(st.floats(0.01, 100.0), st.floats(0.01, 100.0), st.floats(1.0, 100.0))
def test_nonrelativistic_ratio_monotone_in_E_over_p(p1, p2, Z):
    lo, hi = sorted((p1, p2))
    fast = rho_nonrelativistic(CoulombInput(Z, E=1.0, p=hi))
    slow = rho_nonrelativistic(CoulombInput(Z, E=1.0, p=lo))
    assert 0.0 <= slow <= fast <= 1.0
