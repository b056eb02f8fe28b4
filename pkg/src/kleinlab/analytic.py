"""Closed-form scattering off a Dirac step and a square barrier."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .core import (
    NATURAL,
    Barrier,
    DomainError,
    Regime,
    Step,
    UnitSystem,
    classify,
    region_momentum,
)


@dataclass(frozen=True)
class ScatteringResult:
    R: float
    T: float
    kappa: Optional[float]
    k: float
    p: float
    regime: Regime
    unitarity_residual: float

    @classmethod
    def build(cls, R, T, kappa, k, p, regime):
        return cls(R, T, kappa, k, p, regime, abs(R + T - 1.0))


def _check_klein_zone(E, V, units, what="kappa defined only in Klein zone"):
    m, g = units.m, units.guard
    if not (E > m + g and E < V - m - g):
        raise DomainError(f"{what} (E={E!r}, V={V!r}, m={m!r})")


def _kappa_squared(E, V, m):
    # Signed: positive when both sides propagate, negative under evanescence.
    return ((V - E + m) * (E + m)) / ((V - E - m) * (E - m))


def kinematic_kappa(E: float, V: float, units: UnitSystem = NATURAL) -> float:
    """Kinematic factor for an electron of energy E hitting a step of height V.

    Only defined in the Klein zone ``m < E < V - m``, where it is real and
    greater than one.
    """
    _check_klein_zone(E, V, units)
    m = units.m
    return math.sqrt(((V - E + m) / (V - E - m)) * ((E + m) / (E - m)))


def step_rt(kappa: float) -> tuple:
    """(R_S, T_S) of a step with kinematic factor ``kappa``."""
    return ((1.0 - kappa) / (1.0 + kappa)) ** 2, 4.0 * kappa / (1.0 + kappa) ** 2


def averaged_rt(kappa: float) -> tuple:
    """(R_inf, T_inf) for kinematic factor ``kappa``."""
    k2 = kappa * kappa
    d = 8.0 * k2 + (1.0 - k2) ** 2
    return (1.0 - k2) ** 2 / d, 8.0 * k2 / d


def step_coefficients(E: float, step: Step, units: UnitSystem = NATURAL) -> ScatteringResult:
    V = step.V
    if not V > 2 * units.m:
        raise DomainError(f"step height must exceed 2m for Klein tunnelling (V={V!r})")
    kappa = kinematic_kappa(E, V, units)
    m = units.m
    R, T = step_rt(kappa)
    return ScatteringResult.build(
        R, T, kappa, math.sqrt(E * E - m * m), region_momentum(E, V, units), Regime.KLEIN
    )


def _barrier_from_kappa2(kappa2: float, phase: float, evanescent: bool):
    """R, T from the signed squared kinematic factor and the phase 2pa."""
    if evanescent:
        c = (1.0 - kappa2) ** 2 / (4.0 * -kappa2)
        if phase > 350.0:
            # sinh^2 overflows; T ~ 1 / (c sinh^2) ~ 4 exp(-2 phase) / c
            T = 4.0 * math.exp(-2.0 * phase) / c
            return 1.0 - T, T
        X = c * math.sinh(phase) ** 2
    else:
        X = (1.0 - kappa2) ** 2 / (4.0 * kappa2) * math.sin(phase) ** 2
    return X / (1.0 + X), 1.0 / (1.0 + X)


def barrier_coefficients(E: float, barrier: Barrier, units: UnitSystem = NATURAL) -> ScatteringResult:
    """Reflection and transmission for the square barrier of height V, |x| < a.

    Valid for every regime once E > m.  Below the Klein zone boundary the
    interior momentum turns imaginary and the formula is continued with
    sin -> i sinh, kappa^2 -> -|kappa|^2.
    """
    m, V, a = units.m, barrier.V, barrier.a
    if E <= m + units.guard:
        raise DomainError(f"incident energy below gap (E={E!r}, m={m!r})")
    regime = classify(E, V, units)
    kappa2 = _kappa_squared(E, V, m)
    p = region_momentum(E, V, units)
    R, T = _barrier_from_kappa2(kappa2, 2.0 * p * a, regime is Regime.EVANESCENT)
    return ScatteringResult.build(R, T, math.sqrt(abs(kappa2)), math.sqrt(E * E - m * m), p, regime)


def resonance_energies(barrier: Barrier, units: UnitSystem = NATURAL) -> list:
    """Klein-zone energies at which the barrier is perfectly transparent.

    Returns ``[(N, E_N), ...]`` with 2 p a = N pi, in order of increasing N
    (decreasing energy).
    """
    m, V, a = units.m, barrier.V, barrier.a
    out = []
    if not V > 2 * m:
        return out
    N = 1
    while True:
        E_N = V - math.sqrt(m * m + (N * math.pi / (2.0 * a)) ** 2)
        if not E_N > m + units.guard:
            break
        if E_N < V - m - units.guard:
            out.append((N, E_N))
        N += 1
    return out


def averaged_coefficients(E: float, V: float, units: UnitSystem = NATURAL) -> tuple:
    """Wide-barrier limits (R_inf, T_inf) with sin^2(2pa) replaced by 1/2."""
    return averaged_rt(kinematic_kappa(E, V, units))


def mean_transmission(E: float, V: float, units: UnitSystem = NATURAL) -> float:
    """Exact mean of the barrier T over a full period of the phase 2pa.

    Equals 2 kappa / (1 + kappa^2).  This is the incoherent (ray-optics)
    transmission of two identical interfaces and differs from T_inf of
    :func:`averaged_coefficients` except at kappa = 1.
    """
    kappa = kinematic_kappa(E, V, units)
    return 2.0 * kappa / (1.0 + kappa * kappa)
