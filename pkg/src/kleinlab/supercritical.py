"""Closed-form positron counting, critical depths and emission estimates."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .core import NATURAL, DomainError, UnitSystem

DELTA_GUARD = 0.2


class RegimeWarning(UserWarning):
    """An estimate is being used outside the regime where it is meaningful."""


def int_part(x: float, rel: float = 1e-12) -> tuple:
    """Integer part (floor) of x, and whether x sits on an integer within ``rel``."""
    on_boundary = abs(x - round(x)) <= rel * max(1.0, abs(x))
    return int(math.floor(x)), on_boundary


@dataclass(frozen=True)
class ChargeLedger:
    Q_p: int
    Q_S: int
    Q_0: int

    def __post_init__(self):
        if self.Q_0 + self.Q_p != 0:
            raise ValueError(f"charge not conserved: Q_0={self.Q_0}, Q_p={self.Q_p}")
        if self.Q_S > self.Q_p:
            raise ValueError(f"Q_S={self.Q_S} exceeds Q_p={self.Q_p}")

    @classmethod
    def from_particles(cls, Q_p: int, Q_S: int) -> "ChargeLedger":
        return cls(Q_p, Q_S, -Q_p)


def ledger_from_flow(flow, V: float) -> ChargeLedger:
    qp, qs = flow.counts_at(V)
    return ChargeLedger.from_particles(qp, qs)


def critical_potential(N: int, a: float, units: UnitSystem = NATURAL) -> float:
    """Depth at which the N-th level reaches E = -m."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N!r}")
    if not a > 0:
        raise DomainError(f"half-width must be positive, got {a!r}")
    m = units.m
    return m + math.sqrt(m * m + (N * math.pi / (2.0 * a)) ** 2)


def supercritical_argument(V, a, units=NATURAL):
    m = units.m
    if V <= 2 * m:
        return 0.0
    return (2.0 * a / math.pi) * math.sqrt(V * V - 2.0 * m * V)


def count_supercritical(V: float, a: float, units: UnitSystem = NATURAL) -> int:
    """Number of levels that have dived into the lower continuum at depth V."""
    return int_part(supercritical_argument(V, a, units))[0]


def positron_argument(V, a, units=NATURAL):
    m = units.m
    if V <= m:
        return 0.0
    return (2.0 * a / math.pi) * math.sqrt(V * V - m * m)


def count_positrons(V: float, a: float, units: UnitSystem = NATURAL) -> tuple:
    """Bracket (lower, upper) on the number of E = 0 crossings at depth V."""
    if V <= units.m:
        return 0, 0
    n = int_part(positron_argument(V, a, units))[0]
    return n, n + 1


def delta_well_charges(lam: float) -> tuple:
    """(Q_p, Q_S) for the delta well of strength ``lam``."""
    if not lam >= 0:
        raise DomainError(f"delta strength must be non-negative, got {lam!r}")
    return int_part(lam / math.pi + 0.5)[0], int_part(lam / math.pi)[0]


@dataclass(frozen=True)
class EmissionSpectrum:
    Delta: float
    a: float
    entries: tuple  # (N, p_N, |E_N|)
    Q_S_exact: int
    Q_S_estimate: float
    tau: float
    tau_bar: float
    p_bar: float


def emission_spectrum(Delta: float, a: float, units: UnitSystem = NATURAL,
                      delta_guard: float = DELTA_GUARD) -> EmissionSpectrum:
    """Positrons emitted by a well of depth 2m + Delta just past criticality.

    ``entries`` lists every supercritical level with its well momentum
    p_N = N pi / 2a and emitted energy |E_N| = 2m + Delta - sqrt(p_N^2 + m^2).
    The order-of-magnitude estimates ``Q_S_estimate`` (4 Delta a / pi),
    ``tau`` (2 m a^2 / pi, escape time of the slowest positron), ``tau_bar``
    (m a / Delta, plateau duration) and ``p_bar`` (Delta) are reported next to
    the exact count without being reconciled with it.
    """
    m = units.m
    if not Delta > 0:
        raise DomainError(f"subcritical: Delta must be positive, got {Delta!r}")
    if not a > 0:
        raise DomainError(f"half-width must be positive, got {a!r}")
    if Delta >= delta_guard * m:
        warnings.warn(f"Delta={Delta:g} is not small compared with m; estimates unreliable",
                      RegimeWarning, stacklevel=2)
    if a * Delta < 1:
        warnings.warn(f"a*Delta={a * Delta:g} < 1; emission estimates not meaningful",
                      RegimeWarning, stacklevel=2)
    V = 2 * m + Delta
    n_exact = count_supercritical(V, a, units)
    entries = []
    for N in range(1, n_exact + 1):
        p_N = N * math.pi / (2.0 * a)
        entries.append((N, p_N, V - math.sqrt(p_N * p_N + m * m)))
    return EmissionSpectrum(
        Delta=Delta,
        a=a,
        entries=tuple(entries),
        Q_S_exact=n_exact,
        Q_S_estimate=4.0 * Delta * a / math.pi,
        tau=2.0 * m * a * a / math.pi,
        tau_bar=m * a / Delta,
        p_bar=Delta,
    )
