"""Domain types shared by every other module.

Natural units (hbar = c = 1) are used throughout.  Energies and momenta are
measured in units of the fermion mass ``m`` and lengths in units of ``1/m``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

# Relative half-width of the band that is excluded around E = m and |V - E| = m.
GUARD = 1e-9


class DomainError(ValueError):
    """An input lies outside the domain where an operation is defined."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its stated accuracy."""


@dataclass(frozen=True)
class UnitSystem:
    m: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m!r}")

    @property
    def guard(self) -> float:
        return GUARD * self.m


NATURAL = UnitSystem()


# ---------------------------------------------------------------------------
# Potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Piecewise:
    """Piecewise-constant profile.

    ``regions`` is an ordered tuple of ``(x_left, x_right, V)`` triples; the
    potential is ``V_left`` to the left of the first region and ``V_right``
    to the right of the last.  With no regions the single interface sits at
    ``origin``.
    """

    regions: tuple = ()
    V_left: float = 0.0
    V_right: float = 0.0
    origin: float = 0.0

    def __post_init__(self):
        regions = tuple((float(x0), float(x1), float(v)) for x0, x1, v in self.regions)
        object.__setattr__(self, "regions", regions)
        for x0, x1, _ in regions:
            if not x1 >= x0:
                raise ValueError(f"region [{x0}, {x1}] has negative width")
        for (_, right, _), (left, _, _) in zip(regions, regions[1:]):
            if left != right:
                raise ValueError(f"regions not contiguous at x={right} / x={left}")

    @property
    def edges(self) -> tuple:
        if not self.regions:
            return (self.origin,)
        return tuple(r[0] for r in self.regions) + (self.regions[-1][1],)

    def level_at(self, x: float) -> float:
        edges = self.edges
        if x < edges[0]:
            return self.V_left
        if x >= edges[-1]:
            return self.V_right
        for x0, x1, v in self.regions:
            if x0 <= x < x1:
                return v
        return self.V_right

    def profile(self) -> "Piecewise":
        return self


@dataclass(frozen=True)
class Step:
    """V(x) = V for x > 0, zero for x < 0."""

    V: float

    def profile(self) -> Piecewise:
        return Piecewise((), 0.0, self.V)


@dataclass(frozen=True)
class Barrier:
    """V(x) = V for |x| < a, zero outside."""

    V: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"half-width must be positive, got {self.a!r}")

    def profile(self) -> Piecewise:
        return Piecewise(((-self.a, self.a, self.V),), 0.0, 0.0)


@dataclass(frozen=True)
class Well:
    """V(x) = -V for |x| < a.  ``V`` is the (positive) depth."""

    V: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"half-width must be positive, got {self.a!r}")

    def profile(self) -> Piecewise:
        return Piecewise(((-self.a, self.a, -self.V),), 0.0, 0.0)


@dataclass(frozen=True)
class DeltaWell:
    """V(x) = -lam * delta(x); the a -> 0 limit of a well with lam = 2 V a."""

    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"strength must be non-negative, got {self.lam!r}")

    def profile(self) -> Piecewise:
        raise DomainError("a delta well has no piecewise-constant profile; use a narrow Well")


Potential = Union[Step, Barrier, Well, DeltaWell, Piecewise]


# ---------------------------------------------------------------------------
# Kinematics
# ---------------------------------------------------------------------------

class Regime(enum.Enum):
    KLEIN = "propagating-Klein"
    EVANESCENT = "evanescent"
    ORDINARY = "propagating-ordinary"


@dataclass(frozen=True)
class KleinZone:
    E_min: float
    E_max: float

    @classmethod
    def for_level(cls, V: float, units: UnitSystem = NATURAL) -> "KleinZone":
        return cls(units.m, V - units.m)

    @property
    def empty(self) -> bool:
        return not self.E_max > self.E_min

    def __contains__(self, E: float) -> bool:
        return self.E_min < E < self.E_max


@dataclass(frozen=True)
class Momenta:
    """Asymptotic and interior momenta at one energy.

    ``p`` is always a non-negative magnitude.  In the Klein regime the
    momentum label of the transmitted wave is negative (``p_sign = -1``)
    while its group velocity points along +x (``group_velocity_sign = +1``).
    In the evanescent regime ``p`` is the decay constant.
    """

    k: float
    p: float
    regime: Regime
    p_sign: int = field(default=1)
    group_velocity_sign: int = field(default=1)


def classify(E: float, V: float, units: UnitSystem = NATURAL) -> Regime:
    """Regime of a region at level ``V`` for energy ``E``.

    Raises DomainError inside the guard band around |V - E| = m, where the
    kinematic factor diverges.
    """
    m = units.m
    d = abs(V - E)
    if abs(d - m) <= units.guard:
        raise DomainError(f"regime boundary |V-E|=m (E={E!r}, V={V!r})")
    if d < m:
        return Regime.EVANESCENT
    return Regime.KLEIN if E < V else Regime.ORDINARY


def region_momentum(E: float, V: float, units: UnitSystem = NATURAL) -> float:
    """Magnitude of the momentum (or decay constant) in a region at level V."""
    return math.sqrt(abs((V - E) ** 2 - units.m ** 2))


def momenta_for(E: float, potential_level: float, units: UnitSystem = NATURAL) -> Momenta:
    m = units.m
    if E <= m + units.guard:
        raise DomainError(f"incident energy below gap (E={E!r}, m={m!r})")
    regime = classify(E, potential_level, units)
    k = math.sqrt(E * E - m * m)
    p = region_momentum(E, potential_level, units)
    if regime is Regime.KLEIN:
        return Momenta(k, p, regime, p_sign=-1, group_velocity_sign=1)
    if regime is Regime.EVANESCENT:
        return Momenta(k, p, regime, p_sign=0, group_velocity_sign=1)
    return Momenta(k, p, regime, p_sign=1, group_velocity_sign=1)


def effective_potential(V_at_x: float, E: float, units: UnitSystem = NATURAL) -> float:
    """Schrodinger-equivalent potential (2 E V - V^2) / 2m.

    Negative (attractive) once V exceeds 2E.
    """
    return (2.0 * E * V_at_x - V_at_x * V_at_x) / (2.0 * units.m)
