"""Positron/electron density ratio at a Coulomb centre, and the turning point."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError

FINE_STRUCTURE = 1.0 / 137.035999


@dataclass(frozen=True)
class CoulombInput:
    """Z may be non-integer so that Z*alpha can be swept continuously.

    ``f`` is the ratio of complex gamma functions entering the relativistic
    ratio; it is close to one for large Z and is taken as given.
    """

    Z: float
    alpha: float = FINE_STRUCTURE
    E: float = 1.0
    p: float = 1.0
    f: float = 1.0

    def __post_init__(self):
        if not self.Z > 0:
            raise DomainError(f"Z must be positive, got {self.Z!r}")
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")

    @property
    def z_alpha(self) -> float:
        return self.Z * self.alpha


def rho_nonrelativistic(inp: CoulombInput) -> float:
    """|psi(0)|^2 ratio positron/electron, exp(-2 pi Z alpha E / p)."""
    if not inp.p > 0:
        raise DomainError(f"momentum must be positive, got {inp.p!r}")
    return math.exp(-2.0 * math.pi * inp.z_alpha * inp.E / inp.p)


def rho_relativistic(inp: CoulombInput) -> float:
    return inp.f * math.exp(-2.0 * math.pi * inp.z_alpha)


def classical_turning_point(Z: float, alpha: float, E: float) -> float:
    """r_c = Z alpha / E for a positron of energy E (lengths in 1/m)."""
    if not E > 0:
        raise DomainError(f"energy must be positive, got {E!r}")
    return Z * alpha / E
