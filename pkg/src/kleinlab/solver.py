"""Transfer-matrix solution of the 1-D Dirac equation for piecewise-constant V.

The equation ``(sigma_x d/dx - sigma_z (E - V) + m) psi = 0`` is rewritten as
the first-order system ``psi' = A psi`` with

    A = [[0, -(E - V) - m], [(E - V) - m, 0]],     A @ A = -q^2 I,

where ``q^2 = (E - V)^2 - m^2``.  Each constant region therefore has the exact
propagator ``cos(q w) I + sin(q w) / q A`` (cosh/sinh when q^2 < 0).  No
discretisation is involved, so any disagreement with the closed forms in
:mod:`kleinlab.analytic` points at the closed forms.
"""
from __future__ import annotations

import bisect
import cmath
from dataclasses import dataclass

import numpy as np

from .analytic import ScatteringResult
from .core import NATURAL, DomainError, Regime, UnitSystem, classify


@dataclass(frozen=True)
class SpinorAmplitude:
    upper: complex
    lower: complex
    x: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.upper, self.lower], dtype=complex)


def generator(E: float, V: float, units: UnitSystem = NATURAL) -> np.ndarray:
    """Matrix A with psi' = A psi in a region at level V."""
    m = units.m
    e = E - V
    return np.array([[0.0, -e - m], [e - m, 0.0]], dtype=complex)


def region_propagator(E: float, V_region: float, width: float, units: UnitSystem = NATURAL) -> np.ndarray:
    """Exact 2x2 transfer matrix across a region of constant potential.

    Maps the spinor at the left edge of the region to the spinor at its right
    edge.  ``width == 0`` gives the identity.
    """
    if width < 0:
        raise ValueError(f"width must be non-negative, got {width!r}")
    A = generator(E, V_region, units)
    q2 = (E - V_region) ** 2 - units.m ** 2
    if q2 > 0:
        q = q2 ** 0.5
        c, s = np.cos(q * width), width * np.sinc(q * width / np.pi)
    elif q2 < 0:
        q = (-q2) ** 0.5
        c = np.cosh(q * width)
        s = np.sinh(q * width) / q if q * width > 1e-8 else width
    else:
        c, s = 1.0, width
    return c * np.eye(2, dtype=complex) + s * A


def current_density(psi) -> float:
    """Probability current j = -psi^dagger sigma_y psi."""
    if isinstance(psi, SpinorAmplitude):
        a, b = psi.upper, psi.lower
    else:
        a, b = psi
    return -2.0 * (np.conj(a) * b).imag


def plane_wave(E: float, V: float, q: float, units: UnitSystem = NATURAL) -> np.ndarray:
    """Spinor of exp(i q x) at x = 0 in a region at level V (unnormalised)."""
    return np.array([1j, q / (E - V + units.m)], dtype=complex)


def _unit_flux_wave(E, V, q, units):
    u = plane_wave(E, V, q, units)
    return u / abs(current_density(u)) ** 0.5


def _forward_momentum(E, V, units):
    """Real momentum whose plane wave carries current along +x."""
    q = ((E - V) ** 2 - units.m ** 2) ** 0.5
    return q if current_density(plane_wave(E, V, q, units)) > 0 else -q


class Wavefunction:
    """Stationary scattering state; call it with ``x`` to get the spinor there."""

    def __init__(self, E, profile, units, left_spinor, r, t, q_left, q_right):
        self.E = E
        self.profile = profile
        self.units = units
        self.r = r
        self.t = t
        self._q_left = q_left
        self._q_right = q_right
        self.edges = profile.edges
        self._u_in = _unit_flux_wave(E, profile.V_left, q_left, units)
        self._u_ref = _unit_flux_wave(E, profile.V_left, -q_left, units)
        self._u_out = _unit_flux_wave(E, profile.V_right, q_right, units)
        # Spinor at the left edge of each region, plus the last edge.
        spinors = [left_spinor]
        psi = left_spinor
        for x0, x1, v in profile.regions:
            psi = region_propagator(E, v, x1 - x0, units) @ psi
            spinors.append(psi)
        self._edge_spinors = spinors

    @property
    def boundary_amplitudes(self) -> list:
        return [SpinorAmplitude(s[0], s[1], x) for s, x in zip(self._edge_spinors, self.edges)]

    def spinor(self, x: float) -> np.ndarray:
        edges = self.edges
        if x < edges[0]:
            dx = x - edges[0]
            return (self._u_in * cmath.exp(1j * self._q_left * dx)
                    + self.r * self._u_ref * cmath.exp(-1j * self._q_left * dx))
        if x >= edges[-1]:
            return self.t * self._u_out * cmath.exp(1j * self._q_right * (x - edges[-1]))
        i = bisect.bisect_right(edges, x) - 1
        x0, _, v = self.profile.regions[i]
        return region_propagator(self.E, v, x - x0, self.units) @ self._edge_spinors[i]

    def __call__(self, x: float) -> SpinorAmplitude:
        s = self.spinor(x)
        return SpinorAmplitude(s[0], s[1], x)

    def residual(self, x: float, h: float = 1e-3) -> float:
        """Max-norm of the Dirac-equation residual at x (5-point derivative)."""
        d = (-self.spinor(x + 2 * h) + 8 * self.spinor(x + h)
             - 8 * self.spinor(x - h) + self.spinor(x - 2 * h)) / (12 * h)
        V = self.profile.level_at(x)
        sx = np.array([[0, 1], [1, 0]])
        sz = np.array([[1, 0], [0, -1]])
        psi = self.spinor(x)
        return float(np.max(np.abs(sx @ d - (self.E - V) * (sz @ psi) + self.units.m * psi)))


@dataclass(frozen=True)
class ScatteringSolution:
    result: ScatteringResult
    wavefunction: Wavefunction


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def transfer_matrix(profile, E: float, units: UnitSystem = NATURAL) -> np.ndarray:
    M = np.eye(2, dtype=complex)
    for x0, x1, v in profile.regions:
        M = region_propagator(E, v, x1 - x0, units) @ M
    return M


def solve_scattering(potential, E: float, units: UnitSystem = NATURAL) -> ScatteringSolution:
    """Scatter a unit-flux wave incident from the left off ``potential``.

    R and T are flux ratios, so the reversed momentum label of a transmitted
    wave in the Klein regime needs no special handling.
    """
    profile = potential.profile()
    for side, V in (("left", profile.V_left), ("right", profile.V_right)):
        if classify(E, V, units) is Regime.EVANESCENT:
            raise DomainError(f"{side} asymptotic region is evanescent at E={E!r}")
    q_left = _forward_momentum(E, profile.V_left, units)
    q_right = _forward_momentum(E, profile.V_right, units)
    u_in = _unit_flux_wave(E, profile.V_left, q_left, units)
    u_ref = _unit_flux_wave(E, profile.V_left, -q_left, units)
    u_out = _unit_flux_wave(E, profile.V_right, q_right, units)

    # M (u_in + r u_ref) = t u_out by Cramer's rule.  A is traceless, so
    # det M = 1 and the numerator of t is det[u_ref, u_in] exactly; forming it
    # from M would cancel catastrophically under a thick evanescent region.
    M = transfer_matrix(profile, E, units)
    Mref, Min = M @ u_ref, M @ u_in
    D = _det(Mref, u_out)
    r = -_det(Min, u_out) / D
    t = _det(u_ref, u_in) / D

    R, T = abs(r) ** 2, abs(t) ** 2
    result = ScatteringResult.build(
        R, T, None, abs(q_left), abs(q_right), classify(E, profile.V_right, units)
    )
    wf = Wavefunction(E, profile, units, u_in + r * u_ref, r, t, q_left, q_right)
    return ScatteringSolution(result, wf)
