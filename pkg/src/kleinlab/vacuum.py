"""Normal modes of the Klein step and the vacuum current they carry.

In the Klein range m < E < V - m two families of positive-energy modes
matter: ``u_L`` (fed from the left, no wave leaving to the left) and ``u_R``
(fed from the right, no wave leaving to the right).  In the vacuum the
``u_L`` modes are empty and the ``u_R`` modes are filled.  The symmetrised
current then picks up (n - 1/2) j per mode, which integrates to -(int T_S dE).

Modes come in two normalisations:

``"flux"``
    the plane-wave prefactors exactly as written out below; the outgoing
    wave of each mode carries unit current.
``"energy"``
    ``flux`` divided by sqrt(2 pi), i.e. delta(E - E') normalised.  The
    mode currents are then +-2 kappa / (pi (kappa + 1)^2).
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.integrate import quad

from .analytic import kinematic_kappa
from .core import NATURAL, DomainError, NumericalError, UnitSystem
from .solver import SpinorAmplitude, current_density

NORMALISATIONS = ("flux", "energy")

# (family, energy window, occupied in the vacuum).  Windows are relative to
# the step height V; ``None`` marks families absent from the vacuum at every
# energy.
FILLING_RULES = (
    ("a_L", None, False),
    ("b_L", None, False),
    ("b_R", None, False),
    ("a_R", "m < E < V - m", True),
    ("a_R", "E > V + m", False),
)


def occupation(family: str, E: float, V: float, units: UnitSystem = NATURAL) -> bool:
    """Vacuum occupation of mode ``family`` at energy E for step height V."""
    m = units.m
    if family in ("a_L", "b_L", "b_R"):
        return False
    if family == "a_R":
        if m < E < V - m:
            return True
        if E > V + m:
            return False
        raise DomainError(f"no a_R mode at E={E!r} for V={V!r}")
    raise ValueError(f"unknown mode family {family!r}")


def _scale(normalization):
    if normalization not in NORMALISATIONS:
        raise ValueError(f"normalization must be one of {NORMALISATIONS}, got {normalization!r}")
    return 1.0 if normalization == "flux" else 1.0 / math.sqrt(2.0 * math.pi)


def klein_mode(side: str, E: float, V: float, x: float, units: UnitSystem = NATURAL,
               normalization: str = "flux") -> SpinorAmplitude:
    """Evaluate u_L or u_R at position x (x < 0 left of the step)."""
    kappa = kinematic_kappa(E, V, units)
    s = _scale(normalization)
    m = units.m
    k = math.sqrt(E * E - m * m)
    P = math.sqrt((V - E) ** 2 - m * m)
    out_l = np.array([1j, k / (E + m)])
    in_l = np.array([1j, -k / (E + m)])
    # Under the step e^{+i|p|x} travels left, e^{-i|p|x} travels right.
    left_mover_r = np.array([1j, P / (E + m - V)])
    right_mover_r = np.array([1j, -P / (E + m - V)])
    ratio = (kappa - 1.0) / (kappa + 1.0)
    amp = math.sqrt(2.0 * kappa) / (kappa + 1.0)
    if side == "L":
        if x < 0:
            psi = amp * math.sqrt((E + m) / k) * out_l * cmath.exp(1j * k * x)
        else:
            psi = math.sqrt((V - E - m) / (2.0 * P)) * (
                ratio * left_mover_r * cmath.exp(1j * P * x)
                + right_mover_r * cmath.exp(-1j * P * x))
    elif side == "R":
        if x < 0:
            psi = math.sqrt((E + m) / (2.0 * k)) * (
                -ratio * out_l * cmath.exp(1j * k * x) + in_l * cmath.exp(-1j * k * x))
        else:
            # sqrt((V - E - m) / |p|) makes the mode continuous at x = 0.
            psi = amp * math.sqrt((V - E - m) / P) * left_mover_r * cmath.exp(1j * P * x)
    else:
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")
    psi = s * psi
    return SpinorAmplitude(complex(psi[0]), complex(psi[1]), x)


def mode_current(side: str, E: float, V: float, units: UnitSystem = NATURAL,
                 normalization: str = "energy") -> float:
    """Current carried by u_L (positive) or u_R (negative)."""
    kappa = kinematic_kappa(E, V, units)
    if normalization == "energy":
        j = 2.0 * kappa / (math.pi * (kappa + 1.0) ** 2)
    elif normalization == "flux":
        j = 4.0 * kappa / (kappa + 1.0) ** 2
    else:
        raise ValueError(f"normalization must be one of {NORMALISATIONS}, got {normalization!r}")
    if side == "L":
        return j
    if side == "R":
        return -j
    raise ValueError(f"side must be 'L' or 'R', got {side!r}")


def current_integrand(E: float, V: float, units: UnitSystem = NATURAL,
                      normalization: str = "flux") -> float:
    """(j_R - j_L) / 2 per unit energy; equals -T_S(E) with flux normalisation."""
    return 0.5 * (mode_current("R", E, V, units, normalization)
                  - mode_current("L", E, V, units, normalization))


def assembled_integrand(E: float, V: float, x: float = 0.0, units: UnitSystem = NATURAL,
                        normalization: str = "flux") -> float:
    """Vacuum current per unit energy built term by term from the occupations.

    j = -1/2 sum_f (<a_f^+ a_f> - <a_f a_f^+>) u_f^+ sigma_y u_f, summed over
    the a_L and a_R families, with the spinors evaluated at ``x``.
    """
    total = 0.0
    for family, side in (("a_L", "L"), ("a_R", "R")):
        n = 1.0 if occupation(family, E, V, units) else 0.0
        u = klein_mode(side, E, V, x, units, normalization)
        sy = -current_density(u)  # u^+ sigma_y u
        total += (n - (1.0 - n)) * sy
    return -0.5 * total


# ---------------------------------------------------------------------------
# Energy integrals over the Klein range
# ---------------------------------------------------------------------------

def _ts_raw(E, V, m):
    kappa = math.sqrt(((V - E + m) * (E + m)) / ((V - E - m) * (E - m)))
    return 4.0 * kappa / (1.0 + kappa) ** 2


def _tinf_raw(E, V, m):
    k2 = ((V - E + m) * (E + m)) / ((V - E - m) * (E - m))
    return 8.0 * k2 / (8.0 * k2 + (1.0 - k2) ** 2)


# Same integrands after E = m + L sin^2 t, which removes the square-root
# behaviour at both ends of the range; includes the Jacobian L sin 2t.
def _ts_angle(t, V, m):
    L = V - 2.0 * m
    s, c = np.sin(t), np.cos(t)
    E = m + L * s * s
    sc = L * s * c
    rb = np.sqrt((V - E + m) * (E + m))
    return 4.0 * rb * sc / (sc + rb) ** 2 * (2.0 * sc)


def _tinf_angle(t, V, m):
    L = V - 2.0 * m
    s, c = np.sin(t), np.cos(t)
    E = m + L * s * s
    sc2 = (L * s * c) ** 2
    B = (V - E + m) * (E + m)
    return 8.0 * B * sc2 / (8.0 * B * sc2 + (sc2 - B) ** 2) * (2.0 * np.sqrt(sc2))


_INTEGRANDS = {"step": (_ts_raw, _ts_angle), "barrier": (_tinf_raw, _tinf_angle)}


def _adaptive(f, V, m, tol):
    val, err = quad(f, m, V - m, args=(V, m), epsabs=0.0, epsrel=tol, limit=1000)
    if err > max(tol * abs(val), 1e-15):
        raise NumericalError(f"adaptive quadrature did not converge (estimate {err:.2e})")
    return val


def _gauss_panels(g, V, m, panels, order):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 0.5 * math.pi, panels + 1)
    sums = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        t = lo + half * (x + 1.0)
        sums.append(math.fsum(half * w * g(t, V, m)))
    return math.fsum(sums)


def _gauss(g, V, m, tol, panels=16, order=32):
    coarse = _gauss_panels(g, V, m, panels, order)
    fine = _gauss_panels(g, V, m, 2 * panels, order)
    if abs(fine - coarse) > max(tol * abs(fine), 1e-15):
        raise NumericalError(f"panel quadrature not converged (|diff|={abs(fine - coarse):.2e})")
    return fine


def klein_range_integral(geometry: str, V: float, units: UnitSystem = NATURAL,
                         method: str = "adaptive", tol: float = 1e-10) -> float:
    """Integral of T_S (``"step"``) or T_inf (``"barrier"``) over m < E < V - m.

    ``method="adaptive"`` integrates in E with QUADPACK; ``method="gauss"``
    uses composite Gauss-Legendre in the angle variable.  The two share no
    nodes and no variable, so each checks the other.
    """
    m = units.m
    if not V > 2 * m:
        return 0.0
    try:
        raw, angle = _INTEGRANDS[geometry]
    except KeyError:
        raise ValueError(f"geometry must be 'step' or 'barrier', got {geometry!r}") from None
    if method == "adaptive":
        return _adaptive(raw, V, m, tol)
    if method == "gauss":
        return _gauss(angle, V, m, tol)
    raise ValueError(f"method must be 'adaptive' or 'gauss', got {method!r}")


def vacuum_current_step(V: float, units: UnitSystem = NATURAL, method: str = "adaptive",
                        tol: float = 1e-10) -> float:
    """Vacuum expectation of the current near a Klein step, -(int T_S dE)."""
    return -klein_range_integral("step", V, units, method, tol)


def vacuum_current_barrier(V: float, units: UnitSystem = NATURAL, method: str = "adaptive",
                           tol: float = 1e-10) -> float:
    """Phase-averaged vacuum current seen beyond a wide barrier, -(int T_inf dE).

    The observer is assumed to sit at x > a.
    """
    return -klein_range_integral("barrier", V, units, method, tol)
