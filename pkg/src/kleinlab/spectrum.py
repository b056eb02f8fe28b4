"""Bound states of the square well V(x) = -V, |x| < a, and their spectral flow.

Level ``n`` (0, 1, 2, ...) solves

    F_n(E) = p a - n pi / 2 - theta(E) = 0,
    p = sqrt((E + V)^2 - m^2),
    tan(theta) = sqrt((m - E)(E + V + m) / ((m + E)(E + V - m))),

which is the even matching condition for even ``n`` and the odd one for odd
``n``.  ``theta`` runs from 0 at E = m to pi/2 at E = -m and F_n increases
monotonically with E, so each level owns the phase window
pa in (n pi/2, (n+1) pi/2) and can be bracketed without crossing a pole of
tan(pa).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .core import NATURAL, DomainError, NumericalError, UnitSystem


class RampResolutionError(NumericalError):
    """The depth grid is too coarse to follow every level between slices."""


@dataclass(frozen=True)
class BoundState:
    E: float
    parity: str
    branch_index: int
    well_momentum: float
    level: int
    residual: float
    threshold: str = ""  # "", "upper" (E -> m) or "lower" (E -> -m)


@dataclass(frozen=True)
class DeltaWellLevels:
    E_even: float
    E_odd: float
    branch: int
    parity: str
    E_bound: float
    on_boundary: bool


@dataclass(frozen=True)
class CrossingEvent:
    kind: str  # "zero" (E crosses 0) or "dive" (E reaches -m)
    level: int
    depth: float

    @property
    def parity(self) -> str:
        return "even" if self.level % 2 == 0 else "odd"


@dataclass
class SpectralFlow:
    a: float
    depths: np.ndarray
    states: list
    crossings: list = field(default_factory=list)

    @property
    def zero_crossings(self) -> list:
        return [c for c in self.crossings if c.kind == "zero"]

    @property
    def dives(self) -> list:
        return [c for c in self.crossings if c.kind == "dive"]

    def counts_at(self, V: float) -> tuple:
        """(E=0 crossings, E=-m crossings) accumulated up to depth V."""
        qp = sum(1 for c in self.zero_crossings if c.depth <= V)
        qs = sum(1 for c in self.dives if c.depth <= V)
        return qp, qs


# ---------------------------------------------------------------------------
# Matching conditions
# ---------------------------------------------------------------------------

def _check_inside(E, V, units):
    m = units.m
    if not -m < E < m:
        raise DomainError(f"bound-state energy must lie in (-m, m), got {E!r}")
    if not E + V > m:
        raise DomainError(f"no interior oscillation for E + V <= m (E={E!r}, V={V!r})")


def even_residual(E: float, V: float, a: float, units: UnitSystem = NATURAL) -> float:
    _check_inside(E, V, units)
    m = units.m
    p = math.sqrt((E + V) ** 2 - m * m)
    return math.tan(p * a) - math.sqrt((m - E) * (E + V + m) / ((m + E) * (E + V - m)))


def odd_residual(E: float, V: float, a: float, units: UnitSystem = NATURAL) -> float:
    # tan(pa) = -cot(theta): upper component odd, lower component even.
    _check_inside(E, V, units)
    m = units.m
    p = math.sqrt((E + V) ** 2 - m * m)
    return math.tan(p * a) + math.sqrt((m + E) * (E + V - m) / ((m - E) * (E + V + m)))


def phase_mismatch(n, E, V, a, m):
    """F_n(E, V); vectorised over ``n`` and ``E``.  Clipped to -n pi/2 - pi/2
    where the interior is not oscillatory."""
    E = np.asarray(E, dtype=float)
    Ep = E + V
    osc = Ep > m
    p = np.sqrt(np.where(osc, Ep * Ep - m * m, 0.0))
    num = np.sqrt(np.maximum((m - E) * (Ep + m), 0.0))
    den = np.sqrt(np.maximum((m + E) * (Ep - m), 0.0))
    theta = np.where(osc, np.arctan2(num, den), 0.5 * np.pi)
    return p * a - np.asarray(n) * (0.5 * np.pi) - theta


def _edge_mismatch(n, E_edge, V, a, m):
    """F_n at E = +m or E = -m, using the limits theta(m) = 0, theta(-m) = pi/2."""
    Ep = E_edge + V
    p = math.sqrt(Ep * Ep - m * m) if Ep > m else 0.0
    theta = 0.0 if E_edge > 0 and Ep > m else 0.5 * math.pi
    return (p * a - theta) - n * 0.5 * math.pi


def _level_status(n, V, a, m):
    """0 unborn, 1 bound with E > 0, 2 bound with E <= 0, 3 dived below -m.

    ``n`` may be an integer array.
    """
    n = np.asarray(n)
    top = _edge_mismatch(0, m, V, a, m) - n * 0.5 * np.pi
    bottom = _edge_mismatch(0, -m, V, a, m) - n * 0.5 * np.pi
    zero = phase_mismatch(n, 0.0, V, a, m)
    st = np.where(zero < 0, 1, 2)
    st = np.where(bottom >= 0, 3, st)
    st = np.where(top < 0, 0, st)
    return st if st.ndim else int(st)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def _bisect_levels(levels, lo, hi, V, a, m, coarse=24, iters=60):
    """Bracketed roots of F_n, one per level: a few bisection steps, then
    Illinois false position (F_n is smooth and monotone in E)."""
    n = np.asarray(levels, dtype=float)
    lo = np.full(n.shape, lo)
    hi = np.full(n.shape, hi)
    for _ in range(coarse):
        mid = 0.5 * (lo + hi)
        neg = phase_mismatch(n, mid, V, a, m) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    flo = phase_mismatch(n, lo, V, a, m)
    fhi = phase_mismatch(n, hi, V, a, m)
    side = np.zeros(n.shape)
    for _ in range(iters):
        denom = fhi - flo
        x = np.where(denom != 0, (lo * fhi - hi * flo) / np.where(denom != 0, denom, 1.0), 0.5 * (lo + hi))
        x = np.clip(x, lo, hi)
        fx = phase_mismatch(n, x, V, a, m)
        neg = fx < 0
        # Illinois: halve the stale end's value when the same side is kept twice.
        flo, fhi = np.where(neg, fx, np.where(side == -1, 0.5 * flo, flo)), \
            np.where(neg, np.where(side == 1, 0.5 * fhi, fhi), fx)
        side = np.where(neg, 1, -1)
        lo = np.where(neg, x, lo)
        hi = np.where(neg, hi, x)
        if np.all((np.abs(fx) < 1e-15) | (hi - lo <= 4 * np.finfo(float).eps * np.abs(x))):
            break
    cand = np.stack([lo, hi, x])
    res = np.abs(phase_mismatch(n, cand, V, a, m))
    return cand[np.argmin(res, axis=0), np.arange(n.size)]


def find_bound_states(V: float, a: float, units: UnitSystem = NATURAL, tol: float = 1e-12) -> list:
    """All bound states of the well, sorted by increasing energy.

    Each state carries ``residual = F_n(E)``, the phase-form matching
    residual.  States within 1e-9 m of either continuum edge are returned
    with ``threshold`` set and are exempt from the ``tol`` check.
    """
    if not a > 0:
        raise ValueError(f"half-width must be positive, got {a!r}")
    m = units.m
    if not V > 0:
        return []
    E_lo = max(-m, m - V)
    # Levels sitting exactly on a continuum edge are kept (and flagged).
    edge = 1e-12
    n_max = int(math.floor(2.0 * math.sqrt((m + V) ** 2 - m * m) * a / math.pi + edge))
    levels = [n for n in range(n_max + 1) if E_lo > -m or _edge_mismatch(n, -m, V, a, m) < edge]
    if not levels:
        return []
    roots = _bisect_levels(levels, E_lo, m, V, a, m)
    out = []
    g = units.guard
    for n, E in zip(levels, roots):
        E = float(E)
        res = float(phase_mismatch(n, E, V, a, m))
        flag = "upper" if m - E < g else ("lower" if E + m < g else "")
        if not flag and abs(res) > tol:
            raise NumericalError(f"level {n} converged to residual {res:.3e} > tol={tol:.1e}")
        out.append(BoundState(
            E=E,
            parity="even" if n % 2 == 0 else "odd",
            branch_index=n // 2,
            well_momentum=math.sqrt(max((E + V) ** 2 - m * m, 0.0)),
            level=n,
            residual=res,
            threshold=flag,
        ))
    return out


def delta_well_states(lam: float, units: UnitSystem = NATURAL) -> DeltaWellLevels:
    """Levels of V(x) = -lam delta(x).

    Both expressions m cos(lam) (even) and -m cos(lam) (odd) are returned.
    Only one of them is a bound state at a time: the even branch for
    0 <= lam < pi, then the odd one for pi <= lam < 2 pi, alternating every
    pi as each level dives into the lower continuum and the next appears at
    E = m.
    """
    if not lam >= 0:
        raise DomainError(f"delta strength must be non-negative, got {lam!r}")
    m = units.m
    ratio = lam / math.pi
    branch = int(math.floor(ratio))
    on_boundary = abs(ratio - round(ratio)) < 1e-12 * max(1.0, ratio)
    parity = "even" if branch % 2 == 0 else "odd"
    E_even, E_odd = m * math.cos(lam), -m * math.cos(lam)
    return DeltaWellLevels(E_even, E_odd, branch, parity,
                           E_even if parity == "even" else E_odd, on_boundary)


# ---------------------------------------------------------------------------
# Spectral flow under a depth ramp
# ---------------------------------------------------------------------------

def _max_slope(states, V, a, m, h=1e-7):
    """Largest |dE/dV| over ``states`` at depth V, from F_n by implicit differentiation."""
    if not states:
        return 0.0
    n = np.array([s.level for s in states], dtype=float)
    E = np.array([s.E for s in states])
    dFdV = (phase_mismatch(n, E, V + h, a, m) - phase_mismatch(n, E, V - h, a, m)) / (2 * h)
    Eh = np.minimum(E + h, m)
    El = np.maximum(E - h, -m)
    dFdE = (phase_mismatch(n, Eh, V, a, m) - phase_mismatch(n, El, V, a, m)) / (Eh - El)
    return float(np.max(np.abs(dFdV / dFdE)))


def _refine(f, lo, hi):
    return brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def ramp_spectrum(V_max: float, n_steps: int, a: float, units: UnitSystem = NATURAL,
                  tol: float = 1e-12) -> SpectralFlow:
    """Follow every level as the depth grows from 0 to ``V_max``.

    Levels are paired between consecutive slices by label; each level must
    move by less than three times the largest local slope |dE/dV| times the
    slice spacing, otherwise RampResolutionError asks for a finer grid.  Each crossing of
    E = 0 and E = -m is located by bisection in depth.
    """
    if n_steps < 2:
        raise ValueError(f"n_steps must be at least 2, got {n_steps!r}")
    m = units.m
    if not V_max > 0:
        return SpectralFlow(a, np.zeros(0), [], [])
    depths = np.linspace(0.0, V_max, n_steps)
    states = [find_bound_states(float(V), a, units, tol) for V in depths]
    crossings = []
    for i in range(n_steps - 1):
        V0, V1 = float(depths[i]), float(depths[i + 1])
        s0, s1 = states[i], states[i + 1]
        _check_pairing(s0, s1, V0, V1, a, m)
        n_top = s1[-1].level if s1 else (s0[-1].level if s0 else -1)
        n_top = max(n_top, _highest_born(V1, a, m))
        n_first = _lowest_alive(V0, a, m)
        ns = np.arange(n_first, n_top + 1)
        st0s, st1s = _level_status(ns, V0, a, m), _level_status(ns, V1, a, m)
        for n in ns[st0s != st1s]:
            n = int(n)
            st0, st1 = _level_status(n, V0, a, m), _level_status(n, V1, a, m)
            if st0 == 0 and st1 == 3:
                raise RampResolutionError(
                    f"level {n} appears and dives between V={V0:.6g} and V={V1:.6g}; refine the ramp")
            if st0 <= 1 and st1 >= 2:
                Vc = _refine(lambda v: float(phase_mismatch(n, 0.0, v, a, m)), V0, V1)
                crossings.append(CrossingEvent("zero", n, Vc))
            if st0 <= 2 and st1 == 3:
                Vc = _refine(lambda v: _edge_mismatch(n, -m, v, a, m), V0, V1)
                crossings.append(CrossingEvent("dive", n, Vc))
    crossings.sort(key=lambda c: (c.depth, c.kind, c.level))
    return SpectralFlow(a, depths, states, crossings)


def suggested_steps(V_max: float, a: float, units: UnitSystem = NATURAL) -> int:
    """Ramp resolution that keeps neighbouring levels apart between slices."""
    dV = min(0.02, 0.1 / a) * units.m
    return max(50, int(math.ceil(V_max / dV)) + 1)


def _highest_born(V, a, m):
    if V <= 0:
        return -1
    return int(math.floor(2.0 * math.sqrt((m + V) ** 2 - m * m) * a / math.pi))


def _lowest_alive(V, a, m):
    # Levels with F_n(-m) >= 0 have dived.
    f = _edge_mismatch(0, -m, V, a, m)
    n = max(0, int(math.floor(f / (0.5 * math.pi))) + 1) if f >= 0 else 0
    while _level_status(n, V, a, m) == 3:
        n += 1
    while n > 0 and _level_status(n - 1, V, a, m) != 3:
        n -= 1
    return n


def _check_pairing(s0, s1, V0, V1, a, m):
    # Labels come from disjoint phase windows, so pairing is by label.  The
    # grid is accepted only if every level moved less than the guard band.
    E0 = {s.level: s.E for s in s0}
    E1 = {s.level: s.E for s in s1}
    common = sorted(E0.keys() & E1.keys())
    if not common:
        return
    slope = max(_max_slope([s for s in s0 if s.level in E1], V0, a, m),
                _max_slope([s for s in s1 if s.level in E0], V1, a, m))
    guard = 3.0 * slope * (V1 - V0)
    for n in common:
        dE = abs(E1[n] - E0[n])
        if dE > guard:
            raise RampResolutionError(
                f"cannot pair level {n} between V={V0:.6g} and V={V1:.6g} "
                f"(|dE|={dE:.3g}, guard={guard:.3g}); refine the ramp")
