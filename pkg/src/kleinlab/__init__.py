"""Klein tunnelling in the one-dimensional Dirac equation.

Closed-form step and barrier scattering, square-well spectra and their flow
under a depth ramp, supercritical positron counting, Coulomb tunnelling
ratios and the vacuum current of the Klein step, each checked against an
independent transfer-matrix solver or quadrature.
"""
from .analytic import (
    ScatteringResult,
    averaged_coefficients,
    barrier_coefficients,
    kinematic_kappa,
    mean_transmission,
    resonance_energies,
    step_coefficients,
)
from .core import (
    NATURAL,
    Barrier,
    DeltaWell,
    DomainError,
    KleinZone,
    Momenta,
    NumericalError,
    Piecewise,
    Regime,
    Step,
    UnitSystem,
    Well,
    effective_potential,
    momenta_for,
)
from .solver import current_density, region_propagator, solve_scattering
from .spectrum import delta_well_states, find_bound_states, ramp_spectrum
from .supercritical import (
    ChargeLedger,
    count_positrons,
    count_supercritical,
    critical_potential,
    emission_spectrum,
)

__version__ = "0.1.0"
