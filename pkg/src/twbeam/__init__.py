"""Steady-state traveling waves on graded cantilevers with an intermediate absorber."""

from .assembly import AssembledSystem, QuadratureSpec, assemble, coupling_vector, force_vector
from .basis import ModalBasis, characteristic_roots, eval_phi, eval_phi_xx
from .metrics import Envelope, Section, cost_function, default_tw_section, extrema
from .profiles import (AbsorberConfig, BeamConfig, ExcitationConfig, PowerLawProfile,
                       evaluate_profile, section_area, section_inertia)
from .solver import (FactoredBase, HarmonicSolution, NearSingularError, harmonic_response,
                     harmonic_response_rank1, natural_frequencies, nondimensionalize_frequency,
                     nondimensionalize_stiffness, physical_field)
from .sweeps import (CFMap, GridAxis, SweepResult, cf_map, geometry_sweep, gradient_index_sweep,
                     location_sweep, optimal_region_measure, stacked_cf)

__version__ = "0.1.0"
