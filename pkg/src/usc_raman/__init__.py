"""Spontaneous Raman scattering from driven, ultrastrongly coupled cavity QED.

Light-matter eigenstates of the dipole-gauge Rabi model, dressed
dissipation, Floquet time-averaged steady states, sensor emission spectra and
a second-order scattering theory for the Raman lines.
"""

from .model import ModelParams, EigenSystem, build_hamiltonian, diagonalize, rabi_eigensystem
from .dissipation import assemble, build_liouvillian, dressed_jump, thermal_channels
from .floquet import floquet_recursion, nullspace_state, propagate_oracle, steady_state
from .spectrum import (emission_spectrum, excitation_emission_map, locate_peak, peak_intensity,
                       zoom_grid)
from .raman import raman_line_table, classify_feature, theta_scan

__version__ = "0.1.0"
