"""Exact diagonalization and dynamics of single-mode spin-1 dipolar condensates.

Computes spin-nematic squeezing and the maximal quantum Fisher information
for ground states and spin-mixing dynamics, with a Bogoliubov cross-check.
"""

__version__ = "0.1.0"

from .errors import DipolarSqueezeError, DomainError, NumericalError, ResourceError
from .fock import ModelParams, Sign, StateVector, SubspaceBasis, subspace_basis
from .hamiltonian import TridiagonalBlock, block_hamiltonian
from .ground import GroundResult, global_ground, named_state, singlet_state, spin_one_state
from .observables import (
    MomentSet,
    QfiResult,
    SqueezingResult,
    moments_fixed_m,
    qfi_max,
    squeezing_xi_x,
    to_decibels,
)
from .dynamics import DynamicsTrace, evolve, time_average
from .bogoliubov import effective_params, optimal_values, xi2_qfi_approx

__all__ = [
    "DipolarSqueezeError", "DomainError", "NumericalError", "ResourceError",
    "ModelParams", "Sign", "StateVector", "SubspaceBasis", "subspace_basis",
    "TridiagonalBlock", "block_hamiltonian",
    "GroundResult", "global_ground", "named_state", "singlet_state", "spin_one_state",
    "MomentSet", "QfiResult", "SqueezingResult", "moments_fixed_m", "qfi_max",
    "squeezing_xi_x", "to_decibels",
    "DynamicsTrace", "evolve", "time_average",
    "effective_params", "optimal_values", "xi2_qfi_approx",
]
