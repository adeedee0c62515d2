"""Atomic-chain dynamics, scale-transformed functionals, and reduced models."""

from .chain import ChainState, force, step_verlet, total_energy
from .expansion import (EpsLadder, ReducedCoefficients,
                        extract_reduced_coefficients, fit_power_series,
                        verify_cancellation,
                        verify_reduced_hamiltonian_equation)
from .fields import MacroField, ShiftSpec, shift_op
from .functionals import (FunctionalReport, apply_sigma, kdv_functionals,
                          nls_functionals, threewave_functionals,
                          we_functionals)
from .potentials import (PotentialSpec, eval_potential, group_velocity,
                         nls_frame_speed, nls_nonresonance, omega)
from .resonance import (PlaneWave, Triad, ZSet, best_separated_triad,
                        build_zset, find_resonant_triads)

__version__ = "0.1.0"
