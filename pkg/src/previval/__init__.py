"""Retrodictive Jaynes-Cummings dynamics: Rabi collapses, revivals and previvals.

A two-level atom interacts with one cavity mode that starts in a coherent
state. The package computes predictive probabilities (measurement outcome given
preparation) and retrodictive ones (preparation given a later measurement),
using the exact solution in the invariant two-state blocks. A dense-matrix
oracle and a Bayes-theorem route serve as independent checks.
"""
from ._kernels import BACKEND as KERNEL_BACKEND
from .analysis import (EnvelopeStats, ScanResult, StateElement, envelope_stats, find_revival,
                       half_revival_time, locate_unretrodictable, revival_time, scan,
                       slow_oscillation_period, unretrodictability_gap)
from .errors import (ConfigError, InvalidStateError, NoPriorInformationError, PrevivalError,
                     ZeroProbabilityError)
from .evolution import EvolutionSpec, evolve_joint, predictive_atom_state, rabi_frequency
from .oracle import build_joint_hamiltonian, max_deviation, propagate_numerically
from .retrodiction import (bayes_invert, predictive_prob, retrodictive_matrix_element,
                           retrodictive_prob, retrodictive_state_at_prep)
from .scenarios import PRESETS, Grid, Scenario, parse_config
from .states import (AtomMatrix, AtomState, CoherentField, JointState, ModelParams, PomElement,
                     PreparationEnsemble, apriori_operator, choose_truncation,
                     coherent_coefficients, default_ensemble, excited, ground, minus_state,
                     plus_state, pom_projector)

__version__ = "0.1.0"
