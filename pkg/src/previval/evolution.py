"""Exact Jaynes-Cummings evolution in the invariant two-level blocks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidStateError
from .states import (DEFAULT_TAIL_TOL, AtomMatrix, AtomState, CoherentField, JointState,
                     ModelParams, truncated_field)


@dataclass(frozen=True)
class EvolutionSpec:
    """Model parameters plus the elapsed dimensionless time ``lambda_tau``.

    Negative ``lambda_tau`` runs the evolution backwards (the adjoint).
    """

    params: ModelParams
    lambda_tau: float

    def __post_init__(self):
        if not math.isfinite(self.lambda_tau):
            raise InvalidStateError(f"lambda_tau must be finite, got {self.lambda_tau}")

    def reversed(self) -> EvolutionSpec:
        return EvolutionSpec(self.params, -self.lambda_tau)


def rabi_frequency(n, params: ModelParams):
    """``Omega(n) = sqrt(detuning^2 + 4 coupling^2 n)``; accepts scalars or arrays."""
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise InvalidStateError("photon number must be >= 0")
    out = np.sqrt(params.detuning**2 + 4.0 * params.coupling**2 * n)
    return float(out) if out.ndim == 0 else out


def evolve_joint(state: JointState, spec: EvolutionSpec) -> JointState:
    """Apply ``U(tau)`` to a truncated joint state.

    The top amplitude ``c_e[n_max]`` has its partner ``|g, n_max+1>`` outside
    the truncated space and only picks up its free phase. That is the exact
    dynamics of the truncated Hamiltonian, so norm is preserved for any input;
    it matches the untruncated dynamics when ``c_e[n_max]`` is negligible.
    """
    state.check_normalized()
    if spec.lambda_tau == 0:
        return state
    p = spec.params
    g, e = _kernels.evolve_pairs(state.c_g, state.c_e, p.detuning, p.coupling, spec.lambda_tau)
    return JointState(g, e)


def predictive_atom_state(prep: AtomState, coherent: CoherentField, spec: EvolutionSpec,
                          tail_tol: float = DEFAULT_TAIL_TOL) -> AtomMatrix:
    """Reduced atomic state at the measurement time, field traced out."""
    psi = evolve_joint(JointState.product(prep, coherent, tail_tol=tail_tol), spec)
    rho = psi.reduced_atom_matrix()
    # enforce exact Hermiticity; the diagonal is real by construction
    return AtomMatrix(0.5 * (rho + rho.conj().T))


def cross_reduced_curve(x, y, coherent: CoherentField, params: ModelParams, lambda_taus,
                        tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """``Tr_field[U |x,alpha><y,alpha| U^dagger]`` for every time in ``lambda_taus``.

    ``x`` and ``y`` are atomic amplitude pairs in ``(g, e)`` order. Returns an
    array of shape ``(T, 2, 2)``.
    """
    ts = np.atleast_1d(np.asarray(lambda_taus, dtype=float))
    a = truncated_field(coherent, tail_tol)
    return _kernels.cross_reduced_grid(a, np.asarray(x, complex), np.asarray(y, complex),
                                       params.detuning, params.coupling, ts)


def predictive_atom_curve(prep: AtomMatrix, coherent: CoherentField, params: ModelParams,
                          lambda_taus, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """Reduced atomic density matrices ``(T, 2, 2)`` for a possibly mixed preparation."""
    ts = np.atleast_1d(np.asarray(lambda_taus, dtype=float))
    out = np.zeros((ts.size, 2, 2), dtype=complex)
    for weight, state in prep.pure_decomposition():
        v = state.vector
        out += weight * cross_reduced_curve(v, v, coherent, params, ts, tail_tol)
    return out
