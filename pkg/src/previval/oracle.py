"""Brute-force cross-check of the analytic evolution.

Builds the dense truncated Hamiltonian and propagates by exact
diagonalization (or ``scipy.linalg.expm``). Nothing here uses the pair
rotation formulas of :mod:`previval.evolution`.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable

import numpy as np
import scipy.linalg

from .errors import InvalidStateError
from .evolution import EvolutionSpec, evolve_joint
from .states import JointState, ModelParams

Propagator = Callable[[JointState, EvolutionSpec], JointState]


def build_joint_hamiltonian(params: ModelParams, n_max: int) -> np.ndarray:
    """Dense Jaynes-Cummings Hamiltonian (hbar = 1) on the truncated space.

    Basis order is ``|g,0>..|g,n_max>, |e,0>..|e,n_max>``. The only couplings
    are ``<e,n-1|H|g,n> = -i coupling sqrt(n)`` and their conjugates; the
    diagonal is ``-detuning/2`` on ground states and ``+detuning/2`` on
    excited states.
    """
    if n_max < 1:
        raise InvalidStateError(f"n_max must be >= 1, got {n_max}")
    dim = n_max + 1
    sigma3 = np.diag([-1.0, 1.0])
    sigma_plus = np.array([[0.0, 0.0], [1.0, 0.0]])  # |e><g| in (g, e) order
    a = np.diag(np.sqrt(np.arange(1.0, dim)), k=1)
    H = (0.5 * params.detuning * np.kron(sigma3, np.eye(dim))
         - 1j * params.coupling * (np.kron(sigma_plus, a) - np.kron(sigma_plus.T, a.T)))
    return H


@lru_cache(maxsize=32)
def _eigensystem(detuning: float, coupling: float, n_max: int):
    H = build_joint_hamiltonian(ModelParams(detuning, coupling), n_max)
    w, V = np.linalg.eigh(H)
    w.setflags(write=False)
    V.setflags(write=False)
    return w, V


def propagate_numerically(state: JointState, spec: EvolutionSpec, method: str = "eigh") -> JointState:
    """``exp(-i H tau) |psi>`` by dense linear algebra.

    ``method="eigh"`` diagonalizes ``H`` once per (params, n_max) and reuses
    it; ``method="expm"`` calls Pade scaling-and-squaring every time.
    """
    p = spec.params
    psi = state.to_vector()
    t = spec.lambda_tau
    if method == "eigh":
        w, V = _eigensystem(p.detuning, p.coupling, state.n_max)
        if V.shape[0] != psi.size:
            raise InvalidStateError("state dimension does not match the Hamiltonian")
        out = V @ (np.exp(-1j * w * t) * (V.conj().T @ psi))
    elif method == "expm":
        H = build_joint_hamiltonian(p, state.n_max)
        out = scipy.linalg.expm(-1j * t * H) @ psi
    else:
        raise ValueError(f"unknown method {method!r}")
    return JointState.from_vector(out)


def max_deviation(state: JointState, params: ModelParams, lambda_taus: Iterable[float],
                  analytic: Propagator = evolve_joint,
                  numeric: Propagator = propagate_numerically) -> float:
    """Largest elementwise amplitude difference between two propagators over a grid."""
    worst = 0.0
    for t in np.asarray(list(lambda_taus), dtype=float):
        spec = EvolutionSpec(params, float(t))
        a = analytic(state, spec).to_vector()
        b = numeric(state, spec).to_vector()
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst
