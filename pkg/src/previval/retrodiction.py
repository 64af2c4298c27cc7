"""Predictive and retrodictive conditional probabilities.

The retrodictive route evolves the measurement element backwards and
contracts it with the preparation-device operators. The Bayes route is built
only from forward predictive probabilities and exists as an independent
cross-check of the first.

The unmeasured field enters through the unit operator on the field; it is
never materialized. Tracing it out is the joint-space inner product
``<psi_l(tau)| (Pi (x) 1) |psi_m(tau)>``.
"""
from __future__ import annotations

import numpy as np

from .errors import ZeroProbabilityError
from .evolution import (EvolutionSpec, cross_reduced_curve, evolve_joint, predictive_atom_curve,
                        predictive_atom_state)
from .states import (DEFAULT_TAIL_TOL, AtomMatrix, AtomState, CoherentField, JointState,
                     ModelParams, PomElement, PreparationEnsemble, apriori_operator, excited,
                     ground)

ZERO_PROBABILITY_FLOOR = 1e-300

_G = np.array([1.0, 0.0], dtype=complex)
_E = np.array([0.0, 1.0], dtype=complex)


def predictive_prob(prep: AtomState, coherent: CoherentField, pom: PomElement,
                    spec: EvolutionSpec, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """``P(j|i) = Tr(rho_i(t_m) Pi_j)`` with the field left unmeasured."""
    rho = predictive_atom_state(prep, coherent, spec, tail_tol)
    return float(np.trace(rho.matrix @ pom.matrix).real)


def _stack(psi: JointState) -> np.ndarray:
    return np.vstack([psi.c_g, psi.c_e])


def retrodictive_matrix_element(l: AtomState, m: AtomState, pom: PomElement,
                                coherent: CoherentField, spec: EvolutionSpec,
                                tail_tol: float = DEFAULT_TAIL_TOL) -> complex:
    """Unnormalized ``<l| rho_retr(t_p) |m>``, i.e.
    ``<alpha|<l| U^dagger (Pi (x) 1) U |m>|alpha>``."""
    psi_l = _stack(evolve_joint(JointState.product(l, coherent, tail_tol=tail_tol), spec))
    psi_m = _stack(evolve_joint(JointState.product(m, coherent, tail_tol=tail_tol), spec))
    return complex(np.einsum("an,ab,bn->", psi_l.conj(), pom.matrix, psi_m))


def _normalize_retro(M: np.ndarray) -> np.ndarray:
    M = 0.5 * (M + M.conj().T)
    return M / np.trace(M).real


def retrodictive_state_at_prep(pom: PomElement, coherent: CoherentField, spec: EvolutionSpec,
                               tail_tol: float = DEFAULT_TAIL_TOL) -> AtomMatrix:
    """Retrodictive atomic density operator at the preparation time.

    No preparation information is assumed (atomic prior proportional to the
    unit operator); trace normalization fixes the proportionality constant.
    """
    g, e = ground(), excited()
    M = np.empty((2, 2), dtype=complex)
    M[0, 0] = retrodictive_matrix_element(g, g, pom, coherent, spec, tail_tol)
    M[1, 1] = retrodictive_matrix_element(e, e, pom, coherent, spec, tail_tol)
    M[0, 1] = retrodictive_matrix_element(g, e, pom, coherent, spec, tail_tol)
    M[1, 0] = np.conj(M[0, 1])
    if np.max(np.abs(M)) <= ZERO_PROBABILITY_FLOOR:
        raise ZeroProbabilityError(
            f"measurement outcome {pom.label!r} has zero probability at lambda_tau={spec.lambda_tau}",
            spec.lambda_tau)
    return AtomMatrix(_normalize_retro(M))


def retrodictive_prob(ensemble: PreparationEnsemble, label: str, pom: PomElement,
                      coherent: CoherentField, spec: EvolutionSpec,
                      tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """``P(i|j) = Tr(Lambda_i rho_retr) / Tr(Lambda rho_retr)``."""
    lam_i = ensemble.device_operator(label)
    lam = apriori_operator(ensemble).matrix
    rho = retrodictive_state_at_prep(pom, coherent, spec, tail_tol).matrix
    den = np.trace(lam @ rho).real
    if den <= ZERO_PROBABILITY_FLOOR:
        raise ZeroProbabilityError(
            f"outcome {pom.label!r} is impossible for every preparation "
            f"at lambda_tau={spec.lambda_tau}", spec.lambda_tau)
    return float(np.trace(lam_i @ rho).real / den)


def _likelihood(state: AtomMatrix, coherent, pom, spec, tail_tol) -> float:
    return sum(w * predictive_prob(v, coherent, pom, spec, tail_tol)
               for w, v in state.pure_decomposition())


def bayes_invert(ensemble: PreparationEnsemble, pom: PomElement, coherent: CoherentField,
                 spec: EvolutionSpec, label: str, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """``P(i|j) = P(j|i) P(i) / sum_k P(j|k) P(k)`` from predictive probabilities only.

    Mixed ensemble members are split into their eigenstates first.
    """
    ensemble.member(label)
    joint = {m.label: m.prior * _likelihood(m.state, coherent, pom, spec, tail_tol)
             for m in ensemble.members}
    den = sum(joint.values())
    if den <= ZERO_PROBABILITY_FLOOR:
        raise ZeroProbabilityError(
            f"outcome {pom.label!r} is impossible for every preparation "
            f"at lambda_tau={spec.lambda_tau}", spec.lambda_tau)
    return joint[label] / den


# Grid versions. Undefined points (zero-probability conditioning) come back
# as NaN so scans can mark them as gaps.

def predictive_prob_curve(prep: AtomMatrix, coherent: CoherentField, pom: PomElement,
                          params: ModelParams, lambda_taus,
                          tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    rho = predictive_atom_curve(prep, coherent, params, lambda_taus, tail_tol)
    return np.einsum("tab,ba->t", rho, pom.matrix).real


def retrodictive_state_curve(pom: PomElement, coherent: CoherentField, params: ModelParams,
                             lambda_taus, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """Normalized retrodictive states ``(T, 2, 2)`` at the preparation time."""
    def sandwich(l, m):
        # <psi_l| Pi |psi_m> = Tr(Pi R) with R = Tr_f |psi_m><psi_l|
        R = cross_reduced_curve(m, l, coherent, params, lambda_taus, tail_tol)
        return np.einsum("ab,tba->t", pom.matrix, R)

    gg = sandwich(_G, _G).real
    ee = sandwich(_E, _E).real
    ge = sandwich(_G, _E)
    M = np.empty((gg.size, 2, 2), dtype=complex)
    M[:, 0, 0], M[:, 1, 1] = gg, ee
    M[:, 0, 1], M[:, 1, 0] = ge, ge.conj()
    tr = gg + ee
    dead = np.max(np.abs(M), axis=(1, 2)) <= ZERO_PROBABILITY_FLOOR
    with np.errstate(invalid="ignore", divide="ignore"):
        out = M / tr[:, None, None]
    out[dead] = np.nan
    return out


def retrodictive_prob_curve(ensemble: PreparationEnsemble, label: str, pom: PomElement,
                            coherent: CoherentField, params: ModelParams, lambda_taus,
                            tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    lam_i = ensemble.device_operator(label)
    lam = apriori_operator(ensemble).matrix
    rho = retrodictive_state_curve(pom, coherent, params, lambda_taus, tail_tol)
    num = np.einsum("ab,tba->t", lam_i, rho).real
    den = np.einsum("ab,tba->t", lam, rho).real
    with np.errstate(invalid="ignore", divide="ignore"):
        out = num / den
    out[~(den > ZERO_PROBABILITY_FLOOR)] = np.nan
    return out


def bayes_invert_curve(ensemble: PreparationEnsemble, pom: PomElement, coherent: CoherentField,
                       params: ModelParams, lambda_taus, label: str,
                       tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    ensemble.member(label)
    joint = {m.label: m.prior * predictive_prob_curve(m.state, coherent, pom, params,
                                                      lambda_taus, tail_tol)
             for m in ensemble.members}
    den = sum(joint.values())
    with np.errstate(invalid="ignore", divide="ignore"):
        out = joint[label] / den
    out[~(den > ZERO_PROBABILITY_FLOOR)] = np.nan
    return out
