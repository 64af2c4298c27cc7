import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from previval.errors import ZeroProbabilityError
from previval.evolution import EvolutionSpec
from previval.oracle import propagate_numerically
from previval.retrodiction import (bayes_invert, bayes_invert_curve, predictive_prob,
                                   predictive_prob_curve, retrodictive_matrix_element,
                                   retrodictive_prob, retrodictive_prob_curve,
                                   retrodictive_state_at_prep, retrodictive_state_curve)
from previval.states import (AtomMatrix, AtomState, CoherentField, JointState, ModelParams,
                             PomElement, PreparationEnsemble, default_ensemble, excited, ground,
                             identity_pom, minus_state, plus_state, pom_projector)

RES = ModelParams()
VAC = CoherentField(0.0)
PE = pom_projector(excited(), "e")
PG = pom_projector(ground(), "g")


def at(lt, params=RES):
    return EvolutionSpec(params, lt)


# --- predictive -----------------------------------------------------------

def test_predictive_examples():
    assert predictive_prob(excited(), CoherentField(2.0), PE, at(0.0)) == pytest.approx(1.0, abs=1e-14)
    assert predictive_prob(excited(), VAC, PE, at(math.pi / 4)) == pytest.approx(0.5, abs=1e-15)
    for lt in (0.3, 2.0, 40.0):
        assert predictive_prob(ground(), VAC, PE, at(lt)) == 0.0


@pytest.mark.parametrize("lt", [0.2, 1.0, 2.7])
def test_vacuum_rabi_probabilities(lt):
    assert predictive_prob(excited(), VAC, PE, at(lt)) == pytest.approx(math.cos(lt) ** 2, abs=1e-15)
    assert predictive_prob(excited(), VAC, PG, at(lt)) == pytest.approx(math.sin(lt) ** 2, abs=1e-15)


# --- retrodictive matrix elements and states ------------------------------

def test_matrix_element_at_zero_time():
    f = CoherentField(1.4)
    assert retrodictive_matrix_element(excited(), excited(), PE, f, at(0.0)) == pytest.approx(1.0, abs=1e-14)
    assert retrodictive_matrix_element(ground(), ground(), PE, f, at(0.0)) == 0.0


def test_matrix_element_matches_oracle():
    f = CoherentField(1.4)
    spec = at(2.0)
    for l, m in [(ground(), ground()), (excited(), excited()), (ground(), excited()),
                 (minus_state(0.0), plus_state(0.3))]:
        pl = propagate_numerically(JointState.product(l, f), spec)
        pm = propagate_numerically(JointState.product(m, f), spec)
        ref = np.vdot(pl.c_e, pm.c_e)  # Pi = |e><e| acts on the excited block only
        assert abs(retrodictive_matrix_element(l, m, PE, f, spec) - ref) < 1e-8


@given(st.floats(0, 6), st.floats(0, 6.3), st.floats(-2, 2), st.floats(-50, 50),
       st.floats(0, 3.2), st.floats(0, 6.3))
def test_diagonal_element_nonnegative(mag, phi, delta, lt, theta, chi):
    l = AtomState(math.cos(theta / 2), np.exp(1j * chi) * math.sin(theta / 2))
    pom = pom_projector(minus_state(phi))
    v = retrodictive_matrix_element(l, l, pom, CoherentField(mag, phi), at(lt, ModelParams(delta)))
    assert abs(v.imag) < 1e-12 and v.real >= -1e-12


@pytest.mark.parametrize("pom", [PE, PG, pom_projector(minus_state(0.4)),
                                 PomElement(np.array([[0.3, 0.1j], [-0.1j, 0.6]]))])
def test_retro_state_at_zero_time_is_normalized_pom(pom):
    rho = retrodictive_state_at_prep(pom, CoherentField(2.0), at(0.0))
    assert np.max(np.abs(rho.matrix - pom.matrix / np.trace(pom.matrix))) < 1e-15


def test_retro_state_agrees_with_bayes_diagonals():
    f = CoherentField(1.4)
    rho = retrodictive_state_at_prep(PE, f, at(3.0))
    ens = default_ensemble()
    assert abs(rho.matrix[1, 1].real - bayes_invert(ens, PE, f, at(3.0), "e")) < 1e-10
    assert abs(rho.matrix[0, 0].real - bayes_invert(ens, PE, f, at(3.0), "g")) < 1e-10


@given(st.floats(0, 6), st.floats(0, 6.3), st.floats(-2, 2), st.floats(0, 50),
       st.floats(0, 3.2), st.floats(0, 6.3), st.floats(0.05, 1.0))
def test_retro_state_is_density(mag, phi, delta, lt, theta, chi, weight):
    pom = PomElement(weight * AtomMatrix.from_state(
        AtomState(math.cos(theta / 2), np.exp(1j * chi) * math.sin(theta / 2))).matrix)
    rho = retrodictive_state_at_prep(pom, CoherentField(mag, phi), at(lt, ModelParams(delta)))
    assert np.max(np.abs(rho.matrix - rho.matrix.conj().T)) < 1e-10
    assert abs(rho.trace - 1) < 1e-10
    assert rho.eigenvalues().min() > -1e-10


def test_impossible_outcome_raises():
    with pytest.raises(ZeroProbabilityError) as info:
        retrodictive_state_at_prep(PomElement(np.zeros((2, 2))), CoherentField(1.0), at(1.0))
    assert info.value.lambda_tau == 1.0


# --- retrodictive and Bayes probabilities ---------------------------------

def test_retro_prob_examples():
    ens = default_ensemble()
    f = CoherentField(1.0)
    assert retrodictive_prob(ens, "e", PE, f, at(0.0)) == 1.0
    assert retrodictive_prob(ens, "g", PE, f, at(0.0)) == 0.0
    assert retrodictive_prob(ens, "e", PE, VAC, at(math.pi / 4)) == pytest.approx(1.0, abs=1e-15)


def test_retro_prob_on_collapse_plateau():
    p = retrodictive_prob(default_ensemble(), "g", PE, CoherentField(5.0), at(15.0))
    assert abs(p - 0.5) < 0.05


def test_retro_prob_zero_probability():
    ens = PreparationEnsemble.from_pure({"g": (ground(), 1.0)})
    with pytest.raises(ZeroProbabilityError):
        retrodictive_prob(ens, "g", PE, VAC, at(0.7))
    with pytest.raises(ZeroProbabilityError):
        bayes_invert(ens, PE, VAC, at(0.7), "g")


@pytest.mark.parametrize("pom", [PE, PG, pom_projector(minus_state(1.1))])
def test_bayes_at_zero_time_matches(pom):
    ens = default_ensemble(0.3)
    f = CoherentField(2.0, 1.1)
    for label in ens.labels:
        assert bayes_invert(ens, pom, f, at(0.0), label) == pytest.approx(
            retrodictive_prob(ens, label, pom, f, at(0.0)), abs=1e-15)


def test_single_hypothesis():
    ens = PreparationEnsemble.from_pure({"e": (excited(), 1.0)})
    for pom in (PE, PG, pom_projector(plus_state(0.2))):
        assert bayes_invert(ens, pom, CoherentField(1.4), at(2.0), "e") == 1.0
        assert retrodictive_prob(ens, "e", pom, CoherentField(1.4), at(2.0)) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("alpha", [1.4, 5.0])
@pytest.mark.parametrize("pom", [PE, PG])
def test_bayes_equivalence_pointwise(alpha, pom):
    ens = default_ensemble()
    f = CoherentField(alpha)
    for lt in np.linspace(0, 50, 200):
        for label in ens.labels:
            r = retrodictive_prob(ens, label, pom, f, at(lt))
            b = bayes_invert(ens, pom, f, at(lt), label)
            assert abs(r - b) < 1e-10


def test_unit_pom_returns_prior():
    ens = PreparationEnsemble.from_pure({"e": (excited(), 0.25), "g": (ground(), 0.25),
                                         "m": (minus_state(0.0), 0.5)})
    unit = identity_pom()
    for lt in (0.0, 3.0, 20.0):
        for m in ens.members:
            assert abs(retrodictive_prob(ens, m.label, unit, CoherentField(2.0), at(lt)) - m.prior) < 1e-14


def test_uniform_prior_unit_pom_is_one_over_n():
    ens = default_ensemble()
    for lt in (0.5, 9.0):
        assert abs(retrodictive_prob(ens, "e", identity_pom(), CoherentField(5.0), at(lt)) - 0.5) < 1e-14


@given(st.floats(0, 5), st.floats(0, 50), st.floats(0.01, 0.99), st.floats(0, 6.3))
def test_posteriors_are_complete(mag, lt, prior_e, phi):
    ens = default_ensemble(prior_e)
    f = CoherentField(mag, phi)
    pom = pom_projector(minus_state(phi))
    total = sum(retrodictive_prob(ens, lab, pom, f, at(lt)) for lab in ens.labels)
    assert abs(total - 1) < 1e-12


@given(st.floats(0, 5), st.floats(0, 6.3), st.floats(0, 40))
def test_field_phase_conjugation_symmetry(mag, phi, lt):
    # conjugating the field phase and the measured state gives the same posterior
    ens = default_ensemble()
    a = retrodictive_prob(ens, "e", pom_projector(minus_state(phi)), CoherentField(mag, phi), at(lt))
    b = retrodictive_prob(ens, "e", pom_projector(minus_state(-phi)), CoherentField(mag, -phi), at(lt))
    assert abs(a - b) < 1e-10


# --- grid versions --------------------------------------------------------

def test_curves_match_pointwise():
    ens = default_ensemble(0.4)
    f = CoherentField(1.4, 0.3)
    p = ModelParams(0.5)
    pom = pom_projector(minus_state(0.3))
    ts = np.linspace(0, 25, 51)
    retro = retrodictive_prob_curve(ens, "g", pom, f, p, ts)
    bayes = bayes_invert_curve(ens, pom, f, p, ts, "g")
    pred = predictive_prob_curve(AtomMatrix.from_state(excited()), f, pom, p, ts)
    states = retrodictive_state_curve(pom, f, p, ts)
    for k, t in enumerate(ts):
        spec = at(t, p)
        assert abs(retro[k] - retrodictive_prob(ens, "g", pom, f, spec)) < 1e-13
        assert abs(bayes[k] - bayes_invert(ens, pom, f, spec, "g")) < 1e-13
        assert abs(pred[k] - predictive_prob(excited(), f, pom, spec)) < 1e-13
        assert np.max(np.abs(states[k] - retrodictive_state_at_prep(pom, f, spec).matrix)) < 1e-13


def test_curves_mark_undefined_points_nan():
    ens = PreparationEnsemble.from_pure({"g": (ground(), 1.0)})
    ts = np.array([0.0, 0.5, 1.0])
    assert np.all(np.isnan(retrodictive_prob_curve(ens, "g", PE, VAC, RES, ts)))
    assert np.all(np.isnan(bayes_invert_curve(ens, PE, VAC, RES, ts, "g")))
