import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from previval.errors import InvalidStateError
from previval.evolution import (EvolutionSpec, evolve_joint, predictive_atom_curve,
                                predictive_atom_state, rabi_frequency)
from previval.oracle import propagate_numerically
from previval.states import (AtomMatrix, CoherentField, JointState, ModelParams, excited, ground,
                             minus_state)

from conftest import random_joint_vector

RES = ModelParams(0.0, 1.0)


def vacuum(atom):
    return JointState.product(atom, CoherentField(0.0))


@pytest.mark.parametrize("n, detuning, expected", [(0, 2.0, 2.0), (1, 0.0, 2.0), (25, 0.0, 10.0)])
def test_rabi_frequency(n, detuning, expected):
    assert rabi_frequency(n, ModelParams(detuning, 1.0)) == expected


def test_rabi_frequency_monotone_and_bounded():
    p = ModelParams(-1.7, 0.8)
    om = rabi_frequency(np.arange(50), p)
    assert np.all(np.diff(om) > 0) and om.min() >= abs(p.detuning)
    with pytest.raises(InvalidStateError):
        rabi_frequency(-1, p)


def test_zero_time_is_identity():
    s = JointState.product(minus_state(0.4), CoherentField(1.4))
    out = evolve_joint(s, EvolutionSpec(ModelParams(0.7), 0.0))
    assert np.array_equal(out.to_vector(), s.to_vector())


@pytest.mark.parametrize("lt", [0.1, math.pi / 4, 1.0, 2.5, 17.0])
def test_vacuum_rabi(lt):
    out = evolve_joint(vacuum(excited()), EvolutionSpec(RES, lt))
    assert out.c_e[0] == pytest.approx(math.cos(lt), abs=1e-14)
    assert out.c_g[1] == pytest.approx(math.sin(lt), abs=1e-14)


def test_alpha_1p4_matches_oracle():
    s = JointState.product(ground(), CoherentField(1.4))
    spec = EvolutionSpec(RES, 1.0)
    assert np.max(np.abs(evolve_joint(s, spec).to_vector()
                         - propagate_numerically(s, spec).to_vector())) < 1e-8


def test_unnormalized_input_rejected():
    with pytest.raises(InvalidStateError):
        evolve_joint(JointState([1.0, 0.5], [0.0, 0.0]), EvolutionSpec(RES, 1.0))


def test_predictive_examples():
    f = CoherentField(1.3)
    assert np.allclose(predictive_atom_state(ground(), f, EvolutionSpec(RES, 0.0)).matrix,
                       np.diag([1, 0]), atol=1e-15)
    for lt in (0.3, 4.0, 33.0):
        rho = predictive_atom_state(ground(), CoherentField(0.0), EvolutionSpec(RES, lt))
        assert np.allclose(rho.matrix, np.diag([1, 0]), atol=1e-15)


@pytest.mark.parametrize("lt", [1.0, 10.0, 31.4])
def test_predictive_alpha5_matches_oracle(lt):
    f = CoherentField(5.0)
    spec = EvolutionSpec(RES, lt)
    psi = propagate_numerically(JointState.product(excited(), f), spec).to_vector()
    half = psi.size // 2
    g, e = psi[:half], psi[half:]
    ref = np.array([[np.vdot(g, g), np.vdot(e, g)], [np.vdot(g, e), np.vdot(e, e)]])
    assert np.max(np.abs(predictive_atom_state(excited(), f, spec).matrix - ref)) < 1e-8


# --- properties -----------------------------------------------------------

params_st = st.builds(ModelParams, st.floats(-3, 3), st.floats(0.0, 2.0))


@given(st.integers(0, 2**32 - 1), st.integers(1, 40), params_st, st.floats(0, 50))
def test_unitarity(seed, n_max, params, lt):
    s = JointState.from_vector(random_joint_vector(np.random.default_rng(seed), n_max))
    out = evolve_joint(s, EvolutionSpec(params, lt))
    assert abs(out.norm_squared() - 1) < 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(1, 40), params_st, st.floats(-50, 50))
def test_invertibility(seed, n_max, params, lt):
    s = JointState.from_vector(random_joint_vector(np.random.default_rng(seed), n_max))
    spec = EvolutionSpec(params, lt)
    back = evolve_joint(evolve_joint(s, spec), spec.reversed())
    assert np.max(np.abs(back.to_vector() - s.to_vector())) < 1e-10


@given(st.integers(0, 2**32 - 1), st.integers(1, 40), params_st, st.floats(0, 25), st.floats(0, 25))
def test_composition(seed, n_max, params, t1, t2):
    s = JointState.from_vector(random_joint_vector(np.random.default_rng(seed), n_max))
    once = evolve_joint(s, EvolutionSpec(params, t1 + t2))
    twice = evolve_joint(evolve_joint(s, EvolutionSpec(params, t1)), EvolutionSpec(params, t2))
    assert np.max(np.abs(once.to_vector() - twice.to_vector())) < 1e-10


@given(st.integers(0, 2**32 - 1), st.integers(1, 40), params_st, st.floats(-50, 50))
def test_excitation_pairs_conserved(seed, n_max, params, lt):
    s = JointState.from_vector(random_joint_vector(np.random.default_rng(seed), n_max))
    out = evolve_joint(s, EvolutionSpec(params, lt))

    def pairs(j):
        return np.abs(j.c_g[1:]) ** 2 + np.abs(j.c_e[:-1]) ** 2

    assert np.max(np.abs(pairs(out) - pairs(s))) < 1e-12
    assert abs(abs(out.c_g[0]) ** 2 - abs(s.c_g[0]) ** 2) < 1e-12
    assert abs(abs(out.c_e[-1]) ** 2 - abs(s.c_e[-1]) ** 2) < 1e-12


@given(st.floats(0, 6), st.floats(0, 6.3), st.floats(0, 6.3), st.floats(0, 3.2),
       params_st, st.floats(0, 50))
def test_predictive_state_is_density(mag, phi, theta_phase, theta, params, lt):
    prep = minus_state(0).from_vector([math.cos(theta / 2), np.exp(1j * theta_phase) * math.sin(theta / 2)])
    rho = predictive_atom_state(prep, CoherentField(mag, phi), EvolutionSpec(params, lt))
    assert np.max(np.abs(rho.matrix - rho.matrix.conj().T)) < 1e-10
    assert abs(rho.trace - 1) < 1e-10
    assert rho.eigenvalues().min() > -1e-10


def test_curve_matches_pointwise():
    f = CoherentField(2.2, 0.9)
    p = ModelParams(0.6)
    prep = minus_state(0.2)
    ts = np.linspace(0, 30, 61)
    curve = predictive_atom_curve(AtomMatrix.from_state(prep), f, p, ts)
    for t, rho in zip(ts, curve):
        assert np.max(np.abs(rho - predictive_atom_state(prep, f, EvolutionSpec(p, t)).matrix)) < 1e-13


def test_nonfinite_time_rejected():
    with pytest.raises(InvalidStateError):
        EvolutionSpec(RES, float("inf"))
