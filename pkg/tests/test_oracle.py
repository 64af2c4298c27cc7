import math

import numpy as np
import pytest

from previval.errors import InvalidStateError
from previval.evolution import EvolutionSpec, evolve_joint
from previval.oracle import build_joint_hamiltonian, max_deviation, propagate_numerically
from previval.scenarios import Grid
from previval.states import CoherentField, JointState, ModelParams, excited, ground, minus_state

from conftest import random_joint_vector


def test_uncoupled_hamiltonian_is_diagonal():
    H = build_joint_hamiltonian(ModelParams(1.3, 0.0), 4)
    assert np.array_equal(H, np.diag([-0.65] * 5 + [0.65] * 5))


def test_hamiltonian_structure():
    n_max = 30
    lam, delta = 0.7, -0.4
    H = build_joint_hamiltonian(ModelParams(delta, lam), n_max)
    dim = n_max + 1
    assert np.max(np.abs(H - H.conj().T)) < 1e-14
    expected = np.zeros_like(H)
    for n in range(dim):
        expected[n, n] = -delta / 2
        expected[dim + n, dim + n] = delta / 2
    for n in range(1, dim):
        expected[dim + n - 1, n] = -1j * lam * math.sqrt(n)
        expected[n, dim + n - 1] = 1j * lam * math.sqrt(n)
    # exact: no other couplings anywhere
    assert np.array_equal(H, expected)


@pytest.mark.parametrize("n, half_omega", [(1, 1.0), (25, 5.0)])
def test_dressed_energies(n, half_omega):
    n_max = 30
    H = build_joint_hamiltonian(ModelParams(0.0, 1.0), n_max)
    idx = [n, n_max + 1 + n - 1]  # |g,n>, |e,n-1>
    block = H[np.ix_(idx, idx)]
    assert np.allclose(np.linalg.eigvalsh(block), [-half_omega, half_omega], atol=1e-14)


def test_hamiltonian_rejects_tiny_space():
    with pytest.raises(InvalidStateError):
        build_joint_hamiltonian(ModelParams(), 0)


def test_propagate_zero_time():
    s = JointState.product(minus_state(0.1), CoherentField(1.4))
    out = propagate_numerically(s, EvolutionSpec(ModelParams(0.5), 0.0))
    assert np.max(np.abs(out.to_vector() - s.to_vector())) < 1e-14


@pytest.mark.parametrize("method", ["eigh", "expm"])
@pytest.mark.parametrize("lt", [0.4, 3.0, 11.0])
def test_propagate_vacuum_rabi(method, lt):
    s = JointState.product(excited(), CoherentField(0.0))
    out = propagate_numerically(s, EvolutionSpec(ModelParams(), lt), method=method)
    assert out.c_e[0] == pytest.approx(math.cos(lt), abs=1e-10)
    assert out.c_g[1] == pytest.approx(math.sin(lt), abs=1e-10)


def test_propagate_random_state_norm(rng):
    s = JointState.from_vector(random_joint_vector(rng, 40))
    out = propagate_numerically(s, EvolutionSpec(ModelParams(0.3), 7.0))
    assert abs(out.norm_squared() - 1) < 1e-10


def test_eigh_and_expm_agree(rng):
    s = JointState.from_vector(random_joint_vector(rng, 25))
    spec = EvolutionSpec(ModelParams(0.8, 1.1), 13.0)
    a = propagate_numerically(s, spec, "eigh").to_vector()
    b = propagate_numerically(s, spec, "expm").to_vector()
    assert np.max(np.abs(a - b)) < 1e-10


def test_unknown_method():
    s = JointState.product(ground(), CoherentField(0.0))
    with pytest.raises(ValueError):
        propagate_numerically(s, EvolutionSpec(ModelParams(), 1.0), method="rk4")


def test_max_deviation_free_evolution(rng):
    s = JointState.from_vector(random_joint_vector(rng, 12))
    assert max_deviation(s, ModelParams(0.9, 0.0), np.linspace(0, 40, 81)) < 1e-12


@pytest.mark.parametrize("alpha, delta", [(1.4, 0.0), (5.0, 1.0)])
def test_max_deviation_presets(alpha, delta):
    ts = Grid(0.0, 40.0, 0.05).points()
    for atom in (ground(), excited()):
        s = JointState.product(atom, CoherentField(alpha))
        assert max_deviation(s, ModelParams(delta), ts) < 1e-8


def test_max_deviation_detects_wrong_propagator():
    s = JointState.product(excited(), CoherentField(1.4))

    def wrong(state, spec):
        return evolve_joint(state, EvolutionSpec(spec.params, 1.01 * spec.lambda_tau))

    assert max_deviation(s, ModelParams(), [0.0, 5.0, 10.0], analytic=wrong) > 1e-3
