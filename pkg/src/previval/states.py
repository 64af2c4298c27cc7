"""Atom, field and joint-state types plus measurement and preparation operators.

Conventions used throughout the package:

* Atomic matrices are 2x2 complex arrays in the ``(|g>, |e>)`` order.
* Units: hbar = 1 and every rate (detuning, coupling, Rabi frequency) is
  measured in units of a reference coupling, so the dimensionless time
  ``lambda_tau`` is the elapsed time in those units. With the default
  ``coupling=1`` this is exactly the ``lambda * tau`` axis of the figures.
* A truncated joint state holds ``c_g[n]`` and ``c_e[n]`` for
  ``n = 0 .. n_max``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

import numpy as np
from scipy.stats import poisson

from .errors import InvalidStateError, NoPriorInformationError

DEFAULT_TAIL_TOL = 1e-12
HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12
DENSITY_TOL = 1e-10

GROUND = 0
EXCITED = 1


def _frozen_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if shape is not None and arr.shape != shape:
        raise InvalidStateError(f"expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ModelParams:
    """Detuning and coupling of the Jaynes-Cummings Hamiltonian.

    Both are angular frequencies in units of the reference coupling. A zero
    coupling is accepted and describes an uncoupled atom and field.
    """

    detuning: float = 0.0
    coupling: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.detuning):
            raise InvalidStateError(f"detuning must be finite, got {self.detuning}")
        if not math.isfinite(self.coupling) or self.coupling < 0:
            raise InvalidStateError(f"coupling must be finite and >= 0, got {self.coupling}")


@dataclass(frozen=True)
class CoherentField:
    """Coherent field ``|alpha>`` with ``alpha = magnitude * exp(i * phase)``."""

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.magnitude) or self.magnitude < 0:
            raise InvalidStateError(f"|alpha| must be finite and >= 0, got {self.magnitude}")
        if not math.isfinite(self.phase):
            raise InvalidStateError(f"phase must be finite, got {self.phase}")
        object.__setattr__(self, "phase", float(self.phase) % (2 * math.pi))

    @classmethod
    def from_complex(cls, alpha: complex) -> CoherentField:
        return cls(abs(alpha), math.atan2(alpha.imag, alpha.real) if alpha else 0.0)

    @property
    def alpha(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    @property
    def mean_photon_number(self) -> float:
        return self.magnitude**2


@dataclass(frozen=True)
class AtomState:
    """Normalized pure atomic state ``c_g |g> + c_e |e>``."""

    c_g: complex
    c_e: complex

    def __post_init__(self):
        object.__setattr__(self, "c_g", complex(self.c_g))
        object.__setattr__(self, "c_e", complex(self.c_e))
        norm = abs(self.c_g) ** 2 + abs(self.c_e) ** 2
        if not abs(norm - 1.0) <= NORM_TOL:
            raise InvalidStateError(f"atomic state not normalized (norm^2 = {norm!r})")

    @classmethod
    def from_vector(cls, vec, normalize: bool = False) -> AtomState:
        v = np.asarray(vec, dtype=complex).reshape(2)
        if normalize:
            n = np.linalg.norm(v)
            if n == 0:
                raise InvalidStateError("cannot normalize the zero vector")
            v = v / n
        return cls(v[0], v[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c_g, self.c_e])

    def orthogonal(self) -> AtomState:
        """The partner state completing an orthonormal basis with this one."""
        return AtomState(-np.conj(self.c_e), np.conj(self.c_g))


def ground() -> AtomState:
    return AtomState(1.0, 0.0)


def excited() -> AtomState:
    return AtomState(0.0, 1.0)


def minus_state(phase: float) -> AtomState:
    """``(|g> - exp(i*phase)|e>)/sqrt(2)``: the state every preparation is
    driven into at half the revival time, for field phase ``phase``."""
    s = 1 / math.sqrt(2)
    return AtomState(s, -s * complex(math.cos(phase), math.sin(phase)))


def plus_state(phase: float) -> AtomState:
    """``(|g> + exp(i*phase)|e>)/sqrt(2)``, orthogonal to :func:`minus_state`."""
    s = 1 / math.sqrt(2)
    return AtomState(s, s * complex(math.cos(phase), math.sin(phase)))


@dataclass(frozen=True, eq=False)
class JointState:
    """Truncated atom-field amplitudes ``c_g[n]``, ``c_e[n]`` for n = 0..n_max."""

    c_g: np.ndarray
    c_e: np.ndarray

    def __post_init__(self):
        cg = _frozen_array(self.c_g)
        ce = _frozen_array(self.c_e)
        if cg.ndim != 1 or cg.shape != ce.shape:
            raise InvalidStateError("c_g and c_e must be 1-d arrays of equal length")
        if cg.size < 2:
            raise InvalidStateError("n_max must be at least 1")
        object.__setattr__(self, "c_g", cg)
        object.__setattr__(self, "c_e", ce)

    @classmethod
    def product(cls, atom: AtomState, coherent: CoherentField, n_max: int | None = None,
                tail_tol: float = DEFAULT_TAIL_TOL) -> JointState:
        """``|atom> (x) |alpha>`` truncated at ``n_max`` and renormalized."""
        a = truncated_field(coherent, tail_tol, n_max)
        return cls(atom.c_g * a, atom.c_e * a)

    @classmethod
    def from_vector(cls, vec) -> JointState:
        """Inverse of :meth:`to_vector`."""
        v = np.asarray(vec, dtype=complex)
        if v.ndim != 1 or v.size % 2:
            raise InvalidStateError("joint vector must be 1-d with even length")
        half = v.size // 2
        return cls(v[:half], v[half:])

    @property
    def n_max(self) -> int:
        return self.c_g.size - 1

    def to_vector(self) -> np.ndarray:
        """Flat amplitudes ordered ``|g,0>..|g,n_max>, |e,0>..|e,n_max>``."""
        return np.concatenate([self.c_g, self.c_e])

    def norm_squared(self) -> float:
        return float(np.vdot(self.c_g, self.c_g).real + np.vdot(self.c_e, self.c_e).real)

    def check_normalized(self, tol: float = NORM_TOL) -> None:
        n2 = self.norm_squared()
        if not abs(n2 - 1.0) <= tol:
            raise InvalidStateError(f"joint state not normalized (norm^2 = {n2!r})")

    def reduced_atom_matrix(self) -> np.ndarray:
        """Partial trace over the field, as a raw 2x2 array."""
        cg, ce = self.c_g, self.c_e
        off = np.vdot(ce, cg)  # sum_n c_g[n] * conj(c_e[n])
        return np.array([[np.vdot(cg, cg), off], [np.conj(off), np.vdot(ce, ce)]])


@dataclass(frozen=True, eq=False)
class AtomMatrix:
    """Hermitian 2x2 operator on the atom (density or preparation operator)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen_array(self.matrix, (2, 2))
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("matrix is not Hermitian")
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @classmethod
    def from_state(cls, state: AtomState) -> AtomMatrix:
        v = state.vector
        return cls(np.outer(v, v.conj()))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def check_density(self, tol: float = DENSITY_TOL) -> None:
        if abs(self.trace - 1.0) > tol:
            raise InvalidStateError(f"density matrix trace is {self.trace!r}")
        if self.eigenvalues().min() < -tol:
            raise InvalidStateError("density matrix is not positive semidefinite")

    def pure_decomposition(self) -> list[tuple[float, AtomState]]:
        """Eigen-decomposition into weighted pure states (zero weights dropped)."""
        w, v = np.linalg.eigh(self.matrix)
        return [(float(wk), AtomState.from_vector(v[:, k], normalize=True))
                for k, wk in enumerate(w) if wk > 0]


@dataclass(frozen=True, eq=False)
class PomElement:
    """One element of a probability operator measure on the atom."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = _frozen_array(self.matrix, (2, 2))
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError(f"POM element {self.label!r} is not Hermitian")
        w = np.linalg.eigvalsh(m)
        if w.min() < -HERMITIAN_TOL or w.max() > 1 + HERMITIAN_TOL:
            raise InvalidStateError(f"POM element {self.label!r} has eigenvalues outside [0, 1]")
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def is_complete(elements: Iterable[PomElement], tol: float = 1e-10) -> bool:
    """True if the elements sum to the identity within ``tol``."""
    total = sum((e.matrix for e in elements), np.zeros((2, 2), complex))
    return bool(np.max(np.abs(total - np.eye(2))) <= tol)


def pom_projector(state: AtomState, label: str = "") -> PomElement:
    """Von Neumann POM element ``|psi><psi|``."""
    v = state.vector
    return PomElement(np.outer(v, v.conj()), label)


def identity_pom(label: str = "1") -> PomElement:
    """The trivial measurement element (no information)."""
    return PomElement(np.eye(2), label)


class EnsembleMember(NamedTuple):
    label: str
    state: AtomMatrix
    prior: float


@dataclass(frozen=True)
class PreparationEnsemble:
    """Possible preparations with their prior probabilities."""

    members: tuple[EnsembleMember, ...] = field(default_factory=tuple)

    def __post_init__(self):
        members = tuple(EnsembleMember(str(lab), st if isinstance(st, AtomMatrix) else AtomMatrix(st),
                                       float(p))
                        for lab, st, p in self.members)
        labels = [m.label for m in members]
        if len(set(labels)) != len(labels):
            raise InvalidStateError(f"duplicate ensemble labels in {labels}")
        for m in members:
            if not (m.prior >= 0 and math.isfinite(m.prior)):
                raise InvalidStateError(f"prior for {m.label!r} must be >= 0, got {m.prior}")
            m.state.check_density()
        if members and abs(sum(m.prior for m in members) - 1.0) > 1e-12:
            raise InvalidStateError("ensemble priors must sum to 1")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_pure(cls, items: Mapping[str, tuple[AtomState, float]]) -> PreparationEnsemble:
        return cls(tuple((lab, AtomMatrix.from_state(st), p) for lab, (st, p) in items.items()))

    @property
    def labels(self) -> list[str]:
        return [m.label for m in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def member(self, label: str) -> EnsembleMember:
        for m in self.members:
            if m.label == label:
                return m
        raise InvalidStateError(f"no ensemble member labelled {label!r}")

    def device_operator(self, label: str) -> np.ndarray:
        """Preparation-device operator ``P(i) * rho_i``."""
        m = self.member(label)
        return m.prior * m.state.matrix


def default_ensemble(prior_e: float = 0.5) -> PreparationEnsemble:
    """Excited or ground preparation; equal priors unless told otherwise."""
    return PreparationEnsemble.from_pure({"e": (excited(), prior_e), "g": (ground(), 1.0 - prior_e)})


def apriori_operator(ensemble: PreparationEnsemble) -> AtomMatrix:
    """Prior-weighted sum of the preparation density operators."""
    if not ensemble.members:
        raise NoPriorInformationError("empty ensemble: no prior information supplied")
    return AtomMatrix(sum(m.prior * m.state.matrix for m in ensemble.members))


def coherent_coefficients(coherent: CoherentField, n_max: int) -> np.ndarray:
    """Number-state amplitudes ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)``, n = 0..n_max."""
    if n_max < 0:
        raise InvalidStateError(f"n_max must be >= 0, got {n_max}")
    alpha = coherent.alpha
    a = np.empty(n_max + 1, dtype=complex)
    a[0] = math.exp(-coherent.mean_photon_number / 2)
    # recurrence keeps every intermediate bounded, unlike alpha**n / n!
    for n in range(1, n_max + 1):
        a[n] = a[n - 1] * alpha / math.sqrt(n)
    return a


def choose_truncation(coherent: CoherentField, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest ``n_max >= 1`` whose Poisson photon-number tail beyond it is below ``tail_tol``."""
    if not 0 < tail_tol < 1:
        raise InvalidStateError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    return _poisson_cutoff(coherent.mean_photon_number, tail_tol)


@lru_cache(maxsize=256)
def _poisson_cutoff(nbar: float, tail_tol: float) -> int:
    if nbar == 0:
        return 1
    hi = max(8, int(math.ceil(nbar + 10 * math.sqrt(nbar))))
    while True:
        ks = np.arange(1, hi + 1)
        ok = np.flatnonzero(poisson.sf(ks, nbar) < tail_tol)
        if ok.size:
            return int(ks[ok[0]])
        hi *= 2


@lru_cache(maxsize=256)
def truncated_field(coherent: CoherentField, tail_tol: float = DEFAULT_TAIL_TOL,
                    n_max: int | None = None) -> np.ndarray:
    """Coherent amplitudes truncated at ``n_max`` (default: :func:`choose_truncation`)
    and renormalized. The returned array is read-only and shared."""
    if n_max is None:
        n_max = choose_truncation(coherent, tail_tol)
    a = coherent_coefficients(coherent, n_max)
    a /= np.linalg.norm(a)
    a.setflags(write=False)
    return a
