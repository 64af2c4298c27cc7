"""Curve scans and collapse / revival / previval diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import lombscargle

from .errors import InvalidStateError
from .evolution import EvolutionSpec, rabi_frequency
from .retrodiction import (bayes_invert_curve, predictive_prob_curve, retrodictive_prob,
                           retrodictive_prob_curve, retrodictive_state_curve)
from .scenarios import Grid, Scenario, priors_dict
from .states import (CoherentField, ModelParams, PreparationEnsemble, default_ensemble,
                     minus_state, pom_projector)

REVIVAL_SNR = 3.0
SMOOTHING_RABI_PERIODS = 3.0


@dataclass(frozen=True, eq=False)
class ScanResult:
    """Sampled curve over lambda_tau. NaN marks a gap (zero-probability conditioning)."""

    lambda_tau: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.lambda_tau, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise InvalidStateError("lambda_tau and values must be 1-d arrays of equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise InvalidStateError("lambda_tau must be strictly increasing")
        if np.any(np.isinf(v)):
            raise InvalidStateError("values must be finite")
        object.__setattr__(self, "lambda_tau", t)
        object.__setattr__(self, "values", v)

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.values)

    @property
    def gaps(self) -> np.ndarray:
        """lambda_tau points where the quantity is undefined."""
        return self.lambda_tau[~self.defined]

    @property
    def step(self) -> float:
        return float(self.metadata.get("step", np.median(np.diff(self.lambda_tau))))

    def window(self, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
        m = (self.lambda_tau >= lo - 1e-12) & (self.lambda_tau <= hi + 1e-12)
        return self.lambda_tau[m], self.values[m]

    def rabi_period(self) -> float:
        """``2 pi / Omega(nbar)`` for the scanned scenario."""
        md = self.metadata
        params = ModelParams(md.get("detuning", 0.0), md.get("coupling", 1.0))
        omega = rabi_frequency(md["alpha"] ** 2, params)
        if omega == 0:
            raise InvalidStateError("no Rabi oscillation to smooth over (Omega(nbar) = 0)")
        return 2 * math.pi / omega


@dataclass(frozen=True)
class StateElement:
    """Selects ``<row|rho_retr(t_p)|col>`` of the retrodictive atomic state."""

    row: int
    col: int
    part: str = "real"


def scan(quantity, grid: Grid, context: Scenario) -> ScanResult:
    """Evaluate a quantity on every grid point of a scenario.

    ``quantity`` is ``"predictive"`` (P(measured | target prepared)),
    ``"retrodictive"`` (P(target prepared | measured)), ``"bayes"`` (the same
    posterior via Bayes' theorem on predictive probabilities), a
    :class:`StateElement`, or ``None`` for the scenario's own direction.
    """
    quantity = context.direction if quantity is None else quantity
    ts = grid.points()
    f, p, pom, ens = context.field, context.params, context.pom, context.ensemble
    if quantity == "predictive":
        values = predictive_prob_curve(ens.member(context.target).state, f, pom, p, ts,
                                       context.tail_tol)
    elif quantity == "retrodictive":
        values = retrodictive_prob_curve(ens, context.target, pom, f, p, ts, context.tail_tol)
    elif quantity == "bayes":
        values = bayes_invert_curve(ens, pom, f, p, ts, context.target, context.tail_tol)
    elif isinstance(quantity, StateElement):
        rho = retrodictive_state_curve(pom, f, p, ts, context.tail_tol)[:, quantity.row, quantity.col]
        values = rho.imag if quantity.part == "imag" else rho.real
    else:
        raise InvalidStateError(f"unknown quantity {quantity!r}")
    metadata = {
        "label": context.label, "quantity": str(quantity), "alpha": context.alpha,
        "phi": context.phi, "detuning": context.detuning, "coupling": context.coupling,
        "ensemble": priors_dict(context.priors), "target": context.target,
        "pom": pom.label, "step": grid.step,
    }
    return ScanResult(ts, values, metadata)


class EnvelopeStats(NamedTuple):
    mean: float
    peak_deviation: float
    period: float | None


def _local_maxima(v: np.ndarray) -> np.ndarray:
    inner = (v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:])
    return np.flatnonzero(inner) + 1


def envelope_stats(result: ScanResult, window: tuple[float, float]) -> EnvelopeStats:
    """Mean, largest excursion from the mean, and local-maximum spacing in a window."""
    t, v = result.window(*window)
    ok = ~np.isnan(v)
    t, v = t[ok], v[ok]
    if t.size < 20:
        raise InvalidStateError(f"window {window} holds {t.size} samples; need at least 20")
    mean = float(v.mean())
    peaks = _local_maxima(v)
    period = float(np.diff(t[peaks]).mean()) if peaks.size >= 2 else None
    return EnvelopeStats(mean, float(np.max(np.abs(v - mean))), period)


def _smoothing_samples(result: ScanResult, smoothing: float | None) -> int:
    width = SMOOTHING_RABI_PERIODS * result.rabi_period() if smoothing is None else smoothing
    return max(1, int(round(width / result.step)))


def deviation_envelope(result: ScanResult, baseline: float,
                       smoothing: float | None = None) -> np.ndarray:
    """Smoothed envelope of ``|value - baseline|``.

    Local maxima of the deviation are joined by linear interpolation, then a
    moving average over ``smoothing`` (default: three Rabi periods at the
    mean photon number) removes the residual fast structure.
    """
    dev = np.abs(np.nan_to_num(result.values - baseline, nan=0.0))
    peaks = _local_maxima(dev)
    if peaks.size >= 2:
        dev = np.interp(result.lambda_tau, result.lambda_tau[peaks], dev[peaks])
    return uniform_filter1d(dev, _smoothing_samples(result, smoothing), mode="nearest")


def find_revival(result: ScanResult, collapse_window: tuple[float, float],
                 search_window: tuple[float, float], smoothing: float | None = None) -> float | None:
    """lambda_tau of the strongest envelope resurgence in ``search_window``.

    The collapse window fixes both the baseline (its mean) and the noise floor
    (its largest envelope value). Returns None when the resurgence does not
    exceed ``REVIVAL_SNR`` times that floor.
    """
    if not (collapse_window[0] < collapse_window[1] <= search_window[0] < search_window[1]):
        raise InvalidStateError("windows must be ordered and disjoint")
    _, cv = result.window(*collapse_window)
    baseline = float(np.nanmean(cv))
    env = deviation_envelope(result, baseline, smoothing)
    t = result.lambda_tau
    in_collapse = (t >= collapse_window[0]) & (t <= collapse_window[1])
    in_search = (t >= search_window[0]) & (t <= search_window[1])
    if not in_search.any():
        raise InvalidStateError("search window holds no samples")
    noise = float(env[in_collapse].max()) if in_collapse.any() else 0.0
    idx = np.flatnonzero(in_search)[np.argmax(env[in_search])]
    if env[idx] <= REVIVAL_SNR * noise or env[idx] <= 0:
        return None
    return float(t[idx])


def slow_oscillation_period(result: ScanResult, window: tuple[float, float],
                            min_period: float | None = None, max_period: float | None = None,
                            smoothing: float | None = None) -> float:
    """Dominant period of the Rabi-smoothed curve (Lomb-Scargle peak).

    The search runs over periods from ``min_period`` (default four smoothing
    widths) to ``max_period`` (default the window length).
    """
    w = _smoothing_samples(result, smoothing)
    smooth = uniform_filter1d(np.nan_to_num(result.values, nan=np.nanmean(result.values)), w,
                              mode="nearest")
    t = result.lambda_tau
    m = (t >= window[0]) & (t <= window[1])
    y = smooth[m] - smooth[m].mean()
    lo = 4 * w * result.step if min_period is None else min_period
    hi = (window[1] - window[0]) if max_period is None else max_period
    if not lo < hi:
        raise InvalidStateError("window too short to resolve a slow oscillation")
    periods = np.linspace(lo, hi, 4000)
    power = lombscargle(t[m], y, 2 * np.pi / periods)
    return float(periods[np.argmax(power)])


def revival_time(coherent: CoherentField, params: ModelParams) -> float:
    """Revival time ``2 pi / (dOmega/dn)`` at ``nbar``: ``pi Omega(nbar) / coupling^2``.

    Reduces to ``2 pi sqrt(nbar)`` on resonance.
    """
    if params.coupling == 0:
        return math.inf
    return math.pi * rabi_frequency(coherent.mean_photon_number, params) / params.coupling**2


def half_revival_time(coherent: CoherentField, params: ModelParams, literal: bool = False) -> float:
    """Half the revival time; where every preparation reaches the minus state.

    ``literal=True`` instead returns ``pi / (2 Omega(nbar))``, a far shorter
    time that does not coincide with half the revival time.
    """
    if literal:
        return math.pi / (2 * rabi_frequency(coherent.mean_photon_number, params))
    return 0.5 * revival_time(coherent, params)


def _minus_pom(coherent: CoherentField):
    return pom_projector(minus_state(coherent.phase), "minus")


def unretrodictability_gap(coherent: CoherentField, spec: EvolutionSpec,
                           ensemble: PreparationEnsemble | None = None) -> float:
    """``max_i |P(i | minus measured) - 1/2|`` over the preparation ensemble.

    Zero means the measurement says nothing about which state was prepared.
    """
    ensemble = default_ensemble() if ensemble is None else ensemble
    pom = _minus_pom(coherent)
    return max(abs(retrodictive_prob(ensemble, lab, pom, coherent, spec) - 0.5)
               for lab in ensemble.labels)


def unretrodictability_curve(coherent: CoherentField, params: ModelParams, lambda_taus,
                             ensemble: PreparationEnsemble | None = None) -> np.ndarray:
    ensemble = default_ensemble() if ensemble is None else ensemble
    pom = _minus_pom(coherent)
    curves = [np.abs(retrodictive_prob_curve(ensemble, lab, pom, coherent, params, lambda_taus) - 0.5)
              for lab in ensemble.labels]
    return np.max(curves, axis=0)


def locate_unretrodictable(coherent: CoherentField, params: ModelParams,
                           window: tuple[float, float], step: float = 0.005) -> float:
    """Grid search for the lambda_tau minimizing the unretrodictability gap."""
    ts = Grid(window[0], window[1], step).points()
    gap = unretrodictability_curve(coherent, params, ts)
    return float(ts[np.nanargmin(gap)])
