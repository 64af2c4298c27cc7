"""Cross-checks run by ``previval run --validate`` and ``previval check``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .oracle import max_deviation
from .retrodiction import bayes_invert_curve, retrodictive_prob_curve
from .scenarios import Grid, Scenario, named_state
from .states import (CoherentField, JointState, ModelParams, PreparationEnsemble,
                     default_ensemble, excited, ground, minus_state, pom_projector)

BAYES_TOL = 1e-10
ORACLE_TOL = 1e-8

SWEEP_ALPHAS = (0.0, 1.4, 5.0)
SWEEP_DETUNINGS = (0.0, 1.0)
SWEEP_GRID = Grid(0.0, 50.0, 0.1)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value < self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: max deviation {self.value:.3e} (tolerance {self.tolerance:.0e})"


def bayes_deviation(ensemble: PreparationEnsemble, pom, coherent: CoherentField,
                    params: ModelParams, lambda_taus) -> float:
    """Largest |retrodictive - Bayes| posterior over all members and defined points."""
    worst = 0.0
    for label in ensemble.labels:
        r = retrodictive_prob_curve(ensemble, label, pom, coherent, params, lambda_taus)
        b = bayes_invert_curve(ensemble, pom, coherent, params, lambda_taus, label)
        if not np.array_equal(np.isnan(r), np.isnan(b)):
            return np.inf
        ok = ~np.isnan(r)
        if ok.any():
            worst = max(worst, float(np.max(np.abs(r[ok] - b[ok]))))
    return worst


def oracle_deviation(preparations, coherent: CoherentField, params: ModelParams,
                     lambda_taus, tail_tol: float = 1e-12) -> float:
    """Largest amplitude gap between the analytic and dense propagators."""
    return max(max_deviation(JointState.product(s, coherent, tail_tol=tail_tol), params, lambda_taus)
               for s in preparations)


def validate_scenario(scenario: Scenario) -> list[CheckResult]:
    ts = scenario.grid.points()
    preps = [named_state(name, scenario.phi) for name, _ in scenario.priors]
    return [
        CheckResult("bayes equivalence",
                    bayes_deviation(scenario.ensemble, scenario.pom, scenario.field,
                                    scenario.params, ts), BAYES_TOL),
        CheckResult("oracle equivalence",
                    oracle_deviation(preps, scenario.field, scenario.params, ts,
                                     scenario.tail_tol), ORACLE_TOL),
    ]


def sweep_cases():
    """(alpha, detuning, pom) combinations of the full validation sweep."""
    for alpha, delta in itertools.product(SWEEP_ALPHAS, SWEEP_DETUNINGS):
        f = CoherentField(alpha)
        poms = (pom_projector(excited(), "e"), pom_projector(ground(), "g"),
                pom_projector(minus_state(f.phase), "minus"))
        for pom in poms:
            yield f, ModelParams(delta), pom


def full_check() -> list[CheckResult]:
    """Bayes and oracle equivalence over the whole validation sweep."""
    ts = SWEEP_GRID.points()
    ens = default_ensemble()
    bayes = max(bayes_deviation(ens, pom, f, p, ts) for f, p, pom in sweep_cases())
    oracle = 0.0
    for alpha, delta in itertools.product(SWEEP_ALPHAS, SWEEP_DETUNINGS):
        f = CoherentField(alpha)
        oracle = max(oracle, oracle_deviation([ground(), excited(), minus_state(f.phase)], f,
                                              ModelParams(delta), ts))
    return [CheckResult("bayes equivalence sweep", bayes, BAYES_TOL),
            CheckResult("oracle equivalence sweep", oracle, ORACLE_TOL)]

