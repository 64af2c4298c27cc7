"""Scan scenarios, lambda_tau grids, figure presets and the key-value config format."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .errors import ConfigError, InvalidStateError
from .states import (DEFAULT_TAIL_TOL, AtomMatrix, CoherentField, ModelParams, PomElement,
                     PreparationEnsemble, excited, ground, minus_state, plus_state,
                     pom_projector)

DIRECTIONS = ("predictive", "retrodictive")
NAMED_OUTCOMES = ("e", "g", "minus", "plus")


def fmt(x: float) -> str:
    """12-significant-digit rendering shared by CSV rows and parameter echoes."""
    x = float(x)
    return "0" if x == 0 else f"{x:.12g}"


@dataclass(frozen=True)
class Grid:
    """Uniform lambda_tau grid ``start, start+step, ..., <= stop``."""

    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise InvalidStateError(f"grid step must be > 0, got {self.step}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.stop < self.start:
            raise InvalidStateError(f"empty grid range [{self.start}, {self.stop}]")

    def points(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        # start + k*step rather than a running sum keeps the points reproducible
        return self.start + self.step * np.arange(count)


def named_state(name: str, phase: float):
    if name == "e":
        return excited()
    if name == "g":
        return ground()
    if name == "minus":
        return minus_state(phase)
    if name == "plus":
        return plus_state(phase)
    raise InvalidStateError(f"unknown atomic state {name!r}")


@dataclass(frozen=True)
class Scenario:
    """Everything needed to produce one probability curve.

    ``direction="retrodictive"`` gives ``P(target prepared | measured)``;
    ``direction="predictive"`` gives ``P(measured | target prepared)``.
    Ensemble members are named atomic states (``e``, ``g``, ``minus``,
    ``plus``); ``minus``/``plus`` take the field phase.
    """

    label: str = "custom"
    alpha: float = 5.0
    phi: float = 0.0
    detuning: float = 0.0
    coupling: float = 1.0
    direction: str = "retrodictive"
    target: str = "g"
    measured: str = "e"
    custom_pom: tuple[complex, complex, complex, complex] | None = None
    priors: tuple[tuple[str, float], ...] = (("e", 0.5), ("g", 0.5))
    grid: Grid = field(default_factory=lambda: Grid(0.0, 50.0, 0.02))
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise InvalidStateError(f"direction must be one of {DIRECTIONS}")
        if self.measured == "custom":
            if self.custom_pom is None:
                raise InvalidStateError("measured = custom requires a pom matrix")
        elif self.measured not in NAMED_OUTCOMES:
            raise InvalidStateError(f"measured must be one of {NAMED_OUTCOMES} or custom")
        if not 0 < self.tail_tol < 1:
            raise InvalidStateError(f"tail_tol must lie in (0, 1), got {self.tail_tol}")
        if self.target not in dict(self.priors):
            raise InvalidStateError(f"target {self.target!r} is not an ensemble member")
        # fail early on invalid physics
        self.field, self.params, self.pom, self.ensemble  # noqa: B018

    @property
    def field(self) -> CoherentField:
        return CoherentField(self.alpha, self.phi)

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.detuning, self.coupling)

    @property
    def pom(self) -> PomElement:
        if self.measured == "custom":
            return PomElement(np.array(self.custom_pom, dtype=complex).reshape(2, 2), "custom")
        return pom_projector(named_state(self.measured, self.phi), self.measured)

    @property
    def ensemble(self) -> PreparationEnsemble:
        return PreparationEnsemble(tuple(
            (name, AtomMatrix.from_state(named_state(name, self.phi)), p) for name, p in self.priors))

    def parameter_lines(self) -> list[str]:
        """``key = value`` lines; valid config syntax that round-trips through :func:`parse_config`."""
        lines = [
            f"label = {self.label}",
            f"alpha = {fmt(self.alpha)}",
            f"phi = {fmt(self.phi)}",
            f"detuning = {fmt(self.detuning)}",
            f"coupling = {fmt(self.coupling)}",
            f"direction = {self.direction}",
            f"target = {self.target}",
            f"measured = {self.measured}",
        ]
        if self.custom_pom is not None:
            lines.append("pom = " + ", ".join(_fmt_complex(z) for z in self.custom_pom))
        lines += [
            "priors = " + ", ".join(f"{k}:{fmt(p)}" for k, p in self.priors),
            f"grid_start = {fmt(self.grid.start)}",
            f"grid_stop = {fmt(self.grid.stop)}",
            f"grid_step = {fmt(self.grid.step)}",
            f"tail_tol = {fmt(self.tail_tol)}",
        ]
        return lines


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return fmt(z.real)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j"


_FIG_GRID_LONG = Grid(0.0, 50.0, 0.02)
_FIG_GRID_SHORT = Grid(0.0, 25.0, 0.02)

PRESETS: dict[str, Scenario] = {
    # P(g prepared | e measured), alpha = 5, resonant
    "fig1": Scenario("fig1", 5.0, 0.0, 0.0, 1.0, "retrodictive", "g", "e", grid=_FIG_GRID_LONG),
    "fig2a": Scenario("fig2a", 1.4, 0.0, 0.0, 1.0, "retrodictive", "g", "e", grid=_FIG_GRID_SHORT),
    # P(g measured | e prepared)
    "fig2b": Scenario("fig2b", 1.4, 0.0, 0.0, 1.0, "predictive", "e", "g", grid=_FIG_GRID_SHORT),
    # P(e measured | g prepared)
    "fig2c": Scenario("fig2c", 1.4, 0.0, 0.0, 1.0, "predictive", "g", "e", grid=_FIG_GRID_SHORT),
    # P(e prepared | minus-state measured)
    "fig3": Scenario("fig3", 5.0, 0.0, 0.0, 1.0, "retrodictive", "e", "minus", grid=_FIG_GRID_LONG),
}


_KEYS = {"label", "alpha", "phi", "detuning", "coupling", "direction", "target", "measured",
         "pom", "priors", "grid_start", "grid_stop", "grid_step", "tail_tol"}


def _number(text: str, key: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}", line) from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite", line)
    return value


def parse_config(text: str) -> Scenario:
    """Parse the flat ``key = value`` format (``#`` starts a comment).

    Unknown keys, duplicates and malformed values raise :class:`ConfigError`
    carrying the 1-based line number.
    """
    values: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        values[key] = (value, lineno)

    kwargs: dict = {}
    for key in ("alpha", "phi", "detuning", "coupling", "tail_tol"):
        if key in values:
            kwargs[key] = _number(values[key][0], key, values[key][1])
    for key in ("label", "direction", "target", "measured"):
        if key in values:
            kwargs[key] = values[key][0]
    if "pom" in values:
        text_, ln = values["pom"]
        try:
            entries = tuple(complex(s.replace(" ", "")) for s in text_.split(","))
        except ValueError:
            raise ConfigError(f"pom: cannot parse {text_!r} as four complex numbers", ln) from None
        if len(entries) != 4:
            raise ConfigError("pom: expected four comma-separated entries (row-major 2x2)", ln)
        kwargs["custom_pom"] = entries
    if "priors" in values:
        text_, ln = values["priors"]
        kwargs["priors"] = tuple(_parse_prior(item, ln) for item in text_.split(","))
    default = Scenario.__dataclass_fields__["grid"].default_factory()
    g = {k: (_number(values[k][0], k, values[k][1]) if k in values else None)
         for k in ("grid_start", "grid_stop", "grid_step")}
    try:
        kwargs["grid"] = Grid(g["grid_start"] if g["grid_start"] is not None else default.start,
                              g["grid_stop"] if g["grid_stop"] is not None else default.stop,
                              g["grid_step"] if g["grid_step"] is not None else default.step)
        return Scenario(**kwargs)
    except InvalidStateError as exc:
        line = _blame_line(str(exc), values)
        raise ConfigError(str(exc), line) from None


_PRIOR = re.compile(r"^\s*(\w+)\s*:\s*(\S+)\s*$")


def _parse_prior(item: str, line: int) -> tuple[str, float]:
    m = _PRIOR.match(item)
    if not m:
        raise ConfigError(f"priors: expected 'name:probability', got {item.strip()!r}", line)
    name = m.group(1)
    if name not in NAMED_OUTCOMES:
        raise ConfigError(f"priors: unknown preparation {name!r}", line)
    return name, _number(m.group(2), "priors", line)


_BLAME = (
    ("grid", ("grid_step", "grid_stop", "grid_start")),
    ("prior", ("priors",)),
    ("ensemble", ("priors",)),
    ("alpha", ("alpha",)),
    ("phase", ("phi",)),
    ("detuning", ("detuning",)),
    ("coupling", ("coupling",)),
    ("direction", ("direction",)),
    ("target", ("target", "priors")),
    ("measured", ("measured",)),
    ("POM", ("pom", "measured")),
    ("tail_tol", ("tail_tol",)),
)


def _blame_line(message: str, values: dict[str, tuple[str, int]]) -> int | None:
    """Best-effort line number for a semantic validation failure."""
    for word, keys in _BLAME:
        if word in message:
            for key in keys:
                if key in values:
                    return values[key][1]
    return None


def scenario_from_preset(name: str, **overrides) -> Scenario:
    try:
        base = PRESETS[name]
    except KeyError:
        raise InvalidStateError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(base, **overrides) if overrides else base


def priors_dict(priors: Iterable[tuple[str, float]]) -> dict[str, float]:
    return {k: p for k, p in priors}
