"""Scenario model: config validation, observable recording and ``run_scenario``."""
from __future__ import annotations

import logging
import math
import re
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import observables as obs
from gates import FloquetParams, LayerOrder, evolve
from hamiltonian import build_hamiltonian, cycle_hamiltonian, exact_trajectory
from statevector import StateVector, basis_state, validate_bits

logger = logging.getLogger(__name__)

__version__ = "1.0.0"


class Engine(str, Enum):
    FLOQUET = "FLOQUET"
    HAMILTONIAN = "HAMILTONIAN"


class Generator(str, Enum):
    LITERAL = "literal"  # -J sz sz as printed, resonant at h = J
    CYCLE = "cycle"  # +J sz sz, the small-angle generator of the cycle


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class ObservableSpec:
    name: str
    indices: tuple[int, ...] | None = None


@dataclass(frozen=True)
class OutputSpec:
    format: OutputFormat = OutputFormat.CSV
    path: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    engine: Engine
    params: FloquetParams
    initial: str
    cycles: int
    observables: tuple[ObservableSpec, ...]
    shots: int | None = None
    seed: int | None = None
    output: OutputSpec = field(default_factory=OutputSpec)
    generator: Generator = Generator.LITERAL

    def __post_init__(self):
        if len(self.initial) != self.params.n:
            raise ValueError(f"initial: ket {self.initial!r} has {len(self.initial)} qubits, params.n is {self.params.n}")
        if self.cycles < 0:
            raise ValueError(f"cycles: must be >= 0, got {self.cycles}")
        if not self.observables:
            raise ValueError("observables: at least one observable is required")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots: must be >= 1, got {self.shots}")
        if self.seed is not None and self.seed < 0:
            raise ValueError(f"seed: must be >= 0, got {self.seed}")
        for i, spec in enumerate(self.observables):
            if spec.name != "spread_metric":
                continue
            # a sampled cycle can hold no kink at all, leaving the metric undefined
            if self.shots is not None:
                raise ValueError(f"observables[{i}].name: spread_metric needs the exact kink profile and cannot be combined with shots")
            if len(set(self.initial)) == 1:
                raise ValueError(f"initial: ket {self.initial!r} has no kink, observables[{i}] spread_metric is measured from one")


@dataclass(frozen=True)
class ObservableRecord:
    cycle: int
    observable: str
    index: int | None
    value: float

    def sort_key(self) -> tuple:
        return (self.cycle, self.observable, -1 if self.index is None else self.index)


@dataclass
class RunManifest:
    config: ScenarioConfig
    version: str
    wall_clock: float
    records: list[ObservableRecord]

    def series(self, observable: str, index: int | None = None) -> list[float]:
        """Values of one observable component ordered by cycle."""
        return [r.value for r in self.records if r.observable == observable and r.index == index]


_CONFIG_KEYS = {"name", "engine", "params", "initial", "cycles", "observables", "shots", "seed", "output", "generator"}
_PARAM_KEYS = {"J", "mu", "h", "n", "layer_order"}
_OBSERVABLE_KEYS = {"name", "indices"}
_OUTPUT_KEYS = {"format", "path"}
_PI_PATTERN = re.compile(r"([+-]?)(\d+(?:\.\d*)?)?\*?pi(?:/(\d+(?:\.\d*)?))?")


def parse_angle(value: Any, path: str) -> float:
    """Number, or a multiple of pi such as ``pi/4``, ``-pi/10``, ``2*pi/5``."""
    if isinstance(value, bool):
        raise ValueError(f"{path}: expected an angle, got {value!r}")
    if isinstance(value, (int, float)):
        angle = float(value)
    elif isinstance(value, str):
        text = value.replace(" ", "").lower()
        match = _PI_PATTERN.fullmatch(text)
        if match:
            sign, coefficient, denominator = match.groups()
            angle = (-1.0 if sign == "-" else 1.0) * float(coefficient or 1) * math.pi / float(denominator or 1)
        else:
            try:
                angle = float(text)
            except ValueError as exc:
                raise ValueError(f"{path}: cannot read {value!r} as an angle") from exc
    else:
        raise ValueError(f"{path}: expected an angle, got {type(value).__name__}")
    if not math.isfinite(angle):
        raise ValueError(f"{path}: angle must be finite, got {value!r}")
    return angle


def _check_keys(data: Any, allowed: set[str], path: str):
    if not isinstance(data, dict):
        raise ValueError(f"{path or 'config'}: expected a mapping, got {type(data).__name__}")
    unknown = sorted(set(data) - allowed)
    if unknown:
        prefix = f"{path}." if path else ""
        raise ValueError(f"unknown config key(s): {', '.join(prefix + str(k) for k in unknown)}")


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise ValueError(f"{path}{key}: required")
    return data[key]


def _as_int(value: Any, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{path}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValueError(f"{path}: must be >= {minimum}, got {value}")
    return value


def _as_enum(enum_cls, value: Any, path: str):
    try:
        return enum_cls(value)
    except ValueError as exc:
        choices = ", ".join(member.value for member in enum_cls)
        raise ValueError(f"{path}: {value!r} is not one of {choices}") from exc


def _parse_params(data: Any) -> FloquetParams:
    _check_keys(data, _PARAM_KEYS, "params")
    n = _as_int(_require(data, "n", "params."), "params.n", minimum=2)
    return FloquetParams(
        J=parse_angle(_require(data, "J", "params."), "params.J"),
        mu=parse_angle(_require(data, "mu", "params."), "params.mu"),
        h=parse_angle(_require(data, "h", "params."), "params.h"),
        n=n,
        layer_order=_as_enum(LayerOrder, data.get("layer_order", LayerOrder.EQ1.value), "params.layer_order"),
    )


def _parse_observables(data: Any, n: int) -> tuple[ObservableSpec, ...]:
    if not isinstance(data, list) or not data:
        raise ValueError("observables: expected a non-empty list")
    specs = []
    seen = set()
    for i, entry in enumerate(data):
        path = f"observables[{i}]"
        if isinstance(entry, str):
            entry = {"name": entry}
        _check_keys(entry, _OBSERVABLE_KEYS, path)
        name = _require(entry, "name", path + ".")
        try:
            domain = obs.index_domain(name, n)
        except ValueError as exc:
            raise ValueError(f"{path}.name: {exc}") from exc
        if name in seen:
            raise ValueError(f"{path}.name: {name!r} listed twice")
        seen.add(name)
        indices = entry.get("indices")
        if indices is not None:
            if domain is None:
                raise ValueError(f"{path}.indices: {name} is a scalar observable")
            if not isinstance(indices, list) or not indices:
                raise ValueError(f"{path}.indices: expected a non-empty list")
            for index in indices:
                if _as_int(index, f"{path}.indices") not in domain:
                    raise ValueError(f"{path}.indices: {index} outside {domain[0]}..{domain[-1]}")
            indices = tuple(sorted(set(indices)))
        specs.append(ObservableSpec(name, indices))
    return tuple(specs)


def config_from_dict(data: Any) -> ScenarioConfig:
    """Validate a parsed config document; errors name the offending key path."""
    _check_keys(data, _CONFIG_KEYS, "")
    params = _parse_params(_require(data, "params", ""))
    initial = _require(data, "initial", "")
    if not isinstance(initial, str):
        # unquoted kets such as 00010000 load as integers
        raise ValueError(f"initial: expected a quoted ket string, got {initial!r}")
    try:
        initial = validate_bits(initial)
    except ValueError as exc:
        raise ValueError(f"initial: {exc}") from exc
    output = data.get("output") or {}
    _check_keys(output, _OUTPUT_KEYS, "output")
    shots = data.get("shots")
    seed = data.get("seed")
    return ScenarioConfig(
        name=str(_require(data, "name", "")),
        engine=_as_enum(Engine, data.get("engine", Engine.FLOQUET.value), "engine"),
        params=params,
        initial=initial,
        cycles=_as_int(_require(data, "cycles", ""), "cycles", minimum=0),
        observables=_parse_observables(_require(data, "observables", ""), params.n),
        shots=None if shots is None else _as_int(shots, "shots", minimum=1),
        seed=None if seed is None else _as_int(seed, "seed", minimum=0),
        output=OutputSpec(
            format=_as_enum(OutputFormat, output.get("format", OutputFormat.CSV.value), "output.format"),
            path=None if output.get("path") is None else str(output["path"]),
        ),
        generator=_as_enum(Generator, data.get("generator", Generator.LITERAL.value), "generator"),
    )


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Plain-data form of a config; ``config_from_dict`` inverts it exactly."""
    p = cfg.params
    return {
        "name": cfg.name,
        "engine": cfg.engine.value,
        "params": {"J": p.J, "mu": p.mu, "h": p.h, "n": p.n, "layer_order": p.layer_order.value},
        "initial": cfg.initial,
        "cycles": cfg.cycles,
        "observables": [
            {"name": spec.name, "indices": None if spec.indices is None else list(spec.indices)}
            for spec in cfg.observables
        ],
        "shots": cfg.shots,
        "seed": cfg.seed,
        "output": {"format": cfg.output.format.value, "path": cfg.output.path},
        "generator": cfg.generator.value,
    }


def _measure(spec: ObservableSpec, source: obs.Source, n: int, spread_source: float | None) -> list[tuple[int | None, float]]:
    indices = spec.indices if spec.indices is not None else obs.index_domain(spec.name, n)
    if spec.name == "kink_density":
        profile = obs.kink_profile(source)
        return [(j, float(profile[j])) for j in indices]
    if spec.name == "spin_flip_density":
        return [(j, obs.spin_flip_density(source, j)) for j in indices]
    if spec.name == "meson_number":
        return [(length, obs.meson_number(source, length)) for length in indices]
    if spec.name == "meson_histogram":
        populations = obs.meson_histogram(source).populations
        return [(length, populations[length]) for length in indices]
    if spec.name == "total_kinks":
        return [(None, obs.total_kinks(source))]
    if spec.name == "total_spin_flips":
        return [(None, obs.total_spin_flips(source))]
    if spec.name == "spread_metric":
        return [(None, obs.spread_metric(obs.kink_profile(source), spread_source))]
    raise ValueError(f"unknown observable {spec.name!r}")


def make_recorder(cfg: ScenarioConfig, initial: StateVector):
    """Recorder for ``evolve``/``exact_trajectory`` turning each state into ObservableRecords."""
    n = cfg.params.n
    spread_source = None
    if any(spec.name == "spread_metric" for spec in cfg.observables):
        spread_source = obs.profile_center(obs.kink_profile(initial))
    seed = 0 if cfg.seed is None else cfg.seed

    def record(cycle: int, state: StateVector) -> list[ObservableRecord]:
        source: obs.Source = state
        if cfg.shots is not None:
            counts = obs.sample_bitstrings(state, cfg.shots, seed=[seed, cycle])
            source = obs.empirical_probabilities(counts, n)
        rows = []
        for spec in cfg.observables:
            for index, value in _measure(spec, source, n, spread_source):
                rows.append(ObservableRecord(cycle, spec.name, index, value))
        return rows

    return record


def run_scenario(cfg: ScenarioConfig) -> RunManifest:
    """Evolve the initial ket and record every observable at cycle 0..T."""
    logger.info("running %s (%s engine, T=%d)", cfg.name, cfg.engine.value, cfg.cycles)
    started = time.perf_counter()
    initial = basis_state(cfg.initial)
    recorder = make_recorder(cfg, initial)
    if cfg.engine is Engine.FLOQUET:
        per_cycle = evolve(initial, cfg.params, cfg.cycles, recorder)
    else:
        build = cycle_hamiltonian if cfg.generator is Generator.CYCLE else build_hamiltonian
        H = build(cfg.params)
        per_cycle = exact_trajectory(initial, H, range(cfg.cycles + 1), recorder)
    records = sorted((r for rows in per_cycle for r in rows), key=ObservableRecord.sort_key)
    elapsed = time.perf_counter() - started
    logger.info("%s finished: %d records in %.3fs", cfg.name, len(records), elapsed)
    return RunManifest(cfg, __version__, elapsed, records)
