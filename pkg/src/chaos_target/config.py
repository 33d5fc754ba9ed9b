"""Experiment config files.

A config is a flat ``key = value`` text file; ``#`` starts a comment and
blank lines are ignored. List values are comma separated and integer
ranges may be written ``6..10`` (inclusive). Recognised keys:

    map              henon | ushio                       (default henon)
    params           two reals, e.g. ``1.4, 0.3``        (default: the map's classical values)
    x0               two reals                           (henon: 0, 0; ushio: 0.6, -0.3)
    target           two reals or ``fixed-point``        (henon: fixed-point; ushio: 0, 0)
    horizon          integer list/range                  (required)
    mu               real list                           (required)
    epsilon          real list                           (default 0.02)
    population_size  integer                             (default 50)
    max_generations  integer                             (default 1000)
    n_runs           integer                             (default 100)
    seed             unsigned 64-bit integer             (default 0)
    format           csv | json                          (default csv)
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .maps import ChaoticMap, DEFAULT_PARAMS, MapKind, NoFixedPointError, State2
from .problem import TargetingProblem
from .tlbo import TlboConfig


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.key = key


KEYS = (
    "map", "params", "x0", "target", "horizon", "mu", "epsilon",
    "population_size", "max_generations", "n_runs", "seed", "format",
)

DEFAULT_X0 = {MapKind.HENON: (0.0, 0.0), MapKind.USHIO: (0.6, -0.3)}


@dataclass
class ExperimentConfig:
    map: ChaoticMap
    x0: State2
    target: State2
    horizons: list[int]
    mus: list[float]
    epsilons: list[float] = field(default_factory=lambda: [0.02])
    population_size: int = 50
    max_generations: int = 1000
    n_runs: int = 100
    seed: int = 0
    format: str = "csv"

    def base_problem(self) -> TargetingProblem:
        return TargetingProblem(self.map, self.x0, self.target, self.horizons[0], self.mus[0], self.epsilons[0])

    def tlbo_config(self) -> TlboConfig:
        return TlboConfig(self.population_size, self.max_generations, self.seed)


def _reals(text: str, key: str, line: int) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"expected real numbers, got {text!r}", line, key) from None


def _ints(text: str, key: str, line: int) -> list[int]:
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        try:
            if ".." in tok:
                lo, hi = tok.split("..", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(tok))
        except ValueError:
            raise ConfigError(f"expected integers or a range a..b, got {tok!r}", line, key) from None
    return out


def _pair(text: str, key: str, line: int) -> tuple[float, float]:
    vals = _reals(text, key, line)
    if len(vals) != 2:
        raise ConfigError(f"expected two comma-separated reals, got {text!r}", line, key)
    return vals[0], vals[1]


def _single_int(text: str, key: str, line: int, lo: int = 0) -> int:
    vals = _ints(text, key, line)
    if len(vals) != 1 or vals[0] < lo:
        raise ConfigError(f"expected one integer >= {lo}, got {text!r}", line, key)
    return vals[0]


def parse_config(text: str) -> ExperimentConfig:
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError("unknown key", lineno, key)
        if key in raw:
            raise ConfigError(f"duplicate key (first set on line {raw[key][1]})", lineno, key)
        raw[key] = (value, lineno)

    def get(key):
        return raw.get(key, (None, None))

    value, line = get("map")
    try:
        kind = MapKind((value or "henon").lower())
    except ValueError:
        raise ConfigError(f"unknown map {value!r}", line, "map") from None

    value, line = get("params")
    params = DEFAULT_PARAMS[kind] if value is None else _pair(value, "params", line)
    params_line = line
    try:
        chaotic_map = ChaoticMap(kind, params)
    except ValueError as exc:
        raise ConfigError(str(exc), line, "params") from None

    value, line = get("x0")
    x0 = DEFAULT_X0[kind] if value is None else _pair(value, "x0", line)

    value, line = get("target")
    implicit = value is None
    if implicit:
        value = "fixed-point"
    if value.lower() == "fixed-point":
        try:
            target = chaotic_map.fixed_point()
        except NoFixedPointError as exc:
            # an implicit target fails because of the parameters, so point there
            raise ConfigError(str(exc), *((params_line, "params") if implicit else (line, "target"))) from None
    else:
        target = _pair(value, "target", line)

    missing = [k for k in ("horizon", "mu") if k not in raw]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")

    value, line = raw["horizon"]
    horizons = _ints(value, "horizon", line)
    if not horizons or min(horizons) < 1:
        raise ConfigError("horizons must be integers >= 1", line, "horizon")

    value, line = raw["mu"]
    mus = _reals(value, "mu", line)
    if not mus or min(mus) <= 0:
        raise ConfigError("mu values must be positive", line, "mu")

    value, line = get("epsilon")
    epsilons = [0.02] if value is None else _reals(value, "epsilon", line)
    if not epsilons or min(epsilons) <= 0:
        raise ConfigError("epsilon values must be positive", line, "epsilon")

    ints = {}
    for key, default, lo in (("population_size", 50, 2), ("max_generations", 1000, 1), ("n_runs", 100, 1), ("seed", 0, 0)):
        value, line = get(key)
        ints[key] = default if value is None else _single_int(value, key, line, lo)
    if ints["seed"] >= 2**64:
        raise ConfigError("seed must fit in 64 bits", get("seed")[1], "seed")

    value, line = get("format")
    fmt = (value or "csv").lower()
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {value!r}", line, "format")

    return ExperimentConfig(
        map=chaotic_map,
        x0=State2(*x0),
        target=State2(*target),
        horizons=horizons,
        mus=mus,
        epsilons=epsilons,
        format=fmt,
        **ints,
    )


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
