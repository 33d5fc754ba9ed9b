"""Two-dimensional discrete chaotic maps used as targeting testbeds.

Both maps share the same step signature, ``step(x1, x2) -> (x1', x2')``,
and the update expressions are written so they work unchanged on Python
floats and on numpy arrays. Evaluation order is fixed and no ``**`` power
is used: long uncontrolled trajectories are chaotic, so a single ulp of
difference changes hitting times by thousands of iterations.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple


class MapOverflowError(ArithmeticError):
    """A trajectory left the finite reals (escaped the attractor basin)."""


class NoFixedPointError(ValueError):
    pass


class NotReachedError(RuntimeError):
    """The target neighbourhood was not reached within the iteration budget."""

    def __init__(self, max_iter: int):
        super().__init__(f"target neighbourhood not reached within {max_iter} iterations")
        self.max_iter = max_iter


class State2(NamedTuple):
    x1: float
    x2: float


class MapKind(enum.Enum):
    HENON = "henon"
    USHIO = "ushio"


DEFAULT_PARAMS = {
    MapKind.HENON: (1.4, 0.3),
    MapKind.USHIO: (1.9, 0.5),
}


def _henon_xy(x1, x2, p, q):
    # (-p) * (x1 * x1) grouping reproduces the published uncontrolled hitting times.
    return (-p) * (x1 * x1) + x2 + 1.0, q * x1


def _ushio_xy(x1, x2, alpha, beta):
    return alpha * x1 - x1 * x1 * x1 + x2, beta * x1


def _check_finite(x1: float, x2: float) -> None:
    if not (math.isfinite(x1) and math.isfinite(x2)):
        raise MapOverflowError(f"non-finite state ({x1!r}, {x2!r})")


def henon_step(s: State2, p: float = 1.4, q: float = 0.3) -> State2:
    """One step of the Hénon map: (-p*x1^2 + x2 + 1, q*x1)."""
    x1, x2 = _henon_xy(float(s[0]), float(s[1]), p, q)
    _check_finite(x1, x2)
    return State2(x1, x2)


def ushio_step(s: State2, alpha: float = 1.9, beta: float = 0.5) -> State2:
    """One step of the Ushio map: (alpha*x1 - x1^3 + x2, beta*x1)."""
    x1, x2 = _ushio_xy(float(s[0]), float(s[1]), alpha, beta)
    _check_finite(x1, x2)
    return State2(x1, x2)


_KERNELS = {MapKind.HENON: _henon_xy, MapKind.USHIO: _ushio_xy}


@dataclass(frozen=True)
class ChaoticMap:
    kind: MapKind
    params: tuple[float, float]

    def __post_init__(self):
        kind = MapKind(self.kind)
        params = tuple(float(v) for v in self.params)
        if len(params) != 2 or not all(math.isfinite(v) for v in params):
            raise ValueError(f"map parameters must be two finite reals, got {self.params!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", params)

    @classmethod
    def henon(cls, p: float = 1.4, q: float = 0.3) -> ChaoticMap:
        return cls(MapKind.HENON, (p, q))

    @classmethod
    def ushio(cls, alpha: float = 1.9, beta: float = 0.5) -> ChaoticMap:
        return cls(MapKind.USHIO, (alpha, beta))

    @classmethod
    def from_name(cls, name: str, params=None) -> ChaoticMap:
        kind = MapKind(name.lower())
        return cls(kind, DEFAULT_PARAMS[kind] if params is None else params)

    @property
    def name(self) -> str:
        return self.kind.value

    def step_xy(self, x1, x2):
        """Unchecked step on floats or equally shaped numpy arrays."""
        a, b = self.params
        return _KERNELS[self.kind](x1, x2, a, b)

    def step(self, s: State2) -> State2:
        x1, x2 = self.step_xy(float(s[0]), float(s[1]))
        _check_finite(x1, x2)
        return State2(x1, x2)

    def fixed_point(self) -> State2:
        if self.kind is MapKind.HENON:
            return henon_fixed_point(*self.params)
        # x* = alpha x - x^3 + beta x has the origin as a root for every parameter pair
        return State2(0.0, 0.0)


def henon_fixed_point(p: float = 1.4, q: float = 0.3) -> State2:
    """Positive-branch root of p*x^2 + (1-q)*x - 1 = 0, lifted to (x*, q*x*)."""
    disc = (1.0 - q) * (1.0 - q) + 4.0 * p
    if p == 0 or not math.isfinite(disc) or disc < 0:
        raise NoFixedPointError(f"Hénon map with p={p!r}, q={q!r} has no real fixed point")
    x = (-(1.0 - q) + math.sqrt(disc)) / (2.0 * p)
    return State2(x, q * x)


def distance(a, b) -> float:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return math.sqrt(dx * dx + dy * dy)


def iterate_uncontrolled(
    chaotic_map: ChaoticMap,
    x0: State2,
    target: State2,
    epsilon: float,
    max_iter: int,
) -> int:
    """Smallest k >= 1 with ||f^k(x0) - target|| < epsilon.

    Raises NotReachedError after ``max_iter`` steps and MapOverflowError if
    the orbit escapes.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    step = _KERNELS[chaotic_map.kind]
    a, b = chaotic_map.params
    tx, ty = float(target[0]), float(target[1])
    x1, x2 = float(x0[0]), float(x0[1])
    isfinite = math.isfinite
    sqrt = math.sqrt
    for k in range(1, max_iter + 1):
        x1, x2 = step(x1, x2, a, b)
        dx = x1 - tx
        dy = x2 - ty
        d = sqrt(dx * dx + dy * dy)
        if d < epsilon:
            return k
        if not isfinite(d):
            _check_finite(x1, x2)
    raise NotReachedError(max_iter)
