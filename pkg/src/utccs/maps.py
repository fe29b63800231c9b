"""Seed maps, unit transform functions and the unit-transform coupling rule.

A coupled map is ``x -> f((F1(r, x) + F2(1 - r, x)) mod 1)`` where ``F1`` and
``F2`` are seed maps with normalized control parameter and ``f`` maps the unit
interval onto itself.  Everything here is scalar, pure Python floats; the
array helpers at the bottom are used by the parameter sweeps in
:mod:`utccs.metrics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

__all__ = [
    "DomainError",
    "SeedMap",
    "Utf",
    "MapSpec",
    "Orbit",
    "eval_seed_map",
    "eval_utf",
    "couple_step",
    "iterate_orbit",
    "coupling",
    "seed_only",
    "parse_map",
    "COUPLINGS",
]

_LN2 = math.log(2.0)
_PI = math.pi


class DomainError(ValueError):
    """Argument outside the unit interval."""


class SeedMap(Enum):
    LOGISTIC = "logistic"
    TENT = "tent"
    SINE = "sine"


class Utf(Enum):
    IDENTITY = "identity"
    EXP2 = "exp2"
    LOG2 = "log2"
    SINE_PI = "sinpi"
    ARCSIN_NORM = "arcsin"
    TENT_SLOPE2 = "tent2"
    TENT_SLOPE4 = "tent4"
    TENT_SLOPE8 = "tent8"

    @property
    def slope(self) -> Optional[int]:
        """Constant derivative magnitude for the piecewise-linear kinds."""
        return _TENT_SLOPES.get(self)


_TENT_SLOPES = {Utf.TENT_SLOPE2: 2, Utf.TENT_SLOPE4: 4, Utf.TENT_SLOPE8: 8}

# coupling name -> (F1, F2)
COUPLINGS = {
    "lscm": (SeedMap.LOGISTIC, SeedMap.SINE),
    "tlcm": (SeedMap.TENT, SeedMap.LOGISTIC),
    "stcm": (SeedMap.SINE, SeedMap.TENT),
}

# type-I/II/III
TYPE_UTF = {1: Utf.TENT_SLOPE2, 2: Utf.TENT_SLOPE4, 3: Utf.TENT_SLOPE8}


def _check_unit(name: str, v: float) -> None:
    if not (0.0 <= v <= 1.0):
        raise DomainError(f"{name}={v!r} outside [0, 1]")


def _logistic(r: float, x: float) -> float:
    return 4.0 * r * x * (1.0 - x)


def _tent(r: float, x: float) -> float:
    # x == 0.5 takes the second branch
    if x < 0.5:
        return 2.0 * r * x
    return 2.0 * r * (1.0 - x)


def _sine(r: float, x: float) -> float:
    return r * math.sin(_PI * x)


_SEED_FUNCS = {
    SeedMap.LOGISTIC: _logistic,
    SeedMap.TENT: _tent,
    SeedMap.SINE: _sine,
}


def _zero(r: float, x: float) -> float:
    return 0.0


def _tent_fold(k: int) -> Callable[[float], float]:
    top = k - 1

    def fold(x: float) -> float:
        kx = k * x
        j = int(kx)
        if j > top:
            j = top
        if j & 1:
            return (j + 1) - kx
        return kx - j

    return fold


_UTF_FUNCS: dict[Utf, Callable[[float], float]] = {
    Utf.IDENTITY: lambda x: x,
    Utf.EXP2: lambda x: 2.0**x - 1.0,
    Utf.LOG2: lambda x: math.log1p(x) / _LN2,
    Utf.SINE_PI: lambda x: math.sin(_PI * x),
    Utf.ARCSIN_NORM: lambda x: (2.0 / _PI) * math.asin(x),
    Utf.TENT_SLOPE2: _tent_fold(2),
    Utf.TENT_SLOPE4: _tent_fold(4),
    Utf.TENT_SLOPE8: _tent_fold(8),
}


def eval_seed_map(kind: SeedMap, r: float, x: float) -> float:
    """Value of a seed map with normalized control parameter ``r``."""
    _check_unit("r", r)
    _check_unit("x", x)
    return _SEED_FUNCS[kind](r, x)


def eval_utf(kind: Utf, x: float) -> float:
    _check_unit("x", x)
    return _UTF_FUNCS[kind](x)


@dataclass(frozen=True)
class MapSpec:
    """A fully parameterized coupled map.

    ``seed_b=None`` stands for the zero map, which turns the MapSpec into a
    single seed map followed by the unit transform (used for seed-map
    baselines).
    """

    seed_a: SeedMap
    seed_b: Optional[SeedMap]
    utf: Utf
    r: float

    def __post_init__(self) -> None:
        _check_unit("r", self.r)

    def with_r(self, r: float) -> "MapSpec":
        return MapSpec(self.seed_a, self.seed_b, self.utf, r)

    def with_utf(self, utf: Utf) -> "MapSpec":
        return MapSpec(self.seed_a, self.seed_b, utf, self.r)

    @property
    def name(self) -> str:
        for cname, seeds in COUPLINGS.items():
            if seeds == (self.seed_a, self.seed_b):
                base = cname.upper()
                break
        else:
            if self.seed_b is None:
                base = self.seed_a.value
            else:
                base = f"{self.seed_a.value}+{self.seed_b.value}"
        return f"{base}/{self.utf.value}"

    def stepper(self) -> Callable[[float], float]:
        """Return a closure computing one step, with dispatch resolved once."""
        f1 = _SEED_FUNCS[self.seed_a]
        f2 = _SEED_FUNCS[self.seed_b] if self.seed_b is not None else _zero
        f = _UTF_FUNCS[self.utf]
        r = self.r
        q = 1.0 - r

        def step(x: float) -> float:
            s = f1(r, x) + f2(q, x)
            if s >= 1.0:
                s %= 1.0
            y = f(s)
            # fold points of the UTFs can hit exactly 1.0
            if y >= 1.0:
                return 0.0
            return y

        return step


def couple_step(spec: MapSpec, x: float) -> float:
    """One iteration of the coupled map; the result lies in [0, 1)."""
    _check_unit("x", x)
    return spec.stepper()(x)


@dataclass(frozen=True)
class Orbit:
    x0: float
    states: np.ndarray
    transient_discard: int

    def __len__(self) -> int:
        return len(self.states)


def iterate_orbit(
    spec: MapSpec, x0: float, length: int, transient_discard: int = 0
) -> Orbit:
    """Iterate ``spec`` from ``x0``; the first ``transient_discard`` iterates are dropped."""
    if length < 1:
        raise ValueError("orbit length must be >= 1")
    if transient_discard < 0:
        raise ValueError("transient_discard must be >= 0")
    _check_unit("x0", x0)
    step = spec.stepper()
    x = x0
    for _ in range(transient_discard):
        x = step(x)
    out = [0.0] * length
    for i in range(length):
        x = step(x)
        out[i] = x
    states = np.array(out, dtype=np.float64)
    states.flags.writeable = False
    return Orbit(x0=x0, states=states, transient_discard=transient_discard)


def coupling(name: str, utf: Utf, r: float) -> MapSpec:
    a, b = COUPLINGS[name.lower()]
    return MapSpec(a, b, utf, r)


def seed_only(kind: SeedMap, r: float) -> MapSpec:
    return MapSpec(kind, None, Utf.IDENTITY, r)


_UTF_ALIASES = {
    "1": Utf.TENT_SLOPE2,
    "i": Utf.TENT_SLOPE2,
    "2": Utf.TENT_SLOPE4,
    "ii": Utf.TENT_SLOPE4,
    "3": Utf.TENT_SLOPE8,
    "iii": Utf.TENT_SLOPE8,
    "id": Utf.IDENTITY,
    "identity": Utf.IDENTITY,
    "exp": Utf.EXP2,
    "exp2": Utf.EXP2,
    "log": Utf.LOG2,
    "log2": Utf.LOG2,
    "sin": Utf.SINE_PI,
    "sinpi": Utf.SINE_PI,
    "asin": Utf.ARCSIN_NORM,
    "arcsin": Utf.ARCSIN_NORM,
    "tent2": Utf.TENT_SLOPE2,
    "tent4": Utf.TENT_SLOPE4,
    "tent8": Utf.TENT_SLOPE8,
}


def parse_map(name: str, r: float = 0.5) -> MapSpec:
    """Parse a map name such as ``lscm3``, ``tlcm-ii``, ``stcm-sin`` or ``logistic``.

    A bare coupling name (``lscm``) selects the slope-8 transform.
    """
    key = name.strip().lower()
    for seed in SeedMap:
        if key == seed.value:
            return seed_only(seed, r)
    for cname in COUPLINGS:
        if key.startswith(cname):
            rest = key[len(cname):].lstrip("-_")
            if rest == "":
                return coupling(cname, Utf.TENT_SLOPE8, r)
            if rest in _UTF_ALIASES:
                return coupling(cname, _UTF_ALIASES[rest], r)
    raise ValueError(f"unknown map name {name!r}")


# --- array versions for sweeps -------------------------------------------


def seed_map_array(kind: Optional[SeedMap], r: np.ndarray, x: np.ndarray) -> np.ndarray:
    if kind is None:
        return np.zeros_like(x)
    if kind is SeedMap.LOGISTIC:
        return 4.0 * r * x * (1.0 - x)
    if kind is SeedMap.TENT:
        return np.where(x < 0.5, 2.0 * r * x, 2.0 * r * (1.0 - x))
    return r * np.sin(_PI * x)


def seed_deriv_array(kind: Optional[SeedMap], r: np.ndarray, x: np.ndarray) -> np.ndarray:
    if kind is None:
        return np.zeros_like(x)
    if kind is SeedMap.LOGISTIC:
        return 4.0 * r * (1.0 - 2.0 * x)
    if kind is SeedMap.TENT:
        return np.where(x < 0.5, 2.0 * r, -2.0 * r)
    return r * _PI * np.cos(_PI * x)


def utf_array(kind: Utf, s: np.ndarray) -> np.ndarray:
    if kind is Utf.IDENTITY:
        return s.copy()
    if kind is Utf.EXP2:
        return np.exp2(s) - 1.0
    if kind is Utf.LOG2:
        return np.log1p(s) / _LN2
    if kind is Utf.SINE_PI:
        return np.sin(_PI * s)
    if kind is Utf.ARCSIN_NORM:
        return (2.0 / _PI) * np.arcsin(s)
    k = kind.slope
    ks = k * s
    j = np.minimum(np.floor(ks), k - 1)
    odd = (j.astype(np.int64) & 1).astype(bool)
    return np.where(odd, (j + 1) - ks, ks - j)


def utf_deriv_array(kind: Utf, s: np.ndarray) -> np.ndarray:
    if kind is Utf.IDENTITY:
        return np.ones_like(s)
    if kind is Utf.EXP2:
        return _LN2 * np.exp2(s)
    if kind is Utf.LOG2:
        return 1.0 / ((1.0 + s) * _LN2)
    if kind is Utf.SINE_PI:
        return _PI * np.cos(_PI * s)
    if kind is Utf.ARCSIN_NORM:
        with np.errstate(divide="ignore"):
            return (2.0 / _PI) / np.sqrt(1.0 - s * s)
    k = kind.slope
    j = np.minimum(np.floor(k * s), k - 1)
    odd = (j.astype(np.int64) & 1).astype(bool)
    return np.where(odd, -float(k), float(k))


def utf_breakpoints(kind: Utf) -> tuple[float, ...]:
    k = kind.slope
    if k is None:
        return ()
    return tuple(j / k for j in range(1, k))
