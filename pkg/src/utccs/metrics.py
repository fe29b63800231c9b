"""Chaos metrics: Lyapunov exponents, bifurcation samples, cobweb traces, sample entropy."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import maps
from .maps import MapSpec, SeedMap, Utf, iterate_orbit

__all__ = [
    "LyapunovConfig",
    "BifurcationConfig",
    "SampleEntropyConfig",
    "LyapunovResult",
    "BifurcationSeries",
    "CobwebTrace",
    "SampleEntropyResult",
    "lyapunov_exponent",
    "lyapunov_sweep",
    "bifurcation_data",
    "cobweb_data",
    "sample_entropy",
    "orbit_sample_entropy",
    "r_grid",
    "write_csv",
]


@dataclass
class LyapunovConfig:
    iterations: int = 10_000
    transient_discard: int = 1_000
    x0: float = 0.1


@dataclass
class BifurcationConfig:
    n_r: int = 500
    discard: int = 500
    keep: int = 200
    x0: float = 0.1


@dataclass
class SampleEntropyConfig:
    embedding_dim: int = 2
    tolerance_factor: float = 0.2  # times the series standard deviation
    length: int = 5_000
    x0: float = 0.1
    transient_discard: int = 0


def r_grid(n: int) -> np.ndarray:
    """``n`` evenly spaced control parameters covering [0, 1] inclusive."""
    if n < 2:
        raise ValueError("grid needs at least two points")
    return np.linspace(0.0, 1.0, n)


# --- Lyapunov exponent ----------------------------------------------------


@dataclass(frozen=True)
class LyapunovResult:
    spec: MapSpec
    lam: float
    iterations: int
    transient_discard: int
    skipped: int = 0

    @property
    def lambda_(self) -> float:
        return self.lam


_SEED_DERIVS: dict[SeedMap, Callable[[float, float], float]] = {
    SeedMap.LOGISTIC: lambda r, x: 4.0 * r * (1.0 - 2.0 * x),
    SeedMap.TENT: lambda r, x: 2.0 * r if x < 0.5 else -2.0 * r,
    SeedMap.SINE: lambda r, x: r * math.pi * math.cos(math.pi * x),
}

_LN2 = math.log(2.0)

_UTF_DERIVS: dict[Utf, Callable[[float], float]] = {
    Utf.IDENTITY: lambda s: 1.0,
    Utf.EXP2: lambda s: _LN2 * 2.0**s,
    Utf.LOG2: lambda s: 1.0 / ((1.0 + s) * _LN2),
    Utf.SINE_PI: lambda s: math.pi * math.cos(math.pi * s),
    Utf.ARCSIN_NORM: lambda s: (2.0 / math.pi) / math.sqrt(1.0 - s * s) if s < 1.0 else math.inf,
}


def _log_derivative(spec: MapSpec) -> Callable[[float], Optional[float]]:
    """Closure giving ln|F'(x)|, or None at breakpoints and zero-derivative points."""
    a, b = spec.seed_a, spec.seed_b
    fa = maps._SEED_FUNCS[a]
    fb = maps._SEED_FUNCS[b] if b is not None else maps._zero
    da = _SEED_DERIVS[a]
    db = _SEED_DERIVS[b] if b is not None else (lambda r, x: 0.0)
    r, q = spec.r, 1.0 - spec.r
    has_tent = SeedMap.TENT in (a, b)
    k = spec.utf.slope
    if k is not None:
        breaks = frozenset(j / k for j in range(1, k))
        ln_k = math.log(k)

        def outer(s: float) -> Optional[float]:
            return None if s in breaks else ln_k

    else:
        du = _UTF_DERIVS[spec.utf]

        def outer(s: float) -> Optional[float]:
            d = abs(du(s))
            if d == 0.0 or math.isinf(d):
                return None
            return math.log(d)

    def log_deriv(x: float) -> Optional[float]:
        if has_tent and x == 0.5:
            return None
        s = fa(r, x) + fb(q, x)
        if s == 1.0:
            return None  # mod-1 wrap point
        if s > 1.0:
            s %= 1.0
        lo = outer(s)
        if lo is None:
            return None
        inner = abs(da(r, x) + db(q, x))
        if inner == 0.0:
            return None
        return lo + math.log(inner)

    return log_deriv


def lyapunov_exponent(
    spec: MapSpec,
    x0: float = 0.1,
    iterations: int = 10_000,
    transient_discard: int = 1_000,
) -> LyapunovResult:
    """Average of ln|F'(x_i)| along the orbit, derivative by the chain rule.

    Iterates that land exactly on a breakpoint or a zero-derivative point are
    left out of both the sum and the divisor.
    """
    if iterations < 1_000:
        raise ValueError("at least 1000 iterations are required")
    step = spec.stepper()
    logd = _log_derivative(spec)
    x = x0
    for _ in range(transient_discard):
        x = step(x)
    total = 0.0
    used = 0
    for _ in range(iterations):
        v = logd(x)
        if v is not None:
            total += v
            used += 1
        x = step(x)
    lam = total / used if used else float("nan")
    return LyapunovResult(spec, lam, iterations, transient_discard, iterations - used)


def lyapunov_sweep(
    family: MapSpec,
    rs: Sequence[float],
    x0: float = 0.1,
    iterations: int = 10_000,
    transient_discard: int = 1_000,
) -> np.ndarray:
    """Lyapunov exponents of ``family`` at every control parameter in ``rs``.

    All grid points are iterated together with array arithmetic.  The result
    agrees with :func:`lyapunov_exponent` up to ergodic-average noise, not
    bit for bit (vectorized transcendental functions may round differently).
    """
    r = np.asarray(rs, dtype=np.float64)
    q = 1.0 - r
    a, b, utf = family.seed_a, family.seed_b, family.utf
    x = np.full_like(r, x0)
    acc = np.zeros_like(r)
    used = np.zeros(r.shape, dtype=np.int64)
    breaks = maps.utf_breakpoints(utf)
    has_tent = SeedMap.TENT in (a, b)
    for i in range(transient_discard + iterations):
        raw = maps.seed_map_array(a, r, x) + maps.seed_map_array(b, q, x)
        s = np.where(raw >= 1.0, raw - 1.0, raw)
        if i >= transient_discard:
            der = maps.utf_deriv_array(utf, s) * (
                maps.seed_deriv_array(a, r, x) + maps.seed_deriv_array(b, q, x)
            )
            with np.errstate(divide="ignore", invalid="ignore"):
                ld = np.log(np.abs(der))
            bad = (raw == 1.0) | ~np.isfinite(ld)
            if has_tent:
                bad |= x == 0.5
            for bp in breaks:
                bad |= s == bp
            acc += np.where(bad, 0.0, ld)
            used += ~bad
        y = maps.utf_array(utf, s)
        x = np.where(y >= 1.0, 0.0, y)
    with np.errstate(invalid="ignore"):
        return acc / used


# --- bifurcation and cobweb -------------------------------------------------


@dataclass(frozen=True)
class BifurcationSeries:
    r_grid: np.ndarray
    points_per_r: int
    samples: np.ndarray  # shape (len(r_grid), points_per_r)
    x0: float

    def rows(self) -> Iterable[tuple[float, float]]:
        for r, row in zip(self.r_grid, self.samples):
            for v in row:
                yield float(r), float(v)


def bifurcation_data(
    family: MapSpec,
    rs: Sequence[float],
    x0: float = 0.1,
    discard: int = 500,
    keep: int = 200,
) -> BifurcationSeries:
    if keep < 1:
        raise ValueError("keep must be >= 1")
    rs = np.asarray(rs, dtype=np.float64)
    out = np.empty((len(rs), keep))
    for i, r in enumerate(rs):
        out[i] = iterate_orbit(family.with_r(float(r)), x0, keep, discard).states
    return BifurcationSeries(rs, keep, out, x0)


@dataclass(frozen=True)
class CobwebTrace:
    segments: np.ndarray  # rows of (x1, y1, x2, y2)
    steps: int


def cobweb_data(spec: MapSpec, x0: float, steps: int) -> CobwebTrace:
    """Alternating vertical/horizontal segments of the cobweb construction."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    xs = np.concatenate([[x0], iterate_orbit(spec, x0, steps).states])
    seg = np.empty((2 * steps, 4))
    cur, nxt = xs[:-1], xs[1:]
    seg[0::2] = np.column_stack([cur, cur, cur, nxt])
    seg[1::2] = np.column_stack([cur, nxt, nxt, nxt])
    return CobwebTrace(seg, steps)


# --- sample entropy ---------------------------------------------------------


@dataclass(frozen=True)
class SampleEntropyResult:
    value: float
    embedding_dim: int
    tolerance: float
    series_len: int
    matches_m: int = 0
    matches_m1: int = 0
    finite: bool = True


def _count_pairs(templates: np.ndarray, tol: float) -> int:
    """Unordered pairs of distinct templates with Chebyshev distance < tol."""
    # count_neighbors uses <=; step just below tol for a strict comparison
    radius = np.nextafter(tol, 0.0)
    # converged orbits repeat templates thousands of times; count them once
    uniq, mult = np.unique(templates, axis=0, return_counts=True)
    w = mult.astype(np.float64)
    tree = cKDTree(uniq)
    total = int(round(tree.count_neighbors(tree, radius, p=np.inf, weights=(w, w))))
    return (total - len(templates)) // 2


def sample_entropy(
    series: Sequence[float],
    embedding_dim: int = 2,
    tolerance: Optional[float] = None,
) -> SampleEntropyResult:
    """Sample entropy ``-ln(A/B)`` with Chebyshev distance, self-matches excluded.

    ``B`` counts pairs of length-m templates closer than ``tolerance`` and
    ``A`` the same for length m+1; both use the first ``N - m`` templates.
    ``tolerance`` defaults to 0.2 times the standard deviation of the series.
    When ``A`` is zero the value is ``inf`` and ``finite`` is False.
    """
    x = np.asarray(series, dtype=np.float64)
    n = len(x)
    m = embedding_dim
    if n < 100:
        raise ValueError("sample entropy needs at least 100 points")
    if m < 1:
        raise ValueError("embedding_dim must be >= 1")
    if tolerance is None:
        tolerance = 0.2 * float(np.std(x))
        if tolerance == 0.0:
            return SampleEntropyResult(0.0, m, 0.0, n)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    count = n - m
    idx = np.arange(count)[:, None] + np.arange(m + 1)[None, :]
    emb = x[idx]
    b = _count_pairs(emb[:, :m], tolerance)
    a = _count_pairs(emb, tolerance)
    if a == 0 or b == 0:
        return SampleEntropyResult(math.inf, m, tolerance, n, b, a, finite=False)
    value = -math.log(a / b)
    return SampleEntropyResult(value if value != 0.0 else 0.0, m, tolerance, n, b, a)


def orbit_sample_entropy(spec: MapSpec, cfg: SampleEntropyConfig = SampleEntropyConfig()) -> float:
    orb = iterate_orbit(spec, cfg.x0, cfg.length, cfg.transient_discard)
    tol = cfg.tolerance_factor * float(np.std(orb.states))
    if tol == 0.0:
        return 0.0
    return sample_entropy(orb.states, cfg.embedding_dim, tol).value


# --- CSV --------------------------------------------------------------------


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write rows with a fixed header; floats use repr so values round-trip."""
    n = 0
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
            n += 1
    return n
