"""Security audit battery for the image cipher.

Histogram uniformity (chi-square), differential attack (NPCR/UACI), adjacent
pixel correlation, key sensitivity by MSE, and robustness to cipher data loss.
Every routine is pure over its inputs; sampling takes an explicit seed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.stats import norm

from .cipher import KEY_NAMES, KeySet, decrypt_image, encrypt_image

__all__ = [
    "CHI2_CRITICAL_005",
    "NPCR_CRITICAL",
    "UACI_CRITICAL",
    "NPCR_RANDOM",
    "UACI_RANDOM",
    "MSE_NOISE_FLOOR",
    "Direction",
    "Chi2Report",
    "DiffReport",
    "CorrReport",
    "SensitivityCurve",
    "DataLossResult",
    "AuditConfig",
    "AuditRow",
    "chi2_uniformity",
    "npcr_uaci",
    "npcr_uaci_critical",
    "diff_attack_trial",
    "correlation",
    "mse",
    "key_sensitivity",
    "data_loss",
    "loss_region",
    "channels",
    "run_audit",
    "write_report_csv",
    "format_report",
]

CHI2_CRITICAL_005 = 293.2478  # chi-square 0.95 quantile, 255 degrees of freedom
# 256x256 critical values for alpha = 0.05, 0.01, 0.001
NPCR_CRITICAL = {0.05: 99.5693, 0.01: 99.5527, 0.001: 99.5341}
UACI_CRITICAL = {
    0.05: (33.2824, 33.6447),
    0.01: (33.2255, 33.7016),
    0.001: (33.1594, 33.7677),
}
NPCR_RANDOM = 99.6094  # expectation for two independent uniform 8-bit images
UACI_RANDOM = 33.4635
MSE_NOISE_FLOOR = 1000.0

_LEVELS = 256


# --- histogram --------------------------------------------------------------


@dataclass(frozen=True)
class Chi2Report:
    statistic: float
    dof: int = 255
    critical: float = CHI2_CRITICAL_005

    @property
    def passed(self) -> bool:
        return self.statistic < self.critical


def chi2_uniformity(img: np.ndarray) -> Chi2Report:
    """Chi-square distance of the gray-level histogram from the flat one."""
    a = np.asarray(img)
    if a.size == 0:
        raise ValueError("empty image")
    if a.size < _LEVELS:
        warnings.warn("fewer pixels than gray levels; chi-square is unreliable", stacklevel=2)
    obs = np.bincount(a.astype(np.int64).ravel(), minlength=_LEVELS).astype(np.float64)
    if len(obs) > _LEVELS:
        raise ValueError("pixel values must lie in [0, 255]")
    fe = a.size / _LEVELS
    return Chi2Report(float(np.sum((obs - fe) ** 2) / fe))


# --- differential attack ----------------------------------------------------


@dataclass(frozen=True)
class DiffReport:
    npcr: float  # percent
    uaci: float  # percent
    trials: int = 1
    npcr_trials: tuple[float, ...] = ()
    uaci_trials: tuple[float, ...] = ()

    def npcr_passed(self, alpha: float = 0.05) -> bool:
        return self.npcr > NPCR_CRITICAL[alpha]

    def uaci_passed(self, alpha: float = 0.05) -> bool:
        lo, hi = UACI_CRITICAL[alpha]
        return lo <= self.uaci <= hi


def npcr_uaci(c1: np.ndarray, c2: np.ndarray) -> DiffReport:
    """Pixel change rate and average intensity change between two images, in percent."""
    a = np.asarray(c1, dtype=np.int64)
    b = np.asarray(c2, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("empty image")
    npcr = 100.0 * np.count_nonzero(a != b) / a.size
    uaci = 100.0 * float(np.abs(a - b).sum()) / (a.size * (_LEVELS - 1))
    return DiffReport(npcr, uaci, 1, (npcr,), (uaci,))


def npcr_uaci_critical(pixels: int, alpha: float = 0.05) -> tuple[float, tuple[float, float]]:
    """Critical NPCR and UACI interval (percent) for an image of ``pixels`` pixels.

    Normal approximation of the NPCR/UACI distributions between two
    independent uniform images; reproduces the hard-coded 256x256 critical values.
    """
    f = _LEVELS - 1
    mu_n = f / (f + 1)
    sd_n = math.sqrt(f / (pixels * (f + 1) ** 2))
    mu_u = (f + 2) / (3 * f + 3)
    sd_u = math.sqrt((f + 2) * (f * f + 2 * f + 3) / (18 * (f + 1) ** 2 * pixels * f))
    z1, z2 = norm.ppf(1 - alpha), norm.ppf(1 - alpha / 2)
    return 100 * (mu_n - z1 * sd_n), (100 * (mu_u - z2 * sd_u), 100 * (mu_u + z2 * sd_u))


def diff_attack_trial(img: np.ndarray, keys: KeySet, trials: int = 20, seed: int = 0) -> DiffReport:
    """Mean NPCR/UACI over ``trials`` random single-bit changes of the plain image."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    plain = np.asarray(img, dtype=np.uint8)
    rng = np.random.default_rng(seed)
    base = encrypt_image(plain, keys)
    ns, us = [], []
    for _ in range(trials):
        flat = plain.copy().reshape(-1)
        pos = int(rng.integers(flat.size))
        flat[pos] ^= np.uint8(1 << int(rng.integers(8)))
        rep = npcr_uaci(base, encrypt_image(flat.reshape(plain.shape), keys))
        ns.append(rep.npcr)
        us.append(rep.uaci)
    return DiffReport(float(np.mean(ns)), float(np.mean(us)), trials, tuple(ns), tuple(us))


# --- correlation ------------------------------------------------------------


class Direction(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"


_OFFSETS = {Direction.HORIZONTAL: (0, 1), Direction.VERTICAL: (1, 0), Direction.DIAGONAL: (1, 1)}


@dataclass(frozen=True)
class CorrReport:
    direction: Direction
    cc: float
    pairs: int
    seed: Optional[int]


def correlation(
    img: np.ndarray,
    direction: Direction | str = Direction.HORIZONTAL,
    pairs: int = 5000,
    seed: Optional[int] = 0,
) -> CorrReport:
    """Pearson coefficient of adjacent pixel pairs sampled without replacement.

    ``seed=None`` skips sampling and uses every available pair.
    """
    d = Direction(direction)
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("correlation needs a 2-D image")
    di, dj = _OFFSETS[d]
    m, n = a.shape[0] - di, a.shape[1] - dj
    avail = max(m, 0) * max(n, 0)
    if seed is None:
        idx = np.arange(avail)
    else:
        if pairs < 2 or pairs > avail:
            raise ValueError(f"cannot draw {pairs} pairs from {avail} available")
        idx = np.random.default_rng(seed).choice(avail, size=pairs, replace=False)
    i, j = np.divmod(idx, n)
    x = a[i, j]
    y = a[i + di, j + dj]
    dx, dy = x - x.mean(), y - y.mean()
    den = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if den == 0.0:
        raise ValueError("correlation undefined: sampled pixels have zero variance")
    return CorrReport(d, float(dx @ dy) / den, len(idx), seed)


# --- key sensitivity and data loss -----------------------------------------


def mse(a: np.ndarray, b: np.ndarray) -> float:
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    return float(np.mean((x - y) ** 2))


@dataclass(frozen=True)
class SensitivityCurve:
    key_name: str
    exponents: tuple[int, ...]
    alphas: tuple[float, ...]
    mses: tuple[float, ...]  # nan where the perturbed key left (0, 1)
    skipped: tuple[bool, ...]
    floor: float = MSE_NOISE_FLOOR

    @property
    def threshold_exponent(self) -> Optional[int]:
        """Largest e whose perturbation 2^-e still breaks decryption."""
        hits = [e for e, v, s in zip(self.exponents, self.mses, self.skipped) if not s and v >= self.floor]
        return max(hits) if hits else None


def key_sensitivity(
    img: np.ndarray,
    keys: KeySet,
    key_name: str,
    exponents: Iterable[int] = range(40, 61),
    floor: float = MSE_NOISE_FLOOR,
) -> SensitivityCurve:
    """Decrypt with ``key_name`` shifted by ``2**-e`` and record the MSE against the plain image."""
    if key_name not in KEY_NAMES:
        raise KeyError(key_name)
    plain = np.asarray(img, dtype=np.uint8)
    cipher = encrypt_image(plain, keys)
    es = tuple(int(e) for e in exponents)
    alphas, mses, skipped = [], [], []
    for e in es:
        alpha = math.ldexp(1.0, -e)
        alphas.append(alpha)
        try:
            wrong = keys.perturbed(key_name, alpha)
        except ValueError:
            mses.append(float("nan"))
            skipped.append(True)
            continue
        mses.append(mse(decrypt_image(cipher, wrong), plain))
        skipped.append(False)
    return SensitivityCurve(key_name, es, tuple(alphas), tuple(mses), tuple(skipped), floor)


@dataclass(frozen=True)
class DataLossResult:
    damaged: np.ndarray
    recovered: np.ndarray
    mse: float
    region: tuple[slice, slice]


def loss_region(
    shape: tuple[int, ...], fraction: float, region: str = "square", anchor: tuple[int, int] = (0, 0)
) -> tuple[slice, slice]:
    """Rectangle covering about ``fraction`` of an ``M x N`` image.

    ``square`` keeps the image aspect ratio, ``rows`` takes full-width rows.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValueError("fraction must lie in [0, 1)")
    m, n = shape[:2]
    if region == "square":
        h = int(round(m * math.sqrt(fraction)))
        w = int(round(fraction * m * n / h)) if h else 0
    elif region == "rows":
        h, w = int(round(m * fraction)), n
    else:
        raise ValueError(f"unknown region shape {region!r}")
    top, left = anchor
    if not (0 <= top and 0 <= left and top + h <= m and left + min(w, n) <= n):
        raise ValueError("loss region does not fit inside the image")
    return slice(top, top + h), slice(left, left + min(w, n))


def data_loss(
    img: np.ndarray,
    keys: KeySet,
    fraction: float,
    region: str = "square",
    anchor: tuple[int, int] = (0, 0),
) -> DataLossResult:
    """Zero a rectangle of the cipher image, decrypt it, and measure the damage."""
    plain = np.asarray(img, dtype=np.uint8)
    cipher = encrypt_image(plain, keys)
    sl = loss_region(plain.shape, fraction, region, anchor)
    damaged = cipher.copy()
    damaged[sl] = 0
    recovered = decrypt_image(damaged, keys)
    return DataLossResult(damaged, recovered, mse(recovered, plain), sl)


# --- report -----------------------------------------------------------------


def channels(img: np.ndarray) -> list[tuple[str, np.ndarray]]:
    """Named 2-D planes of an image: ``gray`` or ``R``, ``G``, ``B``."""
    a = np.asarray(img)
    if a.ndim == 2:
        return [("gray", a)]
    return [(c, a[:, :, k]) for k, c in enumerate("RGB")]


@dataclass
class AuditConfig:
    keys: KeySet
    seed: int = 0
    diff_trials: int = 20
    corr_pairs: int = 5000
    exponents: Sequence[int] = tuple(range(40, 61))
    sensitivity_image: str = "lena"
    loss_fractions: Sequence[float] = (0.25, 0.5)
    sections: Sequence[str] = ("chi2", "diff", "corr", "keysens", "dataloss")


@dataclass(frozen=True)
class AuditRow:
    table: str
    image: str
    item: str
    value: float
    reference: str = ""
    passed: Optional[bool] = None


_TITLES = {
    "chi2": "histogram uniformity (chi-square, 255 dof)",
    "diff": "differential attack (NPCR / UACI, percent)",
    "corr": "adjacent pixel correlation",
    "keysens": "key sensitivity (largest e with MSE >= floor)",
    "dataloss": "cipher data loss (MSE after decryption)",
}


@dataclass
class AuditReport:
    config: AuditConfig
    rows: list[AuditRow] = field(default_factory=list)

    def table(self, name: str) -> list[AuditRow]:
        return [r for r in self.rows if r.table == name]


def run_audit(images: dict[str, np.ndarray], cfg: AuditConfig) -> AuditReport:
    rep = AuditReport(cfg)
    add = rep.rows.append
    ciphers = {name: encrypt_image(img, cfg.keys) for name, img in images.items()}
    if "chi2" in cfg.sections:
        for name, img in images.items():
            for ch, plane in channels(img):
                add(AuditRow("chi2", name, f"plain {ch}", chi2_uniformity(plane).statistic))
            for ch, plane in channels(ciphers[name]):
                r = chi2_uniformity(plane)
                add(AuditRow("chi2", name, f"cipher {ch}", r.statistic, f"< {CHI2_CRITICAL_005}", r.passed))
    if "diff" in cfg.sections:
        for name, img in images.items():
            d = diff_attack_trial(img, cfg.keys, cfg.diff_trials, cfg.seed)
            size = np.asarray(img).shape[0] * np.asarray(img).shape[1] * (3 if np.ndim(img) == 3 else 1)
            for alpha in (0.05, 0.01, 0.001):
                ncrit, (ulo, uhi) = npcr_uaci_critical(size, alpha)
                add(AuditRow("diff", name, f"NPCR alpha={alpha}", d.npcr, f"> {ncrit:.4f}", d.npcr > ncrit))
                add(AuditRow("diff", name, f"UACI alpha={alpha}", d.uaci, f"[{ulo:.4f}, {uhi:.4f}]", ulo <= d.uaci <= uhi))
    if "corr" in cfg.sections:
        for name, img in images.items():
            for label, src in (("plain", img), ("cipher", ciphers[name])):
                for ch, plane in channels(src):
                    for d in Direction:
                        try:
                            cc = correlation(plane, d, cfg.corr_pairs, cfg.seed).cc
                        except ValueError:
                            cc = float("nan")
                        ok = abs(cc) < 0.02 if label == "cipher" else None
                        ref = "|cc| < 0.02" if label == "cipher" else ""
                        add(AuditRow("corr", name, f"{label} {ch} {d.value}", cc, ref, ok))
    if "keysens" in cfg.sections and cfg.sensitivity_image in images:
        img = images[cfg.sensitivity_image]
        for k in KEY_NAMES:
            curve = key_sensitivity(img, cfg.keys, k, cfg.exponents)
            t = curve.threshold_exponent
            ok = t is not None and 51 <= t <= 58
            add(AuditRow("keysens", cfg.sensitivity_image, k, float("nan") if t is None else float(t), "51..58", ok))
    if "dataloss" in cfg.sections:
        for name, img in images.items():
            for f in cfg.loss_fractions:
                add(AuditRow("dataloss", name, f"loss {f:g}", data_loss(img, cfg.keys, f).mse))
    return rep


def _fmt(v: float) -> str:
    return "nan" if v != v else f"{v:.6g}" if abs(v) >= 1e-3 or v == 0 else f"{v:.3e}"


def write_report_csv(path, report: AuditReport) -> None:
    cfg = report.config
    with open(Path(path), "w", newline="") as fh:
        fh.write(f"# seed={cfg.seed} keys={' '.join(repr(v) for v in cfg.keys.as_tuple())}\n")
        fh.write("table,image,item,value,reference,passed\n")
        for r in report.rows:
            passed = "" if r.passed is None else str(r.passed).lower()
            fh.write(f"{r.table},{r.image},{r.item},{r.value!r},\"{r.reference}\",{passed}\n")


def format_report(report: AuditReport) -> str:
    cfg = report.config
    out = [
        "cipher security audit",
        f"sampling seed: {cfg.seed}",
        f"keys: {' '.join(repr(v) for v in cfg.keys.as_tuple())}",
        "",
    ]
    for name, title in _TITLES.items():
        rows = report.table(name)
        if not rows:
            continue
        out.append(f"== {title} ==")
        for r in rows:
            mark = "" if r.passed is None else ("  PASS" if r.passed else "  FAIL")
            ref = f"  ({r.reference})" if r.reference else ""
            out.append(f"  {r.image:<10} {r.item:<28} {_fmt(r.value):>12}{ref}{mark}")
        if name == "corr":
            sd = 1 / math.sqrt(cfg.corr_pairs)
            out.append(f"  note: sampling sd of cc for uncorrelated pixels is about {sd:.4f} at {cfg.corr_pairs} pairs;")
            out.append(f"  the 0.02 bound is {0.02 / sd:.2f} sd, so some cipher rows fail by chance alone")
        out.append("")
    return "\n".join(out)

