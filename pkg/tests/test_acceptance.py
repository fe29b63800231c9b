"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed at the end of the pytest run (and inline with ``-s``).
"""

import math
import time

import numpy as np
import pytest

from utccs import corpus
from utccs.audit import (
    CHI2_CRITICAL_005,
    NPCR_CRITICAL,
    UACI_CRITICAL,
    chi2_uniformity,
    correlation,
    diff_attack_trial,
    key_sensitivity,
    npcr_uaci,
)
from utccs.cbprng import DEMO_PARAMS, Cbprng, lcg_next
from utccs.cipher import (
    DEFAULT_KEYS,
    KEY_NAMES,
    KeySet,
    PermutationPlan,
    bitplane_flip,
    confuse,
    decrypt,
    encrypt,
)
from utccs.maps import COUPLINGS, MapSpec, SeedMap, TYPE_UTF, Utf, coupling, seed_only
from utccs.metrics import SampleEntropyConfig, lyapunov_exponent, lyapunov_sweep, orbit_sample_entropy, r_grid

FAMILIES = sorted(COUPLINGS)
LE_ITER = 10_000

# extra key sets for the histogram test, fixed before any run
HIST_KEYS = [
    DEFAULT_KEYS,
    KeySet(0.1372, 0.8119, 0.3390, 0.5527, 0.8846, 0.2071),
    KeySet(0.6613, 0.3045, 0.9178, 0.1486, 0.2759, 0.7392),
]


def test_chaos_positivity(criterion):
    rs = r_grid(101)
    t0 = time.perf_counter()
    worst = {}
    for name in FAMILIES:
        lam = lyapunov_sweep(coupling(name, Utf.TENT_SLOPE8, 0.5), rs, iterations=LE_ITER)
        worst[name] = float(np.min(lam))
    elapsed = time.perf_counter() - t0
    ok = all(v > 0 for v in worst.values()) and elapsed < 30
    detail = ", ".join(f"{k} min {v:.3f}" for k, v in worst.items()) + f"; {elapsed:.1f} s"
    assert criterion(1, "type-III exponent positive on 101-point grid", ok, detail)


def test_transform_offset_law(criterion):
    rs = r_grid(101)
    bad = {}
    worst = 0.0
    for name in FAMILIES:
        lam = {t: lyapunov_sweep(coupling(name, TYPE_UTF[t], 0.5), rs, iterations=LE_ITER) for t in (1, 2, 3)}
        d3 = lam[3] - lam[1] - math.log(4)
        d2 = lam[2] - lam[1] - math.log(2)
        miss = (np.abs(d3) > 0.02) | (np.abs(d2) > 0.02)
        bad[name] = int(np.count_nonzero(miss))
        worst = max(worst, float(np.max(np.abs(d3))), float(np.max(np.abs(d2))))
    ok = not any(bad.values())
    detail = ", ".join(f"{k} {v}/101 off" for k, v in bad.items()) + f"; worst |offset error| {worst:.3f}"
    assert criterion(2, "exponent offsets ln4 / ln2 within 0.02", ok, detail)


def test_tent_estimator_sanity(criterion):
    lam = lyapunov_exponent(MapSpec(SeedMap.TENT, None, Utf.IDENTITY, 1.0), iterations=LE_ITER).lam
    ok = abs(lam - math.log(2)) <= 0.01
    assert criterion(3, "tent r=1 exponent equals ln 2", ok, f"lambda {lam:.6f}")


def test_sample_entropy_ordering(criterion):
    rs = r_grid(21)
    cfg = SampleEntropyConfig()
    violations = {}
    for name in FAMILIES:
        a, b = COUPLINGS[name]
        count = 0
        for r in rs:
            r = float(r)
            se3 = orbit_sample_entropy(coupling(name, Utf.TENT_SLOPE8, r), cfg)
            se1 = orbit_sample_entropy(coupling(name, Utf.TENT_SLOPE2, r), cfg)
            se_seed = max(orbit_sample_entropy(seed_only(a, r), cfg), orbit_sample_entropy(seed_only(b, r), cfg))
            count += not (se3 >= se1 >= se_seed)
        violations[name] = count
    ok = all(v <= 2 for v in violations.values())
    detail = ", ".join(f"{k} {v} violations" for k, v in violations.items())
    assert criterion(4, "sample entropy type-III >= type-I >= seed maps", ok, detail)


def test_cbprng_uniformity(criterion):
    notes = []
    ok = True
    n_bits = 1 << 20
    sigma = math.sqrt(n_bits) / 2
    for name in FAMILIES:
        x0, r = DEMO_PARAMS[name]
        stream = Cbprng(name, x0, r).words(n_bits // 32).astype(">u4").tobytes()
        raw = np.frombuffer(stream, dtype=np.uint8)
        ones = int(np.unpackbits(raw).sum())
        z = (ones - n_bits / 2) / sigma
        counts = np.bincount(raw, minlength=256)
        fe = len(raw) / 256
        chi2 = float(np.sum((counts - fe) ** 2) / fe)
        w = Cbprng(name, x0, r).words(1_000_000)
        frac = [float(np.mean((w >> np.uint64(b)) & np.uint64(1))) for b in range(32)]
        this = abs(z) <= 3 and chi2 < 330 and all(0.498 <= f <= 0.502 for f in frac)
        ok &= this
        notes.append(f"{name} z={z:+.2f} chi2={chi2:.1f} bits {min(frac):.4f}..{max(frac):.4f}")
    assert criterion(5, "CBPRNG monobit, byte chi-square, per-bit balance", ok, "; ".join(notes))


def test_cipher_roundtrip(criterion):
    rng = np.random.default_rng(2024)
    shapes = [(1, 1), (1, 7), (256, 256)] + [tuple(int(v) for v in rng.integers(1, 17, 2)) for _ in range(100)]
    t0 = time.perf_counter()
    failures = 0
    for shape in shapes:
        keys = KeySet(*rng.uniform(0.01, 0.99, 6))
        img = rng.integers(0, 256, shape, dtype=np.uint8)
        failures += not np.array_equal(decrypt(encrypt(img, keys), keys), img)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 10
    assert criterion(6, "decrypt(encrypt(P, K), K) == P", ok, f"{len(shapes)} cases, {failures} failed, {elapsed:.1f} s")


def test_histogram_uniformity(criterion):
    ok = True
    notes = []
    for i, keys in enumerate(HIST_KEYS):
        stats = [chi2_uniformity(encrypt(corpus.load(name), keys)).statistic for name in corpus.GRAY]
        passed = sum(s < CHI2_CRITICAL_005 for s in stats)
        ok &= passed >= 3
        notes.append(f"keys{i}: {passed}/4 (" + " ".join(f"{s:.0f}" for s in stats) + ")")
    assert criterion(7, "cipher histogram chi-square below 293.2478", ok, "; ".join(notes))


def test_differential_attack(criterion):
    rep = diff_attack_trial(corpus.load("lena"), DEFAULT_KEYS, trials=20, seed=0)
    lo, hi = UACI_CRITICAL[0.05]
    ok = rep.npcr > NPCR_CRITICAL[0.05] and lo <= rep.uaci <= hi
    detail = f"NPCR {rep.npcr:.4f} (min trial {min(rep.npcr_trials):.3f}), UACI {rep.uaci:.4f}"
    assert criterion(8, "one-bit differential NPCR / UACI", ok, detail)


def test_correlation(criterion):
    c = encrypt(corpus.load("lena"), DEFAULT_KEYS)
    ccs = {d: correlation(c, d, 5000, seed=0).cc for d in ("horizontal", "vertical", "diagonal")}
    plain = correlation(corpus.load("lena512"), "horizontal", 5000, seed=0).cc
    ok = all(abs(v) < 0.02 for v in ccs.values()) and abs(plain - 0.973) <= 0.01
    detail = " ".join(f"{d[0]}={v:+.4f}" for d, v in ccs.items()) + f"; plain Lena h={plain:.4f}"
    assert criterion(9, "adjacent pixel correlation", ok, detail)


def test_key_sensitivity(criterion):
    img = corpus.load("lena")
    th = {k: key_sensitivity(img, DEFAULT_KEYS, k, range(40, 61)).threshold_exponent for k in KEY_NAMES}
    ok = all(t is not None and 51 <= t <= 58 for t in th.values())
    detail = " ".join(f"{k}=2^-{t}" for k, t in th.items())
    assert criterion(10, "key sensitivity threshold in [2^-58, 2^-51]", ok, detail)


def test_property_suites(criterion):
    rng = np.random.default_rng(7)
    checks = {}
    ok_multiset = ok_bpf = ok_npcr = True
    for _ in range(200):
        m, n = (int(v) for v in rng.integers(1, 12, 2))
        img = rng.integers(0, 256, (m, n), dtype=np.uint8)
        plan = PermutationPlan(rng.integers(1, m + 1, (m, n)), rng.integers(1, n + 1, (m, n)))
        ok_multiset &= sorted(confuse(img, plan).ravel().tolist()) == sorted(img.ravel().tolist())
        ok_bpf &= np.array_equal(bitplane_flip(bitplane_flip(img)), img)
        a = rng.integers(0, 256, (4, 4))
        b = rng.integers(0, 256, (4, 4))
        rep = npcr_uaci(a, b)
        diff = sum(int(a[i, j] != b[i, j]) for i in range(4) for j in range(4))
        inten = sum(abs(int(a[i, j]) - int(b[i, j])) / 255 for i in range(4) for j in range(4))
        ok_npcr &= math.isclose(rep.npcr, 100 * diff / 16) and math.isclose(rep.uaci, 100 * inten / 16)
    checks["multiset"] = ok_multiset
    checks["bpf"] = ok_bpf
    checks["npcr4x4"] = ok_npcr
    checks["lcg"] = [lcg_next(0), lcg_next(1), lcg_next(1 << 30)] == [12345, 1103527590, 1073754169]
    ok = all(checks.values())
    assert criterion(11, "property suites", ok, " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items()))
