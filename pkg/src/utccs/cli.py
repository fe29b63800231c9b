"""Command-line entry point: ``utccs <command> ...`` (or ``python -m utccs``)."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import audit, corpus, metrics
from .cbprng import DEMO_PARAMS, Cbprng
from .cipher import DEFAULT_KEYS, KEY_NAMES, KeySet, decrypt_image, encrypt_image
from .maps import iterate_orbit, parse_map
from .pnm import read_pnm, write_pnm


class CliError(Exception):
    pass


def _unit(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is outside [0, 1]")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"{text} must be >= 0")
    return v


def _exponents(text: str) -> range:
    lo, _, hi = text.partition(":")
    return range(int(lo), int(hi) + 1) if hi else range(int(lo), int(lo) + 1)


# --- map --------------------------------------------------------------------


def cmd_map(a: argparse.Namespace) -> None:
    spec = parse_map(a.map, a.r)
    if a.action == "step":
        orb = iterate_orbit(spec, a.x0, 1)
        print(repr(float(orb.states[0])))
        return
    orb = iterate_orbit(spec, a.x0, a.length, a.discard)
    rows = ((i, v) for i, v in enumerate(orb.states, start=1))
    if a.out:
        metrics.write_csv(a.out, ("n", "x"), rows)
    else:
        for i, v in rows:
            print(f"{i},{v!r}")


# --- analyze ----------------------------------------------------------------


def cmd_analyze(a: argparse.Namespace) -> None:
    family = parse_map(a.map, a.r)
    if a.action == "cobweb":
        tr = metrics.cobweb_data(family, a.x0, a.steps)
        metrics.write_csv(a.out, ("x1", "y1", "x2", "y2"), tr.segments.tolist())
        return
    rs = metrics.r_grid(a.r_grid)
    if a.action == "le":
        lam = metrics.lyapunov_sweep(family, rs, a.x0, a.iterations, a.discard)
        metrics.write_csv(a.out, ("r", "lambda"), zip(rs, lam))
    elif a.action == "bifurcation":
        series = metrics.bifurcation_data(family, rs, a.x0, a.discard, a.keep)
        metrics.write_csv(a.out, ("r", "x"), series.rows())
    else:
        cfg = metrics.SampleEntropyConfig(x0=a.x0, length=a.length)
        se = [metrics.orbit_sample_entropy(family.with_r(float(r)), cfg) for r in rs]
        metrics.write_csv(a.out, ("r", "se"), zip(rs, se))


# --- rng --------------------------------------------------------------------


def cmd_rng(a: argparse.Namespace) -> None:
    x0 = DEMO_PARAMS[a.map][0] if a.x0 is None else a.x0
    r = DEMO_PARAMS[a.map][1] if a.r is None else a.r
    gen = Cbprng(a.map, x0, r, a.k)
    with open(a.out, "wb") as fh:
        n = gen.emit_bitstream(a.bits, fh)
    print(f"wrote {n} bytes to {a.out}", file=sys.stderr)


# --- encrypt / decrypt ------------------------------------------------------


def _keys(a: argparse.Namespace) -> KeySet:
    flags = {k: getattr(a, k) for k in KEY_NAMES}
    given = [k for k, v in flags.items() if v is not None]
    if a.keys is not None:
        if given:
            raise CliError("use either --keys or the individual key flags, not both")
        return KeySet.from_file(a.keys)
    if not given:
        if getattr(a, "allow_default_keys", False):
            return DEFAULT_KEYS
        raise CliError("keys required: --keys FILE or all of --x1 --r1 --x2 --r2 --x3 --r3")
    if len(given) != 6:
        raise CliError(f"missing key flags: {', '.join('--' + k for k in KEY_NAMES if k not in given)}")
    return KeySet(**flags)


def cmd_crypt(a: argparse.Namespace) -> None:
    keys = _keys(a)
    img = read_pnm(a.inp)
    fn = encrypt_image if a.command == "encrypt" else decrypt_image
    write_pnm(a.out, fn(img, keys))


# --- audit ------------------------------------------------------------------


def _audit_images(a: argparse.Namespace) -> dict[str, np.ndarray]:
    if a.inp:
        return {Path(p).stem: read_pnm(p) for p in a.inp}
    return {name: corpus.load(name) for name in corpus.GRAY + corpus.COLOR}


def cmd_audit(a: argparse.Namespace) -> None:
    a.allow_default_keys = True
    keys = _keys(a)
    images = _audit_images(a)
    sections = ("chi2", "diff", "corr", "keysens", "dataloss") if a.action == "all" else (a.action,)
    sens_image = a.sensitivity_image or next(iter(images))
    cfg = audit.AuditConfig(
        keys=keys,
        seed=a.seed,
        diff_trials=a.trials,
        corr_pairs=a.pairs,
        exponents=tuple(a.exponents),
        sensitivity_image=sens_image,
        sections=sections,
    )
    if sens_image not in images and "keysens" in sections:
        raise CliError(f"sensitivity image {sens_image!r} is not among the audited images")
    report = audit.run_audit(images, cfg)
    text = audit.format_report(report)
    if a.out:
        out = Path(a.out)
        audit.write_report_csv(out.with_suffix(".csv"), report)
        out.with_suffix(".txt").write_text(text + "\n")
    print(text)


# --- parser -----------------------------------------------------------------


def _key_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--keys", type=Path, help="key file: x1 r1 x2 r2 x3 r3, one per line")
    for k in KEY_NAMES:
        p.add_argument(f"--{k}", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="utccs", description="Coupled chaotic maps, CBPRNG and image cipher")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("map", help="iterate a single map")
    p.add_argument("action", choices=("step", "orbit"))
    p.add_argument("--map", default="lscm3")
    p.add_argument("--r", type=_unit, default=0.5)
    p.add_argument("--x0", type=_unit, default=0.1)
    p.add_argument("--length", type=_positive, default=100)
    p.add_argument("--discard", type=_nonneg, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("analyze", help="chaos metrics over the r grid, written as CSV")
    p.add_argument("action", choices=("le", "bifurcation", "cobweb", "se"))
    p.add_argument("--map", default="lscm3")
    p.add_argument("--r-grid", type=_positive, default=101, dest="r_grid")
    p.add_argument("--r", type=_unit, default=0.8, help="control parameter for cobweb")
    p.add_argument("--x0", type=_unit, default=0.1)
    p.add_argument("--iterations", type=_positive, default=10_000)
    p.add_argument("--discard", type=_nonneg, default=None)
    p.add_argument("--keep", type=_positive, default=200)
    p.add_argument("--steps", type=_positive, default=50)
    p.add_argument("--length", type=_positive, default=5_000)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("rng", help="raw CBPRNG bitstream, MSB first")
    p.add_argument("--map", choices=tuple(DEMO_PARAMS), default="lscm")
    p.add_argument("--x0", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--k", type=int, choices=(32, 64), default=32)
    p.add_argument("--bits", type=_positive, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_rng)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a PGM/PPM image")
        p.add_argument("--in", dest="inp", type=Path, required=True)
        p.add_argument("--out", type=Path, required=True)
        _key_flags(p)
        p.set_defaults(func=cmd_crypt)

    p = sub.add_parser("audit", help="security audit of the cipher")
    p.add_argument("action", choices=("chi2", "diff", "corr", "keysens", "dataloss", "all"))
    p.add_argument("--in", dest="inp", type=Path, nargs="*", help="images (default: bundled corpus)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive, default=20)
    p.add_argument("--pairs", type=_positive, default=5000)
    p.add_argument("--exponents", type=_exponents, default=range(40, 61), help="LO:HI inclusive")
    p.add_argument("--sensitivity-image", dest="sensitivity_image")
    p.add_argument("--out", type=Path, help="report stem; writes STEM.csv and STEM.txt")
    _key_flags(p)
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    if getattr(a, "discard", 0) is None:
        a.discard = 500 if a.action == "bifurcation" else 1_000
    try:
        a.func(a)
    except (CliError, ValueError, KeyError, OSError) as exc:
        print(f"utccs: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
