"""Run the full cipher audit on the bundled corpus and write CSV + text reports.

    python scripts/security_audit.py --out results/audit [--seed 0] [--trials 20]
"""

import argparse
import time
from pathlib import Path

from utccs import corpus
from utccs.audit import AuditConfig, format_report, run_audit, write_report_csv
from utccs.cipher import DEFAULT_KEYS, KeySet


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results/audit"))
    ap.add_argument("--keys", type=Path, help="key file (defaults to the built-in demo keys)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--pairs", type=int, default=5000)
    args = ap.parse_args()
    keys = KeySet.from_file(args.keys) if args.keys else DEFAULT_KEYS
    images = {name: corpus.load(name) for name in corpus.GRAY + corpus.COLOR}
    cfg = AuditConfig(keys=keys, seed=args.seed, diff_trials=args.trials, corr_pairs=args.pairs)
    t0 = time.perf_counter()
    report = run_audit(images, cfg)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_report_csv(args.out.with_suffix(".csv"), report)
    text = format_report(report)
    args.out.with_suffix(".txt").write_text(text + "\n")
    print(text)
    print(f"audit took {time.perf_counter() - t0:.0f} s")


if __name__ == "__main__":
    main()
