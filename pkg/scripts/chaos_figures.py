"""Write the CSV series behind the chaos plots: Lyapunov exponents, bifurcation
samples, cobweb traces and sample entropy for every coupling and transform.

    python scripts/chaos_figures.py --out results/chaos [--r-grid 101]
"""

import argparse
import time
from pathlib import Path

from utccs.maps import COUPLINGS, TYPE_UTF, Utf, coupling, seed_only
from utccs.metrics import (
    BifurcationConfig,
    LyapunovConfig,
    SampleEntropyConfig,
    bifurcation_data,
    cobweb_data,
    lyapunov_sweep,
    orbit_sample_entropy,
    r_grid,
    write_csv,
)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results/chaos"))
    ap.add_argument("--r-grid", type=int, default=101)
    ap.add_argument("--se-grid", type=int, default=21)
    ap.add_argument("--cobweb-r", type=float, default=0.8)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    le, bif, se = LyapunovConfig(), BifurcationConfig(n_r=args.r_grid), SampleEntropyConfig()
    rs = r_grid(args.r_grid)
    se_rs = r_grid(args.se_grid)

    for name, (a, b) in COUPLINGS.items():
        t0 = time.perf_counter()
        for typ, utf in TYPE_UTF.items():
            fam = coupling(name, utf, 0.5)
            lam = lyapunov_sweep(fam, rs, le.x0, le.iterations, le.transient_discard)
            write_csv(args.out / f"le_{name}{typ}.csv", ("r", "lambda"), zip(rs, lam))
            series = bifurcation_data(fam, rs, bif.x0, bif.discard, bif.keep)
            write_csv(args.out / f"bifurcation_{name}{typ}.csv", ("r", "x"), series.rows())
            vals = [orbit_sample_entropy(fam.with_r(float(r)), se) for r in se_rs]
            write_csv(args.out / f"se_{name}{typ}.csv", ("r", "se"), zip(se_rs, vals))
        trace = cobweb_data(coupling(name, Utf.TENT_SLOPE8, args.cobweb_r), 0.1, 100)
        write_csv(args.out / f"cobweb_{name}3.csv", ("x1", "y1", "x2", "y2"), trace.segments.tolist())
        print(f"{name}: {time.perf_counter() - t0:.1f} s")

    for seed in {s for pair in COUPLINGS.values() for s in pair}:
        fam = seed_only(seed, 0.5)
        lam = lyapunov_sweep(fam, rs, le.x0, le.iterations, le.transient_discard)
        write_csv(args.out / f"le_{seed.value}.csv", ("r", "lambda"), zip(rs, lam))
        vals = [orbit_sample_entropy(fam.with_r(float(r)), se) for r in se_rs]
        write_csv(args.out / f"se_{seed.value}.csv", ("r", "se"), zip(se_rs, vals))
        trace = cobweb_data(fam.with_r(args.cobweb_r), 0.1, 100)
        write_csv(args.out / f"cobweb_{seed.value}.csv", ("x1", "y1", "x2", "y2"), trace.segments.tolist())
    print(f"wrote {len(list(args.out.glob('*.csv')))} files to {args.out}")


if __name__ == "__main__":
    main()
