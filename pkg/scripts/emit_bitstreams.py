"""Emit raw CBPRNG bitstreams for external batteries (NIST SP800-22, TestU01).

Files are headerless bytes with words packed most-significant bit first.
The NIST suite reads them with input mode "binary"; TestU01 with
``ufile_CreateReadBin``.  Each sequence uses a distinct initial value
``x0 + i * step`` so that the set of sequences is reproducible.

    python scripts/emit_bitstreams.py --out results/streams --sequences 100 --bits 1000000
"""

import argparse
from pathlib import Path

from utccs.cbprng import DEMO_PARAMS, Cbprng


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results/streams"))
    ap.add_argument("--maps", nargs="+", default=sorted(DEMO_PARAMS), choices=sorted(DEMO_PARAMS))
    ap.add_argument("--sequences", type=int, default=1)
    ap.add_argument("--bits", type=int, default=1_000_000)
    ap.add_argument("--step", type=float, default=1e-6)
    ap.add_argument("--k", type=int, choices=(32, 64), default=32)
    args = ap.parse_args()
    if args.bits % 8:
        ap.error("--bits must be a multiple of 8")
    args.out.mkdir(parents=True, exist_ok=True)
    for name in args.maps:
        x0, r = DEMO_PARAMS[name]
        path = args.out / f"{name}_{args.sequences}x{args.bits}.bin"
        with open(path, "wb") as fh:
            for i in range(args.sequences):
                Cbprng(name, x0 + i * args.step, r, args.k).emit_bitstream(args.bits, fh)
        print(path, path.stat().st_size)


if __name__ == "__main__":
    main()
