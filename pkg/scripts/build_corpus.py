"""Rebuild the bundled test images in src/utccs/data/.

Sources:
  lena       - scipy 0.15.1 source distribution (scipy/misc/lena.dat, 512x512 gray)
  cameraman, moon, coins, astronaut, coffee - scikit-image's bundled data

512x512 sources are reduced to 256x256 by 2x2 block averaging (rounded, ties
to even).  coins is center-cropped, coffee is center-cropped to a square and
resampled with anti-aliasing.  Needs network access for the scipy sdist and
scikit-image installed.

    python scripts/build_corpus.py [--cache DIR]
"""

import argparse
import io
import pickle
import re
import tarfile
import urllib.request
from pathlib import Path

import numpy as np
import skimage.data
from skimage.transform import resize

from utccs.pnm import write_pgm, write_ppm

OUT = Path(__file__).resolve().parents[1] / "src" / "utccs" / "data"
SCIPY_INDEX = "https://pypi.org/simple/scipy/"
SCIPY_SDIST = "scipy-0.15.1.tar.gz"


def block_half(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    h, w = a.shape[:2]
    b = a.reshape(h // 2, 2, w // 2, 2, *a.shape[2:]).mean(axis=(1, 3))
    return np.rint(b).astype(np.uint8)


def center_crop(a: np.ndarray, h: int, w: int) -> np.ndarray:
    top = (a.shape[0] - h) // 2
    left = (a.shape[1] - w) // 2
    return a[top : top + h, left : left + w]


def fetch_lena(cache: Path) -> np.ndarray:
    cache.mkdir(parents=True, exist_ok=True)
    tgz = cache / SCIPY_SDIST
    if not tgz.exists():
        index = urllib.request.urlopen(SCIPY_INDEX, timeout=120).read().decode()
        m = re.search(r'href="([^"]*%s)[^"]*"' % re.escape(SCIPY_SDIST), index)
        if not m:
            raise SystemExit("scipy 0.15.1 sdist not found on the index")
        url = urllib.request.urljoin(SCIPY_INDEX, m.group(1))
        tgz.write_bytes(urllib.request.urlopen(url, timeout=600).read())
    with tarfile.open(tgz) as tf:
        raw = tf.extractfile("scipy-0.15.1/scipy/misc/lena.dat").read()
    return np.array(pickle.load(io.BytesIO(raw), encoding="latin1")).astype(np.uint8)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--cache", type=Path, default=Path.home() / ".cache" / "utccs")
    args = ap.parse_args()
    OUT.mkdir(parents=True, exist_ok=True)

    lena = fetch_lena(args.cache)
    write_pgm(OUT / "lena512.pgm", lena)
    write_pgm(OUT / "lena.pgm", block_half(lena))
    write_pgm(OUT / "cameraman.pgm", block_half(skimage.data.camera()))
    write_pgm(OUT / "moon.pgm", block_half(skimage.data.moon()))
    write_pgm(OUT / "coins.pgm", center_crop(skimage.data.coins(), 256, 256))
    write_ppm(OUT / "astronaut.ppm", block_half(skimage.data.astronaut()))
    coffee = center_crop(skimage.data.coffee(), 400, 400)
    coffee = resize(coffee, (256, 256), anti_aliasing=True, preserve_range=True)
    write_ppm(OUT / "coffee.ppm", np.rint(coffee).astype(np.uint8))
    for p in sorted(OUT.glob("*.p?m")):
        print(p.name, p.stat().st_size)


if __name__ == "__main__":
    main()
