"""Bundled 8-bit test images (rebuilt by scripts/build_corpus.py)."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .pnm import read_pnm

GRAY = ("lena", "cameraman", "moon", "coins")
COLOR = ("astronaut", "coffee")
# lena512 is the full-resolution original of lena
EXTRA = ("lena512",)


def path(name: str):
    ext = "ppm" if name in COLOR else "pgm"
    return resources.files("utccs") / "data" / f"{name}.{ext}"


def load(name: str) -> np.ndarray:
    if name not in GRAY + COLOR + EXTRA:
        raise KeyError(f"no bundled image {name!r}")
    with resources.as_file(path(name)) as p:
        return read_pnm(p)
