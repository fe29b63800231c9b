"""Confusion / bit-plane flip / two-pass diffusion image cipher and its inverse.

Pipeline for an ``M x N`` 8-bit image::

    encrypt = diffuse . bitplane_flip . confuse
    decrypt = unconfuse . bitplane_flip . undiffuse

Confusion swaps every pixel, in row-major order, with a partner chosen by two
index matrices drawn from the LSCM and TLCM generators.  Diffusion chains the
pixels forward through XOR and bit reversal, then backward through addition
mod 256, with a keystream from the STCM generator.  Color images are stacked
channel-wise into a ``3M x N`` gray image first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .cbprng import Cbprng

__all__ = [
    "KeySet",
    "PermutationPlan",
    "KEY_NAMES",
    "flatten_color",
    "split_color",
    "derive_permutation",
    "diffusion_keystream",
    "confuse",
    "unconfuse",
    "bitplane_flip",
    "bit_reverse",
    "bit_reverse8",
    "diffuse",
    "undiffuse",
    "encrypt",
    "decrypt",
    "encrypt_image",
    "decrypt_image",
]

KEY_NAMES = ("x1", "r1", "x2", "r2", "x3", "r3")


@dataclass(frozen=True)
class KeySet:
    """Six secret keys, each strictly inside (0, 1)."""

    x1: float
    r1: float
    x2: float
    r2: float
    x3: float
    r3: float

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (float, int)) or not (0.0 < v < 1.0) or math.isnan(v):
                raise ValueError(f"key {f.name}={v!r} must lie in (0, 1)")
            object.__setattr__(self, f.name, float(v))

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, n) for n in KEY_NAMES)

    def perturbed(self, name: str, delta: float) -> "KeySet":
        """Copy with ``name`` shifted by ``delta``; raises ValueError if it leaves (0, 1)."""
        if name not in KEY_NAMES:
            raise KeyError(name)
        return replace(self, **{name: getattr(self, name) + delta})

    @classmethod
    def parse(cls, text: str) -> "KeySet":
        vals = [float(tok) for tok in text.split()]
        if len(vals) != 6:
            raise ValueError(f"expected 6 key values, got {len(vals)}")
        return cls(*vals)

    @classmethod
    def from_file(cls, path) -> "KeySet":
        lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
        return cls.parse("\n".join(ln for ln in lines if ln and not ln.startswith("#")))

    def to_text(self) -> str:
        return "".join(f"{v!r}\n" for v in self.as_tuple())


DEFAULT_KEYS = KeySet(0.4584, 0.6541, 0.7215, 0.2863, 0.5972, 0.9335)


# --- color handling ---------------------------------------------------------


def flatten_color(channels: Union[np.ndarray, Sequence[np.ndarray]]) -> np.ndarray:
    """Stack R, G, B channels vertically into one ``3M x N`` image.

    A 2-D array is taken as grayscale and returned unchanged.  An ``(M, N, 3)``
    array or a sequence of three ``M x N`` arrays are both accepted.
    """
    if isinstance(channels, np.ndarray):
        if channels.ndim == 2:
            return channels
        if channels.ndim == 3 and channels.shape[2] == 3:
            return np.concatenate([channels[:, :, c] for c in range(3)], axis=0)
        raise ValueError(f"cannot flatten array of shape {channels.shape}")
    chans = [np.asarray(c) for c in channels]
    if len(chans) != 3:
        raise ValueError("expected exactly three channels")
    if any(c.ndim != 2 or c.shape != chans[0].shape for c in chans):
        raise ValueError("channels must be 2-D with identical dimensions")
    return np.concatenate(chans, axis=0)


def split_color(img: np.ndarray) -> np.ndarray:
    """Inverse of :func:`flatten_color`: ``3M x N`` back to ``(M, N, 3)``."""
    rows = img.shape[0]
    if rows % 3:
        raise ValueError("row count is not a multiple of 3")
    m = rows // 3
    return np.stack([img[c * m : (c + 1) * m] for c in range(3)], axis=2)


# --- key-derived material ---------------------------------------------------


@lru_cache(maxsize=32)
def _generator_words(name: str, x0: float, r: float, count: int, modulus: int) -> np.ndarray:
    w = Cbprng(name, x0, r).words(count) % np.uint64(modulus)
    out = w.astype(np.int64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class PermutationPlan:
    """1-based row and column partners for every pixel."""

    h1: np.ndarray
    h2: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.h1.shape

    def flat_targets(self) -> np.ndarray:
        n = self.h1.shape[1]
        return ((self.h1 - 1) * n + (self.h2 - 1)).ravel()


def derive_permutation(x1: float, r1: float, x2: float, r2: float, m: int, n: int) -> PermutationPlan:
    h1 = _generator_words("lscm", x1, r1, m * n, m).reshape(m, n) + 1
    h2 = _generator_words("tlcm", x2, r2, m * n, n).reshape(m, n) + 1
    return PermutationPlan(h1, h2)


def diffusion_keystream(x3: float, r3: float, count: int) -> np.ndarray:
    """``2MN`` STCM words reduced mod 256 (pass ``count = MN``)."""
    return _generator_words("stcm", x3, r3, 2 * count, 256)


# --- confusion --------------------------------------------------------------


def _check_plan(img: np.ndarray, plan: PermutationPlan) -> None:
    if img.ndim != 2 or plan.shape != img.shape:
        raise ValueError(f"plan shape {plan.shape} does not match image {img.shape}")


def confuse(img: np.ndarray, plan: PermutationPlan) -> np.ndarray:
    """Swap each pixel (row-major order) with its partner ``(H1, H2)``."""
    _check_plan(img, plan)
    t = img.ravel().tolist()
    for p, q in enumerate(plan.flat_targets().tolist()):
        t[p], t[q] = t[q], t[p]
    return np.array(t, dtype=img.dtype).reshape(img.shape)


def unconfuse(img: np.ndarray, plan: PermutationPlan) -> np.ndarray:
    """Replay the swaps of :func:`confuse` in reverse order."""
    _check_plan(img, plan)
    t = img.ravel().tolist()
    targets = plan.flat_targets().tolist()
    for p in range(len(targets) - 1, -1, -1):
        q = targets[p]
        t[p], t[q] = t[q], t[p]
    return np.array(t, dtype=img.dtype).reshape(img.shape)


# --- bit-plane flip ---------------------------------------------------------


def bitplane_flip(img: np.ndarray) -> np.ndarray:
    """Flip even bit planes top-to-bottom and odd ones left-to-right.  An involution."""
    a = np.asarray(img, dtype=np.uint8)
    out = np.zeros_like(a)
    for i in range(8):
        plane = (a >> i) & 1
        plane = plane[::-1, :] if i % 2 == 0 else plane[:, ::-1]
        out |= plane << i
    return out


_REV8 = [int(f"{v:08b}"[::-1], 2) for v in range(256)]
# reversal of the binary digits without leading zeros, as used by diffusion
_REV_MIN = [int(f"{v:b}"[::-1], 2) for v in range(256)]


def bit_reverse(v: int) -> int:
    """Reverse the binary digits of ``v`` written without leading zeros (6 -> 3, 1 -> 1).

    Not a bijection on 8-bit values, which diffusion does not need: the
    decryptor recomputes it from the already-recovered previous value.
    Unlike the fixed-width reversal, it mixes a one-bit difference into
    several bit positions, so single-bit changes avalanche through diffusion.
    """
    return _REV_MIN[v & 0xFF]


def bit_reverse8(v: int) -> int:
    """Reverse the fixed 8-bit pattern of ``v`` (1 -> 128, 6 -> 96)."""
    return _REV8[v & 0xFF]


# --- diffusion --------------------------------------------------------------


def diffuse(img: np.ndarray, x3: float, r3: float, keystream: np.ndarray | None = None) -> np.ndarray:
    """Forward XOR/bit-reverse chain, then backward add-mod-256 chain.

    The forward chain uses :func:`bit_reverse` of the previous output.
    ``keystream`` overrides the STCM draw (length ``2MN``, values < 256).
    A single-pixel image seeds the backward pass with 0 instead of the first
    forward value, since doubling mod 256 would not be invertible.
    """
    s = np.asarray(img, dtype=np.uint8).ravel().tolist()
    n = len(s)
    u = (diffusion_keystream(x3, r3, n) if keystream is None else np.asarray(keystream)).tolist()
    if len(u) != 2 * n:
        raise ValueError("keystream must hold 2*M*N values")
    rev = _REV_MIN
    g = [0] * n
    prev = s[0] ^ u[0]
    g[0] = prev
    for i in range(1, n):
        prev = s[i] ^ u[i] ^ rev[prev]
        g[i] = prev
    q = [0] * n
    seed = g[0] if n > 1 else 0
    nxt = ((g[n - 1] + seed) & 0xFF) ^ u[2 * n - 1]
    q[n - 1] = nxt
    for i in range(n - 2, -1, -1):
        nxt = ((g[i] + nxt) & 0xFF) ^ u[n + i]
        q[i] = nxt
    return np.array(q, dtype=np.uint8).reshape(np.shape(img))


def undiffuse(img: np.ndarray, x3: float, r3: float, keystream: np.ndarray | None = None) -> np.ndarray:
    q = np.asarray(img, dtype=np.uint8).ravel().tolist()
    n = len(q)
    u = (diffusion_keystream(x3, r3, n) if keystream is None else np.asarray(keystream)).tolist()
    if len(u) != 2 * n:
        raise ValueError("keystream must hold 2*M*N values")
    g = [0] * n
    for i in range(n - 1):
        g[i] = ((q[i] ^ u[n + i]) - q[i + 1]) & 0xFF
    seed = g[0] if n > 1 else 0
    g[n - 1] = ((q[n - 1] ^ u[2 * n - 1]) - seed) & 0xFF
    rev = _REV_MIN
    s = [0] * n
    s[0] = g[0] ^ u[0]
    for i in range(1, n):
        s[i] = g[i] ^ u[i] ^ rev[g[i - 1]]
    return np.array(s, dtype=np.uint8).reshape(np.shape(img))


# --- full pipeline ----------------------------------------------------------


def _as_gray(img) -> np.ndarray:
    a = np.asarray(img)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a non-empty 2-D image, got shape {a.shape}")
    if a.dtype != np.uint8:
        if a.min() < 0 or a.max() > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        a = a.astype(np.uint8)
    return a


def encrypt(img: np.ndarray, keys: KeySet) -> np.ndarray:
    a = _as_gray(img)
    m, n = a.shape
    plan = derive_permutation(keys.x1, keys.r1, keys.x2, keys.r2, m, n)
    return diffuse(bitplane_flip(confuse(a, plan)), keys.x3, keys.r3)


def decrypt(img: np.ndarray, keys: KeySet) -> np.ndarray:
    a = _as_gray(img)
    m, n = a.shape
    plan = derive_permutation(keys.x1, keys.r1, keys.x2, keys.r2, m, n)
    return unconfuse(bitplane_flip(undiffuse(a, keys.x3, keys.r3)), plan)


def encrypt_image(img: np.ndarray, keys: KeySet) -> np.ndarray:
    """Encrypt grayscale ``(M, N)`` or color ``(M, N, 3)``; the output has the input's shape."""
    if np.ndim(img) == 3:
        return split_color(encrypt(flatten_color(img), keys))
    return encrypt(img, keys)


def decrypt_image(img: np.ndarray, keys: KeySet) -> np.ndarray:
    if np.ndim(img) == 3:
        return split_color(decrypt(flatten_color(img), keys))
    return decrypt(img, keys)
