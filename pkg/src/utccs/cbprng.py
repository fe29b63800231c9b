"""Hybrid chaotic/LCG pseudo-random word generator.

Each output word is ``floor(x * 2**k) XOR q`` where ``x`` is the next state
of a slope-8 coupled map and ``q`` is a k-bit word assembled from the linear
congruential generator ``y -> (1103515245 * y + 12345) mod 2**31``.

LCG widening
------------
The LCG yields 31-bit values.  A k-bit word ``q`` takes ``ceil(k / 31)``
consecutive LCG outputs, concatenates them most-significant first, and keeps
the leading ``k`` bits.  For ``k = 32`` that is
``q = (y1 << 1) | (y2 >> 30)``.  Every test vector and ciphertext produced by
this package depends on this convention.
"""

from __future__ import annotations

import math
from typing import BinaryIO, Iterator

import numpy as np

from .maps import MapSpec, Utf, coupling

__all__ = [
    "LCG_A",
    "LCG_B",
    "LCG_M",
    "lcg_next",
    "chaotic_to_int",
    "widen_lcg",
    "Cbprng",
    "generator_spec",
    "DEMO_PARAMS",
]

LCG_A = 1103515245
LCG_B = 12345
LCG_M = 1 << 31
_LCG_MASK = LCG_M - 1
_LCG_BITS = 31

# default (x0, r) per generator for demos and randomness checks
DEMO_PARAMS = {
    "lscm": (0.4584, 0.6541),
    "tlcm": (0.4584, 0.0257),
    "stcm": (0.4584, 0.9335),
}


def lcg_next(y: int) -> int:
    return (LCG_A * y + LCG_B) % LCG_M


def chaotic_to_int(x: float, k: int = 32) -> int:
    """``floor(x * 2**k)`` for ``x`` in [0, 1)."""
    if not (0.0 <= x < 1.0):
        raise ValueError(f"chaotic state {x!r} outside [0, 1)")
    # scaling by a power of two is exact
    return int(math.ldexp(x, k))


def widen_lcg(y: int, k: int) -> tuple[int, int]:
    """Advance the LCG ``ceil(k/31)`` times from ``y``; return (new_y, k-bit word)."""
    steps = -(-k // _LCG_BITS)
    acc = 0
    for _ in range(steps):
        y = (LCG_A * y + LCG_B) & _LCG_MASK
        acc = (acc << _LCG_BITS) | y
    return y, acc >> (steps * _LCG_BITS - k)


def generator_spec(name: str, r: float) -> MapSpec:
    """The slope-8 coupled map behind the ``LSCM``/``TLCM``/``STCM`` generators."""
    return coupling(name, Utf.TENT_SLOPE8, r)


class Cbprng:
    """k-bit generator state.  Single owner; ``copy()`` to fork.

    >>> g = Cbprng("lscm", x0=0.4584, r=0.6541)
    >>> g.next_word() == Cbprng("lscm", 0.4584, 0.6541).next_word()
    True
    """

    def __init__(self, map_name: str, x0: float, r: float, k: int = 32):
        if not (0.0 < x0 < 1.0):
            raise ValueError(f"x0={x0!r} must lie in (0, 1)")
        if not (0.0 <= r <= 1.0):
            raise ValueError(f"r={r!r} must lie in [0, 1]")
        if k not in (32, 64):
            raise ValueError(f"word size must be 32 or 64, got {k}")
        self.map_name = map_name.lower()
        self.spec = generator_spec(self.map_name, r)
        self.k = k
        self.x = x0
        self.y = math.floor(x0 * LCG_M)
        self._step = self.spec.stepper()

    def copy(self) -> "Cbprng":
        g = object.__new__(Cbprng)
        g.__dict__.update(self.__dict__)
        return g

    def next_word(self) -> int:
        self.x = self._step(self.x)
        self.y, q = widen_lcg(self.y, self.k)
        return chaotic_to_int(self.x, self.k) ^ q

    def iter_words(self, n: int) -> Iterator[int]:
        for _ in range(n):
            yield self.next_word()

    def words(self, n: int) -> np.ndarray:
        """Next ``n`` words as a uint64 array (hot loop, same sequence as ``next_word``)."""
        out = np.empty(n, dtype=np.uint64)
        step = self._step
        k = self.k
        steps = -(-k // _LCG_BITS)
        shift = steps * _LCG_BITS - k
        scale = float(1 << k)
        a, b, mask = LCG_A, LCG_B, _LCG_MASK
        x, y = self.x, self.y
        if steps == 2:
            for i in range(n):
                x = step(x)
                y1 = (a * y + b) & mask
                y = (a * y1 + b) & mask
                out[i] = int(x * scale) ^ (((y1 << _LCG_BITS) | y) >> shift)
        else:
            for i in range(n):
                x = step(x)
                acc = 0
                for _ in range(steps):
                    y = (a * y + b) & mask
                    acc = (acc << _LCG_BITS) | y
                out[i] = int(x * scale) ^ (acc >> shift)
        self.x, self.y = x, y
        return out

    def fill_matrix(self, rows: int, cols: int, modulus: int) -> np.ndarray:
        """Row-major ``rows x cols`` matrix of ``next_word() mod modulus``."""
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        w = self.words(rows * cols)
        return (w % np.uint64(modulus)).astype(np.int64).reshape(rows, cols)

    def emit_bitstream(self, n_bits: int, sink: BinaryIO) -> int:
        """Write ``n_bits`` as raw bytes, words packed most-significant bit first.

        Returns the number of bytes written.
        """
        if n_bits % 8:
            raise ValueError("n_bits must be a multiple of 8")
        n_bytes = n_bits // 8
        wbytes = self.k // 8
        n_words = -(-n_bytes // wbytes)
        written = 0
        chunk = 1 << 16
        while n_words > 0:
            m = min(chunk, n_words)
            w = self.words(m)
            if self.k == 64:
                buf = w.astype(">u8").tobytes()
            else:
                buf = w.astype(">u4").tobytes()
            take = min(len(buf), n_bytes - written)
            sink.write(buf[:take])
            written += take
            n_words -= m
        return written
