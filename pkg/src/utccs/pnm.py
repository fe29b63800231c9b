"""Binary PGM (P5) and PPM (P6) reading and writing, 8-bit only."""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["PnmError", "read_pnm", "write_pgm", "write_ppm", "write_pnm"]


class PnmError(ValueError):
    pass


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace separated header tokens, skipping comments.

    Returns the tokens and the offset of the single whitespace byte that
    terminates the last one.
    """
    toks: list[bytes] = []
    i, n = 0, len(data)
    while len(toks) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        if i >= n:
            raise PnmError("truncated header")
        j = i
        while j < n and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
            j += 1
        toks.append(data[i:j])
        i = j
    if i >= n or not data[i : i + 1].isspace():
        raise PnmError("header not terminated by whitespace")
    return toks, i


def read_pnm(path) -> np.ndarray:
    """Load a P5 or P6 file; grayscale gives (M, N), color gives (M, N, 3) uint8."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise PnmError(f"unsupported magic {magic!r}; expected P5 or P6")
    toks, end = _tokens(data[2:], 3)
    try:
        width, height, maxval = (int(t) for t in toks)
    except ValueError as exc:
        raise PnmError(f"malformed header fields {toks!r}") from exc
    if width < 1 or height < 1:
        raise PnmError("image dimensions must be positive")
    if maxval != 255:
        raise PnmError(f"only maxval 255 is supported, got {maxval}")
    channels = 1 if magic == b"P5" else 3
    start = 2 + end + 1
    need = width * height * channels
    body = data[start : start + need]
    if len(body) != need:
        raise PnmError(f"expected {need} pixel bytes, found {len(body)}")
    arr = np.frombuffer(body, dtype=np.uint8).copy()
    if channels == 1:
        return arr.reshape(height, width)
    return arr.reshape(height, width, 3)


def _as_u8(img: np.ndarray) -> np.ndarray:
    a = np.asarray(img)
    if a.dtype != np.uint8:
        if a.size and (a.min() < 0 or a.max() > 255):
            raise PnmError("pixel values must lie in [0, 255]")
        a = a.astype(np.uint8)
    return np.ascontiguousarray(a)


def write_pgm(path, img: np.ndarray) -> None:
    a = _as_u8(img)
    if a.ndim != 2:
        raise PnmError("PGM needs a 2-D array")
    h, w = a.shape
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + a.tobytes())


def write_ppm(path, img: np.ndarray) -> None:
    a = _as_u8(img)
    if a.ndim != 3 or a.shape[2] != 3:
        raise PnmError("PPM needs an (M, N, 3) array")
    h, w, _ = a.shape
    Path(path).write_bytes(b"P6\n%d %d\n255\n" % (w, h) + a.tobytes())


def write_pnm(path, img: np.ndarray) -> None:
    if np.ndim(img) == 3:
        write_ppm(path, img)
    else:
        write_pgm(path, img)
