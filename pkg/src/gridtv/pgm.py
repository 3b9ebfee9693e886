"""Binary PGM (P5) reading and writing.

Supports 8-bit and 16-bit grayscale; 16-bit samples are big-endian per the
format. Header comments are accepted on read and never written.
"""

from __future__ import annotations

import numpy as np

__all__ = ["PgmError", "read_pgm", "write_pgm"]


class PgmError(ValueError):
    """Malformed PGM header or truncated pixel data."""


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    while pos < len(data):
        ch = data[pos:pos + 1]
        if ch == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise PgmError("unterminated comment in header")
            pos = nl + 1
        elif ch.isspace():
            pos += 1
        else:
            break
    if pos >= len(data):
        raise PgmError("truncated header")
    start = pos
    while pos < len(data) and not data[pos:pos + 1].isspace():
        pos += 1
    return data[start:pos], pos


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Read a binary PGM file.

    Returns
    -------
    pixels : ndarray
        Array of shape (height, width), dtype uint8 or uint16.
    maxval : int
        Declared maximum sample value.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    magic, pos = _read_token(data, 0)
    if magic != b"P5":
        raise PgmError(f"not a binary PGM (magic {magic!r})")
    fields = []
    for _ in range(3):
        token, pos = _read_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError as exc:
            raise PgmError(f"bad header token {token!r}") from exc
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PgmError(f"bad dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise PgmError(f"maxval {maxval} out of range")
    if width * height > 2 ** 26:
        raise PgmError(f"image {width}x{height} too large")
    pos += 1  # single whitespace byte separates header from samples
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height
    raw = data[pos:pos + count * dtype.itemsize]
    if len(raw) != count * dtype.itemsize:
        raise PgmError("pixel data truncated")
    pixels = np.frombuffer(raw, dtype=dtype).reshape(height, width)
    return pixels.astype(np.uint16 if maxval > 255 else np.uint8), maxval


def write_pgm(path, pixels: np.ndarray, maxval: int) -> None:
    """Write a binary PGM file (big-endian samples when maxval > 255)."""
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise PgmError(f"pixels must be 2-D, got shape {pixels.shape}")
    if not 0 < maxval < 65536:
        raise PgmError(f"maxval {maxval} out of range")
    if pixels.min() < 0 or pixels.max() > maxval:
        raise PgmError("pixel values outside [0, maxval]")
    height, width = pixels.shape
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(pixels.astype(dtype)).tobytes())
