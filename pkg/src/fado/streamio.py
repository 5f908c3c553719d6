"""Vector-stream file formats: packed binary and round-trip CSV.

Binary layout (little-endian):

    magic   8 bytes  b"FADOVECS"
    version u32      1
    n       u64      dimension
    T       u64      number of vectors
    data    f64[T*n] row-major samples

CSV holds one vector per line with shortest round-trip decimal formatting,
so parse(write(x)) reproduces the binary64 payload exactly.  Readers and
the CLI pick the format from the file extension (.csv means CSV).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

__all__ = ["StreamFormatError", "write_vectors", "read_vectors"]

MAGIC = b"FADOVECS"
VERSION = 1


class StreamFormatError(ValueError):
    """Malformed or truncated vector-stream file."""


def _as_matrix(samples) -> np.ndarray:
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValueError("samples must form a (T, n) matrix with n >= 1")
    return arr


def write_vectors(samples, path) -> None:
    """Write a (T, n) sample block; CSV when the suffix is .csv, else binary."""
    arr = _as_matrix(samples)
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path, "w", encoding="ascii") as fh:
            for row in arr:
                fh.write(",".join(repr(float(x)) for x in row))
                fh.write("\n")
        return
    t, n = arr.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQQ", VERSION, n, t))
        fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def read_vectors(path) -> np.ndarray:
    """Read a stream file back into a (T, n) float64 matrix."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _read_csv(path)
    data = path.read_bytes()
    header = len(MAGIC) + struct.calcsize("<IQQ")
    if len(data) < header:
        raise StreamFormatError(f"{path}: truncated header")
    if data[:len(MAGIC)] != MAGIC:
        raise StreamFormatError(f"{path}: bad magic, not a vector stream")
    version, n, t = struct.unpack_from("<IQQ", data, len(MAGIC))
    if version != VERSION:
        raise StreamFormatError(f"{path}: unsupported version {version}")
    if n < 1:
        raise StreamFormatError(f"{path}: dimension must be positive")
    expected = header + 8 * n * t
    if len(data) != expected:
        raise StreamFormatError(
            f"{path}: payload length {len(data)} does not match header "
            f"(expected {expected})")
    flat = np.frombuffer(data, dtype="<f8", offset=header)
    return flat.astype(np.float64).reshape(t, n)


def _read_csv(path: Path) -> np.ndarray:
    rows = []
    width = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError as exc:
                raise StreamFormatError(f"{path}:{lineno}: {exc}") from exc
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise StreamFormatError(
                    f"{path}:{lineno}: expected {width} values, found {len(row)}")
            rows.append(row)
    if not rows:
        raise StreamFormatError(f"{path}: empty stream file")
    return np.asarray(rows, dtype=np.float64)
