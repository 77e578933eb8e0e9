"""Minimal NPY v1.0 reader/writer with deterministic bytes.

Only little-endian float32/float64, C order, 1 to 3 axes. The writer pads
the header with spaces so the payload starts at a 64-byte boundary;
write -> read -> write round-trips bit-exactly.
"""

from __future__ import annotations

import ast
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagic,
    FortranOrderUnsupported,
    IoFailure,
    TruncatedPayload,
    UnsupportedDtype,
    UnsupportedShape,
    UnsupportedVersion,
)

_MAGIC = b"\x93NUMPY"
_DTYPES = {"<f4": np.dtype("<f4"), "<f8": np.dtype("<f8")}


@dataclass
class ArrayFile:
    dtype: str
    shape: tuple
    data: np.ndarray


def _check_shape(shape):
    if not 1 <= len(shape) <= 3:
        raise UnsupportedShape(f"need 1-3 axes, got shape {tuple(shape)}")
    for s in shape:
        if not isinstance(s, int) or s < 0:
            raise UnsupportedShape(f"bad shape {tuple(shape)}")


def read_npy(path) -> ArrayFile:
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e

    if raw[:6] != _MAGIC:
        raise BadMagic(f"{path}: not an NPY file")
    if raw[6:8] != b"\x01\x00":
        raise UnsupportedVersion(
            f"{path}: NPY version {tuple(raw[6:8])}, only 1.0 supported")
    if len(raw) < 10:
        raise TruncatedPayload(f"{path}: truncated header length")
    (hlen,) = struct.unpack("<H", raw[8:10])
    header = raw[10:10 + hlen]
    if len(header) < hlen:
        raise TruncatedPayload(f"{path}: truncated header")
    try:
        meta = ast.literal_eval(header.decode("ascii").strip())
        descr = meta["descr"]
        fortran = meta["fortran_order"]
        shape = tuple(meta["shape"])
    except Exception as e:
        raise BadMagic(f"{path}: malformed NPY header: {e}") from e
    if fortran:
        raise FortranOrderUnsupported(f"{path}: fortran_order arrays unsupported")
    if descr not in _DTYPES:
        raise UnsupportedDtype(f"{path}: dtype {descr!r}, only <f4/<f8 supported")
    _check_shape(shape)

    dtype = _DTYPES[descr]
    count = int(np.prod(shape, dtype=np.int64)) if shape else 1
    payload = raw[10 + hlen:]
    need = count * dtype.itemsize
    if len(payload) < need:
        raise TruncatedPayload(
            f"{path}: payload has {len(payload)} bytes, need {need}")
    data = np.frombuffer(payload[:need], dtype=dtype).reshape(shape).copy()
    return ArrayFile(descr, shape, data)


def _header_bytes(descr: str, shape) -> bytes:
    text = "{'descr': '%s', 'fortran_order': False, 'shape': %s, }" % (
        descr, repr(tuple(shape)))
    body = text.encode("ascii")
    pad = (-(len(_MAGIC) + 4 + len(body) + 1)) % 64
    body += b" " * pad + b"\n"
    return _MAGIC + b"\x01\x00" + struct.pack("<H", len(body)) + body


def write_npy(path, array) -> None:
    _check_shape(np.asarray(array).shape)
    arr = np.ascontiguousarray(array)
    if arr.dtype == np.float32:
        descr = "<f4"
    elif arr.dtype == np.float64:
        descr = "<f8"
    else:
        raise UnsupportedDtype(f"dtype {arr.dtype} unsupported, use f32/f64")
    _check_shape(arr.shape)
    blob = _header_bytes(descr, arr.shape) + arr.astype(_DTYPES[descr]).tobytes()
    try:
        with open(path, "wb") as f:
            f.write(blob)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def load_f32(path) -> np.ndarray:
    """Read an NPY file and return float32 values (f8 rounds to nearest)."""
    return read_npy(path).data.astype(np.float32, copy=False)
