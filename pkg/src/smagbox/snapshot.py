"""Binary snapshots of the velocity field, and restart checkpoints.

Snapshot layout, all little endian:

    8 bytes   magic "SMAGBOX1"
    int64     n, grid points per axis
    float64   box length
    float64   simulation time t
    3 * n^3   float64 velocity samples u1, u2, u3, one component after
              the other; within a component the x index varies fastest,
              then y, then z.

A checkpoint file is one ASCII header line

    SMAGCKPT2 step_index=<int> dt=<float>\n

followed by a spectral block:

    8 bytes   magic "SMAGSPEC"
    int64     n, grid points per axis
    float64   box length
    float64   simulation time t
    3 * n * n * (n//2 + 1)   complex128 rfft coefficients, C order,
              axes (component, kx, ky, kz-half)

Checkpoints hold the spectral coefficients rather than point samples
because the transform back from point values rounds in the last bit;
storing the coefficients makes a restart continue the interrupted
trajectory bit for bit. Both writers go through a temporary file and
an atomic rename so a crash never leaves a torn file behind.
"""

import os
import struct

import numpy as np

from .errors import SnapshotFormatError
from .fields import VectorField
from .grid import Grid

MAGIC = b"SMAGBOX1"
SPEC_MAGIC = b"SMAGSPEC"
CKPT_MAGIC = b"SMAGCKPT2"
_HEAD = struct.Struct("<qdd")


def _snapshot_bytes(u, t):
    g = u.grid
    parts = [MAGIC, _HEAD.pack(g.n, g.length, float(t))]
    data = u.real
    for c in range(3):
        # x-fastest on disk: transpose the (x, y, z) axes to (z, y, x)
        parts.append(np.ascontiguousarray(data[c].transpose(2, 1, 0)).astype("<f8").tobytes())
    return b"".join(parts)


def _atomic_write(path, payload):
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(payload)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def write_snapshot(path, u, t):
    _atomic_write(path, _snapshot_bytes(u, t))


def _parse_snapshot(buf, path, grid=None):
    if len(buf) < len(MAGIC) + _HEAD.size:
        raise SnapshotFormatError(f"{path}: truncated header")
    if buf[: len(MAGIC)] != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {buf[:8]!r}")
    n, length, t = _HEAD.unpack_from(buf, len(MAGIC))
    if grid is None:
        grid = Grid(n, length)
    elif grid.n != n or grid.length != length:
        raise SnapshotFormatError(
            f"{path}: snapshot grid n={n}, length={length} does not match {grid!r}"
        )
    offset = len(MAGIC) + _HEAD.size
    want = 3 * n**3 * 8
    if len(buf) - offset != want:
        raise SnapshotFormatError(
            f"{path}: expected {want} data bytes, found {len(buf) - offset}"
        )
    flat = np.frombuffer(buf, dtype="<f8", count=3 * n**3, offset=offset)
    data = np.empty((3, n, n, n))
    for c in range(3):
        comp = flat[c * n**3 : (c + 1) * n**3].reshape(n, n, n)  # (z, y, x)
        data[c] = comp.transpose(2, 1, 0)
    return VectorField.from_real(grid, data), float(t)


def read_snapshot(path, grid=None):
    with open(path, "rb") as fh:
        buf = fh.read()
    return _parse_snapshot(buf, path, grid)


def _spectral_bytes(u, t):
    g = u.grid
    coeffs = np.ascontiguousarray(u.spectral).astype("<c16")
    return b"".join([SPEC_MAGIC, _HEAD.pack(g.n, g.length, float(t)), coeffs.tobytes()])


def _parse_spectral(buf, path, grid=None):
    if len(buf) < len(SPEC_MAGIC) + _HEAD.size:
        raise SnapshotFormatError(f"{path}: truncated header")
    if buf[: len(SPEC_MAGIC)] != SPEC_MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {buf[:8]!r}")
    n, length, t = _HEAD.unpack_from(buf, len(SPEC_MAGIC))
    if grid is None:
        grid = Grid(n, length)
    elif grid.n != n or grid.length != length:
        raise SnapshotFormatError(
            f"{path}: checkpoint grid n={n}, length={length} does not match {grid!r}"
        )
    offset = len(SPEC_MAGIC) + _HEAD.size
    count = 3 * n * n * (n // 2 + 1)
    if len(buf) - offset != count * 16:
        raise SnapshotFormatError(
            f"{path}: expected {count * 16} data bytes, found {len(buf) - offset}"
        )
    flat = np.frombuffer(buf, dtype="<c16", count=count, offset=offset)
    coeffs = flat.reshape(3, n, n, n // 2 + 1).copy()
    return VectorField.from_spectral(grid, coeffs), float(t)


def write_checkpoint(path, u, t, step_index, dt):
    head = f"{CKPT_MAGIC.decode()} step_index={int(step_index)} dt={float(dt)!r}\n"
    _atomic_write(path, head.encode("ascii") + _spectral_bytes(u, t))


def read_checkpoint(path, grid=None):
    """Returns (u, t, step_index, dt)."""
    with open(path, "rb") as fh:
        head = fh.readline()
        buf = fh.read()
    fields = head.decode("ascii", errors="replace").split()
    if len(fields) != 3 or fields[0] != CKPT_MAGIC.decode():
        raise SnapshotFormatError(f"{path}: bad checkpoint header {head!r}")
    try:
        step_index = int(fields[1].removeprefix("step_index="))
        dt = float(fields[2].removeprefix("dt="))
    except ValueError as exc:
        raise SnapshotFormatError(f"{path}: bad checkpoint header {head!r}") from exc
    u, t = _parse_spectral(buf, path, grid)
    return u, t, step_index, dt
