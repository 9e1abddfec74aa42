"""Binary state snapshots.

One file holds one state: a fixed 64-byte header followed by raw
row-major little-endian float64 payloads for h, vx, vy, and optionally
sigma.  The format is deliberately dumb so that any language can read it
with a handful of lines; round trips are bitwise exact.  Writes go
through a temporary file and an atomic rename, so a crash never leaves a
half-written snapshot under the target name.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .dynamics import PhysicalParams, State
from .errors import SnapshotFormatError
from .spectral import make_grid

__all__ = ["MAGIC", "SIGMA_FLAG", "VERSION", "read_snapshot", "write_snapshot"]

MAGIC = b"SGN2"
VERSION = 1
#: Bit set in the header version word when a fourth sigma array follows
#: the three mandatory payloads.
SIGMA_FLAG = 1 << 8

# magic, version, Nx, Ny, Lx, Ly, t, g, h_inf -- 64 bytes total.
_HEADER = struct.Struct("<4sIQQddddd")


def _payload_bytes(field: np.ndarray) -> bytes:
    out = np.ascontiguousarray(field, dtype="<f8")
    if not np.isfinite(out).all():
        raise SnapshotFormatError("refusing to write non-finite field data")
    return out.tobytes()


def write_snapshot(
    path: str | os.PathLike,
    state: State,
    params: PhysicalParams = PhysicalParams(),
) -> None:
    """Serialize a state (and the physical parameters) to one file."""
    grid = state.grid
    version = VERSION | (SIGMA_FLAG if state.sigma is not None else 0)
    header = _HEADER.pack(
        MAGIC, version, grid.Nx, grid.Ny, grid.Lx, grid.Ly,
        state.t, params.g, params.h_inf,
    )
    fields = [state.h, state.vx, state.vy]
    if state.sigma is not None:
        fields.append(state.sigma)
    for f in fields:
        if f.shape != grid.shape:
            raise SnapshotFormatError(
                f"field shape {f.shape} does not match grid {grid.shape}"
            )

    target = os.fspath(path)
    fd, tmp = tempfile.mkstemp(
        dir=os.path.dirname(target) or ".", prefix=".snap-", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            for f in fields:
                fh.write(_payload_bytes(f))
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_snapshot(path: str | os.PathLike) -> tuple[State, PhysicalParams]:
    """Load a snapshot written by `write_snapshot`, bit-exactly.

    The grid is rebuilt from the header, so the returned state is ready
    for further evolution or analysis.  Raises SnapshotFormatError on a
    bad magic, an unknown version, a truncated or oversized payload, or
    non-finite data.
    """
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise SnapshotFormatError(
                f"truncated header: {len(header)} of {_HEADER.size} bytes"
            )
        magic, version, Nx, Ny, Lx, Ly, t, g, h_inf = _HEADER.unpack(header)
        if magic != MAGIC:
            raise SnapshotFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        has_sigma = bool(version & SIGMA_FLAG)
        if version & ~SIGMA_FLAG != VERSION:
            raise SnapshotFormatError(f"unsupported format version {version}")

        nfields = 4 if has_sigma else 3
        expected = nfields * Nx * Ny * 8
        payload = fh.read(expected + 1)
    if len(payload) != expected:
        kind = "truncated" if len(payload) < expected else "oversized"
        raise SnapshotFormatError(
            f"{kind} payload: expected {expected} bytes for "
            f"{nfields} fields of {Nx}x{Ny}"
        )

    try:
        grid = make_grid(Nx, Ny, Lx, Ly)
        params = PhysicalParams(g=g, h_inf=h_inf)
    except ValueError as exc:
        raise SnapshotFormatError(f"header describes an invalid grid: {exc}") from exc

    flat = np.frombuffer(payload, dtype="<f8")
    if not np.isfinite(flat).all():
        raise SnapshotFormatError("payload contains non-finite values")
    per = Nx * Ny
    fields = [
        flat[i * per:(i + 1) * per].reshape(Nx, Ny).copy() for i in range(nfields)
    ]
    sigma = fields[3] if has_sigma else None
    return (
        State(grid=grid, t=t, h=fields[0], vx=fields[1], vy=fields[2], sigma=sigma),
        params,
    )
