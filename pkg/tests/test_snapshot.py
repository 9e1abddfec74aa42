"""Binary snapshot format: bitwise round trips and corruption handling.

The corruption tests build a valid file first and then patch bytes at
known offsets, so they double as a check that the documented layout
(4-byte magic, 4-byte version, two 8-byte dims, five doubles) is the
layout actually written.
"""

import struct

import numpy as np
import pytest

from sgn2d.dynamics import PhysicalParams, State
from sgn2d.errors import SnapshotFormatError
from sgn2d.snapshot import MAGIC, SIGMA_FLAG, VERSION, read_snapshot, write_snapshot
from sgn2d.spectral import make_grid

HEADER_SIZE = 64


@pytest.fixture
def small_state(rng):
    grid = make_grid(16, 8, 1.0, 2.0)
    h = 1.0 + 0.1 * rng.standard_normal(grid.shape)
    vx = rng.standard_normal(grid.shape)
    vy = rng.standard_normal(grid.shape)
    sigma = rng.standard_normal(grid.shape)
    return State(grid=grid, t=1.25, h=h, vx=vx, vy=vy, sigma=sigma)


def _write(tmp_path, state, params=PhysicalParams()):
    path = tmp_path / "state.sgn2"
    write_snapshot(path, state, params)
    return path


class TestRoundTrip:
    def test_with_sigma_is_bitwise(self, tmp_path, small_state):
        params = PhysicalParams(g=9.81, h_inf=0.7)
        path = _write(tmp_path, small_state, params)
        loaded, loaded_params = read_snapshot(path)
        assert np.array_equal(loaded.h, small_state.h)
        assert np.array_equal(loaded.vx, small_state.vx)
        assert np.array_equal(loaded.vy, small_state.vy)
        assert np.array_equal(loaded.sigma, small_state.sigma)
        assert loaded.t == small_state.t
        assert loaded_params.g == 9.81
        assert loaded_params.h_inf == 0.7
        assert loaded.grid.Nx == 16 and loaded.grid.Ny == 8
        assert loaded.grid.Lx == 1.0 and loaded.grid.Ly == 2.0

    def test_without_sigma(self, tmp_path, small_state):
        import dataclasses

        state = dataclasses.replace(small_state, sigma=None)
        path = _write(tmp_path, state)
        loaded, _ = read_snapshot(path)
        assert loaded.sigma is None
        assert np.array_equal(loaded.h, state.h)

    def test_loaded_arrays_are_owned_and_writable(self, tmp_path, small_state):
        loaded, _ = read_snapshot(_write(tmp_path, small_state))
        loaded.h[0, 0] = 42.0  # must not raise: not a read-only buffer view
        assert loaded.h[0, 0] == 42.0

    def test_grid_is_usable_after_load(self, tmp_path, small_state):
        from sgn2d.spectral import derivative

        loaded, _ = read_snapshot(_write(tmp_path, small_state))
        d = derivative(loaded.grid, loaded.h, axis="x")
        assert d.shape == loaded.grid.shape


class TestFileLayout:
    def test_header_is_64_bytes_and_flags_sigma(self, tmp_path, small_state):
        path = _write(tmp_path, small_state)
        raw = path.read_bytes()
        assert raw[:4] == MAGIC
        version = struct.unpack_from("<I", raw, 4)[0]
        assert version == VERSION | SIGMA_FLAG
        assert len(raw) == HEADER_SIZE + 4 * 16 * 8 * 8

    def test_version_word_without_sigma(self, tmp_path, small_state):
        import dataclasses

        state = dataclasses.replace(small_state, sigma=None)
        path = _write(tmp_path, state)
        raw = path.read_bytes()
        assert struct.unpack_from("<I", raw, 4)[0] == VERSION
        assert len(raw) == HEADER_SIZE + 3 * 16 * 8 * 8

    def test_payload_is_row_major_float64(self, tmp_path, small_state):
        path = _write(tmp_path, small_state)
        raw = path.read_bytes()
        per = 16 * 8 * 8
        h = np.frombuffer(raw[HEADER_SIZE:HEADER_SIZE + per], dtype="<f8")
        assert np.array_equal(h.reshape(16, 8), small_state.h)

    def test_no_temp_files_left_behind(self, tmp_path, small_state):
        _write(tmp_path, small_state)
        leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".snap-")]
        assert leftovers == []


def _patched(tmp_path, small_state, offset, blob):
    path = _write(tmp_path, small_state)
    raw = bytearray(path.read_bytes())
    raw[offset:offset + len(blob)] = blob
    bad = tmp_path / "bad.sgn2"
    bad.write_bytes(bytes(raw))
    return bad


class TestCorruption:
    def test_bad_magic(self, tmp_path, small_state):
        bad = _patched(tmp_path, small_state, 0, b"NOPE")
        with pytest.raises(SnapshotFormatError, match="magic"):
            read_snapshot(bad)

    def test_unknown_version(self, tmp_path, small_state):
        bad = _patched(tmp_path, small_state, 4, struct.pack("<I", 2))
        with pytest.raises(SnapshotFormatError, match="version"):
            read_snapshot(bad)

    def test_truncated_header(self, tmp_path, small_state):
        path = _write(tmp_path, small_state)
        bad = tmp_path / "bad.sgn2"
        bad.write_bytes(path.read_bytes()[:40])
        with pytest.raises(SnapshotFormatError, match="truncated header"):
            read_snapshot(bad)

    def test_truncated_payload(self, tmp_path, small_state):
        path = _write(tmp_path, small_state)
        bad = tmp_path / "bad.sgn2"
        bad.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(SnapshotFormatError, match="truncated payload"):
            read_snapshot(bad)

    def test_oversized_payload(self, tmp_path, small_state):
        path = _write(tmp_path, small_state)
        bad = tmp_path / "bad.sgn2"
        bad.write_bytes(path.read_bytes() + b"\x00")
        with pytest.raises(SnapshotFormatError, match="oversized payload"):
            read_snapshot(bad)

    def test_sigma_flag_without_sigma_payload(self, tmp_path, small_state):
        import dataclasses

        state = dataclasses.replace(small_state, sigma=None)
        path = _write(tmp_path, state)
        raw = bytearray(path.read_bytes())
        struct.pack_into("<I", raw, 4, VERSION | SIGMA_FLAG)
        bad = tmp_path / "bad.sgn2"
        bad.write_bytes(bytes(raw))
        with pytest.raises(SnapshotFormatError, match="truncated payload"):
            read_snapshot(bad)

    def test_invalid_grid_dimensions(self, tmp_path, small_state):
        # Nx field sits right after magic+version.
        bad = _patched(tmp_path, small_state, 8, struct.pack("<Q", 7))
        with pytest.raises(SnapshotFormatError):
            read_snapshot(bad)

    def test_non_finite_payload(self, tmp_path, small_state):
        nan = struct.pack("<d", float("nan"))
        bad = _patched(tmp_path, small_state, HEADER_SIZE + 24, nan)
        with pytest.raises(SnapshotFormatError, match="non-finite"):
            read_snapshot(bad)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_snapshot(tmp_path / "absent.sgn2")


class TestWriteValidation:
    def test_non_finite_field_refused_and_no_debris(self, tmp_path, small_state):
        small_state.h[3, 4] = np.inf
        target = tmp_path / "state.sgn2"
        with pytest.raises(SnapshotFormatError, match="non-finite"):
            write_snapshot(target, small_state)
        assert not target.exists()
        assert [p for p in tmp_path.iterdir() if p.name.startswith(".snap-")] == []

    def test_failed_write_keeps_previous_file(self, tmp_path, small_state):
        target = tmp_path / "state.sgn2"
        write_snapshot(target, small_state)
        before = target.read_bytes()
        small_state.vx[0, 0] = np.nan
        with pytest.raises(SnapshotFormatError):
            write_snapshot(target, small_state)
        assert target.read_bytes() == before

    def test_shape_mismatch_rejected(self, tmp_path, small_state):
        import dataclasses

        state = dataclasses.replace(small_state, vy=np.zeros((4, 4)))
        with pytest.raises(SnapshotFormatError, match="shape"):
            write_snapshot(tmp_path / "state.sgn2", state)
