"""Shared fixtures: small grids, a seeded band-limited field factory,
and the recorder behind the acceptance suite's PASS/FAIL summary."""

import numpy as np
import pytest

from sgn2d.spectral import make_grid

# Populated by tests/test_acceptance.py; one entry per numbered check.
_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a numbered verdict, then assert it.

    The recorded detail string reaches the terminal summary even when
    the assertion fails, so a red criterion still reports its measured
    numbers.
    """

    def record(num: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE[num] = (bool(ok), detail)
        assert ok, f"criterion {num}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[num]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}  {detail}")


@pytest.fixture
def grid64():
    return make_grid(64, 32, 1.0, 2.0)


@pytest.fixture
def grid_square():
    return make_grid(64, 64, 3.0, 3.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def smooth_field(rng):
    """Random real fields with spectrum confined to the lowest modes.

    Band limitation keeps every spectral operation on them exact to
    rounding, so tests can assert tight tolerances.
    """

    def build(grid, modes=5, amplitude=1.0):
        nyh = grid.Ny // 2 + 1
        coef = np.zeros((grid.Nx, nyh), dtype=complex)
        block = rng.standard_normal((2 * modes + 1, modes + 1)) \
            + 1j * rng.standard_normal((2 * modes + 1, modes + 1))
        for row, i in enumerate(range(-modes, modes + 1)):
            coef[i, : modes + 1] = block[row]
        # Hermitian fixups so irfft2 sees a consistent half-spectrum.
        coef[0, 0] = coef[0, 0].real
        field = np.fft.irfft2(coef, s=grid.shape)
        peak = np.abs(field).max()
        return amplitude * field / peak

    return build
