"""Exception types shared across the solver."""


class ConfigurationError(ValueError):
    """Invalid grid, preset, or run configuration."""


class ParameterError(ValueError):
    """Physical parameters outside the admissible range (e.g. c^2 <= g*h_inf)."""


class CavitationError(RuntimeError):
    """The depth h reached the cavitation guard (min h too small)."""


class GmresError(RuntimeError):
    """The elliptic solve did not converge; carries the final solver stats."""

    def __init__(self, message, stats):
        super().__init__(message)
        self.stats = stats


class SnapshotFormatError(ValueError):
    """Snapshot file is corrupt, truncated, or has the wrong magic/version."""


class FitError(RuntimeError):
    """Parameter fit failed or produced an inadmissible result."""
