"""Exception hierarchy shared across the package."""


class SupplyGameError(Exception):
    """Base class for all package errors."""


class ConfigError(SupplyGameError):
    """Invalid scenario or topology configuration."""


class DecisionError(SupplyGameError):
    """A simulation step received a missing or illegal external decision."""


class ProtocolError(SupplyGameError):
    """A session message was malformed or illegal in the current phase."""

    def __init__(self, message: str, expected_phase: str | None = None):
        super().__init__(message)
        self.expected_phase = expected_phase


class ReplayError(SupplyGameError):
    """An event log could not be replayed (gap, corruption, version skew)."""


class AnalysisError(SupplyGameError):
    """Invalid input to an analysis operation."""


class DegenerateFitError(AnalysisError):
    """Model fitting collapsed (e.g. two hidden states map to one mode)."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
