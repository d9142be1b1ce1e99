"""Supply-chain experiment platform.

A weekly multi-agent flow simulator for a two-manufacturer /
two-wholesaler / two-health-center drug supply chain, a session server
that hosts human or scripted players in the Wholesaler 1 seat, and an
analysis toolkit (contingency statistics, inter-rater agreement,
response-mode profiling) for the data such sessions produce.
"""

__version__ = "0.1.0"

from supplygame.errors import (
    ConfigError,
    DecisionError,
    ProtocolError,
    ReplayError,
    AnalysisError,
)

__all__ = [
    "ConfigError",
    "DecisionError",
    "ProtocolError",
    "ReplayError",
    "AnalysisError",
    "__version__",
]
