from supplygame.service.events import SessionEvent, EventLog, read_events, EVENT_SCHEMA_VERSION
from supplygame.service.session import Session, PHASES
from supplygame.service.service import SessionService, ReplayResult
from supplygame.service.net import serve_tcp, serve_http, TcpClient

__all__ = [
    "SessionEvent",
    "EventLog",
    "read_events",
    "EVENT_SCHEMA_VERSION",
    "Session",
    "PHASES",
    "SessionService",
    "ReplayResult",
    "serve_tcp",
    "serve_http",
    "TcpClient",
]
