"""Network gateway and terminal clients for the dialog engine."""

from .app import create_app
from .schemas import (
    InboundMessage,
    MalformedMessage,
    OutboundMessage,
    parse_inbound,
    reply_to_payload,
    wire_line,
)

__all__ = [
    "InboundMessage",
    "MalformedMessage",
    "OutboundMessage",
    "create_app",
    "parse_inbound",
    "reply_to_payload",
    "wire_line",
]
