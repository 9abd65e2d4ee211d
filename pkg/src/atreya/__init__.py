"""Atreya: chat-driven information retrieval over the ChEMBL database.

The package layers a conversational funnel on top of the ChEMBL web
services: a command grammar, a small-talk pattern matcher, a typed API
client with record/replay transports, a session state machine, reply
presenters, and a network gateway.
"""

__version__ = "0.1.0"
