"""Wires configuration into a running engine: transport, client, dialog.

Startup mirrors the bot's original sequence: validate the transport
credential, probe the data service (or the fixture store in replay mode),
then serve.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import casualtalk
from .casualtalk import PatternBook
from .chembl.client import ChemblClient
from .chembl.transport import (
    CachingTransport,
    FixtureStore,
    LiveTransport,
    RecordingTransport,
    ReplayTransport,
    Transport,
)
from .config import AtreyaConfig
from .dialog import DialogManager

logger = logging.getLogger(__name__)

MIN_TOKEN_LENGTH = 8


class CredentialError(Exception):
    pass


class CredentialCheck:
    """Validates the gateway credential and probes the data service once.

    The data service itself is unauthenticated; the credential protects the
    chat transport. A successful check is cached for the process lifetime.
    """

    def __init__(self, token: str, client: ChemblClient):
        self._token = token
        self._client = client
        self._verified = False

    def __call__(self) -> None:
        if self._verified:
            return
        token = (self._token or "").strip()
        if len(token) < MIN_TOKEN_LENGTH:
            raise CredentialError(
                f"credential token missing or shorter than {MIN_TOKEN_LENGTH} characters"
            )
        try:
            status = self._client.probe()
        except Exception as exc:
            raise CredentialError(f"data service probe failed: {exc}") from exc
        logger.info("data service reachable: %s", status.get("chembl_db_version", "unknown"))
        self._verified = True


@dataclass
class Runtime:
    config: AtreyaConfig
    transport: Transport
    store: FixtureStore | None
    client: ChemblClient
    pattern_book: PatternBook
    credential_check: CredentialCheck
    manager: DialogManager


def build_transport(config: AtreyaConfig) -> tuple[Transport, FixtureStore | None]:
    if config.mode == "replay":
        store = FixtureStore(config.fixture_dir)
        transport: Transport = ReplayTransport(store)
    elif config.mode == "record":
        store = FixtureStore(config.fixture_dir)
        transport = RecordingTransport(
            LiveTransport(config.base_url, config.rate_limit), store
        )
    else:
        store = None
        transport = LiveTransport(config.base_url, config.rate_limit)
    if config.cache:
        transport = CachingTransport(transport)
    return transport, store


def build_runtime(config: AtreyaConfig) -> Runtime:
    transport, store = build_transport(config)
    client = ChemblClient(
        transport, page_size=config.page_size, max_records=config.max_records
    )
    if config.pattern_book:
        pattern_book = casualtalk.load_pattern_file(config.pattern_book)
    else:
        pattern_book = casualtalk.load_default_book()
    credential_check = CredentialCheck(config.credential_token, client)
    manager = DialogManager(
        client,
        pattern_book=pattern_book,
        credential_check=credential_check,
        raster_size=config.raster_size,
        similarity_threshold=config.similarity_threshold,
        history_cap=config.history_cap,
        max_sessions=config.max_sessions,
    )
    return Runtime(
        config=config,
        transport=transport,
        store=store,
        client=client,
        pattern_book=pattern_book,
        credential_check=credential_check,
        manager=manager,
    )
