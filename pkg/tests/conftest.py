"""Shared test fixtures: the replay store, clients, and manager factories."""

from __future__ import annotations

import itertools
from pathlib import Path

import pytest

from atreya.chembl.client import ChemblClient
from atreya.chembl.transport import FixtureStore, ReplayTransport
from atreya.config import AtreyaConfig
from atreya.dialog import DialogManager

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "chembl"

PARACETAMOL_SMILES = "CC(=O)Nc1ccc(O)cc1"
BAD_SMILES = "not-a-smiles-((("


@pytest.fixture(scope="session")
def fixture_store() -> FixtureStore:
    assert FIXTURE_DIR.is_dir(), "run tools/make_fixtures.py first"
    return FixtureStore(FIXTURE_DIR)


@pytest.fixture(scope="session")
def replay_client(fixture_store) -> ChemblClient:
    return ChemblClient(ReplayTransport(fixture_store))


@pytest.fixture()
def replay_config(tmp_path) -> AtreyaConfig:
    return AtreyaConfig(
        mode="replay",
        fixture_dir=str(FIXTURE_DIR),
        downloads_dir=str(tmp_path / "downloads"),
    )


def sequential_ids(prefix: str = "session"):
    counter = itertools.count(1)
    return lambda: f"{prefix}-{next(counter):04d}"


@pytest.fixture()
def make_manager(replay_client):
    def build(client=None, **kwargs) -> DialogManager:
        kwargs.setdefault("id_factory", sequential_ids())
        return DialogManager(client or replay_client, **kwargs)

    return build
