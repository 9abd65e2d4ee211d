"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Everything runs in replay mode against the recorded fixture store; no
network access, no secondary component. The fixture store is the oracle:
expected values are read back from it, not hard-coded, wherever the
criterion allows.
"""

import functools
import hashlib
import io
import json
import random

import pytest
from PIL import Image

from atreya.chembl.client import ChemblClient
from atreya.chembl.models import MoleculeRecord, SimilarityHit
from atreya.chembl.transport import (
    FixtureStore,
    ReplayTransport,
    Transport,
    TransportRequest,
    TransportResponse,
)
from atreya.dialog import DialogManager, InboundEvent, Phase, SessionEndedError
from atreya.grammar import ARGLESS_KEYWORDS, KEYWORDS, Command, CommandKind, parse_text
from atreya.presenter import Reply, ReplyKind, approved_csv, parse_csv
from atreya.raster import render_png

from conftest import FIXTURE_DIR

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
MENU_LABELS = ["Molecule Info", "Tissue Info", "Similar compounds", "Chat to Bot", "Exit"]
PARACETAMOL_SMILES = "CC(=O)Nc1ccc(O)cc1"
RASTER_SIZE = 500
SEED = 20260815


def criterion(label):
    """Emit exactly one PASS/FAIL line per acceptance criterion."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] FAIL  {label}")
                raise
            print(f"[acceptance] PASS  {label}")
            return result

        return run

    return wrap


def fresh_replay_manager(**kwargs) -> DialogManager:
    """A dialog stack with nothing shared: own store, transport, client."""
    client = ChemblClient(ReplayTransport(FixtureStore(FIXTURE_DIR)))
    return DialogManager(client, raster_size=RASTER_SIZE, **kwargs)


def serialize_transcript(replies: list[Reply]) -> bytes:
    """Canonical byte rendering of a reply stream for golden comparison."""
    rows = []
    for reply in replies:
        row: dict = {"kind": reply.kind.value}
        if reply.text is not None:
            row["text"] = reply.text
        if reply.caption is not None:
            row["caption"] = reply.caption
        if reply.buttons is not None:
            row["labels"] = list(reply.buttons.labels)
        if reply.image_png is not None:
            row["image_sha256"] = hashlib.sha256(reply.image_png).hexdigest()
        if reply.file_name is not None:
            row["filename"] = reply.file_name
            row["file_sha256"] = hashlib.sha256(reply.file_bytes).hexdigest()
        rows.append(row)
    return json.dumps(rows, sort_keys=True).encode("utf-8")


def run_script(manager: DialogManager, events: list[InboundEvent]) -> list[Reply]:
    session = manager.create_session()
    replies: list[Reply] = []
    for event in events:
        replies.extend(manager.handle(session, event))
    return replies


# -- 1. grammar conformance --------------------------------------------------

ARG_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-()=#@+."


@criterion("grammar conformance: 180-case keyword grid + casual fallback")
def test_grammar_conformance():
    rng = random.Random(SEED)
    cases = 0
    for keyword, kind in KEYWORDS.items():
        args = ["".join(rng.choice(ARG_ALPHABET) for _ in range(rng.randint(1, 24)))
                for _ in range(5)]
        for arg in args:
            spelled = keyword if rng.random() < 0.5 else keyword.upper()
            for text in (f"{spelled}/{arg}", f"/{spelled}:{arg}", f"{spelled}:{arg}"):
                expected = (Command(kind) if keyword in ARGLESS_KEYWORDS
                            else Command(kind, argument=arg))
                assert parse_text(text) == expected, text
                cases += 1
    assert cases == 180

    non_keywords = ["hello", "what is chembl", "msyx/foo", "paracetamol please", "50top"]
    non_keywords += ["".join(rng.choice("abcdefghijklmnopqrstuvwxyz ") for _ in range(12)).strip() or "x"
                     for _ in range(30)]
    for text in non_keywords:
        first_word = text.split()[0].split("/")[0].split(":")[0].lower()
        if first_word in KEYWORDS or text.strip().lower() in ("exit", "/exit", "/start"):
            continue
        command = parse_text(text)
        assert command.kind is CommandKind.CASUAL_TALK, text


# -- 2. menu fidelity ---------------------------------------------------------

@criterion("menu fidelity: /start yields the exact five-button grid")
def test_menu_fidelity():
    manager = fresh_replay_manager()
    replies = run_script(manager, [InboundEvent.of_text("/start")])
    grids = [r for r in replies if r.kind is ReplyKind.BUTTONS]
    assert len(grids) == 1
    assert list(grids[0].buttons.labels) == MENU_LABELS


# -- 3. state-machine soundness ----------------------------------------------

class _NullClient:
    """Stubbed data client for the BFS sweep: instant canned answers."""

    _molecule = MoleculeRecord(chembl_id="CHEMBL1", pref_name="STUB",
                               canonical_smiles="C", molecular_formula="CH4", max_phase=4)

    def probe(self):
        return {"status": "UP"}

    def molecule_by_synonym(self, name):
        return [self._molecule]

    def top_approved_drugs(self, limit):
        return [self._molecule] * limit

    def fetch_depiction_svg(self, chembl_id):
        return b'<svg xmlns="http://www.w3.org/2000/svg" width="4" height="4"/>'


BFS_EVENTS = [
    InboundEvent.of_text("/start"),
    InboundEvent.of_text("/exit"),
    InboundEvent.of_text("how are you"),
    InboundEvent.of_text("msy/stub"),
    InboundEvent.of_text("top50"),
    InboundEvent.of_text("msy/"),
    InboundEvent.of_button("Molecule Info"),
    InboundEvent.of_button("Tissue Info"),
    InboundEvent.of_button("Similar compounds"),
    InboundEvent.of_button("Chat to Bot"),
    InboundEvent.of_button("Exit"),
    InboundEvent.of_button("Nonsense"),
]


@criterion("state-machine soundness: BFS finds zero violations")
def test_state_machine_soundness():
    violations = []
    seen: set = set()
    frontier: list[tuple] = [()]
    visited_phases: set = set()
    reachable_live: list[tuple] = []

    def replay(sequence):
        manager = DialogManager(_NullClient(), raster_size=64)
        session = manager.create_session()
        for event in sequence:
            if session.phase is Phase.ENDED:
                return None, None
            manager.handle(session, event)
        return manager, session

    for _depth in range(4):
        next_frontier = []
        for prefix in frontier:
            for event in BFS_EVENTS:
                manager, session = replay(prefix)
                if manager is None or session.phase is Phase.ENDED:
                    continue
                replies = manager.handle(session, event)
                if not replies:
                    violations.append((prefix, event, "live phase produced no reply"))
                visited_phases |= session.visited_phases
                state = (session.phase, session.topic)
                if state not in seen:
                    seen.add(state)
                    sequence = prefix + (event,)
                    next_frontier.append(sequence)
                    if session.phase is not Phase.ENDED:
                        reachable_live.append(sequence)
        frontier = next_frontier

    if visited_phases != set(Phase):
        violations.append(("reachability", sorted(set(Phase) - visited_phases, key=str)))

    # Ended must be reachable from every discovered live state, and absorbing.
    for sequence in [()] + reachable_live:
        manager, session = replay(sequence)
        assert manager is not None
        manager.handle(session, InboundEvent.of_text("/exit"))
        if session.phase is not Phase.ENDED:
            violations.append((sequence, "exit did not end the session"))
            continue
        try:
            manager.handle(session, InboundEvent.of_text("hello"))
            violations.append((sequence, "ended session accepted an event"))
        except SessionEndedError:
            pass
        if session.phase is not Phase.ENDED:
            violations.append((sequence, "ended phase was left"))

    assert violations == [], violations


# -- 4. similarity ordering ----------------------------------------------------

class _SinglePageTransport(Transport):
    def __init__(self, items: list[dict]):
        self._items = items

    def execute(self, request: TransportRequest) -> TransportResponse:
        body = json.dumps({
            "molecules": self._items,
            "page_meta": {"limit": len(self._items), "next": None, "offset": 0,
                          "previous": None, "total_count": len(self._items)},
        }).encode("utf-8")
        return TransportResponse(status=200, body=body, content_type="application/json")


def _synthetic_hit(rng: random.Random, i: int) -> dict:
    value = rng.uniform(30.0, 100.0)
    style = rng.randrange(3)
    if style == 0:
        similarity = f"{value:.2f}"
    elif style == 1:
        similarity = f"{value:g}"
    else:
        similarity = str(int(value))
    return {
        "molecule_chembl_id": f"CHEMBL{9000 + i}",
        "pref_name": f"SYNTH{i}",
        "max_phase": None,
        "first_approval": None,
        "molecule_type": "Small molecule",
        "molecule_structures": {"canonical_smiles": "CC", "standard_inchi_key": None},
        "molecule_properties": None,
        "molecule_synonyms": [],
        "usan_stem": None,
        "usan_stem_definition": None,
        "similarity": similarity,
    }


@criterion("similarity ordering: fixtures + 1000 shuffled payloads, zero violations")
def test_similarity_ordering():
    violations = 0

    def check(hits: list[SimilarityHit], threshold: int):
        nonlocal violations
        values = [h.similarity_percent for h in hits]
        if values != sorted(values, reverse=True):
            violations += 1
        if any(v < threshold for v in values):
            violations += 1

    # Every recorded similarity fixture, via the real replay pagination.
    store = FixtureStore(FIXTURE_DIR)
    similarity_lines = [line for line in store.request_lines() if "similarity/" in line]
    assert similarity_lines, "no similarity fixtures recorded"
    client = ChemblClient(ReplayTransport(store))
    check(client.similar_by_smiles(PARACETAMOL_SMILES, 70), 70)
    check(client.similar_by_drug_name("panadol", 70), 70)

    # Each recorded page also holds as a standalone payload.
    pages = 0
    for line in similarity_lines:
        request_path = line.split(" ", 1)[1]
        path, _, query = request_path.partition("?")
        params = dict(pair.split("=", 1) for pair in query.split("&")) if query else None
        response = store.get(TransportRequest.get(path, params).key)
        assert response is not None, line
        if response.status != 200:
            continue
        items = json.loads(response.body.decode("utf-8"))["molecules"]
        threshold = int(path.split("/")[2].removesuffix(".json"))
        page_client = ChemblClient(_SinglePageTransport(items))
        check(page_client.similar_by_smiles("CC", threshold), threshold)
        pages += 1
    assert pages >= 2

    rng = random.Random(SEED)
    for trial in range(1000):
        items = [_synthetic_hit(rng, i) for i in range(rng.randint(1, 30))]
        rng.shuffle(items)
        trial_client = ChemblClient(_SinglePageTransport(items))
        check(trial_client.similar_by_smiles("CC", 40), 40)

    assert violations == 0


# -- 5. top-50 CSV --------------------------------------------------------------

@criterion("top-50 CSV: 50 approved records, 51 lines, strict RFC-4180 round-trip")
def test_top50_csv(replay_client):
    records = replay_client.top_approved_drugs(50)
    assert len(records) == 50
    assert all(m.max_phase == 4 for m in records)

    document, reply = approved_csv(records)
    data = reply.file_bytes
    lines = data.split(b"\r\n")
    assert lines[-1] == b""
    assert len(lines) - 1 == 51

    matrix = parse_csv(data)
    expected = [list(document.header)] + [list(row) for row in document.rows]
    assert matrix == expected
    assert len(matrix) == 51

    # independent strict parser agrees cell for cell
    import csv

    stdlib_rows = list(csv.reader(io.StringIO(data.decode("utf-8")), strict=True))
    assert stdlib_rows == matrix


# -- 6. walkthrough: name query to image card -----------------------------------

WALKTHROUGH = [
    InboundEvent.of_text("/start"),
    InboundEvent.of_button("Molecule Info"),
    InboundEvent.of_text("msy/paracetamole"),
]


@criterion("molecule walkthrough: image card with id/name/formula, golden transcript")
def test_molecule_walkthrough(replay_client):
    expected = replay_client.molecule_by_synonym("paracetamole")
    assert len(expected) == 1
    oracle = expected[0]

    transcripts = []
    for _run in range(2):
        manager = fresh_replay_manager()
        replies = run_script(manager, WALKTHROUGH)
        transcripts.append(serialize_transcript(replies))

        cards = [r for r in replies if r.kind is ReplyKind.IMAGE_CARD]
        assert len(cards) >= 1
        caption = cards[0].caption
        assert oracle.chembl_id in caption
        assert oracle.pref_name in caption
        assert oracle.molecular_formula in caption

        image = Image.open(io.BytesIO(cards[0].image_png))
        assert image.format == "PNG"
        assert max(image.size) == RASTER_SIZE

    assert transcripts[0] == transcripts[1]


# -- 7. rasterization -------------------------------------------------------------

@criterion("rasterization: 20+ fixture SVGs -> PNG, longer dimension exact")
def test_rasterization():
    store = FixtureStore(FIXTURE_DIR)
    converted = 0
    for line in store.request_lines():
        request_path = line.split(" ", 1)[1]
        if not request_path.startswith("image/"):
            continue
        response = store.get(TransportRequest.get(request_path).key)
        assert response is not None, line
        if response.status != 200:
            continue
        png = render_png(response.body, size=RASTER_SIZE)
        assert png.startswith(PNG_SIGNATURE)
        width, height = Image.open(io.BytesIO(png)).size
        assert max(width, height) == RASTER_SIZE, line
        converted += 1
    assert converted >= 20


# -- 8. replay determinism ---------------------------------------------------------

FULL_WALKTHROUGH = [
    InboundEvent.of_text("/start"),
    InboundEvent.of_text("nice to meet you"),
    InboundEvent.of_button("Molecule Info"),
    InboundEvent.of_text("msy/paracetamole"),
    InboundEvent.of_text(f"msm/{PARACETAMOL_SMILES}"),
    InboundEvent.of_text("mid/CHEMBL112"),
    InboundEvent.of_button("Similar compounds"),
    InboundEvent.of_text("sim/panadol"),
    InboundEvent.of_text(f"sms/{PARACETAMOL_SMILES}"),
    InboundEvent.of_text("tgg/BRD4"),
    InboundEvent.of_button("Tissue Info"),
    InboundEvent.of_text("tub/UBERON:0000955"),
    InboundEvent.of_text("tnm/brain"),
    InboundEvent.of_text("tid/BTO:0000142"),
    InboundEvent.of_text("usn/-olol"),
    InboundEvent.of_text("dis/asthma"),
    InboundEvent.of_text("top50"),
    InboundEvent.of_text("msy/"),
    InboundEvent.of_button("Chat to Bot"),
    InboundEvent.of_text("who are you"),
    InboundEvent.of_text("/exit"),
]


@criterion("replay determinism: full walkthrough twice, byte-identical transcripts")
def test_replay_determinism():
    transcripts = []
    for _run in range(2):
        manager = fresh_replay_manager()
        replies = run_script(manager, FULL_WALKTHROUGH)
        transcripts.append(serialize_transcript(replies))
        kinds = {r.kind for r in replies}
        assert kinds == set(ReplyKind)
    assert transcripts[0] == transcripts[1]
    digest = hashlib.sha256(transcripts[0]).hexdigest()
    print(f"[acceptance] transcript sha256={digest[:16]} ({len(transcripts[0])} bytes)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
