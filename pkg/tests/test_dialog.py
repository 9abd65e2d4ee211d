"""Dialog state machine: funnel transitions, guard rails, query dispatch."""

import pytest

from atreya.chembl.models import (
    DrugIndicationRecord,
    MoleculeRecord,
    SimilarityHit,
    TargetRecord,
    TissueRecord,
)
from atreya.dialog import (
    CHAT_PROMPT,
    CREDENTIAL_FAILURE,
    FAREWELL,
    GREETING,
    MAIN_MENU,
    START_HINT,
    DialogManager,
    InboundEvent,
    Phase,
    SessionEndedError,
    SessionLimitError,
    guideline_text,
)
from atreya.presenter import ReplyKind

MENU_LABELS = ["Molecule Info", "Tissue Info", "Similar compounds", "Chat to Bot", "Exit"]

MOLECULE = MoleculeRecord(
    chembl_id="CHEMBL112",
    pref_name="PARACETAMOL",
    canonical_smiles="CC(=O)Nc1ccc(O)cc1",
    molecular_formula="C8H9NO2",
    max_phase=4,
    first_approval=1950,
)

SVG = b'<svg xmlns="http://www.w3.org/2000/svg" width="8" height="8"><rect width="8" height="8"/></svg>'


class StubClient:
    """Offline stand-in covering every operation the dialog dispatches to."""

    def __init__(self):
        self.calls: list[str] = []
        self.probes = 0

    def _note(self, name):
        self.calls.append(name)

    def probe(self):
        self.probes += 1
        return {"status": "UP"}

    def molecule_by_synonym(self, name):
        self._note("msy")
        return [MOLECULE]

    def molecule_by_smiles(self, smiles):
        self._note("msm")
        return [MOLECULE]

    def molecule_by_chembl_id(self, chembl_id):
        self._note("mid")
        return MOLECULE

    def resolve_drug(self, name):
        self._note("resolve")
        return MOLECULE, 2

    def similar_by_smiles(self, smiles, threshold):
        self._note("sms")
        return [SimilarityHit(molecule=MOLECULE, similarity_percent=100.0)]

    def target_by_gene(self, gene):
        self._note("tgg")
        return [
            TargetRecord(
                target_chembl_id="CHEMBL1163125",
                pref_name="BRD4",
                target_type="SINGLE PROTEIN",
                gene_symbols=("BRD4",),
            )
        ]

    def tissue_lookup(self, key):
        self._note("tissue")
        return [TissueRecord(tissue_chembl_id="CHEMBL3638178", pref_name="Brain")]

    def drug_by_usan_stem(self, stem):
        self._note("usn")
        return [MOLECULE]

    def approved_drugs_by_disease(self, disease):
        self._note("dis")
        return [MOLECULE]

    def top_approved_drugs(self, limit):
        self._note("top50")
        return [MOLECULE] * limit

    def fetch_depiction_svg(self, chembl_id):
        self._note("svg")
        return SVG


def stub_manager(**kwargs) -> tuple[DialogManager, StubClient]:
    client = StubClient()
    manager = DialogManager(client, raster_size=64, **kwargs)
    return manager, client


def start(manager):
    session = manager.create_session()
    manager.handle(session, InboundEvent.of_text("/start"))
    return session


class TestStartFunnel:
    def test_start_yields_greeting_and_grid(self):
        manager, _ = stub_manager()
        session = manager.create_session()
        replies = manager.handle(session, InboundEvent.of_text("/start"))
        assert session.phase is Phase.MENU
        assert Phase.AUTHENTICATED in session.visited_phases
        assert [r.kind for r in replies] == [ReplyKind.TEXT, ReplyKind.BUTTONS]
        assert replies[0].text == GREETING
        assert list(replies[1].buttons.labels) == MENU_LABELS

    def test_anything_else_in_created_hints_start(self):
        manager, client = stub_manager()
        session = manager.create_session()
        for event in (InboundEvent.of_text("msy/panadol"), InboundEvent.of_text("hello"),
                      InboundEvent.of_button("Molecule Info"), InboundEvent.of_text("msy/")):
            replies = manager.handle(session, event)
            assert session.phase is Phase.CREATED
            assert replies[0].text == START_HINT
        assert client.calls == []

    def test_failed_credentials_stay_created_and_allow_retry(self):
        failures = [RuntimeError("bad token")]

        def check():
            if failures:
                raise failures.pop()

        manager, _ = stub_manager(credential_check=check)
        session = manager.create_session()
        replies = manager.handle(session, InboundEvent.of_text("/start"))
        assert session.phase is Phase.CREATED
        assert replies[0].text == CREDENTIAL_FAILURE
        replies = manager.handle(session, InboundEvent.of_text("/start"))
        assert session.phase is Phase.MENU
        assert replies[0].text == GREETING

    def test_no_query_before_credential_check(self):
        checks = {"count": 0}

        def check():
            checks["count"] += 1

        manager, client = stub_manager(credential_check=check)
        session = manager.create_session()
        manager.handle(session, InboundEvent.of_text("msy/panadol"))
        assert client.calls == []
        manager.handle(session, InboundEvent.of_text("/start"))
        manager.handle(session, InboundEvent.of_text("msy/panadol"))
        assert checks["count"] == 1
        assert "msy" in client.calls

    def test_start_mid_session_reshows_menu(self):
        manager, _ = stub_manager()
        session = start(manager)
        manager.handle(session, InboundEvent.of_button("Molecule Info"))
        replies = manager.handle(session, InboundEvent.of_text("/start"))
        assert session.phase is Phase.MENU
        assert replies[1].kind is ReplyKind.BUTTONS


class TestMenuAndGuidelines:
    @pytest.mark.parametrize(
        "label,keywords",
        [
            ("Molecule Info", ("msy", "msm", "mid", "usn", "dis", "top50")),
            ("Tissue Info", ("tub", "tnm", "tid")),
            ("Similar compounds", ("sim", "sms")),
        ],
    )
    def test_topic_buttons_show_guidelines(self, label, keywords):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_button(label))
        assert session.phase is Phase.GUIDELINE
        for keyword in keywords:
            assert keyword in replies[0].text

    def test_chat_button(self):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_button("Chat to Bot"))
        assert session.phase is Phase.AWAITING_QUERY
        assert replies[0].text == CHAT_PROMPT

    def test_exit_button(self):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_button("Exit"))
        assert session.phase is Phase.ENDED
        assert replies[0].text == FAREWELL

    def test_unknown_button_reshows_grid(self):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_button("Bogus"))
        assert session.phase is Phase.MENU
        assert replies[-1].kind is ReplyKind.BUTTONS

    def test_guideline_text_is_exhaustive(self):
        listed = set()
        for topic in ("molecule", "tissue", "similarity"):
            text = guideline_text(topic)
            for keyword in ("msy", "msm", "mid", "usn", "dis", "top50", "tub", "tnm", "tid", "sim", "sms"):
                if keyword in text:
                    listed.add(keyword)
        assert len(listed) == 11

    def test_queries_work_from_menu_without_guideline(self):
        manager, client = stub_manager()
        session = start(manager)
        manager.handle(session, InboundEvent.of_text("msy/panadol"))
        assert session.phase is Phase.RESULTS
        assert "msy" in client.calls


class TestQueries:
    def test_molecule_query_produces_cards_and_grid(self):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_text("msy/paracetamole"))
        kinds = [r.kind for r in replies]
        assert kinds[0] is ReplyKind.TEXT
        assert ReplyKind.IMAGE_CARD in kinds
        assert kinds[-1] is ReplyKind.BUTTONS
        assert session.phase is Phase.RESULTS

    def test_all_twelve_keywords_dispatch(self):
        cases = {
            "msy/panadol": "msy",
            "msm/CC(=O)Nc1ccc(O)cc1": "msm",
            "mid/CHEMBL112": "mid",
            "sim/panadol": "resolve",
            "sms/CC(=O)Nc1ccc(O)cc1": "sms",
            "tgg/BRD4": "tgg",
            "tub/UBERON:0000955": "tissue",
            "tnm/brain": "tissue",
            "tid/BTO:0000142": "tissue",
            "usn/-olol": "usn",
            "dis/asthma": "dis",
            "top50": "top50",
        }
        for text, expected_call in cases.items():
            manager, client = stub_manager()
            session = start(manager)
            replies = manager.handle(session, InboundEvent.of_text(text))
            assert expected_call in client.calls, text
            assert session.phase is Phase.RESULTS
            assert replies[-1].kind is ReplyKind.BUTTONS

    def test_mid_uppercases_argument(self):
        manager, client = stub_manager()
        session = start(manager)
        manager.handle(session, InboundEvent.of_text("mid/chembl112"))
        assert "mid" in client.calls

    def test_top50_ships_csv_file(self):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_text("top50"))
        files = [r for r in replies if r.kind is ReplyKind.FILE_ATTACHMENT]
        assert len(files) == 1
        assert files[0].file_name == "approved_drugs.csv"
        assert files[0].file_bytes.count(b"\r\n") == 51

    def test_similarity_header_notes_ambiguity(self):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_text("sim/panadol"))
        assert "2 molecules matched" in replies[0].text

    def test_malformed_keyword_gets_usage_hint(self):
        manager, _ = stub_manager()
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_text("msy/"))
        assert "Usage" in replies[0].text
        assert "msy/<name>" in replies[0].text
        assert session.phase is Phase.MENU

    def test_casual_talk_stays_in_phase(self):
        manager, client = stub_manager()
        session = start(manager)
        manager.handle(session, InboundEvent.of_button("Chat to Bot"))
        replies = manager.handle(session, InboundEvent.of_text("hello"))
        assert session.phase is Phase.AWAITING_QUERY
        assert replies[0].kind is ReplyKind.TEXT
        assert client.calls == []

    def test_query_failure_is_apologetic_not_fatal(self):
        manager, client = stub_manager()

        def boom(name):
            raise RuntimeError("backend down")

        client.molecule_by_synonym = boom
        session = start(manager)
        replies = manager.handle(session, InboundEvent.of_text("msy/panadol"))
        assert len(replies) == 1
        assert "RuntimeError" in replies[0].text
        assert session.phase is Phase.MENU
        followup = manager.handle(session, InboundEvent.of_text("top50"))
        assert followup[-1].kind is ReplyKind.BUTTONS

    def test_results_phase_accepts_further_queries(self):
        manager, client = stub_manager()
        session = start(manager)
        manager.handle(session, InboundEvent.of_text("msy/panadol"))
        manager.handle(session, InboundEvent.of_text("tnm/brain"))
        assert client.calls.count("tissue") == 1
        assert session.phase is Phase.RESULTS


class TestLifecycle:
    def test_exit_from_every_live_phase(self):
        for setup in (
            lambda m, s: None,
            lambda m, s: m.handle(s, InboundEvent.of_text("/start")),
            lambda m, s: (m.handle(s, InboundEvent.of_text("/start")),
                          m.handle(s, InboundEvent.of_button("Molecule Info"))),
            lambda m, s: (m.handle(s, InboundEvent.of_text("/start")),
                          m.handle(s, InboundEvent.of_button("Chat to Bot"))),
            lambda m, s: (m.handle(s, InboundEvent.of_text("/start")),
                          m.handle(s, InboundEvent.of_text("top50"))),
        ):
            manager, _ = stub_manager()
            session = manager.create_session()
            setup(manager, session)
            replies = manager.handle(session, InboundEvent.of_text("/exit"))
            assert session.phase is Phase.ENDED
            assert replies[0].text == FAREWELL

    def test_ended_is_absorbing(self):
        manager, _ = stub_manager()
        session = start(manager)
        manager.handle(session, InboundEvent.of_text("/exit"))
        with pytest.raises(SessionEndedError):
            manager.handle(session, InboundEvent.of_text("hello"))
        assert session.phase is Phase.ENDED

    def test_history_grows_by_one_per_event(self):
        manager, _ = stub_manager()
        session = manager.create_session()
        for i, text in enumerate(("/start", "hello", "msy/panadol"), start=1):
            manager.handle(session, InboundEvent.of_text(text))
            assert len(session.history) == i

    def test_history_cap_evicts_oldest(self):
        manager, _ = stub_manager(history_cap=5)
        session = start(manager)
        for _ in range(10):
            manager.handle(session, InboundEvent.of_text("hello"))
        assert len(session.history) == 5

    def test_session_ids_unique(self):
        manager, _ = stub_manager()
        ids = {manager.create_session().session_id for _ in range(50)}
        assert len(ids) == 50

    def test_session_ceiling(self):
        manager, _ = stub_manager(max_sessions=2)
        manager.create_session()
        session = manager.create_session()
        with pytest.raises(SessionLimitError):
            manager.create_session()
        manager.handle(session, InboundEvent.of_text("exit"))
        manager.create_session()  # ended sessions free their slot

    def test_handle_event_unknown_session(self):
        manager, _ = stub_manager()
        with pytest.raises(KeyError):
            manager.handle_event("nope", InboundEvent.of_text("hi"))

    def test_main_menu_constant(self):
        assert list(MAIN_MENU.labels) == MENU_LABELS


EVENT_ALPHABET = [
    InboundEvent.of_text("/start"),
    InboundEvent.of_text("/exit"),
    InboundEvent.of_text("hello there"),
    InboundEvent.of_text("msy/panadol"),
    InboundEvent.of_text("top50"),
    InboundEvent.of_text("msy/"),
    InboundEvent.of_button("Molecule Info"),
    InboundEvent.of_button("Tissue Info"),
    InboundEvent.of_button("Similar compounds"),
    InboundEvent.of_button("Chat to Bot"),
    InboundEvent.of_button("Exit"),
    InboundEvent.of_button("Bogus"),
]


def explore_state_space(max_depth: int = 4):
    """BFS over event sequences; replays each prefix on a fresh session."""
    seen_states = set()
    violations = []
    frontier = [()]
    visited_any = set()
    for depth in range(max_depth):
        next_frontier = []
        for prefix in frontier:
            for event in EVENT_ALPHABET:
                sequence = prefix + (event,)
                manager, _ = stub_manager()
                session = manager.create_session()
                ended_early = False
                for step in sequence[:-1]:
                    if session.phase is Phase.ENDED:
                        ended_early = True
                        break
                    manager.handle(session, step)
                if ended_early:
                    continue
                if session.phase is Phase.ENDED:
                    continue
                replies = manager.handle(session, sequence[-1])
                if not replies:
                    violations.append((sequence, "no replies"))
                visited_any |= session.visited_phases
                state = (session.phase, session.topic)
                if state not in seen_states:
                    seen_states.add(state)
                    next_frontier.append(sequence)
        frontier = next_frontier
    return seen_states, visited_any, violations


class TestReachability:
    def test_exhaustive_bfs(self):
        seen_states, visited_any, violations = explore_state_space()
        assert violations == []
        assert visited_any == set(Phase)
        live_states = {s for s in seen_states if s[0] is not Phase.ENDED}
        # Ended must be reachable from every live state via the exit command
        for phase, topic in live_states:
            manager, _ = stub_manager()
            session = manager.create_session()
            rebuilt = _drive_to(manager, session, phase, topic)
            assert rebuilt, (phase, topic)
            manager.handle(session, InboundEvent.of_text("/exit"))
            assert session.phase is Phase.ENDED


def _drive_to(manager, session, phase, topic) -> bool:
    script = {
        (Phase.CREATED, None): [],
        (Phase.MENU, None): ["/start"],
        (Phase.GUIDELINE, "molecule"): ["/start", ("button", "Molecule Info")],
        (Phase.GUIDELINE, "tissue"): ["/start", ("button", "Tissue Info")],
        (Phase.GUIDELINE, "similarity"): ["/start", ("button", "Similar compounds")],
        (Phase.AWAITING_QUERY, "free"): ["/start", ("button", "Chat to Bot")],
        (Phase.RESULTS, None): ["/start", "msy/panadol"],
    }.get((phase, topic))
    if script is None:
        return False
    for step in script:
        if isinstance(step, tuple):
            manager.handle(session, InboundEvent.of_button(step[1]))
        else:
            manager.handle(session, InboundEvent.of_text(step))
    return session.phase is phase and session.topic == topic
