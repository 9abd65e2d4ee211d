"""Per-session dialog state machine: start, menu, guidelines, queries, exit.

The funnel: a fresh session waits for /start, a credential check gates the
menu, the button grid narrows the user toward a keyword query, and results
always re-show the grid. Chemical commands are dispatched to the ChEMBL
client and rendered by the presenter; the state machine itself is testable
against a stub backend.
"""

from __future__ import annotations

import logging
import threading
import uuid
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from . import casualtalk, grammar, presenter
from .casualtalk import PatternBook
from .chembl.client import ChemblClient, DEFAULT_SIMILARITY_THRESHOLD
from .chembl.errors import NotFoundError
from .chembl.models import TissueKey
from .grammar import Command, CommandKind, MalformedCommandError
from .presenter import ButtonGrid, Reply
from .raster import DEFAULT_SIZE

logger = logging.getLogger(__name__)

MENU_MOLECULE = "Molecule Info"
MENU_TISSUE = "Tissue Info"
MENU_SIMILAR = "Similar compounds"
MENU_CHAT = "Chat to Bot"
MENU_EXIT = "Exit"

MAIN_MENU = ButtonGrid(labels=(MENU_MOLECULE, MENU_TISSUE, MENU_SIMILAR, MENU_CHAT, MENU_EXIT))

GREETING = (
    "Welcome to Atreya! I search the ChEMBL database for molecules, "
    "similar compounds, targets, tissues and approved drugs. "
    "Pick an option below, or type a keyword query directly."
)
FAREWELL = "Goodbye! Thanks for searching with Atreya."
START_HINT = "Please send /start to begin."
CHAT_PROMPT = (
    "Let's chat! Ask me about myself, or use any keyword query "
    "(for example msy/paracetamol). Send /exit to leave."
)
CREDENTIAL_FAILURE = (
    "I could not verify my service credentials, so searches are unavailable. "
    "Please check the configuration and send /start again."
)

GUIDELINE_TOPICS: dict[str, tuple[str, tuple[str, ...]]] = {
    "molecule": ("Molecule searches", ("msy", "msm", "mid", "usn", "dis", "top50")),
    "tissue": ("Tissue searches", ("tub", "tnm", "tid")),
    "similarity": ("Similarity searches", ("sim", "sms")),
}

BUTTON_TOPICS = {
    MENU_MOLECULE: "molecule",
    MENU_TISSUE: "tissue",
    MENU_SIMILAR: "similarity",
}

DEFAULT_HISTORY_CAP = 200
TOP_DRUGS_LIMIT = 50


class Phase(Enum):
    CREATED = "created"
    AUTHENTICATED = "authenticated"
    MENU = "menu"
    GUIDELINE = "guideline"
    AWAITING_QUERY = "awaiting_query"
    RESULTS = "results"
    ENDED = "ended"


class EventKind(Enum):
    TEXT = "text"
    BUTTON = "button"


@dataclass(frozen=True)
class InboundEvent:
    kind: EventKind
    text: str | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind is EventKind.BUTTON and not self.label:
            raise ValueError("button events need a non-empty label")
        if self.kind is EventKind.TEXT and self.text is None:
            raise ValueError("text events need text")

    @classmethod
    def of_text(cls, text: str) -> "InboundEvent":
        return cls(kind=EventKind.TEXT, text=text)

    @classmethod
    def of_button(cls, label: str) -> "InboundEvent":
        return cls(kind=EventKind.BUTTON, label=label)


class SessionEndedError(Exception):
    """Events are not accepted after a session has ended."""


class SessionLimitError(Exception):
    """The manager is at its concurrent-session ceiling."""


@dataclass
class SessionState:
    session_id: str
    phase: Phase = Phase.CREATED
    topic: str | None = None
    history: deque = field(default_factory=lambda: deque(maxlen=DEFAULT_HISTORY_CAP))
    visited_phases: set = field(default_factory=lambda: {Phase.CREATED})

    def _move(self, phase: Phase, topic: str | None = None) -> None:
        self.phase = phase
        self.topic = topic
        self.visited_phases.add(phase)


def guideline_text(topic: str) -> str:
    title, keywords = GUIDELINE_TOPICS[topic]
    lines = [f"{title} - use any of these keyword queries:"]
    lines.extend(f"  {grammar.USAGE[k]}" for k in keywords)
    lines.append("Type the keyword with your query, e.g. " + grammar.USAGE[keywords[0]].split(" - ")[0])
    return "\n".join(lines)


class DialogManager:
    """Registry of sessions plus the transition logic for each event.

    One manager serves many sessions; events within a session are applied
    strictly one at a time (per-session lock), distinct sessions progress
    independently.
    """

    def __init__(
        self,
        client: ChemblClient,
        pattern_book: PatternBook | None = None,
        credential_check: Callable[[], None] | None = None,
        raster_size: int = DEFAULT_SIZE,
        similarity_threshold: int = DEFAULT_SIMILARITY_THRESHOLD,
        history_cap: int = DEFAULT_HISTORY_CAP,
        max_sessions: int = 1000,
        id_factory: Callable[[], str] | None = None,
    ):
        self._client = client
        self._book = pattern_book or casualtalk.load_default_book()
        self._credential_check = credential_check or (lambda: None)
        self._raster_size = raster_size
        self._threshold = similarity_threshold
        self._history_cap = history_cap
        self._max_sessions = max_sessions
        self._id_factory = id_factory or (lambda: uuid.uuid4().hex)
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- session registry ----------------------------------------------------

    def create_session(self) -> SessionState:
        with self._registry_lock:
            live = sum(1 for s in self._sessions.values() if s.phase is not Phase.ENDED)
            if live >= self._max_sessions:
                raise SessionLimitError(f"session ceiling of {self._max_sessions} reached")
            session = SessionState(
                session_id=self._id_factory(),
                history=deque(maxlen=self._history_cap),
            )
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
            return session

    def get_session(self, session_id: str) -> SessionState | None:
        return self._sessions.get(session_id)

    def handle_event(self, session_id: str, event: InboundEvent) -> list[Reply]:
        session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(f"unknown session: {session_id}")
        lock = self._locks[session_id]
        with lock:
            return self.handle(session, event)

    # -- transition logic ------------------------------------------------------

    def handle(self, session: SessionState, event: InboundEvent) -> list[Reply]:
        if session.phase is Phase.ENDED:
            raise SessionEndedError(session.session_id)
        replies = self._transition(session, event)
        session.history.append((event, replies))
        return replies

    def _transition(self, session: SessionState, event: InboundEvent) -> list[Reply]:
        if event.kind is EventKind.BUTTON:
            return self._on_button(session, event.label)
        return self._on_text(session, event.text)

    def _on_button(self, session: SessionState, label: str) -> list[Reply]:
        if session.phase is Phase.CREATED:
            return [Reply.of_text(START_HINT)]
        if label == MENU_EXIT:
            return self._end(session)
        if label in BUTTON_TOPICS:
            topic = BUTTON_TOPICS[label]
            session._move(Phase.GUIDELINE, topic)
            return [Reply.of_text(guideline_text(topic))]
        if label == MENU_CHAT:
            session._move(Phase.AWAITING_QUERY, "free")
            return [Reply.of_text(CHAT_PROMPT)]
        return [
            Reply.of_text(f"I do not know the option {label!r}. Please pick one below."),
            Reply.of_buttons(MAIN_MENU),
        ]

    def _on_text(self, session: SessionState, text: str) -> list[Reply]:
        utterance = grammar.normalize(text)
        try:
            command = grammar.parse(utterance)
        except MalformedCommandError as exc:
            if session.phase is Phase.CREATED:
                return [Reply.of_text(START_HINT)]
            return [Reply.of_text(f"That query needs an argument. Usage: {grammar.USAGE[exc.keyword]}")]

        if command.kind is CommandKind.EXIT:
            return self._end(session)

        if session.phase is Phase.CREATED:
            if command.kind is CommandKind.START:
                return self._start(session)
            return [Reply.of_text(START_HINT)]

        if command.kind is CommandKind.START:
            session._move(Phase.MENU)
            return [Reply.of_text(GREETING), Reply.of_buttons(MAIN_MENU)]

        if command.kind is CommandKind.CASUAL_TALK:
            return [Reply.of_text(casualtalk.respond(self._book, utterance))]

        return self._run_query(session, command)

    def _start(self, session: SessionState) -> list[Reply]:
        try:
            self._credential_check()
        except Exception as exc:
            logger.warning("credential check failed: %s", exc)
            return [Reply.of_text(CREDENTIAL_FAILURE)]
        session._move(Phase.AUTHENTICATED)
        session._move(Phase.MENU)
        return [Reply.of_text(GREETING), Reply.of_buttons(MAIN_MENU)]

    def _end(self, session: SessionState) -> list[Reply]:
        session._move(Phase.ENDED)
        return [Reply.of_text(FAREWELL)]

    # -- query dispatch ---------------------------------------------------------

    def _run_query(self, session: SessionState, command: Command) -> list[Reply]:
        try:
            replies = self._dispatch(command)
        except Exception as exc:
            logger.warning("query %s failed: %s", command.kind.name, exc)
            return [
                Reply.of_text(
                    "Sorry, I could not complete that search "
                    f"({type(exc).__name__}: {exc}). Please try again."
                )
            ]
        session._move(Phase.RESULTS)
        replies.append(Reply.of_buttons(MAIN_MENU))
        return replies

    def _dispatch(self, command: Command) -> list[Reply]:
        kind, arg = command.kind, command.argument
        if kind is CommandKind.MOLECULE_BY_SYNONYM:
            return self._molecule_cards(self._client.molecule_by_synonym(arg), f"matching {arg!r}")
        if kind is CommandKind.MOLECULE_BY_SMILES:
            return self._molecule_cards(self._client.molecule_by_smiles(arg), "with that structure")
        if kind is CommandKind.MOLECULE_BY_CHEMBL_ID:
            record = self._client.molecule_by_chembl_id(arg.upper())
            return self._molecule_cards([record], arg.upper())
        if kind is CommandKind.SIMILAR_BY_DRUG_NAME:
            molecule, candidates = self._client.resolve_drug(arg)
            hits = self._client.similar_by_smiles(molecule.canonical_smiles, self._threshold)
            header = (
                f"Compounds at least {self._threshold}% similar to "
                f"{molecule.pref_name or molecule.chembl_id} ({molecule.chembl_id}):"
            )
            if candidates > 1:
                header += f"\n(note: {candidates} molecules matched {arg!r}; I used the first)"
            return [Reply.of_text(header)] + self._capped(presenter.similarity_list(hits))
        if kind is CommandKind.SIMILAR_BY_SMILES:
            hits = self._client.similar_by_smiles(arg, self._threshold)
            header = f"Compounds at least {self._threshold}% similar to the given structure:"
            return [Reply.of_text(header)] + self._capped(presenter.similarity_list(hits))
        if kind is CommandKind.TARGET_BY_GENE:
            targets = self._client.target_by_gene(arg)
            if not targets:
                return [Reply.of_text(f"No targets found for gene {arg!r}.")]
            return [Reply.of_text(f"{len(targets)} target(s) for gene {arg!r}:")] + self._capped(
                [presenter.target_card(t) for t in targets]
            )
        if kind is CommandKind.TISSUE_BY_UBERON_ID:
            return self._tissue_cards(TissueKey.uberon(arg), arg)
        if kind is CommandKind.TISSUE_BY_NAME:
            return self._tissue_cards(TissueKey.name(arg), arg)
        if kind is CommandKind.TISSUE_BY_ANY_ID:
            return self._tissue_cards(TissueKey.any_id(arg), arg)
        if kind is CommandKind.DRUG_BY_USAN_STEM:
            records = self._client.drug_by_usan_stem(arg)
            if not records:
                return [Reply.of_text(f"No drugs found for USAN stem {arg!r}.")]
            return [Reply.of_text(f"{len(records)} drug(s) with USAN stem {arg!r}:")] + self._capped(
                [presenter.usan_card(r) for r in records]
            )
        if kind is CommandKind.APPROVED_DRUGS_BY_DISEASE:
            records = self._client.approved_drugs_by_disease(arg)
            if not records:
                return [Reply.of_text(f"No approved drugs found for {arg!r}.")]
            return [Reply.of_text(f"{len(records)} approved drug(s) for {arg!r}:")] + self._capped(
                [presenter.approved_drug_card(r) for r in records]
            )
        if kind is CommandKind.TOP_APPROVED_DRUGS:
            records = self._client.top_approved_drugs(TOP_DRUGS_LIMIT)
            _, file_reply = presenter.approved_csv(records)
            summary = (
                f"Here are the top {len(records)} approved drugs, newest approvals first, "
                "as a CSV file."
            )
            return [Reply.of_text(summary), file_reply]
        raise ValueError(f"no dispatch for command kind {kind.name}")

    def _molecule_cards(self, records, what: str) -> list[Reply]:
        if not records:
            return [Reply.of_text(f"No molecules found {what}.")]
        replies = [Reply.of_text(f"{len(records)} molecule(s) {what}:")]
        for record in records[:presenter.CARDS_PER_BATCH]:
            depiction = self._depiction_for(record.chembl_id)
            replies.append(presenter.molecule_card(record, depiction, self._raster_size))
        if len(records) > presenter.CARDS_PER_BATCH:
            replies.append(
                Reply.of_text(
                    f"Showing the first {presenter.CARDS_PER_BATCH} of {len(records)} results."
                )
            )
        return replies

    def _tissue_cards(self, key: TissueKey, arg: str) -> list[Reply]:
        tissues = self._client.tissue_lookup(key)
        if not tissues:
            return [Reply.of_text(f"No tissues found for {arg!r}.")]
        return [Reply.of_text(f"{len(tissues)} tissue(s) for {arg!r}:")] + self._capped(
            [presenter.tissue_card(t) for t in tissues]
        )

    def _depiction_for(self, chembl_id: str) -> bytes | None:
        try:
            return self._client.fetch_depiction_svg(chembl_id)
        except NotFoundError:
            return None
        except Exception as exc:
            logger.info("no depiction for %s: %s", chembl_id, exc)
            return None

    @staticmethod
    def _capped(cards: list[Reply]) -> list[Reply]:
        if len(cards) <= presenter.CARDS_PER_BATCH:
            return cards
        kept = cards[:presenter.CARDS_PER_BATCH]
        kept.append(Reply.of_text(f"Showing the first {presenter.CARDS_PER_BATCH} of {len(cards)} results."))
        return kept
