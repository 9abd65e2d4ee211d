"""Keyword command grammar: turns raw chat text into typed commands.

Each chemical operation has a three-letter handle (``top50`` being the one
exception). A query can be written ``msy/panadol``, ``/msy:panadol`` or
``msy:panadol``; handles are case-insensitive, arguments are passed through
verbatim after trimming so SMILES strings survive intact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class CommandKind(Enum):
    MOLECULE_BY_SYNONYM = "msy"
    MOLECULE_BY_SMILES = "msm"
    MOLECULE_BY_CHEMBL_ID = "mid"
    SIMILAR_BY_DRUG_NAME = "sim"
    SIMILAR_BY_SMILES = "sms"
    TARGET_BY_GENE = "tgg"
    TISSUE_BY_UBERON_ID = "tub"
    TISSUE_BY_NAME = "tnm"
    TISSUE_BY_ANY_ID = "tid"
    DRUG_BY_USAN_STEM = "usn"
    APPROVED_DRUGS_BY_DISEASE = "dis"
    TOP_APPROVED_DRUGS = "top50"
    START = "start"
    BUTTON_PRESS = "button"
    EXIT = "exit"
    CASUAL_TALK = "casual"


#: keyword -> command kind, in help-text order
KEYWORDS: dict[str, CommandKind] = {
    "msy": CommandKind.MOLECULE_BY_SYNONYM,
    "msm": CommandKind.MOLECULE_BY_SMILES,
    "mid": CommandKind.MOLECULE_BY_CHEMBL_ID,
    "sim": CommandKind.SIMILAR_BY_DRUG_NAME,
    "sms": CommandKind.SIMILAR_BY_SMILES,
    "tgg": CommandKind.TARGET_BY_GENE,
    "tub": CommandKind.TISSUE_BY_UBERON_ID,
    "tnm": CommandKind.TISSUE_BY_NAME,
    "tid": CommandKind.TISSUE_BY_ANY_ID,
    "usn": CommandKind.DRUG_BY_USAN_STEM,
    "dis": CommandKind.APPROVED_DRUGS_BY_DISEASE,
    "top50": CommandKind.TOP_APPROVED_DRUGS,
}

#: keywords whose command takes no argument
ARGLESS_KEYWORDS = frozenset({"top50"})

#: usage summaries for help and malformed-command hints
USAGE: dict[str, str] = {
    "msy": "msy/<name> - molecules matching a name or synonym",
    "msm": "msm/<SMILES> - molecules with a matching structure",
    "mid": "mid/<ChEMBL ID> - one molecule by its ChEMBL ID",
    "sim": "sim/<drug name> - compounds similar to a named drug",
    "sms": "sms/<SMILES> - compounds similar to a structure",
    "tgg": "tgg/<gene symbol> - targets carrying a gene symbol",
    "tub": "tub/<UBERON ID> - tissue by Uberon identifier",
    "tnm": "tnm/<name> - tissue by name",
    "tid": "tid/<any ID> - tissue by UBERON/BTO/EFO/ChEMBL ID or name",
    "usn": "usn/<stem> - drugs sharing a USAN stem (e.g. usn/-olol)",
    "dis": "dis/<disease> - approved drugs indicated for a disease",
    "top50": "top50 - download the top 50 approved drugs as CSV",
}


class MalformedCommandError(Exception):
    """A recognized keyword arrived without its required argument."""

    def __init__(self, keyword: str):
        self.keyword = keyword
        super().__init__(f"keyword '{keyword}' needs an argument ({USAGE[keyword]})")


@dataclass(frozen=True)
class Utterance:
    """Raw chat text plus its normalized form (lowercased, space-collapsed)."""

    raw: str
    normalized: str

    @classmethod
    def of(cls, raw: str) -> "Utterance":
        return cls(raw=raw, normalized=normalize_text(raw))


@dataclass(frozen=True)
class Command:
    kind: CommandKind
    argument: str | None = None
    button: str | None = None

    def __post_init__(self):
        if self.kind in (CommandKind.START, CommandKind.EXIT, CommandKind.TOP_APPROVED_DRUGS):
            if self.argument is not None:
                raise ValueError(f"{self.kind.name} carries no argument")
        if self.kind is CommandKind.BUTTON_PRESS and not self.button:
            raise ValueError("BUTTON_PRESS needs a button label")


def normalize_text(raw: str) -> str:
    """Lowercase and collapse whitespace. Idempotent, total."""
    return " ".join(raw.lower().split())


def normalize(raw: str) -> Utterance:
    return Utterance.of(raw)


# `kw/arg`, `/kw:arg`, `kw:arg` (and the harmless `/kw/arg`, `kw :arg` variants).
# The keyword group is greedy alphanumerics, so the FIRST non-alphanumeric
# separator ends it and everything after belongs to the argument; SMILES
# arguments may themselves contain '/' and ':'.
_COMMAND_RE = re.compile(r"^\s*/?\s*([A-Za-z0-9]+)\s*[/:](.*)$")
_BARE_RE = re.compile(r"^\s*/?\s*([A-Za-z0-9]+)\s*$")


def parse(u: Utterance) -> Command:
    """Parse a normalized utterance into a Command.

    Total over arbitrary text: anything that is not a recognized keyword
    form comes back as CASUAL_TALK. Raises MalformedCommandError when a
    known keyword is missing its argument, so callers can show usage.

    The argument is taken from the *raw* text (trimmed only): keywords are
    case-insensitive but arguments such as SMILES must not be case-folded.
    """
    if u.normalized == "/start":
        return Command(CommandKind.START)
    if u.normalized in ("/exit", "exit"):
        return Command(CommandKind.EXIT)

    m = _COMMAND_RE.match(u.raw)
    if m:
        keyword = m.group(1).lower()
        if keyword in KEYWORDS:
            argument = m.group(2).strip()
            if keyword in ARGLESS_KEYWORDS:
                return Command(KEYWORDS[keyword])
            if not argument:
                raise MalformedCommandError(keyword)
            return Command(KEYWORDS[keyword], argument=argument)

    m = _BARE_RE.match(u.raw)
    if m:
        keyword = m.group(1).lower()
        if keyword in ARGLESS_KEYWORDS:
            return Command(KEYWORDS[keyword])
        if keyword in KEYWORDS:
            raise MalformedCommandError(keyword)

    return Command(CommandKind.CASUAL_TALK, argument=u.normalized)


def parse_text(raw: str) -> Command:
    return parse(normalize(raw))


_KIND_TO_KEYWORD = {kind: kw for kw, kind in KEYWORDS.items()}


def canonical_form(command: Command) -> str:
    """Render a command to its canonical text form (`kw/arg`), used in help."""
    if command.kind is CommandKind.START:
        return "/start"
    if command.kind is CommandKind.EXIT:
        return "/exit"
    if command.kind is CommandKind.CASUAL_TALK:
        return command.argument or ""
    if command.kind is CommandKind.BUTTON_PRESS:
        raise ValueError("button presses have no text form")
    keyword = _KIND_TO_KEYWORD[command.kind]
    if keyword in ARGLESS_KEYWORDS:
        return keyword
    return f"{keyword}/{command.argument}"
