"""Typed records for ChEMBL entities, validated on construction.

Parsing from service JSON lives in `from_payload` classmethods; a payload
that violates an invariant raises RecordParseError rather than producing a
silently truncated record.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import RecordParseError

CHEMBL_ID_RE = re.compile(r"^CHEMBL\d+$")
UBERON_ID_RE = re.compile(r"^UBERON:\d+$")


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise RecordParseError(message)


def _opt_int(value) -> int | None:
    if value is None:
        return None
    try:
        return int(float(value))
    except (TypeError, ValueError):
        raise RecordParseError(f"not an integer: {value!r}")


@dataclass(frozen=True)
class MoleculeRecord:
    chembl_id: str
    pref_name: str | None = None
    canonical_smiles: str | None = None
    molecular_formula: str | None = None
    inchi_key: str | None = None
    max_phase: int | None = None
    first_approval: int | None = None
    usan_stem: str | None = None
    usan_stem_definition: str | None = None
    synonyms: tuple[str, ...] = ()

    def __post_init__(self):
        _check(bool(CHEMBL_ID_RE.match(self.chembl_id)), f"bad ChEMBL ID: {self.chembl_id!r}")
        if self.inchi_key is not None:
            _check(
                len(self.inchi_key) == 27
                and self.inchi_key[14] == "-"
                and self.inchi_key[25] == "-",
                f"bad InChIKey: {self.inchi_key!r}",
            )
        if self.max_phase is not None:
            _check(0 <= self.max_phase <= 4, f"max_phase out of range: {self.max_phase}")

    @classmethod
    def from_payload(cls, payload: dict) -> "MoleculeRecord":
        structures = payload.get("molecule_structures") or {}
        properties = payload.get("molecule_properties") or {}
        synonyms = []
        for entry in payload.get("molecule_synonyms") or []:
            name = entry.get("molecule_synonym")
            if name and name not in synonyms:
                synonyms.append(name)
        return cls(
            chembl_id=payload.get("molecule_chembl_id") or "",
            pref_name=payload.get("pref_name"),
            canonical_smiles=structures.get("canonical_smiles"),
            molecular_formula=properties.get("full_molecular_formula"),
            inchi_key=structures.get("standard_inchi_key"),
            max_phase=_opt_int(payload.get("max_phase")),
            first_approval=_opt_int(payload.get("first_approval")),
            usan_stem=payload.get("usan_stem"),
            usan_stem_definition=payload.get("usan_stem_definition"),
            synonyms=tuple(synonyms),
        )

    def matches_name(self, name: str) -> bool:
        """Case-insensitive substring match against pref_name or a synonym."""
        needle = name.lower()
        if self.pref_name and needle in self.pref_name.lower():
            return True
        return any(needle in syn.lower() for syn in self.synonyms)


@dataclass(frozen=True)
class SimilarityHit:
    molecule: MoleculeRecord
    similarity_percent: float

    def __post_init__(self):
        _check(
            0.0 <= self.similarity_percent <= 100.0,
            f"similarity out of range: {self.similarity_percent}",
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "SimilarityHit":
        raw = payload.get("similarity")
        try:
            percent = float(raw)
        except (TypeError, ValueError):
            raise RecordParseError(f"bad similarity value: {raw!r}")
        return cls(molecule=MoleculeRecord.from_payload(payload), similarity_percent=percent)


@dataclass(frozen=True)
class TargetRecord:
    target_chembl_id: str
    pref_name: str
    target_type: str
    organism: str | None = None
    gene_symbols: tuple[str, ...] = ()

    def __post_init__(self):
        _check(
            bool(CHEMBL_ID_RE.match(self.target_chembl_id)),
            f"bad target ChEMBL ID: {self.target_chembl_id!r}",
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "TargetRecord":
        symbols: list[str] = []
        for component in payload.get("target_components") or []:
            for synonym in component.get("target_component_synonyms") or []:
                if synonym.get("syn_type") == "GENE_SYMBOL":
                    name = synonym.get("component_synonym")
                    if name and name not in symbols:
                        symbols.append(name)
        return cls(
            target_chembl_id=payload.get("target_chembl_id") or "",
            pref_name=payload.get("pref_name") or "",
            target_type=payload.get("target_type") or "",
            organism=payload.get("organism"),
            gene_symbols=tuple(symbols),
        )


@dataclass(frozen=True)
class TissueRecord:
    tissue_chembl_id: str
    pref_name: str
    uberon_id: str | None = None
    bto_id: str | None = None
    efo_id: str | None = None

    def __post_init__(self):
        identifiers = (self.tissue_chembl_id, self.uberon_id, self.bto_id, self.efo_id)
        _check(any(identifiers), "tissue record carries no identifier")
        if self.tissue_chembl_id:
            _check(
                bool(CHEMBL_ID_RE.match(self.tissue_chembl_id)),
                f"bad tissue ChEMBL ID: {self.tissue_chembl_id!r}",
            )
        if self.uberon_id is not None:
            _check(bool(UBERON_ID_RE.match(self.uberon_id)), f"bad Uberon ID: {self.uberon_id!r}")

    @classmethod
    def from_payload(cls, payload: dict) -> "TissueRecord":
        return cls(
            tissue_chembl_id=payload.get("tissue_chembl_id") or "",
            pref_name=payload.get("pref_name") or "",
            uberon_id=payload.get("uberon_id"),
            bto_id=payload.get("bto_id"),
            efo_id=payload.get("efo_id"),
        )


@dataclass(frozen=True)
class DrugIndicationRecord:
    molecule_chembl_id: str
    disease_term: str
    max_phase_for_indication: int

    def __post_init__(self):
        _check(
            bool(CHEMBL_ID_RE.match(self.molecule_chembl_id)),
            f"bad molecule ChEMBL ID: {self.molecule_chembl_id!r}",
        )
        _check(
            0 <= self.max_phase_for_indication <= 4,
            f"max_phase_for_indication out of range: {self.max_phase_for_indication}",
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "DrugIndicationRecord":
        term = payload.get("efo_term") or payload.get("mesh_heading") or ""
        return cls(
            molecule_chembl_id=payload.get("molecule_chembl_id") or "",
            disease_term=term,
            max_phase_for_indication=_opt_int(payload.get("max_phase_for_ind")) or 0,
        )


class TissueKeyKind(Enum):
    UBERON_ID = "uberon"
    NAME = "name"
    ANY_ID = "any"


@dataclass(frozen=True)
class TissueKey:
    kind: TissueKeyKind
    value: str

    def __post_init__(self):
        if not self.value.strip():
            raise ValueError("tissue key value must not be empty")

    @classmethod
    def uberon(cls, value: str) -> "TissueKey":
        return cls(TissueKeyKind.UBERON_ID, value)

    @classmethod
    def name(cls, value: str) -> "TissueKey":
        return cls(TissueKeyKind.NAME, value)

    @classmethod
    def any_id(cls, value: str) -> "TissueKey":
        return cls(TissueKeyKind.ANY_ID, value)
