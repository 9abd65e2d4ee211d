"""Typed ChEMBL client: molecules, similarity, targets, tissues, drugs.

All operations go through a pluggable transport, so the same code runs
live, recording, or replaying fixtures. Paged endpoints are fetched
exhaustively up to a configurable record cap; list results are re-checked
client-side (similarity ordering, name filters) so the documented
post-conditions hold regardless of service quirks.
"""

from __future__ import annotations

import json
import logging

from . import endpoints
from .errors import (
    InvalidStructureError,
    NotFoundError,
    RecordParseError,
    TransportError,
    UnresolvedDrugError,
)
from .models import (
    CHEMBL_ID_RE,
    DrugIndicationRecord,
    MoleculeRecord,
    SimilarityHit,
    TargetRecord,
    TissueKey,
    TissueKeyKind,
    TissueRecord,
)
from .transport import Transport, TransportRequest, TransportResponse

logger = logging.getLogger(__name__)

DEFAULT_PAGE_SIZE = 20
DEFAULT_MAX_RECORDS = 200
SIMILARITY_MIN_THRESHOLD = 40
SIMILARITY_MAX_THRESHOLD = 100
DEFAULT_SIMILARITY_THRESHOLD = 70


def tissue_filter_params(key: TissueKey) -> dict[str, str]:
    """Map a tissue key to the service filter it dispatches to.

    AnyId dispatches by prefix: UBERON:/BTO:/EFO: go to the matching
    ontology field, CHEMBL ids to the tissue ChEMBL id, anything else is a
    name match. Pure function, unit-testable without a transport.
    """
    if key.kind is TissueKeyKind.UBERON_ID:
        return {endpoints.FILTER_TISSUE_UBERON: key.value}
    if key.kind is TissueKeyKind.NAME:
        return {endpoints.FILTER_TISSUE_NAME: key.value}
    upper = key.value.upper()
    if upper.startswith("UBERON:"):
        return {endpoints.FILTER_TISSUE_UBERON: key.value}
    if upper.startswith("BTO:"):
        return {endpoints.FILTER_TISSUE_BTO: key.value}
    if upper.startswith("EFO:"):
        return {endpoints.FILTER_TISSUE_EFO: key.value}
    if upper.startswith("CHEMBL"):
        return {endpoints.FILTER_TISSUE_CHEMBL_ID: key.value}
    return {endpoints.FILTER_TISSUE_NAME: key.value}


class ChemblClient:
    def __init__(
        self,
        transport: Transport,
        page_size: int = DEFAULT_PAGE_SIZE,
        max_records: int = DEFAULT_MAX_RECORDS,
    ):
        if page_size < 1:
            raise ValueError("page_size must be >= 1")
        self._transport = transport
        self._page_size = page_size
        self._max_records = max_records

    # -- plumbing ----------------------------------------------------------

    def _execute(self, request: TransportRequest) -> TransportResponse:
        return self._transport.execute(request)

    def _get_json(self, path: str, params: dict | None = None) -> dict:
        request = TransportRequest.get(path, params)
        response = self._execute(request)
        if response.status == 404:
            raise NotFoundError(request.request_line)
        if response.status >= 400:
            raise TransportError(f"{request.request_line}: HTTP {response.status}")
        try:
            return json.loads(response.body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise RecordParseError(f"{request.request_line}: bad JSON payload: {exc}") from exc

    def _paged(self, path: str, params: dict, items_key: str, cap: int | None = None) -> list[dict]:
        """Fetch every page of a collection, up to the record cap."""
        cap = self._max_records if cap is None else cap
        collected: list[dict] = []
        offset = 0
        while True:
            page_params = dict(params)
            page_params[endpoints.PARAM_LIMIT] = self._page_size
            page_params[endpoints.PARAM_OFFSET] = offset
            payload = self._get_json(path, page_params)
            items = payload.get(items_key)
            if items is None:
                raise RecordParseError(f"{path}: missing collection {items_key!r}")
            collected.extend(items)
            meta = payload.get("page_meta") or {}
            total = meta.get("total_count")
            if total is not None and len(collected) >= int(total):
                break
            if not items:
                break
            if len(collected) >= cap:
                logger.info("capping %s at %d records (service reports %s)", path, cap, total)
                break
            offset += self._page_size
        return collected[:cap]

    # -- molecules ---------------------------------------------------------

    def molecule_by_synonym(self, name: str) -> list[MoleculeRecord]:
        """Molecules whose preferred name or any synonym contains `name`."""
        if not name.strip():
            raise ValueError("name must not be empty")
        payloads = self._paged(
            endpoints.MOLECULE, {endpoints.FILTER_SYNONYM: name}, endpoints.ITEMS_MOLECULES
        )
        payloads += self._paged(
            endpoints.MOLECULE, {endpoints.FILTER_PREF_NAME: name}, endpoints.ITEMS_MOLECULES
        )
        records: list[MoleculeRecord] = []
        seen: set[str] = set()
        for payload in payloads:
            record = MoleculeRecord.from_payload(payload)
            if record.chembl_id in seen:
                continue
            seen.add(record.chembl_id)
            if record.matches_name(name):
                records.append(record)
        return records

    def molecule_by_smiles(self, smiles: str) -> list[MoleculeRecord]:
        """Exact-structure matches for a SMILES, per the service's flexmatch."""
        if not smiles.strip():
            raise ValueError("smiles must not be empty")
        request = TransportRequest.get(
            endpoints.MOLECULE,
            {
                endpoints.FILTER_FLEXMATCH: smiles,
                endpoints.PARAM_LIMIT: self._page_size,
                endpoints.PARAM_OFFSET: 0,
            },
        )
        response = self._execute(request)
        if 400 <= response.status < 500:
            raise InvalidStructureError(f"service rejected SMILES: {smiles!r}")
        if response.status >= 500:
            raise TransportError(f"{request.request_line}: HTTP {response.status}")
        payload = json.loads(response.body.decode("utf-8"))
        return [MoleculeRecord.from_payload(p) for p in payload.get(endpoints.ITEMS_MOLECULES, [])]

    def molecule_by_chembl_id(self, chembl_id: str) -> MoleculeRecord:
        if not CHEMBL_ID_RE.match(chembl_id):
            raise ValueError(f"not a ChEMBL ID: {chembl_id!r}")
        payload = self._get_json(endpoints.molecule_by_id_path(chembl_id))
        return MoleculeRecord.from_payload(payload)

    # -- similarity ---------------------------------------------------------

    def similar_by_smiles(self, smiles: str, threshold: int = DEFAULT_SIMILARITY_THRESHOLD) -> list[SimilarityHit]:
        """Similarity hits for a structure, sorted descending by percentage."""
        if not smiles.strip():
            raise ValueError("smiles must not be empty")
        self._check_threshold(threshold)
        path = endpoints.similarity_path(smiles, threshold)
        collected: list[dict] = []
        offset = 0
        while True:
            request = TransportRequest.get(
                path, {endpoints.PARAM_LIMIT: self._page_size, endpoints.PARAM_OFFSET: offset}
            )
            response = self._execute(request)
            if 400 <= response.status < 500:
                raise InvalidStructureError(f"service rejected SMILES: {smiles!r}")
            if response.status >= 500:
                raise TransportError(f"{request.request_line}: HTTP {response.status}")
            payload = json.loads(response.body.decode("utf-8"))
            items = payload.get(endpoints.ITEMS_MOLECULES, [])
            collected.extend(items)
            meta = payload.get("page_meta") or {}
            total = meta.get("total_count")
            if total is not None and len(collected) >= int(total):
                break
            if not items or len(collected) >= self._max_records:
                break
            offset += self._page_size
        hits = [SimilarityHit.from_payload(p) for p in collected[: self._max_records]]
        hits = [h for h in hits if h.similarity_percent >= threshold]
        hits.sort(key=lambda h: h.similarity_percent, reverse=True)
        return hits

    def resolve_drug(self, name: str) -> tuple[MoleculeRecord, int]:
        """First synonym match carrying a structure, plus the candidate count."""
        candidates = self.molecule_by_synonym(name)
        structured = [c for c in candidates if c.canonical_smiles]
        if not structured:
            raise UnresolvedDrugError(f"no molecule with a structure matches {name!r}")
        return structured[0], len(structured)

    def similar_by_drug_name(self, name: str, threshold: int = DEFAULT_SIMILARITY_THRESHOLD) -> list[SimilarityHit]:
        """Resolve a drug name to a structure, then run similarity on it."""
        if not name.strip():
            raise ValueError("name must not be empty")
        self._check_threshold(threshold)
        molecule, _ = self.resolve_drug(name)
        return self.similar_by_smiles(molecule.canonical_smiles, threshold)

    @staticmethod
    def _check_threshold(threshold: int) -> None:
        if not SIMILARITY_MIN_THRESHOLD <= threshold <= SIMILARITY_MAX_THRESHOLD:
            raise ValueError(
                f"threshold must lie in [{SIMILARITY_MIN_THRESHOLD}, {SIMILARITY_MAX_THRESHOLD}]"
            )

    # -- targets and tissues -------------------------------------------------

    def target_by_gene(self, gene: str) -> list[TargetRecord]:
        """Targets whose gene-symbol synonyms match `gene` case-insensitively."""
        if not gene.strip():
            raise ValueError("gene must not be empty")
        payloads = self._paged(
            endpoints.TARGET, {endpoints.FILTER_GENE_SYMBOL: gene}, endpoints.ITEMS_TARGETS
        )
        records = [TargetRecord.from_payload(p) for p in payloads]
        needle = gene.lower()
        return [r for r in records if any(s.lower() == needle for s in r.gene_symbols)]

    def tissue_lookup(self, key: TissueKey) -> list[TissueRecord]:
        params = tissue_filter_params(key)
        payloads = self._paged(endpoints.TISSUE, params, endpoints.ITEMS_TISSUES)
        return [TissueRecord.from_payload(p) for p in payloads]

    # -- drugs ---------------------------------------------------------------

    def drug_by_usan_stem(self, stem: str) -> list[MoleculeRecord]:
        if not stem.strip():
            raise ValueError("stem must not be empty")
        payloads = self._paged(
            endpoints.MOLECULE, {endpoints.FILTER_USAN_STEM: stem}, endpoints.ITEMS_MOLECULES
        )
        return [MoleculeRecord.from_payload(p) for p in payloads]

    def drug_indications(self, disease: str) -> list[DrugIndicationRecord]:
        payloads = self._paged(
            endpoints.DRUG_INDICATION,
            {endpoints.FILTER_EFO_TERM: disease},
            endpoints.ITEMS_DRUG_INDICATIONS,
        )
        records = [DrugIndicationRecord.from_payload(p) for p in payloads]
        needle = disease.lower()
        return [r for r in records if needle in r.disease_term.lower()]

    def approved_drugs_by_disease(self, disease: str) -> list[MoleculeRecord]:
        """Approved molecules (max_phase 4) indicated for a disease, de-duplicated."""
        if not disease.strip():
            raise ValueError("disease must not be empty")
        indications = self.drug_indications(disease)
        records: list[MoleculeRecord] = []
        seen: set[str] = set()
        for indication in indications:
            if indication.molecule_chembl_id in seen:
                continue
            seen.add(indication.molecule_chembl_id)
            molecule = self.molecule_by_chembl_id(indication.molecule_chembl_id)
            if molecule.max_phase == 4:
                records.append(molecule)
        return records

    def top_approved_drugs(self, limit: int) -> list[MoleculeRecord]:
        """Most recently approved drugs: max_phase 4, newest first_approval first."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        payloads = self._paged(
            endpoints.MOLECULE,
            {
                endpoints.FILTER_MAX_PHASE: 4,
                endpoints.PARAM_ORDER_BY: endpoints.ORDER_NEWEST_APPROVAL,
            },
            endpoints.ITEMS_MOLECULES,
            cap=max(self._max_records, limit),
        )
        records = [MoleculeRecord.from_payload(p) for p in payloads]
        records = [r for r in records if r.max_phase == 4]
        records.sort(key=lambda r: (r.first_approval is None, -(r.first_approval or 0)))
        return records[:limit]

    # -- depictions and liveness ----------------------------------------------

    def fetch_depiction_svg(self, chembl_id: str) -> bytes:
        if not CHEMBL_ID_RE.match(chembl_id):
            raise ValueError(f"not a ChEMBL ID: {chembl_id!r}")
        request = TransportRequest.get(endpoints.image_path(chembl_id))
        response = self._execute(request)
        if response.status == 404:
            raise NotFoundError(chembl_id)
        if response.status >= 400:
            raise TransportError(f"{request.request_line}: HTTP {response.status}")
        return response.body

    def probe(self) -> dict:
        """Liveness check against the service (or the fixture store in replay)."""
        return self._get_json(endpoints.STATUS)
