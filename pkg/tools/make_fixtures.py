"""Build the checked-in replay fixture store.

The public ChEMBL service is not reachable from the build sandbox, so the
store is produced from an in-process stand-in that evaluates the same
filters the client sends (icontains, flexmatch, exact, max_phase ordering,
similarity paths) over a hand-curated molecule table. Payload shapes follow
the live web services JSON. Crucially the real `ChemblClient` drives a
`RecordingTransport` against the stand-in, so every recorded key is exactly
the key replay mode will later compute - pagination included - and every
client operation is exercised end to end while recording.

Run from the repository root:

    python3 tools/make_fixtures.py fixtures/chembl
"""

from __future__ import annotations

import hashlib
import json
import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from atreya.chembl import endpoints
from atreya.chembl.client import ChemblClient
from atreya.chembl.errors import InvalidStructureError, NotFoundError, UnresolvedDrugError
from atreya.chembl.models import TissueKey
from atreya.chembl.transport import (
    FixtureStore,
    RecordingTransport,
    Transport,
    TransportRequest,
    TransportResponse,
)

JSON_TYPE = "application/json"
SVG_TYPE = "image/svg+xml"

PARACETAMOL_SMILES = "CC(=O)Nc1ccc(O)cc1"
BAD_SMILES = "not-a-smiles-((("
THRESHOLD = 70


def _inchi_key(seed: str) -> str:
    digest = hashlib.md5(seed.encode()).hexdigest().upper()
    letters = "".join(chr(ord("A") + int(c, 16) % 26) for c in digest)
    return f"{letters[:14]}-{letters[14:24]}-N"


def molecule(
    chembl_id: str,
    pref_name: str | None,
    smiles: str | None,
    formula: str | None,
    max_phase: int | str | None,
    first_approval: int | None,
    synonyms: list[str] | None = None,
    usan_stem: str | None = None,
    usan_stem_definition: str | None = None,
    inchi_key: str | None = None,
    molecule_type: str = "Small molecule",
) -> dict:
    structures = None
    if smiles is not None:
        structures = {
            "canonical_smiles": smiles,
            "molfile": None,
            "standard_inchi": f"InChI=1S/{formula or 'X'}",
            "standard_inchi_key": inchi_key or _inchi_key(chembl_id),
        }
    properties = None
    if formula is not None:
        properties = {
            "alogp": "1.0",
            "full_molecular_formula": formula,
            "full_mwt": "250.0",
            "hba": 3,
            "hbd": 2,
        }
    return {
        "first_approval": first_approval,
        "max_phase": max_phase,
        "molecule_chembl_id": chembl_id,
        "molecule_properties": properties,
        "molecule_structures": structures,
        "molecule_synonyms": [
            {"molecule_synonym": s, "syn_type": "TRADE_NAME", "synonyms": s.upper()}
            for s in (synonyms or [])
        ],
        "molecule_type": molecule_type,
        "pref_name": pref_name,
        "structure_type": "MOL" if smiles else "NONE",
        "usan_stem": usan_stem,
        "usan_stem_definition": usan_stem_definition,
    }


def _svg(width: int, height: int, rings: int) -> bytes:
    """A font-free, path-only molecule-ish drawing; byte-deterministic."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    cx_step = width / (rings + 1)
    r = min(width, height) / 5
    for i in range(rings):
        cx = cx_step * (i + 1)
        cy = height / 2
        points = []
        for k in range(6):
            angle = k * 60
            import math

            points.append(
                f"{cx + r * math.cos(math.radians(angle)):.1f},"
                f"{cy + r * math.sin(math.radians(angle)):.1f}"
            )
        parts.append(
            f'<polygon points="{" ".join(points)}" fill="none" '
            f'stroke="#1a1a1a" stroke-width="2"/>'
        )
        if i + 1 < rings:
            parts.append(
                f'<line x1="{cx + r:.1f}" y1="{cy:.1f}" x2="{cx + cx_step - r:.1f}" '
                f'y2="{cy:.1f}" stroke="#1a1a1a" stroke-width="2"/>'
            )
    parts.append('<circle cx="20" cy="20" r="6" fill="#c0392b"/>')
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")


# -- curated tables -----------------------------------------------------------

PARACETAMOL = molecule(
    "CHEMBL112",
    "PARACETAMOL",
    PARACETAMOL_SMILES,
    "C8H9NO2",
    4,
    1950,
    synonyms=["Paracetamol", "Paracetamole", "Acetaminophen", "Panadol", "Tylenol", "APAP"],
    inchi_key="RZVAJINKPMORJF-UHFFFAOYSA-N",
)
ASPIRIN = molecule(
    "CHEMBL25",
    "ASPIRIN",
    "CC(=O)Oc1ccccc1C(=O)O",
    "C9H8O4",
    4,
    1950,
    synonyms=["Aspirin", "Acetylsalicylic acid", "Ecotrin"],
    inchi_key="BSYNRYMUTXBXSQ-UHFFFAOYSA-N",
)

OLOL_DRUGS = [
    molecule(
        "CHEMBL27", "PROPRANOLOL", "CC(C)NCC(O)COc1cccc2ccccc12", "C16H21NO2", 4, 1967,
        synonyms=["Propranolol", "Inderal"],
        usan_stem="-olol", usan_stem_definition="beta-blockers (propranolol type)",
    ),
    molecule(
        "CHEMBL904", "ATENOLOL", "CC(C)NCC(O)COc1ccc(CC(N)=O)cc1", "C14H22N2O3", 4, 1981,
        synonyms=["Atenolol", "Tenormin"],
        usan_stem="-olol", usan_stem_definition="beta-blockers (propranolol type)",
    ),
    molecule(
        "CHEMBL13", "METOPROLOL", "COCCc1ccc(OCC(O)CNC(C)C)cc1", "C15H25NO3", 4, 1978,
        synonyms=["Metoprolol", "Lopressor"],
        usan_stem="-olol", usan_stem_definition="beta-blockers (propranolol type)",
    ),
    molecule(
        "CHEMBL499", "TIMOLOL", "CC(C)(C)NCC(O)COc1nsnc1N1CCOCC1", "C13H24N4O3S", 4, 1978,
        synonyms=["Timolol", "Timoptic"],
        usan_stem="-olol", usan_stem_definition="beta-blockers (propranolol type)",
    ),
]

ASTHMA_DRUGS = [
    molecule(
        "CHEMBL714", "SALBUTAMOL", "CC(C)(C)NCC(O)c1ccc(O)c(CO)c1", "C13H21NO3", 4, 1981,
        synonyms=["Salbutamol", "Albuterol", "Ventolin"],
    ),
    molecule(
        "CHEMBL1201335", "BUDESONIDE", "CCCC1OC2CC3C4CCC5=CC(=O)C=CC5(C)C4C(O)CC3(C)C2(C1)C(=O)CO",
        "C25H34O6", 4, 1981, synonyms=["Budesonide", "Pulmicort"],
    ),
    molecule(
        "CHEMBL964", "MONTELUKAST",
        "CC(C)(O)c1ccccc1CCC(SCC1(CC(=O)O)CC1)c1cccc(C=Cc2ccc3ccc(Cl)cc3n2)c1",
        "C35H36ClNO3S", 4, 1998, synonyms=["Montelukast", "Singulair"],
    ),
    molecule(
        "CHEMBL1201589", "OMALIZUMAB", None, None, 4, 2003,
        synonyms=["Omalizumab", "Xolair"], molecule_type="Antibody",
    ),
    molecule(
        "CHEMBL190", "THEOPHYLLINE", "Cn1c(=O)c2[nH]cnc2n(C)c1=O", "C7H8N4O2", 4, 1950,
        synonyms=["Theophylline", "Theo-Dur"],
    ),
    molecule(
        "CHEMBL2107857", "EXPERIMENTALINE", "CCN(CC)CCOC(=O)c1ccc(N)cc1", "C13H20N2O2", 2, None,
        synonyms=["Experimentaline"],
    ),
]

ASTHMA_INDICATIONS = [
    {"drugind_id": 1, "efo_id": "EFO:0000270", "efo_term": "asthma",
     "max_phase_for_ind": 4, "mesh_heading": "Asthma", "molecule_chembl_id": "CHEMBL714"},
    {"drugind_id": 2, "efo_id": "EFO:0004591", "efo_term": "childhood onset asthma",
     "max_phase_for_ind": 4, "mesh_heading": "Asthma", "molecule_chembl_id": "CHEMBL714"},
    {"drugind_id": 3, "efo_id": "EFO:0000270", "efo_term": "asthma",
     "max_phase_for_ind": 4, "mesh_heading": "Asthma", "molecule_chembl_id": "CHEMBL1201335"},
    {"drugind_id": 4, "efo_id": "EFO:0000270", "efo_term": "asthma",
     "max_phase_for_ind": 4, "mesh_heading": "Asthma", "molecule_chembl_id": "CHEMBL964"},
    {"drugind_id": 5, "efo_id": "EFO:0005854", "efo_term": "allergic asthma",
     "max_phase_for_ind": 4, "mesh_heading": "Asthma", "molecule_chembl_id": "CHEMBL1201589"},
    {"drugind_id": 6, "efo_id": "EFO:0000270", "efo_term": "asthma",
     "max_phase_for_ind": 2, "mesh_heading": "Asthma", "molecule_chembl_id": "CHEMBL2107857"},
    {"drugind_id": 7, "efo_id": "EFO:0000270", "efo_term": "asthma",
     "max_phase_for_ind": 4, "mesh_heading": "Asthma", "molecule_chembl_id": "CHEMBL190"},
]


def _analog(n: int, similarity: str, chembl_id: str | None = None,
            pref_name: str | None = None, smiles: str | None = None) -> dict:
    payload = molecule(
        chembl_id or f"CHEMBL46{n:04d}",
        pref_name or f"ANILIDE ANALOG {n}",
        smiles or f"CC(=O)Nc1ccc(O)cc1{'C' * (n % 3 + 1)}",
        f"C{8 + n}H{9 + n}NO2",
        None,
        None,
        synonyms=[],
    )
    payload["similarity"] = similarity
    return payload


def _self_hit() -> dict:
    payload = json.loads(json.dumps(PARACETAMOL))
    payload["similarity"] = "100"
    return payload


# service order is deliberately not fully sorted: the client must re-sort
SIMILARITY_HITS = [
    _self_hit(),
    _analog(1, "98.41", chembl_id="CHEMBL46", pref_name="PHENACETIN",
            smiles="CCOc1ccc(NC(C)=O)cc1"),
    _analog(3, "94.07"),
    _analog(2, "96.23", chembl_id="CHEMBL269644", pref_name="ACETANILIDE",
            smiles="CC(=O)Nc1ccccc1"),
    _analog(4, "92.88"),
    _analog(5, "91.54"),
    _analog(6, "90.00"),
    _analog(7, "88.71"),
    _analog(9, "86.02"),
    _analog(8, "87.35"),
    _analog(10, "84.66"),
    _analog(11, "83.29"),
    _analog(12, "81.93"),
    _analog(13, "80.57"),
    _analog(14, "79.20"),
    _analog(15, "77.84"),
    _analog(16, "76.48"),
    _analog(17, "75.11"),
    _analog(18, "73.75"),
    _analog(19, "72.39"),
    _analog(20, "71.02"),
    _analog(21, "70.66"),
    _analog(23, "70.00"),
    _analog(22, "70.30"),
    _analog(24, "70.00"),
]

TARGETS = [
    {
        "organism": "Homo sapiens",
        "pref_name": "Bromodomain-containing protein 4",
        "target_chembl_id": "CHEMBL1163125",
        "target_components": [
            {
                "accession": "O60885",
                "component_id": 1,
                "target_component_synonyms": [
                    {"component_synonym": "BRD4", "syn_type": "GENE_SYMBOL"},
                    {"component_synonym": "HUNK1", "syn_type": "GENE_SYMBOL"},
                    {"component_synonym": "Protein HUNK1", "syn_type": "UNIPROT"},
                ],
            }
        ],
        "target_type": "SINGLE PROTEIN",
    }
]

TISSUES = [
    {"bto_id": "BTO:0000142", "efo_id": "EFO:0000302", "pref_name": "Brain",
     "tissue_chembl_id": "CHEMBL3638178", "uberon_id": "UBERON:0000955"},
    {"bto_id": "BTO:0000140", "efo_id": "EFO:0000298", "pref_name": "Brain stem",
     "tissue_chembl_id": "CHEMBL3638179", "uberon_id": "UBERON:0002298"},
]


def _approved_corpus() -> list[dict]:
    """55 approved molecules in 'service order': a few nulls first, then
    mostly-descending years with two adjacent swaps. Forces the client's
    own known-years-first re-sort to do real work."""
    records: list[dict] = []
    years: list[int | None] = [None, None, None]
    years += [2023, 2022, 2022, 2021, 2020, 2020, 2019, 2018, 2017, 2016, 2015]
    years += [2013, 2014]  # deliberate inversion
    years += [2012, 2011, 2010, 2009, 2008, 2007, 2006, 2005, 2004, 2003, 2002]
    years += [2000, 2001]  # deliberate inversion
    years += [1999, 1998, 1997, 1996, 1995, 1994, 1993, 1992, 1991, 1990, 1989]
    years += [1988, 1987, 1986, 1985, 1984, 1983, 1982, 1981, 1980, None, 1979]
    years += [1978, 1977, 1976, 1975]
    assert len(years) == 55
    wordy = {
        4: 'INSULIN, REGULAR',
        9: 'DROXIDOPA "XR"',
        17: "GLUCAGON, RECOMBINANT",
    }
    for i, year in enumerate(years):
        name = wordy.get(i, f"APPROVED DRUG {i + 1:02d}")
        records.append(
            molecule(
                f"CHEMBL50{i + 1:04d}",
                name,
                f"CC(=O)N{'C' * (i % 5 + 1)}c1ccccc1",
                f"C{10 + i}H{12 + i}N2O2",
                "4.0" if i == 6 else 4,
                year,
                synonyms=[name.title()],
            )
        )
    return records


APPROVED_CORPUS = _approved_corpus()

MOLECULES: dict[str, dict] = {}
for payload in [PARACETAMOL, ASPIRIN, *OLOL_DRUGS, *ASTHMA_DRUGS, *APPROVED_CORPUS]:
    MOLECULES[payload["molecule_chembl_id"]] = payload

FLEXMATCH: dict[str, list[dict]] = {
    PARACETAMOL_SMILES: [PARACETAMOL],
}

SIMILARITY: dict[str, list[dict]] = {
    endpoints.similarity_path(PARACETAMOL_SMILES, THRESHOLD): SIMILARITY_HITS,
}

SVG_SHAPES = [(240, 160), (160, 240), (200, 200), (300, 120), (120, 300), (260, 140)]
DEPICTED = (
    ["CHEMBL112", "CHEMBL25"]
    + [m["molecule_chembl_id"] for m in OLOL_DRUGS]
    + [m["molecule_chembl_id"] for m in ASTHMA_DRUGS]
    + [h["molecule_chembl_id"] for h in SIMILARITY_HITS[1:11]]
)
IMAGES: dict[str, bytes] = {
    endpoints.image_path(cid): _svg(*SVG_SHAPES[i % len(SVG_SHAPES)], rings=i % 3 + 1)
    for i, cid in enumerate(DEPICTED)
}

STATUS_PAYLOAD = {"api_version": "2.13.0", "chembl_db_version": "CHEMBL_34", "status": "UP"}


# -- the stand-in service -------------------------------------------------------


def _json_response(payload: dict, status: int = 200) -> TransportResponse:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return TransportResponse(status=status, body=body, content_type=JSON_TYPE)


def _page(items: list[dict], params: dict[str, str], items_key: str) -> TransportResponse:
    limit = int(params.get(endpoints.PARAM_LIMIT, 20))
    offset = int(params.get(endpoints.PARAM_OFFSET, 0))
    window = items[offset : offset + limit]
    meta = {
        "limit": limit,
        "next": None if offset + limit >= len(items) else f"?limit={limit}&offset={offset + limit}",
        "offset": offset,
        "previous": None,
        "total_count": len(items),
    }
    return _json_response({items_key: window, "page_meta": meta})


def _not_found() -> TransportResponse:
    return _json_response({"detail": "Not found."}, status=404)


def _bad_request(message: str) -> TransportResponse:
    return _json_response({"error_message": message}, status=400)


def _synonyms_of(payload: dict) -> list[str]:
    return [e["molecule_synonym"] for e in payload.get("molecule_synonyms") or []]


def _molecule_list_query(params: dict[str, str]) -> TransportResponse:
    if endpoints.FILTER_SYNONYM in params:
        needle = params[endpoints.FILTER_SYNONYM].lower()
        hits = [
            m for m in MOLECULES.values()
            if any(needle in s.lower() for s in _synonyms_of(m))
        ]
        return _page(hits, params, endpoints.ITEMS_MOLECULES)
    if endpoints.FILTER_PREF_NAME in params:
        needle = params[endpoints.FILTER_PREF_NAME].lower()
        hits = [m for m in MOLECULES.values() if needle in (m["pref_name"] or "").lower()]
        return _page(hits, params, endpoints.ITEMS_MOLECULES)
    if endpoints.FILTER_FLEXMATCH in params:
        smiles = params[endpoints.FILTER_FLEXMATCH]
        if smiles == BAD_SMILES:
            return _bad_request(f"Error in molecule structure: {smiles}")
        return _page(FLEXMATCH.get(smiles, []), params, endpoints.ITEMS_MOLECULES)
    if endpoints.FILTER_USAN_STEM in params:
        stem = params[endpoints.FILTER_USAN_STEM]
        hits = [m for m in MOLECULES.values() if m.get("usan_stem") == stem]
        return _page(hits, params, endpoints.ITEMS_MOLECULES)
    if params.get(endpoints.FILTER_MAX_PHASE) == "4" and endpoints.PARAM_ORDER_BY in params:
        return _page(APPROVED_CORPUS, params, endpoints.ITEMS_MOLECULES)
    raise AssertionError(f"stand-in has no route for molecule.json params {params}")


class StandInService(Transport):
    """Answers like the live service, from the curated tables."""

    def execute(self, request: TransportRequest) -> TransportResponse:
        params = dict(request.params)
        path = request.path
        if path == endpoints.STATUS:
            return _json_response(STATUS_PAYLOAD)
        if path == endpoints.MOLECULE:
            return _molecule_list_query(params)
        if path.startswith("molecule/") and path.endswith(".json"):
            chembl_id = path.removeprefix("molecule/").removesuffix(".json")
            payload = MOLECULES.get(chembl_id)
            return _json_response(payload) if payload else _not_found()
        if path in SIMILARITY:
            return _page(SIMILARITY[path], params, endpoints.ITEMS_MOLECULES)
        if path.startswith("similarity/"):
            return _bad_request("Error in molecule structure or threshold")
        if path == endpoints.TARGET:
            needle = params[endpoints.FILTER_GENE_SYMBOL].lower()
            hits = [
                t for t in TARGETS
                if any(
                    s["component_synonym"].lower() == needle
                    for c in t["target_components"]
                    for s in c["target_component_synonyms"]
                )
            ]
            return _page(hits, params, endpoints.ITEMS_TARGETS)
        if path == endpoints.TISSUE:
            return self._tissues(params)
        if path == endpoints.DRUG_INDICATION:
            needle = params[endpoints.FILTER_EFO_TERM].lower()
            hits = [i for i in ASTHMA_INDICATIONS if needle in i["efo_term"].lower()]
            return _page(hits, params, endpoints.ITEMS_DRUG_INDICATIONS)
        if path in IMAGES:
            return TransportResponse(status=200, body=IMAGES[path], content_type=SVG_TYPE)
        if path.startswith("image/"):
            return _not_found()
        raise AssertionError(f"stand-in has no route for {request.request_line}")

    @staticmethod
    def _tissues(params: dict[str, str]) -> TransportResponse:
        field_map = {
            endpoints.FILTER_TISSUE_UBERON: "uberon_id",
            endpoints.FILTER_TISSUE_BTO: "bto_id",
            endpoints.FILTER_TISSUE_EFO: "efo_id",
            endpoints.FILTER_TISSUE_CHEMBL_ID: "tissue_chembl_id",
        }
        for param, field in field_map.items():
            if param in params:
                hits = [t for t in TISSUES if t[field] == params[param]]
                return _page(hits, params, endpoints.ITEMS_TISSUES)
        needle = params[endpoints.FILTER_TISSUE_NAME].lower()
        hits = [t for t in TISSUES if needle in t["pref_name"].lower()]
        return _page(hits, params, endpoints.ITEMS_TISSUES)


# -- recording script ------------------------------------------------------------


def record_all(store_dir: Path) -> FixtureStore:
    if store_dir.exists():
        shutil.rmtree(store_dir)
    store = FixtureStore(store_dir)
    client = ChemblClient(RecordingTransport(StandInService(), store))

    status = client.probe()
    assert status["status"] == "UP"

    hits = client.molecule_by_synonym("paracetamole")
    assert [m.pref_name for m in hits] == ["PARACETAMOL"], hits
    assert hits[0].chembl_id == "CHEMBL112"
    assert hits[0].molecular_formula == "C8H9NO2"

    hits = client.molecule_by_synonym("paracetamol")
    assert [m.chembl_id for m in hits] == ["CHEMBL112"]
    hits = client.molecule_by_synonym("panadol")
    assert [m.chembl_id for m in hits] == ["CHEMBL112"]
    hits = client.molecule_by_synonym("aspirin")
    assert [m.chembl_id for m in hits] == ["CHEMBL25"]
    assert client.molecule_by_synonym("zzqx-nonexistent") == []

    hits = client.molecule_by_smiles(PARACETAMOL_SMILES)
    assert hits[0].inchi_key == "RZVAJINKPMORJF-UHFFFAOYSA-N"
    try:
        client.molecule_by_smiles(BAD_SMILES)
        raise AssertionError("bad SMILES must be rejected")
    except InvalidStructureError:
        pass

    record = client.molecule_by_chembl_id("CHEMBL112")
    assert record.pref_name == "PARACETAMOL"
    try:
        client.molecule_by_chembl_id("CHEMBL0")
        raise AssertionError("CHEMBL0 must 404")
    except NotFoundError:
        pass

    hits = client.similar_by_smiles(PARACETAMOL_SMILES, THRESHOLD)
    assert len(hits) == 25
    assert hits[0].similarity_percent == 100.0
    assert hits[0].molecule.chembl_id == "CHEMBL112"
    assert all(
        hits[i].similarity_percent >= hits[i + 1].similarity_percent
        for i in range(len(hits) - 1)
    )
    try:
        client.similar_by_smiles(BAD_SMILES, THRESHOLD)
        raise AssertionError("bad SMILES must be rejected")
    except InvalidStructureError:
        pass

    by_name = client.similar_by_drug_name("panadol", THRESHOLD)
    assert [h.molecule.chembl_id for h in by_name] == [h.molecule.chembl_id for h in hits]
    try:
        client.similar_by_drug_name("zzqx-nonexistent", THRESHOLD)
        raise AssertionError("unknown drug must not resolve")
    except UnresolvedDrugError:
        pass

    upper = client.target_by_gene("BRD4")
    lower = client.target_by_gene("brd4")
    assert upper == lower and len(upper) == 1
    assert "BRD4" in upper[0].gene_symbols
    assert client.target_by_gene("zzqx") == []

    brain = client.tissue_lookup(TissueKey.uberon("UBERON:0000955"))
    assert [t.pref_name for t in brain] == ["Brain"]
    assert len(client.tissue_lookup(TissueKey.name("brain"))) == 2
    assert client.tissue_lookup(TissueKey.any_id("BTO:0000142"))[0].pref_name == "Brain"
    assert client.tissue_lookup(TissueKey.any_id("EFO:0000302"))[0].pref_name == "Brain"
    assert client.tissue_lookup(TissueKey.any_id("CHEMBL3638178"))[0].pref_name == "Brain"
    assert client.tissue_lookup(TissueKey.name("zzqx")) == []

    olols = client.drug_by_usan_stem("-olol")
    assert len(olols) == 4 and all(m.usan_stem == "-olol" for m in olols)
    assert client.drug_by_usan_stem("zzqx") == []

    approved = client.approved_drugs_by_disease("asthma")
    ids = [m.chembl_id for m in approved]
    assert len(ids) == len(set(ids)) == 5, ids
    assert all(m.max_phase == 4 for m in approved)
    assert "CHEMBL2107857" not in ids
    assert client.approved_drugs_by_disease("zzqx disease") == []

    top = client.top_approved_drugs(50)
    assert len(top) == 50
    assert all(m.max_phase == 4 for m in top)
    known = [m.first_approval for m in top if m.first_approval is not None]
    assert known == sorted(known, reverse=True)

    for path in IMAGES:
        chembl_id = path.removeprefix("image/").removesuffix(".svg")
        svg = client.fetch_depiction_svg(chembl_id)
        assert svg.startswith(b"<svg")
    try:
        client.fetch_depiction_svg("CHEMBL0")
        raise AssertionError("CHEMBL0 depiction must 404")
    except NotFoundError:
        pass

    return store


def main() -> None:
    target = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures/chembl")
    store = record_all(target)
    print(f"{len(store)} fixtures recorded into {target}")


if __name__ == "__main__":
    main()
