"""ChEMBL web services surface, in one place.

Base URL, endpoint paths and JSON field/filter names all live here so a
service revision touches a single module. Paths are relative; the live
transport prepends the base URL, and fixture keys are computed from the
relative form so recorded stores stay portable.
"""

from urllib.parse import quote

BASE_URL = "https://www.ebi.ac.uk/chembl/api/data"

STATUS = "status.json"
MOLECULE = "molecule.json"
TARGET = "target.json"
TISSUE = "tissue.json"
DRUG_INDICATION = "drug_indication.json"


def molecule_by_id_path(chembl_id: str) -> str:
    return f"molecule/{chembl_id}.json"


def similarity_path(smiles: str, threshold: int) -> str:
    return f"similarity/{quote(smiles, safe='')}/{threshold}.json"


def image_path(chembl_id: str) -> str:
    return f"image/{chembl_id}.svg"


# django-style filter parameters understood by the service
FILTER_SYNONYM = "molecule_synonyms__molecule_synonym__icontains"
FILTER_PREF_NAME = "pref_name__icontains"
FILTER_FLEXMATCH = "molecule_structures__canonical_smiles__flexmatch"
FILTER_GENE_SYMBOL = "target_components__target_component_synonyms__component_synonym__iexact"
FILTER_USAN_STEM = "usan_stem__exact"
FILTER_EFO_TERM = "efo_term__icontains"
FILTER_MAX_PHASE = "max_phase"
FILTER_TISSUE_UBERON = "uberon_id"
FILTER_TISSUE_BTO = "bto_id"
FILTER_TISSUE_EFO = "efo_id"
FILTER_TISSUE_CHEMBL_ID = "tissue_chembl_id"
FILTER_TISSUE_NAME = "pref_name__icontains"
PARAM_ORDER_BY = "order_by"
PARAM_LIMIT = "limit"
PARAM_OFFSET = "offset"
ORDER_NEWEST_APPROVAL = "-first_approval"

# collection keys in paged responses
ITEMS_MOLECULES = "molecules"
ITEMS_TARGETS = "targets"
ITEMS_TISSUES = "tissues"
ITEMS_DRUG_INDICATIONS = "drug_indications"
