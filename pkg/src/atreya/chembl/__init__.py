from .client import (
    ChemblClient,
    DEFAULT_SIMILARITY_THRESHOLD,
    SIMILARITY_MAX_THRESHOLD,
    SIMILARITY_MIN_THRESHOLD,
    tissue_filter_params,
)
from .errors import (
    InvalidStructureError,
    NotFoundError,
    RecordParseError,
    ReplayMissError,
    TransportError,
    UnresolvedDrugError,
)
from .models import (
    DrugIndicationRecord,
    MoleculeRecord,
    SimilarityHit,
    TargetRecord,
    TissueKey,
    TissueRecord,
)
from .transport import (
    CachingTransport,
    FixtureStore,
    LiveTransport,
    RecordingTransport,
    ReplayTransport,
    Transport,
    TransportRequest,
    TransportResponse,
)

__all__ = [
    "ChemblClient",
    "DEFAULT_SIMILARITY_THRESHOLD",
    "SIMILARITY_MIN_THRESHOLD",
    "SIMILARITY_MAX_THRESHOLD",
    "tissue_filter_params",
    "InvalidStructureError",
    "NotFoundError",
    "RecordParseError",
    "ReplayMissError",
    "TransportError",
    "UnresolvedDrugError",
    "DrugIndicationRecord",
    "MoleculeRecord",
    "SimilarityHit",
    "TargetRecord",
    "TissueKey",
    "TissueRecord",
    "CachingTransport",
    "FixtureStore",
    "LiveTransport",
    "RecordingTransport",
    "ReplayTransport",
    "Transport",
    "TransportRequest",
    "TransportResponse",
]
