"""Errors raised by the ChEMBL client and its transports."""


class TransportError(Exception):
    """Network failure, unexpected HTTP status, or transport misconfiguration."""


class ReplayMissError(TransportError):
    """Replay mode has no fixture for the requested canonical key."""

    def __init__(self, request_line: str):
        self.request_line = request_line
        super().__init__(f"no recorded fixture for: {request_line}")


class NotFoundError(Exception):
    """The service has no record for the requested identifier."""


class InvalidStructureError(Exception):
    """The service rejected a SMILES string."""


class UnresolvedDrugError(Exception):
    """No synonym match with a usable structure for a drug name."""


class RecordParseError(Exception):
    """A service payload violated a record invariant; nothing is silently dropped."""
