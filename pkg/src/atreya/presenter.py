"""Builds chat replies from ChEMBL records: cards, listings, CSV files.

Everything here is a pure function of its inputs; depiction bytes are
handed in by the dialog layer, never fetched. Image rendering degrades to
a text card rather than dropping a result.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

from .chembl.models import MoleculeRecord, SimilarityHit, TargetRecord, TissueRecord
from .raster import DEFAULT_SIZE, RasterizeError, render_png

#: cap on cards in one reply batch, to respect chat transport payload norms
CARDS_PER_BATCH = 10

CSV_HEADER = ["chembl_id", "pref_name", "molecular_formula", "first_approval", "canonical_smiles"]
CSV_FILENAME = "approved_drugs.csv"
CSV_MEDIA_TYPE = "text/csv"


class ReplyKind(Enum):
    TEXT = "text"
    BUTTONS = "buttons"
    IMAGE_CARD = "image"
    FILE_ATTACHMENT = "file"


@dataclass(frozen=True)
class ButtonGrid:
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels or any(not l for l in self.labels):
            raise ValueError("button grid needs non-empty labels")


@dataclass(frozen=True)
class Reply:
    kind: ReplyKind
    text: str | None = None
    buttons: ButtonGrid | None = None
    image_png: bytes | None = None
    caption: str | None = None
    file_name: str | None = None
    file_media_type: str | None = None
    file_bytes: bytes | None = None

    def __post_init__(self):
        populated = {
            "text": self.text is not None,
            "buttons": self.buttons is not None,
            "image": self.image_png is not None or self.caption is not None,
            "file": any(v is not None for v in (self.file_name, self.file_media_type, self.file_bytes)),
        }
        expected = {
            ReplyKind.TEXT: "text",
            ReplyKind.BUTTONS: "buttons",
            ReplyKind.IMAGE_CARD: "image",
            ReplyKind.FILE_ATTACHMENT: "file",
        }[self.kind]
        for group, present in populated.items():
            if group == expected and not present:
                raise ValueError(f"{self.kind.name} reply is missing its {group} fields")
            if group != expected and present:
                raise ValueError(f"{self.kind.name} reply must not carry {group} fields")
        if self.kind is ReplyKind.TEXT and not self.text:
            raise ValueError("text reply must not be empty")
        if self.kind is ReplyKind.IMAGE_CARD and (self.image_png is None or not self.caption):
            raise ValueError("image card needs PNG bytes and a caption")
        if self.kind is ReplyKind.FILE_ATTACHMENT and not (
            self.file_name and self.file_media_type and self.file_bytes is not None
        ):
            raise ValueError("file attachment needs name, media type and bytes")

    @classmethod
    def of_text(cls, text: str) -> "Reply":
        return cls(kind=ReplyKind.TEXT, text=text)

    @classmethod
    def of_buttons(cls, grid: ButtonGrid) -> "Reply":
        return cls(kind=ReplyKind.BUTTONS, buttons=grid)

    @classmethod
    def of_image(cls, png: bytes, caption: str) -> "Reply":
        return cls(kind=ReplyKind.IMAGE_CARD, image_png=png, caption=caption)

    @classmethod
    def of_file(cls, name: str, media_type: str, data: bytes) -> "Reply":
        return cls(
            kind=ReplyKind.FILE_ATTACHMENT,
            file_name=name,
            file_media_type=media_type,
            file_bytes=data,
        )


def _caption_lines(m: MoleculeRecord) -> list[str]:
    lines = [f"ChEMBL ID: {m.chembl_id}"]
    if m.pref_name:
        lines.append(f"Name: {m.pref_name}")
    if m.molecular_formula:
        lines.append(f"Formula: {m.molecular_formula}")
    if m.inchi_key:
        lines.append(f"InChIKey: {m.inchi_key}")
    if m.first_approval:
        lines.append(f"First approval: {m.first_approval}")
    return lines


def molecule_card(m: MoleculeRecord, depiction_svg: bytes | None = None, size: int = DEFAULT_SIZE) -> Reply:
    """Image card when a depiction is available, text card otherwise."""
    caption = "\n".join(_caption_lines(m))
    if depiction_svg is None:
        return Reply.of_text(caption)
    try:
        png = render_png(depiction_svg, size)
    except RasterizeError:
        return Reply.of_text(caption + "\n(structure image unavailable: depiction could not be rendered)")
    return Reply.of_image(png, caption)


def similarity_list(hits: list[SimilarityHit]) -> list[Reply]:
    """One text card per hit, percentage first, in the given (sorted) order."""
    if not hits:
        return [Reply.of_text("No similar compounds found.")]
    replies = []
    for hit in hits:
        lines = [f"Similarity: {hit.similarity_percent:g}%"]
        lines.extend(_caption_lines(hit.molecule))
        if hit.molecule.canonical_smiles:
            lines.append(f"SMILES: {hit.molecule.canonical_smiles}")
        replies.append(Reply.of_text("\n".join(lines)))
    return replies


def usan_card(m: MoleculeRecord) -> Reply:
    lines = [f"ChEMBL ID: {m.chembl_id}"]
    if m.pref_name:
        lines.append(f"Name: {m.pref_name}")
    stem = m.usan_stem or ""
    if m.usan_stem_definition:
        stem = f"{stem} ({m.usan_stem_definition})" if stem else m.usan_stem_definition
    if stem:
        lines.append(f"Classification: {stem}")
    if m.first_approval:
        lines.append(f"First approval: {m.first_approval}")
    if m.canonical_smiles:
        lines.append(f"SMILES: {m.canonical_smiles}")
    if m.synonyms:
        lines.append(f"Synonyms: {', '.join(m.synonyms[:5])}")
    return Reply.of_text("\n".join(lines))


def approved_drug_card(m: MoleculeRecord) -> Reply:
    lines = [f"ChEMBL ID: {m.chembl_id}"]
    if m.pref_name:
        lines.append(f"Name: {m.pref_name}")
    if m.molecular_formula:
        lines.append(f"Formula: {m.molecular_formula}")
    if m.first_approval:
        lines.append(f"First approval: {m.first_approval}")
    return Reply.of_text("\n".join(lines))


def target_card(t: TargetRecord) -> Reply:
    lines = [f"Target ChEMBL ID: {t.target_chembl_id}", f"Name: {t.pref_name}"]
    if t.organism:
        lines.append(f"Organism: {t.organism}")
    lines.append(f"Type: {t.target_type}")
    if t.gene_symbols:
        lines.append(f"Gene symbols: {', '.join(t.gene_symbols)}")
    return Reply.of_text("\n".join(lines))


def tissue_card(t: TissueRecord) -> Reply:
    lines = [f"Tissue ChEMBL ID: {t.tissue_chembl_id}", f"Name: {t.pref_name}"]
    if t.uberon_id:
        lines.append(f"Uberon: {t.uberon_id}")
    if t.bto_id:
        lines.append(f"BTO: {t.bto_id}")
    if t.efo_id:
        lines.append(f"EFO: {t.efo_id}")
    return Reply.of_text("\n".join(lines))


@dataclass(frozen=True)
class CsvDocument:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        width = len(self.header)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"row width {len(row)} != header width {width}")

    def serialize(self) -> bytes:
        """RFC 4180: CRLF line endings, cells quoted when they need it."""
        lines = [_csv_line(self.header)]
        lines.extend(_csv_line(row) for row in self.rows)
        return ("".join(lines)).encode("utf-8")

    def matrix(self) -> list[list[str]]:
        return [list(self.header)] + [list(row) for row in self.rows]


def _csv_cell(cell: str) -> str:
    if any(ch in cell for ch in (',', '"', '\n', '\r')):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def _csv_line(cells) -> str:
    return ",".join(_csv_cell(c) for c in cells) + "\r\n"


def parse_csv(data: bytes) -> list[list[str]]:
    """Strict RFC 4180 reader used as the round-trip check for serialize()."""
    text = data.decode("utf-8")
    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    return [row for row in reader]


def approved_csv(records: list[MoleculeRecord]) -> tuple[CsvDocument, Reply]:
    """CSV of approved drugs plus the file-attachment reply carrying it."""
    if not records:
        raise ValueError("records must not be empty")
    for record in records:
        if record.max_phase != 4:
            raise ValueError(f"{record.chembl_id} is not an approved drug (max_phase 4)")
    rows = tuple(
        (
            r.chembl_id,
            r.pref_name or "",
            r.molecular_formula or "",
            str(r.first_approval) if r.first_approval is not None else "",
            r.canonical_smiles or "",
        )
        for r in records
    )
    document = CsvDocument(header=tuple(CSV_HEADER), rows=rows)
    reply = Reply.of_file(CSV_FILENAME, CSV_MEDIA_TYPE, document.serialize())
    return document, reply
