"""Wire protocol for the session channel: JSON messages, one per line.

Every message is an envelope {direction, session_id, seq, payload}. Inbound
payloads are "text" or "button"; outbound payloads are "text", "buttons",
"image" (base64 PNG plus caption) or "file" (base64 bytes plus filename and
media type). For convenience the gateway also accepts bare inbound payloads
({"text": ...} or {"button": ...}); seq is assigned when omitted.
"""

from __future__ import annotations

import base64
from typing import Literal, Union

from pydantic import BaseModel, Field, ValidationError

from ..dialog import InboundEvent
from ..presenter import Reply, ReplyKind


class TextPayload(BaseModel):
    kind: Literal["text"] = "text"
    text: str
    error: bool = False


class ButtonPayload(BaseModel):
    kind: Literal["button"]
    label: str = Field(min_length=1)


class ButtonsPayload(BaseModel):
    kind: Literal["buttons"] = "buttons"
    labels: list[str]


class ImagePayload(BaseModel):
    kind: Literal["image"] = "image"
    caption: str
    png_b64: str


class FilePayload(BaseModel):
    kind: Literal["file"] = "file"
    filename: str
    media_type: str
    data_b64: str
    download_path: str | None = None


InboundPayload = Union[TextPayload, ButtonPayload]
OutboundPayload = Union[TextPayload, ButtonsPayload, ImagePayload, FilePayload]


class InboundMessage(BaseModel):
    direction: Literal["inbound"] = "inbound"
    session_id: str | None = None
    seq: int | None = None
    payload: InboundPayload = Field(discriminator="kind")


class OutboundMessage(BaseModel):
    direction: Literal["outbound"] = "outbound"
    session_id: str
    seq: int
    payload: OutboundPayload = Field(discriminator="kind")


class MalformedMessage(ValueError):
    pass


def parse_inbound(raw: dict) -> InboundMessage:
    """Parse a full envelope, or the bare-payload shorthand."""
    if not isinstance(raw, dict):
        raise MalformedMessage("message must be a JSON object")
    try:
        if "payload" in raw or "direction" in raw:
            return InboundMessage.model_validate(raw)
        if "text" in raw:
            return InboundMessage(payload=TextPayload(text=raw["text"]))
        if "button" in raw:
            return InboundMessage(payload=ButtonPayload(kind="button", label=raw["button"]))
        if "label" in raw:
            return InboundMessage(payload=ButtonPayload(kind="button", label=raw["label"]))
    except ValidationError as exc:
        raise MalformedMessage(str(exc)) from exc
    raise MalformedMessage("message carries neither a payload nor text/button shorthand")


def to_event(message: InboundMessage) -> InboundEvent:
    payload = message.payload
    if isinstance(payload, TextPayload):
        return InboundEvent.of_text(payload.text)
    return InboundEvent.of_button(payload.label)


def reply_to_payload(reply: Reply, download_path: str | None = None) -> OutboundPayload:
    if reply.kind is ReplyKind.TEXT:
        return TextPayload(text=reply.text)
    if reply.kind is ReplyKind.BUTTONS:
        return ButtonsPayload(labels=list(reply.buttons.labels))
    if reply.kind is ReplyKind.IMAGE_CARD:
        return ImagePayload(
            caption=reply.caption,
            png_b64=base64.b64encode(reply.image_png).decode("ascii"),
        )
    return FilePayload(
        filename=reply.file_name,
        media_type=reply.file_media_type,
        data_b64=base64.b64encode(reply.file_bytes).decode("ascii"),
        download_path=download_path,
    )


def wire_line(message: OutboundMessage) -> str:
    """One-line JSON rendering; the channel is line-delimited."""
    return message.model_dump_json(exclude_none=True)
