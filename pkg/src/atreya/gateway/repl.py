"""Interactive terminal client: one session, replies printed as text.

Button grids render as numbered choices; typing the number presses the
button. Images and file attachments are written to the downloads directory
and their paths printed. The loop ends (exit code 0) when the session
reaches its final state.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

from ..dialog import InboundEvent, Phase
from ..presenter import Reply, ReplyKind
from ..runtime import Runtime

PROMPT = "you> "
BANNER = "Atreya terminal chat. Send /start to begin, /exit to leave."


def _image_filename(index: int, caption: str) -> str:
    for line in caption.splitlines():
        if line.startswith("ChEMBL ID: "):
            return f"{index:03d}_{line.removeprefix('ChEMBL ID: ').strip()}.png"
    return f"{index:03d}_card.png"


def repl_loop(
    runtime: Runtime,
    downloads_dir: str | Path,
    input_fn: Callable[[str], str] = input,
    echo: Callable[[str], None] = print,
) -> int:
    downloads = Path(downloads_dir)
    session = runtime.manager.create_session()
    grid_labels: list[str] = []
    image_index = 0

    echo(BANNER)
    while True:
        try:
            line = input_fn(PROMPT)
        except (EOFError, KeyboardInterrupt):
            echo("(session closed)")
            return 0
        line = line.strip()
        if not line:
            continue

        if line.isdigit() and grid_labels and 1 <= int(line) <= len(grid_labels):
            label = grid_labels[int(line) - 1]
            echo(f"[button] {label}")
            event = InboundEvent.of_button(label)
        else:
            event = InboundEvent.of_text(line)

        try:
            replies = runtime.manager.handle_event(session.session_id, event)
        except Exception as exc:
            echo(f"error: {type(exc).__name__}: {exc}")
            continue

        for reply in replies:
            image_index = _render(reply, downloads, echo, grid_labels, image_index)

        if session.phase is Phase.ENDED:
            return 0


def _render(
    reply: Reply,
    downloads: Path,
    echo: Callable[[str], None],
    grid_labels: list[str],
    image_index: int,
) -> int:
    if reply.kind is ReplyKind.TEXT:
        echo(reply.text)
    elif reply.kind is ReplyKind.BUTTONS:
        grid_labels.clear()
        grid_labels.extend(reply.buttons.labels)
        echo("choose an option:")
        for number, label in enumerate(grid_labels, start=1):
            echo(f"  {number}. {label}")
    elif reply.kind is ReplyKind.IMAGE_CARD:
        image_index += 1
        downloads.mkdir(parents=True, exist_ok=True)
        path = downloads / _image_filename(image_index, reply.caption)
        path.write_bytes(reply.image_png)
        echo(reply.caption)
        echo(f"[image saved: {path.name}]")
    elif reply.kind is ReplyKind.FILE_ATTACHMENT:
        downloads.mkdir(parents=True, exist_ok=True)
        path = downloads / reply.file_name
        path.write_bytes(reply.file_bytes)
        echo(f"[file saved: {path.name} ({reply.file_media_type})]")
    return image_index
