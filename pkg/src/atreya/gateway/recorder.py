"""Scripted fixture recording.

A script file holds one utterance per line (blank lines and ``#`` comments
are skipped). Each line is fed through a full dialog session backed by a
recording transport, so every HTTP exchange the conversation triggers --
including status probes and depiction fetches -- lands in the fixture
store exactly as replay mode will later request it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

from ..dialog import InboundEvent, Phase
from ..presenter import ReplyKind
from ..runtime import Runtime


def read_script(path: str | Path) -> list[str]:
    lines: list[str] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    return lines


def run_script(
    runtime: Runtime,
    script: list[str],
    echo: Callable[[str], None] = print,
) -> int:
    session = runtime.manager.create_session()
    for utterance in ["/start", *script]:
        echo(f">> {utterance}")
        replies = runtime.manager.handle_event(
            session.session_id, InboundEvent.of_text(utterance)
        )
        for reply in replies:
            if reply.kind is ReplyKind.TEXT:
                first = reply.text.splitlines()[0] if reply.text else ""
                echo(f"   {first}")
            else:
                echo(f"   [{reply.kind.value}]")
        if session.phase is Phase.ENDED:
            break
    if session.phase is not Phase.ENDED:
        runtime.manager.handle_event(
            session.session_id, InboundEvent.of_text("/exit")
        )
    return 0
