"""HTTP transport with record/replay fixtures.

Requests are canonicalized (method + relative path + lexicographically
sorted query string) into a request line; its SHA-256 is the fixture key.
A fixture store is a directory of one JSON file per key, carrying the
request line, status, content type and base64 body, plus a human-readable
``index.txt`` mapping keys back to request lines. Replay is byte-exact.
"""

from __future__ import annotations

import base64
import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import quote, urlencode

import httpx

from .errors import ReplayMissError, TransportError

INDEX_FILE = "index.txt"


@dataclass(frozen=True)
class TransportRequest:
    method: str
    path: str
    params: tuple[tuple[str, str], ...] = ()

    @classmethod
    def get(cls, path: str, params: dict | None = None) -> "TransportRequest":
        pairs = tuple(sorted((str(k), str(v)) for k, v in (params or {}).items()))
        return cls(method="GET", path=path, params=pairs)

    @property
    def request_line(self) -> str:
        if not self.params:
            return f"{self.method} {self.path}"
        query = urlencode(self.params, quote_via=quote)
        return f"{self.method} {self.path}?{query}"

    @property
    def key(self) -> str:
        return hashlib.sha256(self.request_line.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TransportResponse:
    status: int
    body: bytes
    content_type: str


class Transport:
    """Interface: execute a request, return the response."""

    def execute(self, request: TransportRequest) -> TransportResponse:
        raise NotImplementedError


class FixtureStore:
    """Directory-backed store of recorded responses, keyed canonically.

    Reads are lock-free after the per-key cache warms; writes are
    serialized. Fixture files are stable JSON so they diff cleanly.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._cache: dict[str, TransportResponse] = {}
        self._index: dict[str, str] = {}
        self._lock = threading.Lock()
        if self.root.is_dir():
            self._load_index()

    def _load_index(self) -> None:
        index_path = self.root / INDEX_FILE
        if not index_path.is_file():
            # tolerate a store without an index; rebuild from fixture files
            for fixture in sorted(self.root.glob("*.json")):
                data = json.loads(fixture.read_text("utf-8"))
                self._index[fixture.stem] = data["request"]
            return
        for line in index_path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            key, _, request_line = line.partition("  ")
            self._index[key] = request_line

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, key: str) -> bool:
        return key in self._index

    def request_lines(self) -> list[str]:
        return sorted(self._index.values())

    def get(self, key: str) -> TransportResponse | None:
        if key in self._cache:
            return self._cache[key]
        if key not in self._index:
            return None
        path = self.root / f"{key}.json"
        data = json.loads(path.read_text("utf-8"))
        response = TransportResponse(
            status=int(data["status"]),
            body=base64.b64decode(data["body_b64"]),
            content_type=data["content_type"],
        )
        self._cache[key] = response
        return response

    def put(self, request: TransportRequest, response: TransportResponse) -> None:
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            record = {
                "request": request.request_line,
                "status": response.status,
                "content_type": response.content_type,
                "body_b64": base64.b64encode(response.body).decode("ascii"),
            }
            path = self.root / f"{request.key}.json"
            path.write_text(json.dumps(record, indent=1) + "\n", "utf-8")
            self._index[request.key] = request.request_line
            self._cache[request.key] = response
            self._write_index()

    def _write_index(self) -> None:
        lines = [f"{key}  {line}" for key, line in sorted(self._index.items())]
        (self.root / INDEX_FILE).write_text("\n".join(lines) + "\n", "utf-8")


class ReplayTransport(Transport):
    """Serves recorded responses only; a miss is an error, never a network call."""

    def __init__(self, store: FixtureStore):
        self.store = store

    def execute(self, request: TransportRequest) -> TransportResponse:
        response = self.store.get(request.key)
        if response is None:
            raise ReplayMissError(request.request_line)
        return response


class LiveTransport(Transport):
    """Talks to the real service, rate-limited to a configurable ceiling."""

    def __init__(
        self,
        base_url: str,
        rate_limit_per_sec: float = 5.0,
        client: httpx.Client | None = None,
        timeout: float = 30.0,
    ):
        self.base_url = base_url.rstrip("/")
        self._client = client or httpx.Client(timeout=timeout)
        self._min_interval = 1.0 / rate_limit_per_sec if rate_limit_per_sec > 0 else 0.0
        self._last_request = 0.0
        self._lock = threading.Lock()

    def _throttle(self) -> None:
        with self._lock:
            now = time.monotonic()
            wait = self._last_request + self._min_interval - now
            if wait > 0:
                time.sleep(wait)
                now = time.monotonic()
            self._last_request = now

    def execute(self, request: TransportRequest) -> TransportResponse:
        self._throttle()
        url = f"{self.base_url}/{request.path}"
        try:
            response = self._client.request(request.method, url, params=list(request.params))
        except httpx.HTTPError as exc:
            raise TransportError(f"{request.request_line}: {exc}") from exc
        return TransportResponse(
            status=response.status_code,
            body=response.content,
            content_type=response.headers.get("content-type", "application/octet-stream"),
        )

    def close(self) -> None:
        self._client.close()


class RecordingTransport(Transport):
    """Live transport that persists every response into a fixture store."""

    def __init__(self, inner: Transport, store: FixtureStore):
        self.inner = inner
        self.store = store

    def execute(self, request: TransportRequest) -> TransportResponse:
        response = self.inner.execute(request)
        self.store.put(request, response)
        return response


class CachingTransport(Transport):
    """In-memory response cache; transparent by construction (keyed canonically)."""

    def __init__(self, inner: Transport):
        self.inner = inner
        self._cache: dict[str, TransportResponse] = {}
        self._lock = threading.Lock()

    def execute(self, request: TransportRequest) -> TransportResponse:
        with self._lock:
            cached = self._cache.get(request.key)
        if cached is not None:
            return cached
        response = self.inner.execute(request)
        with self._lock:
            self._cache[request.key] = response
        return response
