"""Disk-backed session store with content-hash-keyed derived caches.

Layout on disk::

    <root>/<session_id>/log.txt        raw uploaded log
    <root>/<session_id>/regions.json   persisted semantic regions (optional)
    <root>/<session_id>/cache/<op>-<digest>.json

Cache digests are derived from the current log hash (and regions hash where
relevant) plus the canonicalized parameters, so any change to a stored log
automatically invalidates everything derived from it. Mutations serialize per
session; reads are lock-free.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from pathlib import Path

from .errors import DuplicateSession, SessionNotFound
from .ingest import Session, parse_log, segment_gestures

_SESSION_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]{0,127}$")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._session_cache: dict[tuple[str, str], Session] = {}

    def lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _dir(self, session_id: str) -> Path:
        return self.root / session_id

    def _log_path(self, session_id: str) -> Path:
        return self._dir(session_id) / "log.txt"

    @staticmethod
    def validate_session_id(session_id: str) -> None:
        if not _SESSION_ID_RE.match(session_id):
            raise ValueError(f"invalid session id {session_id!r}")

    def exists(self, session_id: str) -> bool:
        return self._log_path(session_id).exists()

    def upload(self, session_id: str, content: str) -> None:
        """Store a new session log; re-uploads are rejected, never merged."""
        self.validate_session_id(session_id)
        with self.lock(session_id):
            if self.exists(session_id):
                raise DuplicateSession(f"session {session_id!r} already exists")
            directory = self._dir(session_id)
            directory.mkdir(parents=True, exist_ok=True)
            tmp = directory / "log.txt.tmp"
            tmp.write_text(content, encoding="utf-8")
            tmp.rename(self._log_path(session_id))

    def session_ids(self) -> list[str]:
        return sorted(
            d.name for d in self.root.iterdir() if d.is_dir() and (d / "log.txt").exists()
        )

    def read_log(self, session_id: str) -> str:
        path = self._log_path(session_id)
        if not path.exists():
            raise SessionNotFound(f"no session {session_id!r}")
        return path.read_text(encoding="utf-8")

    def log_hash(self, session_id: str) -> str:
        return _sha256(self.read_log(session_id).encode("utf-8"))

    def load_session(self, session_id: str) -> Session:
        """Parse and segment a stored log, memoized on the log's content hash."""
        content = self.read_log(session_id)
        digest = _sha256(content.encode("utf-8"))
        key = (session_id, digest)
        cached = self._session_cache.get(key)
        if cached is None:
            cached = segment_gestures(parse_log(content, session_id=session_id))
            self._session_cache[key] = cached
        return cached

    # -- semantic regions -----------------------------------------------------

    def get_regions(self, session_id: str) -> list[dict]:
        if not self.exists(session_id):
            raise SessionNotFound(f"no session {session_id!r}")
        path = self._dir(session_id) / "regions.json"
        if not path.exists():
            return []
        return json.loads(path.read_text(encoding="utf-8"))

    def put_regions(self, session_id: str, regions: list[dict]) -> None:
        if not self.exists(session_id):
            raise SessionNotFound(f"no session {session_id!r}")
        with self.lock(session_id):
            path = self._dir(session_id) / "regions.json"
            path.write_text(json.dumps(regions, sort_keys=True), encoding="utf-8")

    def regions_hash(self, session_id: str) -> str:
        return _sha256(json.dumps(self.get_regions(session_id), sort_keys=True).encode("utf-8"))

    # -- derived-result cache --------------------------------------------------

    def _cache_path(self, session_id: str, op: str, params: dict, extra: str = "") -> Path:
        canonical = json.dumps(params, sort_keys=True, separators=(",", ":"))
        digest = _sha256(f"{self.log_hash(session_id)}|{extra}|{canonical}".encode("utf-8"))[:24]
        return self._dir(session_id) / "cache" / f"{op}-{digest}.json"

    def cache_get(self, session_id: str, op: str, params: dict, extra: str = "") -> bytes | None:
        path = self._cache_path(session_id, op, params, extra)
        return path.read_bytes() if path.exists() else None

    def cache_put(self, session_id: str, op: str, params: dict, payload: bytes, extra: str = "") -> None:
        path = self._cache_path(session_id, op, params, extra)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(payload)
        tmp.rename(path)
