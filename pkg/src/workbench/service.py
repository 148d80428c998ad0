"""Annotation sessions, durable storage, and the HTTP wire API.

Persistence is an append-only JSONL journal plus an optional snapshot.
Every accepted mutation (session creation, submit, import) is flushed and
fsynced to the journal before it is acknowledged; replaying the journal
from an empty directory reconstructs the store exactly, and a snapshot
just shortcuts the replay. Human labels are never overwritten on disk -
a resubmission appends a new journal entry and the in-memory store keeps
last-write-wins.

The wire API (all JSON):

    GET  /v1/sessions/{sid}/annotators/{aid}/next   AnnotationTask or {"done": true}
    POST /v1/annotations                            {"status": "ok"} | 422 {"errors": {...}}
    GET  /v1/sessions/{sid}/progress                per-annotator counts
    GET  /v1/codebook                               all entries
    GET  /v1/codebook/{entry_id}                    one entry
    GET  /v1/sessions/{sid}/export?format=csv|json  full export
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .annotations import (AnnotationRecord, ValidationError, export_csv,
                          export_json)
from .codebook import Codebook, CodebookHit, UnknownEntryError, load_codebook
from .records import TweetRecord, format_iso_utc

__all__ = [
    "PERMALINK_BASE",
    "AnnotationTask",
    "Session",
    "AnnotationStore",
    "create_app",
]

PERMALINK_BASE = "https://twitter.com/i/web/status/"

JOURNAL_NAME = "journal.ndjson"
SNAPSHOT_NAME = "snapshot.json"


def permalink(tweet_id: str) -> str:
    return PERMALINK_BASE + tweet_id


@dataclass(frozen=True)
class AnnotationTask:
    """One tweet queued for one annotator, with advisory codebook hits."""

    session_id: str
    sample_id: str
    tweet_id: str
    text: str
    created_at: str
    author_handle: str
    permalink: str
    codebook_hits: tuple[CodebookHit, ...]
    position: int
    total: int

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "sample_id": self.sample_id,
            "tweet_id": self.tweet_id,
            "text": self.text,
            "created_at": self.created_at,
            "author_handle": self.author_handle,
            "permalink": self.permalink,
            "codebook_hits": [h.to_dict() for h in self.codebook_hits],
            "position": self.position,
            "total": self.total,
        }


@dataclass
class Session:
    session_id: str
    sample_id: str
    annotator_ids: tuple[str, ...]
    tweets: tuple[dict, ...]  # tweet_id/text/created_at/author_handle, in draw order

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "sample_id": self.sample_id,
            "annotator_ids": list(self.annotator_ids),
            "tweets": list(self.tweets),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Session":
        return cls(
            session_id=d["session_id"],
            sample_id=d["sample_id"],
            annotator_ids=tuple(d["annotator_ids"]),
            tweets=tuple(d["tweets"]),
        )


class AnnotationStore:
    """Sessions plus annotation records, journaled to a data directory.

    All mutations take the store lock, so concurrent submissions from many
    annotators interleave safely; the per-key upsert is atomic.
    """

    def __init__(self, data_dir: str | Path | None = None,
                 codebook: Codebook | None = None) -> None:
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.codebook = codebook if codebook is not None else load_codebook()
        self.sessions: dict[str, Session] = {}
        self.annotations: dict[tuple[str, str, str], AnnotationRecord] = {}
        self.journal_entries = 0
        self._lock = threading.RLock()
        self._journal_fh = None
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._recover()
            self._journal_fh = open(self._journal_path(), "a", encoding="utf-8")

    # ------------------------------------------------------------- persistence
    def _journal_path(self) -> Path:
        return self.data_dir / JOURNAL_NAME

    def _snapshot_path(self) -> Path:
        return self.data_dir / SNAPSHOT_NAME

    def _recover(self) -> None:
        offset = 0
        snap_path = self._snapshot_path()
        if snap_path.exists():
            with open(snap_path, encoding="utf-8") as fh:
                snap = json.load(fh)
            for s in snap["sessions"]:
                session = Session.from_dict(s)
                self.sessions[session.session_id] = session
            for r in snap["annotations"]:
                record = AnnotationRecord.from_dict(r)
                self.annotations[record.key] = record
            offset = snap.get("journal_offset", 0)
            self.journal_entries = snap.get("journal_entries", 0)
        journal = self._journal_path()
        if journal.exists():
            with open(journal, encoding="utf-8") as fh:
                fh.seek(offset)
                for line in fh:
                    if not line.strip():
                        continue
                    self._apply(json.loads(line))
                    self.journal_entries += 1

    def _apply(self, entry: dict) -> None:
        op = entry["op"]
        if op == "create_session":
            session = Session.from_dict(entry["session"])
            self.sessions[session.session_id] = session
        elif op in ("submit", "import"):
            record = AnnotationRecord.from_dict(entry["record"])
            self.annotations[record.key] = record
        else:
            raise ValueError(f"unknown journal op {op!r}")

    def _journal(self, entry: dict) -> None:
        self.journal_entries += 1
        if self._journal_fh is None:
            return
        self._journal_fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
        self._journal_fh.flush()
        os.fsync(self._journal_fh.fileno())

    def snapshot(self) -> Path | None:
        """Write a point-in-time snapshot; recovery then skips the journal prefix."""
        if self.data_dir is None:
            return None
        with self._lock:
            self._journal_fh.flush()
            state = {
                "schema_version": 1,
                "sessions": [s.to_dict() for s in self.sessions.values()],
                "annotations": [r.to_dict() for r in self.annotations.values()],
                "journal_offset": self._journal_fh.tell(),
                "journal_entries": self.journal_entries,
            }
            tmp = self._snapshot_path().with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(state, fh, ensure_ascii=False)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self._snapshot_path())
            return self._snapshot_path()

    def close(self) -> None:
        if self._journal_fh is not None:
            self._journal_fh.close()
            self._journal_fh = None

    # ------------------------------------------------------------- sessions
    def create_session(
        self,
        sample_id: str,
        records: Sequence[TweetRecord],
        annotators: Sequence[str],
        session_id: str | None = None,
    ) -> str:
        """Register an annotation session over an already-filtered sample.

        Every annotator is assigned the full tweet list, in draw order.
        """
        records = list(records)
        annotator_ids = tuple(dict.fromkeys(annotators))
        if not records:
            raise ValueError("cannot create a session over an empty sample")
        if not annotator_ids:
            raise ValueError("need at least one annotator")
        with self._lock:
            sid = session_id or uuid.uuid4().hex[:12]
            if sid in self.sessions:
                raise ValueError(f"session {sid!r} already exists")
            tweets = tuple(
                {
                    "tweet_id": r.tweet_id,
                    "text": r.text,
                    "created_at": format_iso_utc(r.created_at),
                    "author_handle": r.author_handle,
                }
                for r in records
            )
            session = Session(session_id=sid, sample_id=sample_id,
                              annotator_ids=annotator_ids, tweets=tweets)
            self.sessions[sid] = session
            self._journal({"op": "create_session", "session": session.to_dict()})
            return sid

    def _session(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise KeyError(f"unknown session {session_id!r}") from None

    def next_task(self, session_id: str, annotator_id: str) -> AnnotationTask | None:
        """Lowest-position unsubmitted task for the annotator, or None when done.

        Stable until a submission lands: repeated calls return the same task.
        """
        with self._lock:
            session = self._session(session_id)
            if annotator_id not in session.annotator_ids:
                raise KeyError(f"annotator {annotator_id!r} not assigned to "
                               f"session {session_id!r}")
            total = len(session.tweets)
            for index, tweet in enumerate(session.tweets):
                key = (session.sample_id, tweet["tweet_id"], annotator_id)
                if key in self.annotations:
                    continue
                return AnnotationTask(
                    session_id=session_id,
                    sample_id=session.sample_id,
                    tweet_id=tweet["tweet_id"],
                    text=tweet["text"],
                    created_at=tweet["created_at"],
                    author_handle=tweet["author_handle"],
                    permalink=permalink(tweet["tweet_id"]),
                    codebook_hits=tuple(self.codebook.scan(tweet["text"])),
                    position=index + 1,
                    total=total,
                )
            return None

    # ------------------------------------------------------------- records
    def submit(self, record: AnnotationRecord) -> None:
        """Validated upsert keyed on (sample_id, tweet_id, annotator_id).

        The record must correspond to an assigned task. Durable (journaled
        and fsynced) before this returns.
        """
        with self._lock:
            session = self._find_session_for(record)
            if session is None:
                raise ValidationError({
                    "task": f"no assigned task for sample {record.sample_id!r}, "
                            f"tweet {record.tweet_id!r}, annotator {record.annotator_id!r}"})
            stamped = record
            if stamped.submitted_at is None:
                now = datetime.now(timezone.utc).replace(microsecond=0)
                stamped = AnnotationRecord.from_dict(
                    {**record.to_dict(), "submitted_at": format_iso_utc(now)})
            self.annotations[stamped.key] = stamped
            self._journal({"op": "submit", "record": stamped.to_dict()})

    def _find_session_for(self, record: AnnotationRecord) -> Session | None:
        for session in self.sessions.values():
            if session.sample_id != record.sample_id:
                continue
            if record.annotator_id not in session.annotator_ids:
                continue
            if any(t["tweet_id"] == record.tweet_id for t in session.tweets):
                return session
        return None

    def import_records(self, records: Iterable[AnnotationRecord]) -> int:
        """Restore-style upsert that bypasses the task-assignment check."""
        count = 0
        with self._lock:
            for record in records:
                self.annotations[record.key] = record
                self._journal({"op": "import", "record": record.to_dict()})
                count += 1
        return count

    def progress(self, session_id: str) -> dict:
        with self._lock:
            session = self._session(session_id)
            total = len(session.tweets)
            annotators = {}
            for annotator_id in session.annotator_ids:
                submitted = [
                    self.annotations[key]
                    for tweet in session.tweets
                    if (key := (session.sample_id, tweet["tweet_id"], annotator_id))
                    in self.annotations
                ]
                durations = [r.duration_seconds for r in submitted]
                annotators[annotator_id] = {
                    "submitted": len(submitted),
                    "total": total,
                    "mean_duration_seconds": (
                        round(sum(durations) / len(durations), 3) if durations else None),
                }
            return {
                "session_id": session_id,
                "sample_id": session.sample_id,
                "total": total,
                "annotators": annotators,
            }

    def records_for_sample(self, sample_id: str) -> list[AnnotationRecord]:
        with self._lock:
            return [r for r in self.annotations.values() if r.sample_id == sample_id]

    def export_sample_csv(self, sample_id: str) -> str:
        return export_csv(self.records_for_sample(sample_id))

    def export_sample_json(self, sample_id: str) -> str:
        return export_json(self.records_for_sample(sample_id))


# ------------------------------------------------------------------ wire API
def create_app(store: AnnotationStore) -> FastAPI:
    """Build the FastAPI app serving the /v1 wire API over the store."""
    app = FastAPI(title="annotation-workbench", version="1")
    app.state.store = store

    def not_found(message: str) -> JSONResponse:
        return JSONResponse(status_code=404, content={"error": message})

    @app.get("/v1/sessions/{sid}/annotators/{aid}/next")
    def get_next(sid: str, aid: str):
        try:
            task = store.next_task(sid, aid)
        except KeyError as exc:
            return not_found(str(exc))
        if task is None:
            return {"done": True}
        return task.to_dict()

    @app.post("/v1/annotations")
    async def post_annotation(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return JSONResponse(status_code=422,
                                content={"errors": {"body": "invalid JSON body"}})
        if not isinstance(payload, dict):
            return JSONResponse(status_code=422,
                                content={"errors": {"body": "expected a JSON object"}})
        try:
            record = AnnotationRecord.from_dict(payload)
            store.submit(record)
        except ValidationError as exc:
            return JSONResponse(status_code=422, content={"errors": exc.errors})
        return {"status": "ok"}

    @app.get("/v1/sessions/{sid}/progress")
    def get_progress(sid: str):
        try:
            return store.progress(sid)
        except KeyError as exc:
            return not_found(str(exc))

    @app.get("/v1/codebook")
    def get_codebook():
        return {"entries": [e.to_dict() for e in store.codebook.entries]}

    @app.get("/v1/codebook/{entry_id}")
    def get_codebook_entry(entry_id: str):
        try:
            return store.codebook.get(entry_id).to_dict()
        except UnknownEntryError as exc:
            return not_found(str(exc))

    @app.get("/v1/sessions/{sid}/export")
    def get_export(sid: str, format: str = "json"):
        try:
            session = store.sessions[sid]
        except KeyError:
            return not_found(f"unknown session {sid!r}")
        if format == "csv":
            return PlainTextResponse(store.export_sample_csv(session.sample_id),
                                     media_type="text/csv")
        if format == "json":
            return JSONResponse(content=json.loads(
                store.export_sample_json(session.sample_id)))
        return JSONResponse(status_code=422,
                            content={"errors": {"format": "must be csv or json"}})

    return app
