"""Streaming archive ingestion.

Archives are line-delimited JSON with v1.1-style field names (id_str,
text / full_text, created_at, user.screen_name, retweet_count, lang),
optionally gzip-compressed (detected by magic bytes, not extension).
Parsing is a single forward pass with bounded memory; bad lines are
counted, never fatal.
"""

from __future__ import annotations

import gzip
import io
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from . import query as query_engine
from .query import Matcher, QuerySpec
from .records import Liveness, TweetRecord, parse_timestamp

__all__ = [
    "ParseError",
    "CorpusStats",
    "IngestStream",
    "parse_tweet_line",
    "ingest_archive",
    "apply_liveness",
    "write_records",
    "read_records",
    "RECORD_FILE_KIND",
    "SCHEMA_VERSION",
]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
RECORD_FILE_KIND = "tweet_records"

_GZIP_MAGIC = b"\x1f\x8b"


class ParseError(ValueError):
    """One unparseable archive line; carries the byte offset of the line."""

    def __init__(self, message: str, offset: int | None = None) -> None:
        super().__init__(message)
        self.offset = offset


@dataclass
class CorpusStats:
    """Counts over the records actually emitted by an ingest pass."""

    total_records: int = 0
    parse_failures: int = 0
    per_day: Counter = field(default_factory=Counter)
    _users: set = field(default_factory=set, repr=False)

    @property
    def distinct_users(self) -> int:
        return len(self._users)

    def add(self, record: TweetRecord) -> None:
        self.total_records += 1
        self.per_day[record.day] += 1
        self._users.add(record.author_handle.lower())

    def to_dict(self) -> dict:
        return {
            "total_records": self.total_records,
            "distinct_users": self.distinct_users,
            "parse_failures": self.parse_failures,
            "per_day": {d.isoformat(): c for d, c in sorted(self.per_day.items())},
        }


def parse_tweet_line(line: str, offset: int = 0) -> TweetRecord:
    """Parse one archive line into a TweetRecord.

    Text comes from full_text when present, else text. Unknown fields are
    ignored. Raises ParseError (with the supplied byte offset) on anything
    malformed or on a missing id / text / author / timestamp.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", offset) from None
    if not isinstance(obj, dict):
        raise ParseError("line is not a JSON object", offset)

    tweet_id = obj.get("id_str")
    if not isinstance(tweet_id, str) or not tweet_id.isdigit():
        raise ParseError("missing or malformed id_str", offset)

    text = obj.get("full_text")
    if not isinstance(text, str):
        text = obj.get("text")
    if not isinstance(text, str):
        raise ParseError("missing text", offset)

    user = obj.get("user")
    handle = user.get("screen_name") if isinstance(user, dict) else None
    if not isinstance(handle, str) or not handle:
        raise ParseError("missing user.screen_name", offset)

    created = obj.get("created_at")
    if not isinstance(created, str):
        raise ParseError("missing created_at", offset)
    try:
        created_at = parse_timestamp(created)
    except ValueError as exc:
        raise ParseError(f"bad created_at: {exc}", offset) from None

    retweets = obj.get("retweet_count", 0)
    if not isinstance(retweets, int) or isinstance(retweets, bool) or retweets < 0:
        raise ParseError("bad retweet_count", offset)

    lang = obj.get("lang")
    if lang is not None and not isinstance(lang, str):
        raise ParseError("bad lang tag", offset)

    return TweetRecord(
        tweet_id=tweet_id,
        text=text,
        author_handle=handle,
        created_at=created_at,
        retweet_count=retweets,
        lang=lang,
    )


def _open_archive(path: Path) -> io.BufferedIOBase:
    raw = open(path, "rb")
    magic = raw.read(2)
    raw.seek(0)
    if magic == _GZIP_MAGIC:
        return gzip.GzipFile(fileobj=raw)  # offsets are decompressed-stream offsets
    return raw


class IngestStream:
    """Single-pass record stream over one archive file.

    Iterate it to get the matching records; ``stats`` is complete once the
    iterator is exhausted. A stream is one-shot - re-ingest by constructing
    a new one (two passes over the same file are identical).
    """

    def __init__(self, path: str | Path,
                 matcher: Matcher | QuerySpec | None = None) -> None:
        self.path = Path(path)
        if isinstance(matcher, QuerySpec):
            matcher = query_engine.compile(matcher)
        self.matcher = matcher
        self.stats = CorpusStats()
        self._consumed = False

    def __iter__(self) -> Iterator[TweetRecord]:
        if self._consumed:
            raise RuntimeError("IngestStream is single-pass; create a new one")
        self._consumed = True
        offset = 0
        with _open_archive(self.path) as fh:
            for raw in fh:
                line_offset = offset
                offset += len(raw)
                try:
                    line = raw.decode("utf-8")
                except UnicodeDecodeError:
                    self.stats.parse_failures += 1
                    logger.warning("undecodable line at byte %d in %s",
                                   line_offset, self.path)
                    continue
                if not line.strip():
                    continue
                try:
                    record = parse_tweet_line(line, offset=line_offset)
                except ParseError as exc:
                    self.stats.parse_failures += 1
                    logger.warning("parse failure at byte %s in %s: %s",
                                   exc.offset, self.path, exc)
                    continue
                if self.matcher is not None and not self.matcher.matches(record.text).matched:
                    continue
                self.stats.add(record)
                yield record


def ingest_archive(path: str | Path,
                   matcher: Matcher | QuerySpec | None = None) -> IngestStream:
    """Open an archive for streaming ingestion.

    When a query (spec or compiled matcher) is given, only records whose
    text matches are emitted and counted; parse failures are always counted.
    """
    return IngestStream(path, matcher)


def apply_liveness(
    records: Iterable[TweetRecord],
    oracle: Callable[[str], Liveness | str],
) -> tuple[list[TweetRecord], list[str]]:
    """Resolve each record's live flag through the supplied oracle.

    The oracle maps tweet_id to live/deleted. An oracle failure leaves that
    record unknown and adds its id to the returned failure list; order and
    every other field are preserved.
    """
    out: list[TweetRecord] = []
    failures: list[str] = []
    for record in records:
        try:
            verdict = oracle(record.tweet_id)
            live = verdict if isinstance(verdict, Liveness) else Liveness(verdict)
            if live is Liveness.UNKNOWN:
                raise ValueError("oracle must answer live or deleted")
        except Exception as exc:  # noqa: BLE001 - oracle is caller-supplied
            failures.append(record.tweet_id)
            logger.warning("liveness oracle failed for %s: %s", record.tweet_id, exc)
            out.append(record)
            continue
        out.append(record.with_liveness(live))
    return out, failures


def write_records(path: str | Path, records: Iterable[TweetRecord]) -> int:
    """Write a normalized record file: one header line, then one record per line."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        header = {"schema_version": SCHEMA_VERSION, "kind": RECORD_FILE_KIND}
        fh.write(json.dumps(header) + "\n")
        for record in records:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
            count += 1
    return count


def read_records(path: str | Path) -> list[TweetRecord]:
    """Read a normalized record file (header line optional)."""
    records: list[TweetRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            if not line.strip():
                continue
            obj = json.loads(line)
            if lineno == 0 and "kind" in obj and "tweet_id" not in obj:
                if obj.get("kind") != RECORD_FILE_KIND:
                    raise ValueError(f"not a record file: kind={obj.get('kind')!r}")
                continue
            records.append(TweetRecord.from_dict(obj))
    return records
