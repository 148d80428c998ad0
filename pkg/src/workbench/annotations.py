"""Annotation judgments: validation, serialization, export/import.

One record is one annotator's judgment of one tweet. The judgment scale is
signed: +2 confident antisemitic, +1 probably antisemitic, 0 not
comprehensible, -1 probably not, -2 confidently not. Sentiment uses the
same signed scale (+2 very positive toward Jews, Judaism, or Israel down to
-2 very negative). A tweet flagged deleted or foreign-language carries no
score or sentiment at all.

Exports are deterministic: rows sorted by (tweet_id, annotator_id), fixed
column order, fixed boolean/timestamp spellings - so export -> import ->
export is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable

from .records import format_iso_utc, parse_timestamp

__all__ = [
    "SCALE",
    "EXPORT_COLUMNS",
    "ValidationError",
    "AnnotatorProfile",
    "AnnotationRecord",
    "export_csv",
    "import_csv",
    "export_json",
    "import_json",
]

SCALE = (-2, -1, 0, 1, 2)

EXPORT_COLUMNS = (
    "sample_id", "tweet_id", "annotator_id", "deleted", "foreign_language",
    "score", "ihra_disagree", "alt_judgment", "sentiment", "calling_out",
    "comment", "duration_seconds", "submitted_at",
)


class ValidationError(ValueError):
    """Invalid annotation payload; .errors maps field name to message."""

    def __init__(self, errors: dict[str, str]) -> None:
        super().__init__("; ".join(f"{k}: {v}" for k, v in sorted(errors.items())))
        self.errors = errors


@dataclass(frozen=True)
class AnnotatorProfile:
    annotator_id: str
    display_name: str = ""
    training_ack: bool = False

    def __post_init__(self) -> None:
        if not self.annotator_id:
            raise ValueError("annotator_id must be non-empty")


@dataclass(frozen=True)
class AnnotationRecord:
    sample_id: str
    tweet_id: str
    annotator_id: str
    deleted: bool = False
    foreign_language: bool = False
    score: int | None = None
    ihra_disagree: bool = False
    alt_judgment: int | None = None
    sentiment: int | None = None
    calling_out: bool = False
    comment: str = ""
    duration_seconds: float = 0.0
    submitted_at: datetime | None = None

    def __post_init__(self) -> None:
        errors = _validate_fields(self)
        if errors:
            raise ValidationError(errors)

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.sample_id, self.tweet_id, self.annotator_id)

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "tweet_id": self.tweet_id,
            "annotator_id": self.annotator_id,
            "deleted": self.deleted,
            "foreign_language": self.foreign_language,
            "score": self.score,
            "ihra_disagree": self.ihra_disagree,
            "alt_judgment": self.alt_judgment,
            "sentiment": self.sentiment,
            "calling_out": self.calling_out,
            "comment": self.comment,
            "duration_seconds": self.duration_seconds,
            "submitted_at": (format_iso_utc(self.submitted_at)
                             if self.submitted_at else None),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnnotationRecord":
        errors: dict[str, str] = {}
        kwargs: dict = {}
        for name in ("sample_id", "tweet_id", "annotator_id"):
            value = d.get(name)
            if not isinstance(value, str) or not value:
                errors[name] = "required string"
            else:
                kwargs[name] = value
        for name in ("deleted", "foreign_language", "ihra_disagree", "calling_out"):
            value = d.get(name, False)
            if not isinstance(value, bool):
                errors[name] = "must be a boolean"
            else:
                kwargs[name] = value
        for name in ("score", "alt_judgment", "sentiment"):
            value = d.get(name)
            if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
                errors[name] = "must be an integer or null"
            else:
                kwargs[name] = value
        duration = d.get("duration_seconds", 0)
        if isinstance(duration, bool) or not isinstance(duration, (int, float)):
            errors["duration_seconds"] = "must be a number"
        else:
            kwargs["duration_seconds"] = duration
        comment = d.get("comment", "")
        if comment is None:
            comment = ""
        if not isinstance(comment, str):
            errors["comment"] = "must be a string"
        else:
            kwargs["comment"] = comment
        submitted = d.get("submitted_at")
        if submitted is not None:
            try:
                kwargs["submitted_at"] = parse_timestamp(submitted)
            except (ValueError, TypeError):
                errors["submitted_at"] = "must be an ISO-8601 timestamp"
        if errors:
            raise ValidationError(errors)
        return cls(**kwargs)


def _validate_fields(r: AnnotationRecord) -> dict[str, str]:
    errors: dict[str, str] = {}
    if not r.sample_id:
        errors["sample_id"] = "required"
    if not r.tweet_id or not r.tweet_id.isdigit():
        errors["tweet_id"] = "must be a non-empty digit string"
    if not r.annotator_id:
        errors["annotator_id"] = "required"
    for name, value in (("score", r.score), ("alt_judgment", r.alt_judgment),
                        ("sentiment", r.sentiment)):
        if value is not None and value not in SCALE:
            errors[name] = f"must be one of {sorted(SCALE)}"
    if r.deleted or r.foreign_language:
        flag = "deleted" if r.deleted else "foreign_language"
        if r.score is not None:
            errors["score"] = f"must be absent when {flag} is set"
        if r.sentiment is not None:
            errors["sentiment"] = f"must be absent when {flag} is set"
    elif r.score is None:
        errors["score"] = "required unless deleted or foreign_language is set"
    if r.alt_judgment is not None and not r.ihra_disagree:
        errors["alt_judgment"] = "only allowed when ihra_disagree is set"
    if isinstance(r.duration_seconds, bool) or not isinstance(r.duration_seconds, (int, float)):
        errors["duration_seconds"] = "must be a number"
    elif r.duration_seconds < 0:
        errors["duration_seconds"] = "must be non-negative"
    return errors


def _sort_key(record: AnnotationRecord) -> tuple:
    return (record.sample_id, int(record.tweet_id), record.annotator_id)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, datetime):
        return format_iso_utc(value)
    return str(value)


def export_csv(records: Iterable[AnnotationRecord]) -> str:
    """Deterministic CSV export, one row per (tweet, annotator)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EXPORT_COLUMNS)
    for record in sorted(records, key=_sort_key):
        writer.writerow([
            record.sample_id, record.tweet_id, record.annotator_id,
            _csv_cell(record.deleted), _csv_cell(record.foreign_language),
            _csv_cell(record.score), _csv_cell(record.ihra_disagree),
            _csv_cell(record.alt_judgment), _csv_cell(record.sentiment),
            _csv_cell(record.calling_out), record.comment,
            _csv_cell(record.duration_seconds), _csv_cell(record.submitted_at),
        ])
    return buf.getvalue()


def _parse_bool(cell: str, field_name: str) -> bool:
    if cell == "true":
        return True
    if cell == "false":
        return False
    raise ValidationError({field_name: f"expected true/false, got {cell!r}"})


def _parse_number(cell: str):
    return float(cell) if "." in cell or "e" in cell or "E" in cell else int(cell)


def import_csv(text: str) -> list[AnnotationRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = tuple(next(reader))
    except StopIteration:
        raise ValidationError({"file": "empty CSV"}) from None
    if header != EXPORT_COLUMNS:
        raise ValidationError({"file": f"unexpected columns: {header}"})
    records = []
    for row in reader:
        if not row:
            continue
        cells = dict(zip(EXPORT_COLUMNS, row))
        records.append(AnnotationRecord(
            sample_id=cells["sample_id"],
            tweet_id=cells["tweet_id"],
            annotator_id=cells["annotator_id"],
            deleted=_parse_bool(cells["deleted"], "deleted"),
            foreign_language=_parse_bool(cells["foreign_language"], "foreign_language"),
            score=int(cells["score"]) if cells["score"] else None,
            ihra_disagree=_parse_bool(cells["ihra_disagree"], "ihra_disagree"),
            alt_judgment=int(cells["alt_judgment"]) if cells["alt_judgment"] else None,
            sentiment=int(cells["sentiment"]) if cells["sentiment"] else None,
            calling_out=_parse_bool(cells["calling_out"], "calling_out"),
            comment=cells["comment"],
            duration_seconds=_parse_number(cells["duration_seconds"]),
            submitted_at=(parse_timestamp(cells["submitted_at"])
                          if cells["submitted_at"] else None),
        ))
    return records


def export_json(records: Iterable[AnnotationRecord]) -> str:
    payload = {
        "schema_version": 1,
        "records": [r.to_dict() for r in sorted(records, key=_sort_key)],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def import_json(text: str) -> list[AnnotationRecord]:
    payload = json.loads(text)
    rows = payload["records"] if isinstance(payload, dict) else payload
    return [AnnotationRecord.from_dict(row) for row in rows]
