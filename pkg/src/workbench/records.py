"""Core tweet record type and timestamp handling.

Archive timestamps come in the classic "Tue Apr 03 12:00:00 +0000 2018"
form; we parse them without relying on locale tables so the result is the
same on any machine, normalize to UTC at parse time, and can render the
archive form back byte-for-byte for +0000 instants.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timedelta, timezone

__all__ = [
    "Liveness",
    "TweetRecord",
    "parse_archive_timestamp",
    "parse_timestamp",
    "format_archive_timestamp",
    "format_iso_utc",
]

_WEEKDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
           "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
_MONTH_INDEX = {name: i + 1 for i, name in enumerate(_MONTHS)}


class Liveness(enum.Enum):
    """Whether a tweet still exists on the platform at annotation time."""

    LIVE = "live"
    DELETED = "deleted"
    UNKNOWN = "unknown"


def parse_archive_timestamp(value: str) -> datetime:
    """Parse "Tue Apr 03 12:00:00 +0000 2018" into an aware UTC datetime.

    Locale-independent: month and weekday names are matched against fixed
    English tables. The weekday field is not trusted (archives occasionally
    disagree with the calendar); the date fields win.
    """
    parts = value.split()
    if len(parts) != 6:
        raise ValueError(f"not an archive timestamp: {value!r}")
    _, mon, day, hms, tz, year = parts
    if mon not in _MONTH_INDEX:
        raise ValueError(f"unknown month in timestamp: {value!r}")
    try:
        hour, minute, second = (int(p) for p in hms.split(":"))
        offset = _parse_tz_offset(tz)
        dt = datetime(int(year), _MONTH_INDEX[mon], int(day),
                      hour, minute, second, tzinfo=offset)
    except ValueError as exc:
        raise ValueError(f"bad archive timestamp {value!r}: {exc}") from None
    return dt.astimezone(timezone.utc)


def _parse_tz_offset(tz: str) -> timezone:
    if len(tz) != 5 or tz[0] not in "+-" or not tz[1:].isdigit():
        raise ValueError(f"bad timezone field {tz!r}")
    minutes = int(tz[1:3]) * 60 + int(tz[3:5])
    if tz[0] == "-":
        minutes = -minutes
    return timezone(timedelta(minutes=minutes))


def parse_timestamp(value: str) -> datetime:
    """Parse either the archive form or ISO-8601; always returns UTC."""
    try:
        return parse_archive_timestamp(value)
    except ValueError:
        pass
    iso = value.replace("Z", "+00:00")
    dt = datetime.fromisoformat(iso)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_archive_timestamp(dt: datetime) -> str:
    """Render an aware datetime back to the archive's +0000 form."""
    dt = dt.astimezone(timezone.utc)
    return (f"{_WEEKDAYS[dt.weekday()]} {_MONTHS[dt.month - 1]} "
            f"{dt.day:02d} {dt:%H:%M:%S} +0000 {dt.year}")


def format_iso_utc(dt: datetime) -> str:
    """Second-resolution ISO form used in all JSON/CSV outputs."""
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class TweetRecord:
    """One archived tweet, normalized.

    tweet_id is kept as a decimal-digit string so 64-bit ids survive any
    JSON round trip exactly. created_at is always timezone-aware UTC.
    """

    tweet_id: str
    text: str
    author_handle: str
    created_at: datetime
    retweet_count: int = 0
    lang: str | None = None
    live: Liveness = Liveness.UNKNOWN

    def __post_init__(self) -> None:
        if not self.tweet_id or not self.tweet_id.isdigit():
            raise ValueError(f"tweet_id must be a non-empty digit string: {self.tweet_id!r}")
        if self.created_at.tzinfo is None:
            raise ValueError("created_at must be timezone-aware")
        if self.created_at.utcoffset() != timedelta(0):
            object.__setattr__(self, "created_at",
                               self.created_at.astimezone(timezone.utc))
        if self.retweet_count < 0:
            raise ValueError("retweet_count must be non-negative")

    @property
    def day(self) -> date:
        """UTC calendar day, used for per-day stats and stratum bucketing."""
        return self.created_at.date()

    def with_liveness(self, live: Liveness) -> "TweetRecord":
        return replace(self, live=live)

    def to_dict(self) -> dict:
        return {
            "tweet_id": self.tweet_id,
            "text": self.text,
            "author_handle": self.author_handle,
            "created_at": format_iso_utc(self.created_at),
            "retweet_count": self.retweet_count,
            "lang": self.lang,
            "live": self.live.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TweetRecord":
        return cls(
            tweet_id=d["tweet_id"],
            text=d["text"],
            author_handle=d["author_handle"],
            created_at=parse_timestamp(d["created_at"]),
            retweet_count=int(d.get("retweet_count", 0)),
            lang=d.get("lang"),
            live=Liveness(d.get("live", "unknown")),
        )
