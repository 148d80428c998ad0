"""Deterministic stratified sampling and the annotatability filter.

Randomness is pinned down so a draw reproduces anywhere:

* per-stratum seeds are the splitmix64 output stream of the plan seed
  (stratum i gets ``splitmix64_at(plan.seed, i)``);
* each stratum seed drives an MT19937 generator (``random.Random``), using
  only its ``random()`` doubles, which CPython guarantees stable;
* selection is a partial Fisher-Yates over the stratum population sorted by
  (created_at, tweet_id), so the draw depends on corpus contents, never on
  input order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Sequence

from .query import Matcher, jewelry_excluded
from .records import Liveness, TweetRecord

__all__ = [
    "StratumSpec",
    "SamplePlan",
    "SampleDraw",
    "DiscardReport",
    "default_plan_2018",
    "draw",
    "filter_for_annotation",
    "write_draw_files",
    "DEFAULT_ALLOWED_LANGS",
]

_M64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15

DEFAULT_ALLOWED_LANGS = ("en", "und")


def _splitmix64_at(seed: int, index: int) -> int:
    """index-th output of the splitmix64 stream started at seed."""
    x = (seed + (index + 1) * _SPLITMIX_GAMMA) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class StratumSpec:
    """One date range with its own stream-capture rate and allocation."""

    start_date: date
    end_date: date
    stream_rate: float
    allocation: int

    def __post_init__(self) -> None:
        if self.start_date > self.end_date:
            raise ValueError("start_date must be <= end_date")
        if not 0 < self.stream_rate <= 1:
            raise ValueError("stream_rate must be in (0, 1]")
        if self.allocation < 0:
            raise ValueError("allocation must be non-negative")

    def contains(self, day: date) -> bool:
        return self.start_date <= day <= self.end_date

    def span_days(self) -> int:
        return (self.end_date - self.start_date).days + 1

    def to_dict(self) -> dict:
        return {
            "start_date": self.start_date.isoformat(),
            "end_date": self.end_date.isoformat(),
            "stream_rate": self.stream_rate,
            "allocation": self.allocation,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StratumSpec":
        return cls(
            start_date=date.fromisoformat(d["start_date"]),
            end_date=date.fromisoformat(d["end_date"]),
            stream_rate=float(d["stream_rate"]),
            allocation=int(d["allocation"]),
        )


@dataclass(frozen=True)
class SamplePlan:
    strata: tuple[StratumSpec, ...]
    total: int
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "strata", tuple(self.strata))
        if sum(s.allocation for s in self.strata) != self.total:
            raise ValueError("stratum allocations must sum to total")
        for prev, cur in zip(self.strata, self.strata[1:]):
            if cur.start_date <= prev.end_date:
                raise ValueError("strata must be ordered and non-overlapping")

    def stratum_for(self, day: date) -> StratumSpec | None:
        for s in self.strata:
            if s.contains(day):
                return s
        return None

    def to_dict(self) -> dict:
        return {
            "strata": [s.to_dict() for s in self.strata],
            "total": self.total,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SamplePlan":
        return cls(
            strata=tuple(StratumSpec.from_dict(s) for s in d["strata"]),
            total=int(d["total"]),
            seed=int(d["seed"]),
        )


@dataclass(frozen=True)
class SampleDraw:
    plan: SamplePlan
    tweet_ids: tuple[str, ...]
    per_stratum_counts: tuple[int, ...]
    shortfalls: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "plan": self.plan.to_dict(),
            "tweet_ids": list(self.tweet_ids),
            "per_stratum_counts": list(self.per_stratum_counts),
            "shortfalls": list(self.shortfalls),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampleDraw":
        return cls(
            plan=SamplePlan.from_dict(d["plan"]),
            tweet_ids=tuple(d["tweet_ids"]),
            per_stratum_counts=tuple(d["per_stratum_counts"]),
            shortfalls=tuple(d["shortfalls"]),
        )


def default_plan_2018(seed: int) -> SamplePlan:
    """The 400-tweet 2018 design: 198 + 26 + 176 across the three stream periods.

    The middle stratum covers the July 1-25 window where the archive holds a
    one-percent stream instead of the usual ten percent.
    """
    strata = (
        StratumSpec(date(2018, 1, 1), date(2018, 6, 30), 0.10, 198),
        StratumSpec(date(2018, 7, 1), date(2018, 7, 25), 0.01, 26),
        StratumSpec(date(2018, 7, 26), date(2018, 12, 31), 0.10, 176),
    )
    return SamplePlan(strata=strata, total=400, seed=seed)


def _canonical_key(record: TweetRecord) -> tuple:
    return (record.created_at, int(record.tweet_id))


def _sample_indices(rng: random.Random, n: int, k: int) -> list[int]:
    """Partial Fisher-Yates over range(n), driven only by rng.random()."""
    idx = list(range(n))
    for i in range(k):
        j = i + int(rng.random() * (n - i))
        if j >= n:  # guard against float rounding at the top of the range
            j = n - 1
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:k]


def draw(plan: SamplePlan, corpus: Iterable[TweetRecord]) -> SampleDraw:
    """Per-stratum simple random sample without replacement.

    Pure function of (plan, corpus contents): shuffling the corpus does not
    change the result. Output ids are ordered by timestamp. A stratum whose
    population is smaller than its allocation contributes everything it has
    and records the shortfall.
    """
    corpus = list(corpus)
    chosen_ids: list[str] = []
    counts: list[int] = []
    shortfalls: list[int] = []
    for index, stratum in enumerate(plan.strata):
        population = [r for r in corpus if stratum.contains(r.day)]
        population.sort(key=_canonical_key)
        # drop duplicate ids (first occurrence wins) so the draw stays
        # without-replacement even over a messy corpus
        seen: set[str] = set()
        unique = []
        for r in population:
            if r.tweet_id not in seen:
                seen.add(r.tweet_id)
                unique.append(r)
        k = min(stratum.allocation, len(unique))
        rng = random.Random(_splitmix64_at(plan.seed, index))
        picked = [unique[i] for i in _sample_indices(rng, len(unique), k)]
        picked.sort(key=_canonical_key)
        chosen_ids.extend(r.tweet_id for r in picked)
        counts.append(k)
        shortfalls.append(stratum.allocation - k)
    return SampleDraw(
        plan=plan,
        tweet_ids=tuple(chosen_ids),
        per_stratum_counts=tuple(counts),
        shortfalls=tuple(shortfalls),
    )


@dataclass
class DiscardReport:
    """Why drawn tweets were dropped before annotation, one count per reason."""

    deleted: int = 0
    unknown_liveness: int = 0
    foreign_language: int = 0
    jewelry: int = 0

    @property
    def total(self) -> int:
        return self.deleted + self.unknown_liveness + self.foreign_language + self.jewelry

    def to_dict(self) -> dict:
        return {
            "deleted": self.deleted,
            "unknown_liveness": self.unknown_liveness,
            "foreign_language": self.foreign_language,
            "jewelry": self.jewelry,
            "total_discarded": self.total,
        }


def filter_for_annotation(
    sample: "SampleDraw | Sequence[str]",
    records: Iterable[TweetRecord],
    *,
    keep_unknown: bool = False,
    allowed_langs: Sequence[str] = DEFAULT_ALLOWED_LANGS,
    jewelry_matcher: Matcher | None = None,
) -> tuple[list[TweetRecord], DiscardReport]:
    """Reduce a draw (or a plain tweet-id list) to the annotatable subset.

    Discards deleted tweets, unknown-liveness tweets (unless keep_unknown),
    foreign-language tweets (lang outside allowed_langs; a missing tag is
    treated like "und" and kept), and - when a jewelry matcher is supplied -
    tweets whose only Jew-prefixed tokens are jewelry terms. Reasons are
    counted in that precedence order, one reason per discarded tweet.
    """
    tweet_ids = sample.tweet_ids if isinstance(sample, SampleDraw) else tuple(sample)
    by_id = {r.tweet_id: r for r in records}
    allowed = {lang.lower() for lang in allowed_langs}
    kept: list[TweetRecord] = []
    report = DiscardReport()
    for tweet_id in tweet_ids:
        try:
            record = by_id[tweet_id]
        except KeyError:
            raise ValueError(f"drawn tweet_id {tweet_id} missing from records") from None
        if record.live is Liveness.DELETED:
            report.deleted += 1
        elif record.live is Liveness.UNKNOWN and not keep_unknown:
            report.unknown_liveness += 1
        elif record.lang is not None and record.lang.lower() not in allowed:
            report.foreign_language += 1
        elif jewelry_matcher is not None and jewelry_excluded(record, jewelry_matcher):
            report.jewelry += 1
        else:
            kept.append(record)
    return kept, report


def write_draw_files(sample: SampleDraw, ids_path, report_path) -> None:
    """One tweet_id per line, plus a JSON sidecar with the full draw."""
    with open(ids_path, "w", encoding="utf-8") as fh:
        for tweet_id in sample.tweet_ids:
            fh.write(tweet_id + "\n")
    sidecar = {"schema_version": 1, "kind": "sample_draw", **sample.to_dict()}
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
