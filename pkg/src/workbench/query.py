"""Keyword query semantics for the two corpus queries.

Two modes:

* ``word_boundary`` — the pattern counts as a match only where both the
  preceding and following character (or the string edge) are non-letters.
  "Israel!" matches, "Israelis" does not.
* ``prefix`` — only the preceding character (or string start) must be a
  non-letter; any continuation is allowed. "Jewish" and "#Jew" match.

"Letter" means a Unicode letter (``str.isalpha``). Digits, punctuation,
underscore, and emoji all act as boundaries. Matching is case-insensitive
by default, compared scalar-by-scalar so spans always index the original
text.

Prefix-mode spans cover the whole matched token (the maximal letter run
starting at the match), which is what the jewelry exclusion filter tests
membership against.
"""

from __future__ import annotations

from dataclasses import dataclass

from .records import TweetRecord

__all__ = [
    "WORD_BOUNDARY",
    "PREFIX",
    "JEWELRY_EXCLUSIONS",
    "QuerySpec",
    "MatchResult",
    "Matcher",
    "compile",
    "jewelry_excluded",
    "israel_spec",
    "jew_spec",
    "find_occurrences",
]

WORD_BOUNDARY = "word_boundary"
PREFIX = "prefix"
_MODES = (WORD_BOUNDARY, PREFIX)

# "jewelry" plus its two common misspellings; tweets whose only Jew-prefixed
# tokens are these get discarded from annotation samples.
JEWELRY_EXCLUSIONS = ("jewelry", "jewerly", "jewery")


@dataclass(frozen=True)
class QuerySpec:
    pattern: str
    mode: str = WORD_BOUNDARY
    exclusions: tuple[str, ...] = ()
    case_sensitive: bool = False

    def __post_init__(self) -> None:
        if not self.pattern:
            raise ValueError("pattern must be non-empty")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        object.__setattr__(self, "exclusions",
                           tuple(e.lower() for e in self.exclusions))
        if self.exclusions and self.mode != PREFIX:
            raise ValueError("exclusions are only meaningful in prefix mode")

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "mode": self.mode,
            "exclusions": list(self.exclusions),
            "case_sensitive": self.case_sensitive,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QuerySpec":
        return cls(
            pattern=d["pattern"],
            mode=d.get("mode", WORD_BOUNDARY),
            exclusions=tuple(d.get("exclusions", ())),
            case_sensitive=bool(d.get("case_sensitive", False)),
        )


def israel_spec() -> QuerySpec:
    return QuerySpec(pattern="Israel", mode=WORD_BOUNDARY)


def jew_spec() -> QuerySpec:
    return QuerySpec(pattern="Jew", mode=PREFIX, exclusions=JEWELRY_EXCLUSIONS)


@dataclass(frozen=True)
class MatchResult:
    matched: bool
    spans: tuple[tuple[int, int], ...] = ()
    excluded_only: bool = False


def _chars_equal_ci(a: str, b_lower: str) -> bool:
    return a == b_lower or a.lower() == b_lower


def find_occurrences(text: str, pattern: str, case_sensitive: bool = False) -> list[int]:
    """Start offsets of every occurrence of pattern in text (no boundary rule).

    Case-insensitive comparison is done per scalar so offsets always refer
    to the original string even for characters with multi-char lowercase
    mappings.
    """
    m = len(pattern)
    if m == 0 or m > len(text):
        return []
    if case_sensitive:
        starts = []
        i = text.find(pattern)
        while i != -1:
            starts.append(i)
            i = text.find(pattern, i + 1)
        return starts
    pat = [c.lower() for c in pattern]
    first = pat[0]
    starts = []
    for i in range(len(text) - m + 1):
        if not _chars_equal_ci(text[i], first):
            continue
        if all(_chars_equal_ci(text[i + k], pat[k]) for k in range(1, m)):
            starts.append(i)
    return starts


class Matcher:
    """Compiled query; immutable and safe to share across threads."""

    def __init__(self, spec: QuerySpec) -> None:
        self.spec = spec
        self._exclusions = frozenset(spec.exclusions)

    def find_spans(self, text: str) -> list[tuple[int, int]]:
        spec = self.spec
        n = len(text)
        m = len(spec.pattern)
        spans = []
        for i in find_occurrences(text, spec.pattern, spec.case_sensitive):
            if i > 0 and text[i - 1].isalpha():
                continue
            end = i + m
            if spec.mode == WORD_BOUNDARY:
                if end < n and text[end].isalpha():
                    continue
            else:  # prefix: extend the span over the whole letter run
                while end < n and text[end].isalpha():
                    end += 1
                end = max(end, i + m)
            spans.append((i, end))
        return spans

    def matches(self, text: str) -> MatchResult:
        spans = self.find_spans(text)
        if not spans:
            return MatchResult(matched=False)
        excluded_only = False
        if self.spec.mode == PREFIX and self._exclusions:
            excluded_only = all(
                text[s:e].lower() in self._exclusions for s, e in spans
            )
        return MatchResult(matched=True, spans=tuple(spans),
                           excluded_only=excluded_only)


def compile(spec: QuerySpec) -> Matcher:  # noqa: A001 - mirrors re.compile
    return Matcher(spec)


def jewelry_excluded(record: TweetRecord, matcher: Matcher) -> bool:
    """True when every Jew-prefixed token in the tweet is a jewelry term.

    Such tweets are dropped from annotation samples; a standalone "Jew"
    token anywhere in the text forces retention.
    """
    return matcher.matches(record.text).excluded_only
