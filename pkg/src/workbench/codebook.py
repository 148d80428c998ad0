"""Structured codebook: definition sections, inferences, and a hit scanner.

The codebook ships as src/workbench/data/codebook.json, a JSON array of
entries with stable dotted ids (IHRA-1.0 ... IHRA-6.0 definition sections,
IHRA-3.1.1 ... IHRA-3.1.11 contemporary examples, ANNEX2-* inference
entries). Lexical entries carry lowercase surface forms; purely contextual
rules are description-only and never scanned.

Scanning is assistive: hits are shown to annotators as context cards and
are never a classification. A surface form matches where both neighbors
(or the string edges) are non-alphanumeric, so the number codes 88 and 18
do not fire inside longer numbers or words.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .query import find_occurrences

__all__ = [
    "CATEGORIES",
    "CodebookError",
    "UnknownEntryError",
    "CodebookEntry",
    "CodebookHit",
    "Codebook",
    "load_codebook",
    "load_manifest",
    "default_codebook_path",
    "default_manifest_path",
]

CATEGORIES = frozenset({
    "definition_section", "contemporary_example", "character_stereotype",
    "physical_stereotype", "imagery", "crime_allegation",
    "demonization_target", "phrase_meme", "punishment_call",
    "holocaust_denial", "nazism_endorsement", "israel_related",
    "symbol", "slur",
})

MANDATORY_SECTIONS = (
    "IHRA-1.0", "IHRA-2.0", "IHRA-3.0", "IHRA-3.1",
    "IHRA-4.0", "IHRA-5.0", "IHRA-6.0",
)
CONTEMPORARY_EXAMPLE_IDS = tuple(f"IHRA-3.1.{i}" for i in range(1, 12))


class CodebookError(ValueError):
    """The codebook file violates its schema or completeness rules."""


class UnknownEntryError(KeyError):
    def __init__(self, entry_id: str) -> None:
        super().__init__(entry_id)
        self.entry_id = entry_id

    def __str__(self) -> str:
        return f"no codebook entry with id {self.entry_id!r}"


@dataclass(frozen=True)
class CodebookEntry:
    entry_id: str
    category: str
    surface_forms: tuple[str, ...]
    description: str
    source_quote: str
    ambiguity_note: str | None = None
    subcategory: str | None = None

    def to_dict(self) -> dict:
        d = {
            "entry_id": self.entry_id,
            "category": self.category,
            "surface_forms": list(self.surface_forms),
            "description": self.description,
            "source_quote": self.source_quote,
        }
        if self.ambiguity_note is not None:
            d["ambiguity_note"] = self.ambiguity_note
        if self.subcategory is not None:
            d["subcategory"] = self.subcategory
        return d


@dataclass(frozen=True)
class CodebookHit:
    entry_id: str
    span: tuple[int, int]
    surface_form: str
    ambiguity_note: str | None = None

    def to_dict(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "span": list(self.span),
            "surface_form": self.surface_form,
            "ambiguity_note": self.ambiguity_note,
        }


def _entry_from_dict(obj: dict) -> CodebookEntry:
    try:
        entry_id = obj["entry_id"]
        category = obj["category"]
        forms = obj.get("surface_forms", [])
        description = obj["description"]
        source_quote = obj["source_quote"]
    except KeyError as exc:
        raise CodebookError(f"entry missing field {exc}") from None
    if category not in CATEGORIES:
        raise CodebookError(f"{entry_id}: unknown category {category!r}")
    if not isinstance(forms, list) or any(not isinstance(f, str) or not f for f in forms):
        raise CodebookError(f"{entry_id}: surface_forms must be non-empty strings")
    for form in forms:
        if form != form.lower():
            raise CodebookError(f"{entry_id}: surface form {form!r} must be lowercase")
    return CodebookEntry(
        entry_id=entry_id,
        category=category,
        surface_forms=tuple(forms),
        description=description,
        source_quote=source_quote,
        ambiguity_note=obj.get("ambiguity_note"),
        subcategory=obj.get("subcategory"),
    )


def _is_boundary(text: str, index: int) -> bool:
    return index < 0 or index >= len(text) or not text[index].isalnum()


class Codebook:
    """Validated, immutable entry collection with an assistive scanner."""

    def __init__(self, entries: Iterable[CodebookEntry]) -> None:
        self.entries: tuple[CodebookEntry, ...] = tuple(entries)
        self._by_id: dict[str, CodebookEntry] = {}
        for entry in self.entries:
            if entry.entry_id in self._by_id:
                raise CodebookError(f"duplicate entry id {entry.entry_id!r}")
            self._by_id[entry.entry_id] = entry
        self._validate()
        # form -> entries carrying it; one form may belong to several entries
        self._by_form: dict[str, list[CodebookEntry]] = {}
        for entry in self.entries:
            for form in entry.surface_forms:
                self._by_form.setdefault(form, []).append(entry)

    def _validate(self) -> None:
        for section in MANDATORY_SECTIONS:
            if section not in self._by_id:
                raise CodebookError(f"missing mandatory definition section {section}")
        examples = sorted(e.entry_id for e in self.entries
                          if e.category == "contemporary_example")
        if examples != sorted(CONTEMPORARY_EXAMPLE_IDS):
            raise CodebookError(
                "contemporary_example entries must be exactly "
                f"{CONTEMPORARY_EXAMPLE_IDS}, got {tuple(examples)}")
        for entry in self.entries:
            if entry.category == "symbol" and not entry.surface_forms:
                raise CodebookError(f"{entry.entry_id}: symbol entries need a surface form")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, entry_id: str) -> bool:
        return entry_id in self._by_id

    def get(self, entry_id: str) -> CodebookEntry:
        try:
            return self._by_id[entry_id]
        except KeyError:
            raise UnknownEntryError(entry_id) from None

    def category_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.entries:
            counts[entry.category] = counts.get(entry.category, 0) + 1
        return dict(sorted(counts.items()))

    def scan(self, text: str) -> list[CodebookHit]:
        """All surface-form occurrences at non-alphanumeric boundaries.

        Deterministic: hits sorted by (start, end, entry_id). Advisory only.
        """
        hits: list[CodebookHit] = []
        for form, owners in self._by_form.items():
            for start in find_occurrences(text, form):
                end = start + len(form)
                if not _is_boundary(text, start - 1) or not _is_boundary(text, end):
                    continue
                for entry in owners:
                    hits.append(CodebookHit(
                        entry_id=entry.entry_id,
                        span=(start, end),
                        surface_form=form,
                        ambiguity_note=entry.ambiguity_note,
                    ))
        hits.sort(key=lambda h: (h.span, h.entry_id))
        return hits

    def check_manifest(self, manifest: Mapping) -> None:
        """Assert the category counts recorded in the manifest file."""
        expected = manifest.get("category_counts", manifest)
        actual = self.category_counts()
        if dict(expected) != actual:
            raise CodebookError(
                f"category counts {actual} do not match manifest {dict(expected)}")
        total = manifest.get("entry_count")
        if total is not None and total != len(self.entries):
            raise CodebookError(f"entry count {len(self.entries)} != manifest {total}")


def default_codebook_path() -> Path:
    return Path(str(resources.files("workbench").joinpath("data/codebook.json")))


def default_manifest_path() -> Path:
    return Path(str(resources.files("workbench").joinpath("data/codebook_manifest.json")))


def load_codebook(path: str | Path | None = None,
                  extra_paths: Iterable[str | Path] = ()) -> Codebook:
    """Load and validate the codebook (the shipped one by default).

    extra_paths may add user-supplied entries in the same schema, e.g. an
    externally maintained hate-symbol list; ids must not collide.
    """
    paths = [Path(path) if path is not None else default_codebook_path()]
    paths.extend(Path(p) for p in extra_paths)
    entries: list[CodebookEntry] = []
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise CodebookError(f"{p}: invalid JSON: {exc}") from None
        if not isinstance(raw, list):
            raise CodebookError(f"{p}: codebook file must be a JSON array")
        entries.extend(_entry_from_dict(obj) for obj in raw)
    return Codebook(entries)


def load_manifest(path: str | Path | None = None) -> dict:
    p = Path(path) if path is not None else default_manifest_path()
    with open(p, encoding="utf-8") as fh:
        return json.load(fh)
