import json

import pytest

from workbench.codebook import (CATEGORIES, CodebookError, UnknownEntryError,
                                load_codebook, load_manifest)


@pytest.fixture(scope="module")
def book():
    return load_codebook()


class TestLoad:
    def test_shipped_codebook_loads(self, book):
        assert len(book) > 100

    def test_exactly_eleven_contemporary_examples(self, book):
        examples = [e for e in book.entries if e.category == "contemporary_example"]
        assert len(examples) == 11
        assert sorted(e.entry_id for e in examples) == \
            sorted(f"IHRA-3.1.{i}" for i in range(1, 12))

    def test_definition_sections_present(self, book):
        for section in ("IHRA-1.0", "IHRA-2.0", "IHRA-3.0", "IHRA-4.0",
                        "IHRA-5.0", "IHRA-6.0"):
            assert section in book

    def test_symbol_88_and_18(self, book):
        e88 = book.get("ANNEX2-SYM-88")
        assert "Heil Hitler" in e88.description
        assert "88" in e88.surface_forms
        e18 = book.get("ANNEX2-SYM-18")
        assert "Adolf Hitler" in e18.description
        assert "18" in e18.surface_forms

    def test_every_category_represented(self, book):
        counts = book.category_counts()
        assert set(counts) == set(CATEGORIES)
        assert all(n >= 1 for n in counts.values())

    def test_manifest_matches(self, book):
        book.check_manifest(load_manifest())

    def test_all_entries_quote_their_source(self, book):
        assert all(e.source_quote for e in book.entries)
        assert all(e.description for e in book.entries)

    def test_symbol_entries_have_surface_forms(self, book):
        for entry in book.entries:
            if entry.category == "symbol":
                assert entry.surface_forms

    def test_endorsement_subcategories(self, book):
        subs = {e.subcategory for e in book.entries if e.subcategory}
        assert subs == {"unequivocal_endorsement", "context_dependent_endorsement"}

    def test_duplicate_id_rejected(self, tmp_path):
        entry = {"entry_id": "X-1", "category": "slur", "surface_forms": ["zzz"],
                 "description": "d", "source_quote": "q"}
        path = tmp_path / "dup.json"
        path.write_text(json.dumps([entry, entry]))
        with pytest.raises(CodebookError):
            load_codebook(path)

    def test_missing_mandatory_section_rejected(self, tmp_path):
        path = tmp_path / "thin.json"
        path.write_text(json.dumps([{
            "entry_id": "IHRA-1.0", "category": "definition_section",
            "surface_forms": [], "description": "d", "source_quote": "q"}]))
        with pytest.raises(CodebookError):
            load_codebook(path)

    def test_extra_entries_merge(self, book, tmp_path):
        extra = tmp_path / "extra_symbols.json"
        extra.write_text(json.dumps([{
            "entry_id": "EXTRA-SYM-totenkopf", "category": "symbol",
            "surface_forms": ["totenkopf"], "description": "skull emblem",
            "source_quote": "user-supplied symbol list"}]))
        merged = load_codebook(extra_paths=[extra])
        assert "EXTRA-SYM-totenkopf" in merged
        assert len(merged) == len(book) + 1

    def test_extra_entry_id_collision_rejected(self, tmp_path):
        extra = tmp_path / "extra.json"
        extra.write_text(json.dumps([{
            "entry_id": "ANNEX2-SYM-88", "category": "symbol",
            "surface_forms": ["88"], "description": "dup", "source_quote": "q"}]))
        with pytest.raises(CodebookError):
            load_codebook(extra_paths=[extra])

    def test_uppercase_surface_form_rejected(self, tmp_path):
        path = tmp_path / "case.json"
        path.write_text(json.dumps([{
            "entry_id": "X-1", "category": "slur", "surface_forms": ["Kike"],
            "description": "d", "source_quote": "q"}]))
        with pytest.raises(CodebookError):
            load_codebook(path)


class TestGetSection:
    def test_self_determination_quote(self, book):
        assert "right to self-determination" in book.get("IHRA-3.1.7").source_quote

    def test_nazi_comparison_quote(self, book):
        assert "comparisons of contemporary Israeli policy to that of the Nazis" \
            in book.get("IHRA-3.1.10").source_quote

    def test_unknown_id(self, book):
        with pytest.raises(UnknownEntryError):
            book.get("IHRA-9.9.9")


class TestScan:
    def test_symbol_88_in_context(self, book):
        hits = book.scan("the number 88 in his handle")
        assert any(h.entry_id == "ANNEX2-SYM-88" for h in hits)

    def test_88_not_inside_longer_number(self, book):
        assert not any(h.entry_id == "ANNEX2-SYM-88"
                       for h in book.scan("born in 1988, height 188cm"))

    def test_kike_footballer_ambiguity_note(self, book):
        hits = book.scan("Kike scored twice for Eibar")
        kike = [h for h in hits if h.entry_id == "ANNEX2-SLUR-kike"]
        assert kike and "Enrique" in kike[0].ambiguity_note

    def test_no_triggers_no_hits(self, book):
        assert book.scan("good morning everyone") == []

    def test_multiword_phrase(self, book):
        hits = book.scan("they call it the Synagogue of Satan online")
        assert any(h.entry_id == "ANNEX2-PHRASE-synagogue-of-satan" for h in hits)

    def test_case_insensitive(self, book):
        assert book.scan("ZIONIST ENTITY rhetoric") != []

    def test_hits_sorted_and_deterministic(self, book):
        text = "88 heil hitler talk plus kike and 18"
        hits = book.scan(text)
        assert hits == book.scan(text)
        starts = [h.span[0] for h in hits]
        assert starts == sorted(starts)

    def test_soundness_spans_rematch(self, book):
        texts = [
            "the number 88 in his handle",
            "Kike scored twice for Eibar",
            "heil hitler in the replies",
            "warsaw ghetto comparison thread",
            "talmud discussion group",
            "$$ 18 $$ and some more",
        ]
        for text in texts:
            for hit in book.scan(text):
                start, end = hit.span
                assert text[start:end].lower() == hit.surface_form
                if start > 0:
                    assert not text[start - 1].isalnum()
                if end < len(text):
                    assert not text[end].isalnum()

    def test_scan_output_advisory_shape(self, book):
        hit = book.scan("the number 88 here")[0]
        doc = hit.to_dict()
        assert set(doc) == {"entry_id", "span", "surface_form", "ambiguity_note"}
