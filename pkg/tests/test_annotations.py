from datetime import datetime, timezone

import pytest

from workbench.annotations import (EXPORT_COLUMNS, AnnotationRecord,
                                   AnnotatorProfile, ValidationError,
                                   export_csv, export_json, import_csv,
                                   import_json)


def rec(**kwargs):
    base = dict(sample_id="jew2018", tweet_id="100", annotator_id="B", score=2)
    base.update(kwargs)
    return AnnotationRecord(**base)


class TestValidation:
    def test_valid_full_record(self):
        record = rec(score=2, sentiment=-2, calling_out=False,
                     comment="clear case", duration_seconds=41.2,
                     submitted_at=datetime(2019, 4, 1, 15, 30, tzinfo=timezone.utc))
        assert record.score == 2

    def test_score_out_of_range(self):
        with pytest.raises(ValidationError) as exc_info:
            rec(score=3)
        assert "score" in exc_info.value.errors

    def test_score_on_deleted_rejected(self):
        with pytest.raises(ValidationError) as exc_info:
            rec(deleted=True, score=-1)
        assert "score" in exc_info.value.errors

    def test_deleted_without_score_ok(self):
        record = rec(deleted=True, score=None)
        assert record.deleted and record.score is None

    def test_foreign_language_without_score_ok(self):
        record = rec(foreign_language=True, score=None)
        assert record.foreign_language

    def test_sentiment_on_foreign_rejected(self):
        with pytest.raises(ValidationError):
            rec(foreign_language=True, score=None, sentiment=0)

    def test_score_required_when_live(self):
        with pytest.raises(ValidationError) as exc_info:
            rec(score=None)
        assert "score" in exc_info.value.errors

    def test_sentiment_optional_when_live(self):
        assert rec(score=1, sentiment=None).sentiment is None
        assert rec(score=1, sentiment=0).sentiment == 0

    def test_alt_judgment_requires_ihra_disagree(self):
        with pytest.raises(ValidationError):
            rec(alt_judgment=1)
        record = rec(ihra_disagree=True, alt_judgment=1)
        assert record.alt_judgment == 1

    def test_calling_out_with_any_score(self):
        for score in (-2, -1, 0, 1, 2):
            assert rec(score=score, calling_out=True).calling_out

    def test_negative_duration_rejected(self):
        with pytest.raises(ValidationError):
            rec(duration_seconds=-1)

    def test_bad_tweet_id(self):
        with pytest.raises(ValidationError):
            rec(tweet_id="12x")

    def test_from_dict_type_errors_are_field_level(self):
        with pytest.raises(ValidationError) as exc_info:
            AnnotationRecord.from_dict({
                "sample_id": "s", "tweet_id": "1", "annotator_id": "B",
                "score": "2", "deleted": "no"})
        assert "score" in exc_info.value.errors
        assert "deleted" in exc_info.value.errors

    def test_annotator_profile(self):
        profile = AnnotatorProfile(annotator_id="B", display_name="Annotator B",
                                   training_ack=True)
        assert profile.training_ack
        with pytest.raises(ValueError):
            AnnotatorProfile(annotator_id="")


class TestExport:
    def records(self):
        return [
            rec(tweet_id="3", annotator_id="G", score=None, deleted=True,
                comment="gone", duration_seconds=5,
                submitted_at=datetime(2019, 4, 1, 10, 0, tzinfo=timezone.utc)),
            rec(tweet_id="10", score=-1, sentiment=1, duration_seconds=30.5,
                comment='has,comma and "quotes"',
                submitted_at=datetime(2019, 4, 1, 10, 5, tzinfo=timezone.utc)),
            rec(tweet_id="3", score=2, sentiment=-2, ihra_disagree=True,
                alt_judgment=-1, calling_out=True, duration_seconds=120,
                comment="line1\nline2",
                submitted_at=datetime(2019, 4, 1, 10, 2, 30, tzinfo=timezone.utc)),
        ]

    def test_header_and_row_count(self):
        text = export_csv(self.records())
        lines = text.splitlines()
        assert lines[0] == ",".join(EXPORT_COLUMNS)
        # the embedded newline comment spans two physical lines
        assert text.count("\njew2018,") == 3

    def test_rows_sorted_by_tweet_then_annotator(self):
        text = export_csv(self.records())
        body = text.split("\n", 1)[1]
        first = body.split(",")[1:3]
        assert first == ["3", "B"]

    def test_csv_round_trip_byte_identical(self):
        out1 = export_csv(self.records())
        back = import_csv(out1)
        out2 = export_csv(back)
        assert out1 == out2

    def test_json_round_trip_byte_identical(self):
        out1 = export_json(self.records())
        back = import_json(out1)
        out2 = export_json(back)
        assert out1 == out2

    def test_import_rejects_unknown_columns(self):
        with pytest.raises(ValidationError):
            import_csv("a,b,c\n1,2,3\n")

    def test_round_trip_preserves_values(self):
        back = {r.key: r for r in import_csv(export_csv(self.records()))}
        original = {r.key: r for r in self.records()}
        assert back == original

    def test_empty_score_cell_round_trips_none(self):
        text = export_csv([rec(deleted=True, score=None)])
        back = import_csv(text)
        assert back[0].score is None and back[0].deleted
