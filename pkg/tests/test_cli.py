import json
from datetime import datetime, timezone

import pytest

from workbench.annotations import AnnotationRecord, export_csv
from workbench.cli import run
from workbench.ingest import read_records, write_records

from conftest import make_record, spread_records


def test_unknown_subcommand_exits_1(capsys):
    assert run(["frobnicate"]) == 1


def test_unknown_flag_exits_1(capsys):
    assert run(["sample", "--bogus-flag"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


class TestIngest:
    def test_ingest_writes_records_and_stats(self, tmp_path, data_dir, capsys):
        out = tmp_path / "records.ndjson"
        stats = tmp_path / "stats.json"
        code = run(["ingest", "--archive", str(data_dir / "archive_mixed10.ndjson"),
                    "--query-name", "israel",
                    "--out", str(out), "--stats", str(stats)])
        assert code == 0
        records = read_records(out)
        assert len(records) == 4
        doc = json.loads(stats.read_text())
        assert doc["schema_version"] == 1
        assert doc["total_records"] == 4

    def test_ingest_missing_archive_exits_2(self, tmp_path):
        assert run(["ingest", "--archive", str(tmp_path / "none.ndjson"),
                    "--out", str(tmp_path / "o.ndjson")]) == 2

    def test_ingest_idempotent(self, tmp_path, data_dir):
        out1, out2 = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        for out in (out1, out2):
            run(["ingest", "--archive", str(data_dir / "archive_172.ndjson"),
                 "--out", str(out)])
        assert out1.read_text() == out2.read_text()

    def test_query_file(self, tmp_path, data_dir):
        qpath = tmp_path / "q.json"
        qpath.write_text(json.dumps({"pattern": "Jew", "mode": "prefix",
                                     "exclusions": ["jewelry", "jewerly", "jewery"]}))
        out = tmp_path / "records.ndjson"
        assert run(["ingest", "--archive", str(data_dir / "archive_mixed10.ndjson"),
                    "--query", str(qpath), "--out", str(out)]) == 0
        assert len(read_records(out)) == 5


class TestSample:
    @pytest.fixture
    def corpus_file(self, tmp_path):
        records = spread_records(120, datetime(2018, 1, 5, tzinfo=timezone.utc),
                                 step_hours=71)
        path = tmp_path / "corpus.ndjson"
        write_records(path, records)
        return path

    def test_default_2018_draw(self, tmp_path, corpus_file, capsys):
        out = tmp_path / "ids.txt"
        code = run(["sample", "--default-2018", "--seed", "42",
                    "--corpus", str(corpus_file), "--out", str(out)])
        assert code == 0
        sidecar = json.loads((tmp_path / "ids.txt.report.json").read_text())
        assert sidecar["plan"]["strata"][0]["allocation"] == 198
        assert sidecar["plan"]["strata"][1]["allocation"] == 26
        assert sidecar["plan"]["strata"][2]["allocation"] == 176
        assert sidecar["schema_version"] == 1

    def test_seed_required_with_default_plan(self, corpus_file, tmp_path):
        assert run(["sample", "--default-2018", "--corpus", str(corpus_file),
                    "--out", str(tmp_path / "x.txt")]) == 1

    def test_draw_deterministic(self, tmp_path, corpus_file):
        out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
        for out in (out1, out2):
            run(["sample", "--default-2018", "--seed", "42",
                 "--corpus", str(corpus_file), "--out", str(out)])
        assert out1.read_text() == out2.read_text()

    def test_plan_file(self, tmp_path, corpus_file):
        plan_doc = {
            "strata": [{"start_date": "2018-01-01", "end_date": "2018-12-31",
                        "stream_rate": 0.1, "allocation": 30}],
            "total": 30, "seed": 7,
        }
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(json.dumps(plan_doc))
        out = tmp_path / "ids.txt"
        assert run(["sample", "--plan", str(plan_path),
                    "--corpus", str(corpus_file), "--out", str(out)]) == 0
        assert len(out.read_text().split()) == 30


class TestReport:
    def test_moe_prints_paper_value(self, capsys):
        assert run(["report", "moe", "--n", "172", "--p", "0.2"]) == 0
        assert capsys.readouterr().out.strip() == "0.0598"

    def test_moe_json(self, capsys):
        assert run(["report", "moe", "--n", "247", "--p", "0.2", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["schema_version"] == 1
        assert round(doc["margin_of_error"], 2) == 0.05

    def test_size(self, capsys):
        assert run(["report", "size", "--p", "0.2", "--me", "0.04"]) == 0
        assert capsys.readouterr().out.strip() == "385"

    @pytest.fixture
    def annotations_file(self, tmp_path):
        records = []
        for i, (b, g) in enumerate([(2, 2), (1, -1), (-2, -2), (-1, -1)]):
            records.append(AnnotationRecord(sample_id="s1", tweet_id=str(100 + i),
                                            annotator_id="B", score=b))
            records.append(AnnotationRecord(sample_id="s1", tweet_id=str(100 + i),
                                            annotator_id="G", score=g))
        path = tmp_path / "annotations.csv"
        path.write_text(export_csv(records))
        return path

    def test_summary_text(self, annotations_file, capsys):
        assert run(["report", "summary", "--annotations", str(annotations_file),
                    "--sample-id", "s1", "--annotator", "B"]) == 0
        out = capsys.readouterr().out
        assert "Confident antisemitic" in out

    def test_summary_json(self, annotations_file, capsys):
        assert run(["report", "summary", "--annotations", str(annotations_file),
                    "--sample-id", "s1", "--annotator", "B", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["n"] == 4
        assert doc["confident_antisemitic"]["count"] == 1

    def test_agreement(self, annotations_file, capsys):
        assert run(["report", "agreement", "--annotations", str(annotations_file),
                    "--sample-id", "s1", "--a", "B", "--b", "G", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["n_common"] == 4
        assert doc["percent_agreement_5way"] == 0.75

    def test_unknown_annotator_exits_1(self, annotations_file):
        assert run(["report", "summary", "--annotations", str(annotations_file),
                    "--sample-id", "s1", "--annotator", "Z"]) == 1


class TestTimeline:
    @pytest.fixture
    def records_file(self, tmp_path):
        records = []
        records += spread_records(9, datetime(2018, 10, 27, tzinfo=timezone.utc),
                                  step_hours=0, prefix=1)
        records += spread_records(5, datetime(2018, 4, 3, tzinfo=timezone.utc),
                                  step_hours=0, prefix=2)
        records += spread_records(3, datetime(2018, 7, 10, tzinfo=timezone.utc),
                                  step_hours=0, prefix=3)
        path = tmp_path / "records.ndjson"
        write_records(path, records)
        return path

    def test_peaks(self, records_file, capsys):
        assert run(["timeline", "--records", str(records_file), "--top", "2",
                    "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["peaks"][0] == {"date": "2018-10-27", "count": 9}

    def test_csv_and_normalization(self, records_file, tmp_path, capsys):
        plan_path = tmp_path / "plan.json"
        from workbench.sampling import default_plan_2018
        plan_path.write_text(json.dumps(default_plan_2018(1).to_dict()))
        out = tmp_path / "timeline.csv"
        assert run(["timeline", "--records", str(records_file),
                    "--plan", str(plan_path), "--out", str(out), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["days"]["2018-07-10"] == 300
        assert doc["days"]["2018-10-27"] == 90
        lines = out.read_text().splitlines()
        assert lines[0] == "date,count"
        assert "2018-07-10,300" in lines


class TestCodebookValidate:
    def test_shipped_codebook_ok(self, capsys):
        assert run(["codebook-validate"]) == 0
        assert "11 contemporary examples" in capsys.readouterr().out

    def test_json_output(self, capsys):
        assert run(["codebook-validate", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["category_counts"]["contemporary_example"] == 11

    def test_broken_codebook_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps([{"entry_id": "X", "category": "slur",
                                    "surface_forms": [], "description": "d",
                                    "source_quote": "q"}]))
        assert run(["codebook-validate", "--codebook", str(bad)]) == 1

    def test_extra_symbols_accepted(self, tmp_path, capsys):
        extra = tmp_path / "extra.json"
        extra.write_text(json.dumps([{
            "entry_id": "EXTRA-SYM-1", "category": "symbol",
            "surface_forms": ["totenkopf"], "description": "skull",
            "source_quote": "external list"}]))
        assert run(["codebook-validate", "--extra", str(extra)]) == 0
