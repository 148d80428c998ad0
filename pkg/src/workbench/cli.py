"""Command-line entry point: ingest -> sample -> serve -> report.

Subcommands: ingest, sample, serve, report (moe | summary | agreement),
timeline, codebook-validate. Every file output carries a schema_version
field. Exit codes: 0 success, 1 validation or usage error, 2 I/O error.
WORKBENCH_DATA_DIR overrides the service data directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analytics, annotations, codebook, ingest, query, sampling
from .records import Liveness

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _build_parser() -> _Parser:
    parser = _Parser(prog="workbench",
                     description="Corpus annotation workbench pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse an archive into a normalized record file")
    p.add_argument("--archive", required=True, help="line-delimited JSON archive (may be gzipped)")
    p.add_argument("--query", help="QuerySpec JSON file")
    p.add_argument("--query-name", choices=["israel", "jew"],
                   help="built-in query instead of --query")
    p.add_argument("--out", required=True, help="normalized record file to write")
    p.add_argument("--stats", help="stats JSON file to write")
    p.add_argument("--json", action="store_true", help="machine-readable stdout")

    p = sub.add_parser("sample", help="draw a stratified sample from a record file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--default-2018", action="store_true",
                       help="use the 198/26/176 three-stratum 2018 plan")
    group.add_argument("--plan", help="SamplePlan JSON file")
    p.add_argument("--seed", type=int, help="draw seed (required with --default-2018)")
    p.add_argument("--corpus", required=True, help="normalized record file")
    p.add_argument("--out", required=True, help="tweet-id-per-line output file")
    p.add_argument("--report", help="JSON sidecar (default: <out>.report.json)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--data-dir", default=os.environ.get("WORKBENCH_DATA_DIR", "./workbench-data"))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--with-session", action="store_true",
                   help="create a session before serving")
    p.add_argument("--session-id")
    p.add_argument("--sample-id")
    p.add_argument("--records", help="normalized record file for the session tweets")
    p.add_argument("--draw", help="tweet-id-per-line draw file")
    p.add_argument("--annotators", help="comma-separated annotator ids")
    p.add_argument("--liveness", help="JSON file mapping tweet_id to live/deleted")
    p.add_argument("--keep-unknown", action="store_true",
                   help="keep unknown-liveness tweets in the session")
    p.add_argument("--allow-lang", default="en,und",
                   help="comma-separated lang allow-list")
    p.add_argument("--jewelry-filter", action="store_true",
                   help="apply the jewelry exclusion to the session sample")

    p = sub.add_parser("report", help="margin-of-error, summary, and agreement reports")
    rsub = p.add_subparsers(dest="report_kind", required=True)

    rp = rsub.add_parser("moe", help="margin of error for a sample size")
    rp.add_argument("--n", type=int, required=True)
    rp.add_argument("--p", type=float, required=True)
    rp.add_argument("--confidence", type=float, default=0.95)
    rp.add_argument("--json", action="store_true")

    rp = rsub.add_parser("size", help="required sample size for a margin of error")
    rp.add_argument("--p", type=float, required=True)
    rp.add_argument("--me", type=float, required=True)
    rp.add_argument("--confidence", type=float, default=0.95)
    rp.add_argument("--json", action="store_true")

    rp = rsub.add_parser("summary", help="per-annotator category counts")
    rp.add_argument("--annotations", required=True, help="export file (.csv or .json)")
    rp.add_argument("--sample-id", required=True)
    rp.add_argument("--annotator", required=True)
    rp.add_argument("--moe-p", type=float, default=0.2)
    rp.add_argument("--json", action="store_true")

    rp = rsub.add_parser("agreement", help="pairwise annotator agreement")
    rp.add_argument("--annotations", required=True)
    rp.add_argument("--sample-id", required=True)
    rp.add_argument("--a", required=True, dest="annotator_a")
    rp.add_argument("--b", required=True, dest="annotator_b")
    rp.add_argument("--json", action="store_true")

    p = sub.add_parser("timeline", help="per-day counts and peaks")
    p.add_argument("--records", required=True, help="normalized record file")
    p.add_argument("--plan", help="SamplePlan JSON for stream-rate normalization")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--out", help="date,count CSV output")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("codebook-validate", help="validate the shipped codebook")
    p.add_argument("--codebook", help="codebook JSON (default: shipped)")
    p.add_argument("--manifest", help="manifest JSON (default: shipped)")
    p.add_argument("--extra", action="append", default=[],
                   help="extra entry files in the same schema")
    p.add_argument("--json", action="store_true")

    return parser


def _load_matcher(args) -> query.Matcher | None:
    if args.query and args.query_name:
        raise ValueError("--query and --query-name are mutually exclusive")
    if args.query_name:
        spec = query.israel_spec() if args.query_name == "israel" else query.jew_spec()
        return query.compile(spec)
    if args.query:
        with open(args.query, encoding="utf-8") as fh:
            return query.compile(query.QuerySpec.from_dict(json.load(fh)))
    return None


def _cmd_ingest(args) -> int:
    matcher = _load_matcher(args)
    stream = ingest.ingest_archive(args.archive, matcher)
    count = ingest.write_records(args.out, stream)
    stats = {"schema_version": 1, **stream.stats.to_dict()}
    if args.stats:
        with open(args.stats, "w", encoding="utf-8") as fh:
            json.dump(stats, fh, indent=2)
            fh.write("\n")
    if args.json:
        print(json.dumps(stats))
    else:
        print(f"wrote {count} records to {args.out} "
              f"({stats['parse_failures']} parse failures, "
              f"{stats['distinct_users']} distinct users)")
    return EXIT_OK


def _cmd_sample(args) -> int:
    if args.default_2018:
        if args.seed is None:
            raise ValueError("--seed is required with --default-2018")
        plan = sampling.default_plan_2018(args.seed)
    else:
        with open(args.plan, encoding="utf-8") as fh:
            plan_doc = json.load(fh)
        plan = sampling.SamplePlan.from_dict(plan_doc)
        if args.seed is not None:
            plan = sampling.SamplePlan(strata=plan.strata, total=plan.total,
                                       seed=args.seed)
    corpus = ingest.read_records(args.corpus)
    sample = sampling.draw(plan, corpus)
    report_path = args.report or (args.out + ".report.json")
    sampling.write_draw_files(sample, args.out, report_path)
    summary = {
        "schema_version": 1,
        "drawn": len(sample.tweet_ids),
        "per_stratum_counts": list(sample.per_stratum_counts),
        "shortfalls": list(sample.shortfalls),
        "ids_file": args.out,
        "report_file": report_path,
    }
    print(json.dumps(summary) if args.json else
          f"drew {summary['drawn']} tweets "
          f"(per stratum: {summary['per_stratum_counts']}, "
          f"shortfalls: {summary['shortfalls']}) -> {args.out}")
    return EXIT_OK


def _session_records(args):
    records = ingest.read_records(args.records)
    if args.liveness:
        with open(args.liveness, encoding="utf-8") as fh:
            verdicts = json.load(fh)
        records, failures = ingest.apply_liveness(
            records, lambda tweet_id: Liveness(verdicts[tweet_id]))
        if failures:
            print(f"liveness unknown for {len(failures)} tweets", file=sys.stderr)
    with open(args.draw, encoding="utf-8") as fh:
        tweet_ids = [line.strip() for line in fh if line.strip()]
    jewelry = query.compile(query.jew_spec()) if args.jewelry_filter else None
    keep, report = sampling.filter_for_annotation(
        tweet_ids, records,
        keep_unknown=args.keep_unknown,
        allowed_langs=tuple(args.allow_lang.split(",")),
        jewelry_matcher=jewelry)
    return keep, report


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import AnnotationStore, create_app

    store = AnnotationStore(args.data_dir)
    if args.with_session:
        for required in ("sample_id", "records", "draw", "annotators"):
            if not getattr(args, required):
                raise ValueError(f"--with-session requires --{required.replace('_', '-')}")
        keep, discards = _session_records(args)
        sid = store.create_session(
            sample_id=args.sample_id,
            records=keep,
            annotators=[a.strip() for a in args.annotators.split(",") if a.strip()],
            session_id=args.session_id)
        print(f"session {sid}: {len(keep)} annotatable tweets "
              f"(discarded {discards.total}: {discards.to_dict()})")
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _load_annotation_file(path: str) -> list[annotations.AnnotationRecord]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return annotations.import_json(text)
    return annotations.import_csv(text)


def _scored(records, sample_id, annotator_id):
    return [r for r in records
            if r.sample_id == sample_id and r.annotator_id == annotator_id
            and not r.deleted and not r.foreign_language]


def _cmd_report(args) -> int:
    if args.report_kind == "moe":
        moe = analytics.margin_of_error(
            analytics.MoEQuery(n=args.n, p=args.p, confidence=args.confidence))
        print(json.dumps({"schema_version": 1, "n": args.n, "p": args.p,
                          "confidence": args.confidence, "margin_of_error": moe})
              if args.json else f"{moe:.4f}")
        return EXIT_OK
    if args.report_kind == "size":
        n = analytics.required_sample_size(args.p, args.me, args.confidence)
        print(json.dumps({"schema_version": 1, "p": args.p, "me": args.me,
                          "confidence": args.confidence, "required_sample_size": n})
              if args.json else str(n))
        return EXIT_OK
    records = _load_annotation_file(args.annotations)
    if args.report_kind == "summary":
        summary = analytics.summarize(
            _scored(records, args.sample_id, args.annotator), moe_p=args.moe_p)
        print(json.dumps({"schema_version": 1, **summary.to_dict()}) if args.json
              else analytics.render_summary_text(summary))
        return EXIT_OK
    if args.report_kind == "agreement":
        report = analytics.agreement(
            _scored(records, args.sample_id, args.annotator_a),
            _scored(records, args.sample_id, args.annotator_b))
        print(json.dumps({"schema_version": 1, **report.to_dict()}) if args.json
              else analytics.render_agreement_text(report))
        return EXIT_OK
    raise ValueError(f"unknown report kind {args.report_kind!r}")


def _cmd_timeline(args) -> int:
    records = ingest.read_records(args.records)
    bucket = analytics.timeline(records)
    normalized = None
    if args.plan:
        with open(args.plan, encoding="utf-8") as fh:
            plan = sampling.SamplePlan.from_dict(json.load(fh))
        normalized = analytics.normalize_by_rate(bucket, plan)
    effective = normalized if normalized is not None else bucket
    peaks = analytics.top_peaks(effective, args.top)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("date,count\n")
            for day in sorted(effective):
                fh.write(f"{day.isoformat()},{effective[day]}\n")
    doc = {
        "schema_version": 1,
        "days": {d.isoformat(): c for d, c in sorted(effective.items())},
        "peaks": [{"date": d.isoformat(), "count": c} for d, c in peaks],
        "normalized": normalized is not None,
    }
    if args.json:
        print(json.dumps(doc))
    else:
        for entry in doc["peaks"]:
            print(f"{entry['date']}  {entry['count']}")
    return EXIT_OK


def _cmd_codebook_validate(args) -> int:
    book = codebook.load_codebook(args.codebook, extra_paths=args.extra)
    manifest = codebook.load_manifest(args.manifest)
    if not args.extra:  # extra entries legitimately change the counts
        book.check_manifest(manifest)
    counts = book.category_counts()
    doc = {"schema_version": 1, "entries": len(book), "category_counts": counts}
    if args.json:
        print(json.dumps(doc))
    else:
        print(f"codebook ok: {len(book)} entries, "
              f"{counts['contemporary_example']} contemporary examples")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "sample": _cmd_sample,
    "serve": _cmd_serve,
    "report": _cmd_report,
    "timeline": _cmd_timeline,
    "codebook-validate": _cmd_codebook_validate,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_VALIDATION
    try:
        return _COMMANDS[args.command](args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
