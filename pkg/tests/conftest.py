import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from workbench.records import TweetRecord

DATA_DIR = Path(__file__).parent / "data"

_acceptance_results = []


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def query_fixture():
    with open(DATA_DIR / "query_fixture25.json", encoding="utf-8") as fh:
        return json.load(fh)


def make_record(tweet_id, text="hello", day=None, handle="user1", lang="en",
                live="unknown", **kwargs):
    """Compact TweetRecord builder for tests."""
    from workbench.records import Liveness

    created = day if day is not None else datetime(2018, 4, 3, 12, 0,
                                                   tzinfo=timezone.utc)
    if isinstance(created, str):
        created = datetime.fromisoformat(created).replace(tzinfo=timezone.utc)
    return TweetRecord(
        tweet_id=str(tweet_id),
        text=text,
        author_handle=handle,
        created_at=created,
        lang=lang,
        live=Liveness(live),
        **kwargs,
    )


def spread_records(n, start, *, step_hours=7, text="hello", prefix=1):
    """n records spread from a start datetime, ids prefix*10^12 + i."""
    out = []
    for i in range(n):
        out.append(make_record(
            prefix * 10**12 + i,
            text=text,
            day=start + timedelta(hours=i * step_hours),
            handle=f"user{i % 17}",
        ))
    return out


# --- acceptance summary -----------------------------------------------------
def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
