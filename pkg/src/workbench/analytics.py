"""Proportion statistics, agreement reports, and timeline peaks.

Margin-of-error math uses the normal approximation for a sample proportion:
moe = z * sqrt(p(1-p)/n) and n = p(1-p)(z/me)^2. The 95% z-value is pinned
to 1.959964; other confidence levels go through Acklam's rational
approximation of the standard normal quantile so results are bit-stable
across machines. Display percentages round half-up to one decimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .annotations import AnnotationRecord
from .records import TweetRecord
from .sampling import SamplePlan

__all__ = [
    "Z_95",
    "SCORE_VALUES",
    "MoEQuery",
    "CategoryCount",
    "ProportionSummary",
    "AgreementReport",
    "z_value",
    "normal_quantile",
    "margin_of_error",
    "required_sample_size",
    "percent_half_up",
    "round_half_up",
    "summarize",
    "agreement",
    "timeline",
    "top_peaks",
    "normalize_by_rate",
    "render_summary_text",
    "render_agreement_text",
]

Z_95 = 1.959964

# five-point judgment scale, most-confident-antisemitic first
SCORE_VALUES = (2, 1, 0, -1, -2)

# Acklam's inverse normal CDF approximation (relative error < 1.15e-9)
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_quantile(p: float) -> float:
    """Standard normal quantile via Acklam's rational approximation."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    if p < _P_LOW:
        q = math.sqrt(-2 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
               ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1)
    if p > 1 - _P_LOW:
        q = math.sqrt(-2 * math.log(1 - p))
        return -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
               ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
           (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1)


def z_value(confidence: float = 0.95) -> float:
    """Two-sided z critical value; the 95% value is pinned for stability."""
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    if abs(confidence - 0.95) < 1e-12:
        return Z_95
    return normal_quantile(1.0 - (1.0 - confidence) / 2.0)


@dataclass(frozen=True)
class MoEQuery:
    n: int
    p: float
    confidence: float = 0.95

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")


def margin_of_error(query: MoEQuery) -> float:
    """Half-width of the normal-approximation CI for a sample proportion."""
    z = z_value(query.confidence)
    return z * math.sqrt(query.p * (1.0 - query.p) / query.n)


def required_sample_size(p: float, me: float, confidence: float = 0.95) -> int:
    """Smallest n with margin of error at most me at the given proportion."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    if not 0.0 < me < 1.0:
        raise ValueError("margin of error must be in (0, 1)")
    z = z_value(confidence)
    return math.ceil(p * (1.0 - p) * (z / me) ** 2)


def round_half_up(value: float, digits: int = 1) -> float:
    exp = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(exp, rounding=ROUND_HALF_UP))


def percent_half_up(count: int, n: int) -> float:
    """Exact-rational percentage, rounded half-up to one decimal."""
    return float((Decimal(count) * 100 / Decimal(n)).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class CategoryCount:
    count: int
    percent: float


@dataclass(frozen=True)
class ProportionSummary:
    """Per-annotator category counts over one sample, with display percentages."""

    sample_id: str
    annotator_id: str
    n: int
    confident_antisemitic: CategoryCount
    probably_antisemitic: CategoryCount
    sum_antisemitic: CategoryCount
    not_comprehensible: CategoryCount
    probably_not: CategoryCount
    confident_not: CategoryCount
    calling_out: CategoryCount
    moe_p: float
    moe_at_p: float

    def to_dict(self) -> dict:
        def cc(c: CategoryCount) -> dict:
            return {"count": c.count, "percent": c.percent}

        return {
            "sample_id": self.sample_id,
            "annotator_id": self.annotator_id,
            "n": self.n,
            "confident_antisemitic": cc(self.confident_antisemitic),
            "probably_antisemitic": cc(self.probably_antisemitic),
            "sum_antisemitic": cc(self.sum_antisemitic),
            "not_comprehensible": cc(self.not_comprehensible),
            "probably_not": cc(self.probably_not),
            "confident_not": cc(self.confident_not),
            "calling_out": cc(self.calling_out),
            "moe_p": self.moe_p,
            "moe_at_p": self.moe_at_p,
        }


def summarize(
    records: Iterable[AnnotationRecord],
    *,
    moe_p: float = 0.2,
    confidence: float = 0.95,
) -> ProportionSummary:
    """Category counts and percentages for one annotator over one sample.

    Expects only live, scored records (deleted / foreign-language judgments
    are excluded upstream); all records must share the same sample and
    annotator.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    sample_ids = {r.sample_id for r in records}
    annotator_ids = {r.annotator_id for r in records}
    if len(sample_ids) != 1 or len(annotator_ids) != 1:
        raise ValueError("records must come from a single (sample, annotator)")
    counts = {v: 0 for v in SCORE_VALUES}
    calling = 0
    for r in records:
        if r.deleted or r.foreign_language or r.score is None:
            raise ValueError("deleted/foreign records must be excluded before summarize")
        counts[r.score] += 1
        if r.calling_out:
            calling += 1
    n = len(records)

    def cat(count: int) -> CategoryCount:
        return CategoryCount(count=count, percent=percent_half_up(count, n))

    return ProportionSummary(
        sample_id=sample_ids.pop(),
        annotator_id=annotator_ids.pop(),
        n=n,
        confident_antisemitic=cat(counts[2]),
        probably_antisemitic=cat(counts[1]),
        sum_antisemitic=cat(counts[2] + counts[1]),
        not_comprehensible=cat(counts[0]),
        probably_not=cat(counts[-1]),
        confident_not=cat(counts[-2]),
        calling_out=cat(calling),
        moe_p=moe_p,
        moe_at_p=margin_of_error(MoEQuery(n=n, p=moe_p, confidence=confidence)),
    )


@dataclass(frozen=True)
class AgreementReport:
    """Pairwise comparison of two annotators over their common tweets.

    The binary view maps positive scores to antisemitic and negative scores
    to not; tweets either annotator scored 0 (not comprehensible) are left
    out of the binary measures but stay in the 5x5 matrix.
    """

    annotator_a: str
    annotator_b: str
    n_common: int
    confusion_matrix: tuple[tuple[int, ...], ...]  # rows: a's score, cols: b's, order SCORE_VALUES
    percent_agreement_5way: float
    n_binary: int
    percent_agreement_binary: float | None
    kappa_binary: float | None
    disagreement_list: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "annotator_a": self.annotator_a,
            "annotator_b": self.annotator_b,
            "n_common": self.n_common,
            "score_order": list(SCORE_VALUES),
            "confusion_matrix": [list(row) for row in self.confusion_matrix],
            "percent_agreement_5way": self.percent_agreement_5way,
            "n_binary": self.n_binary,
            "percent_agreement_binary": self.percent_agreement_binary,
            "kappa_binary": self.kappa_binary,
            "disagreement_list": list(self.disagreement_list),
        }


_SCORE_INDEX = {v: i for i, v in enumerate(SCORE_VALUES)}


def _binary_kappa(pairs: Sequence[tuple[bool, bool]]) -> float:
    n = len(pairs)
    po = sum(1 for a, b in pairs if a == b) / n
    pa_true = sum(1 for a, _ in pairs if a) / n
    pb_true = sum(1 for _, b in pairs if b) / n
    pe = pa_true * pb_true + (1 - pa_true) * (1 - pb_true)
    if pe == 1.0:
        return 1.0  # both marginals degenerate on the same class => po is 1
    return (po - pe) / (1 - pe)


def agreement(
    records_a: Iterable[AnnotationRecord],
    records_b: Iterable[AnnotationRecord],
) -> AgreementReport:
    """Confusion matrix, raw agreement, and chance-corrected binary kappa."""
    a_by_id = {r.tweet_id: r for r in records_a if r.score is not None}
    b_by_id = {r.tweet_id: r for r in records_b if r.score is not None}
    common = sorted(a_by_id.keys() & b_by_id.keys(), key=int)
    if not common:
        raise ValueError("annotators share no scored tweets")
    annotator_a = a_by_id[common[0]].annotator_id
    annotator_b = b_by_id[common[0]].annotator_id

    matrix = [[0] * len(SCORE_VALUES) for _ in SCORE_VALUES]
    for tweet_id in common:
        matrix[_SCORE_INDEX[a_by_id[tweet_id].score]][_SCORE_INDEX[b_by_id[tweet_id].score]] += 1
    agree_5way = sum(matrix[i][i] for i in range(len(SCORE_VALUES)))

    binary_pairs: list[tuple[bool, bool]] = []
    disagreements: list[str] = []
    for tweet_id in common:
        sa, sb = a_by_id[tweet_id].score, b_by_id[tweet_id].score
        if sa == 0 or sb == 0:
            continue
        pair = (sa > 0, sb > 0)
        binary_pairs.append(pair)
        if pair[0] != pair[1]:
            disagreements.append(tweet_id)

    return AgreementReport(
        annotator_a=annotator_a,
        annotator_b=annotator_b,
        n_common=len(common),
        confusion_matrix=tuple(tuple(row) for row in matrix),
        percent_agreement_5way=agree_5way / len(common),
        n_binary=len(binary_pairs),
        percent_agreement_binary=(
            sum(1 for a, b in binary_pairs if a == b) / len(binary_pairs)
            if binary_pairs else None),
        kappa_binary=_binary_kappa(binary_pairs) if binary_pairs else None,
        disagreement_list=tuple(disagreements),
    )


def timeline(records: Iterable[TweetRecord], granularity: str = "day") -> dict[date, int]:
    """Bucket record counts by UTC calendar day."""
    if granularity != "day":
        raise ValueError(f"unsupported granularity: {granularity!r}")
    bucket: dict[date, int] = {}
    for record in records:
        bucket[record.day] = bucket.get(record.day, 0) + 1
    return bucket


def top_peaks(bucket: Mapping[date, float], k: int) -> list[tuple[date, float]]:
    """The k highest-count days, ties broken toward the earlier date.

    Zero-count days never qualify; if fewer than k days have counts, all of
    them are returned.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    nonzero = [(d, c) for d, c in bucket.items() if c > 0]
    nonzero.sort(key=lambda item: (-item[1], item[0]))
    return nonzero[:k]


def normalize_by_rate(bucket: Mapping[date, int], plan: SamplePlan) -> dict[date, float]:
    """Scale each day's count by the inverse of its stratum's stream rate.

    A day captured at a 0.01 stream rate is multiplied by 100, a 0.10 day
    by 10; days outside every stratum pass through unchanged. Scaling is
    exact (decimal rates are interpreted exactly), so 3 at rate 0.01 becomes
    exactly 300.
    """
    out: dict[date, float] = {}
    for day, count in bucket.items():
        stratum = plan.stratum_for(day)
        if stratum is None:
            out[day] = count
            continue
        scaled = Fraction(count) / Fraction(repr(stratum.stream_rate))
        out[day] = int(scaled) if scaled.denominator == 1 else float(scaled)
    return out


def render_summary_text(summary: ProportionSummary) -> str:
    """Aligned-column text block mirroring the annotation-results table shape."""
    rows = [
        ("Sample size (live, in-language)", summary.n, None),
        ("Confident antisemitic", summary.confident_antisemitic.count,
         summary.confident_antisemitic.percent),
        ("Probably antisemitic", summary.probably_antisemitic.count,
         summary.probably_antisemitic.percent),
        ("SUM (probably) antisemitic", summary.sum_antisemitic.count,
         summary.sum_antisemitic.percent),
        ("Not comprehensible", summary.not_comprehensible.count,
         summary.not_comprehensible.percent),
        ("Probably not antisemitic", summary.probably_not.count,
         summary.probably_not.percent),
        ("Confident not antisemitic", summary.confident_not.count,
         summary.confident_not.percent),
        ("Calling out antisemitism", summary.calling_out.count,
         summary.calling_out.percent),
    ]
    lines = [f"Sample {summary.sample_id}, annotator {summary.annotator_id}"]
    for label, count, percent in rows:
        pct = "" if percent is None else f"{percent:6.1f}%"
        lines.append(f"{label:<34}{count:>6}  {pct}")
    lines.append(f"{'Margin of error (p=' + format(summary.moe_p, 'g') + ')':<34}"
                 f"{'':>6}  {summary.moe_at_p * 100:6.1f}%")
    return "\n".join(lines)


def render_agreement_text(report: AgreementReport) -> str:
    lines = [
        f"Annotators {report.annotator_a} vs {report.annotator_b}",
        f"{'Common scored tweets':<34}{report.n_common:>6}",
        f"{'5-way agreement':<34}{report.percent_agreement_5way * 100:>6.1f}%",
    ]
    if report.percent_agreement_binary is None:
        lines.append(f"{'Binary agreement':<34}{'n/a':>6}")
    else:
        lines.append(f"{'Binary agreement':<34}{report.percent_agreement_binary * 100:>6.1f}%"
                     f"  (n={report.n_binary})")
        lines.append(f"{'Binary kappa':<34}{report.kappa_binary:>6.3f}")
    header = "      " + "".join(f"{v:>6}" for v in SCORE_VALUES)
    lines.append("Confusion matrix (rows: " + report.annotator_a +
                 ", cols: " + report.annotator_b + ")")
    lines.append(header)
    for value, row in zip(SCORE_VALUES, report.confusion_matrix):
        lines.append(f"{value:>6}" + "".join(f"{c:>6}" for c in row))
    if report.disagreement_list:
        lines.append("Binary disagreements: " + ", ".join(report.disagreement_list))
    return "\n".join(lines)
