"""Corpus-level BLEU as computed by the Moses multi-bleu script.

Clipped n-gram matches and n-gram totals are summed over the corpus before
dividing, the precisions are combined by a geometric mean, and the result is
scaled by the brevity penalty exp(1 - ref_len / hyp_len) when the hypothesis
side is shorter. No smoothing: a zero precision at any order gives 0.
"""
import math
import sys
from collections import Counter
from typing import Sequence

from evaluation.models.bleu import BleuReport, NgramStats
from utils.errors import InputError, UsageError


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def clipped_ngram_matches(hyp: Sequence[str], ref: Sequence[str], n: int) -> tuple[int, int]:
    if n < 1:
        raise UsageError(f"n-gram order must be at least 1, got {n}")
    hyp_counts = ngram_counts(hyp, n)
    ref_counts = ngram_counts(ref, n)
    matches = sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items())
    return matches, max(0, len(hyp) - n + 1)


def sentence_stats(hyp: Sequence[str], ref: Sequence[str], order: int = 4) -> NgramStats:
    counted = [clipped_ngram_matches(hyp, ref, n) for n in range(1, order + 1)]
    return NgramStats(
        matches=tuple(m for m, _ in counted),
        totals=tuple(t for _, t in counted),
        hyp_len=len(hyp),
        ref_len=len(ref),
    )


def brevity_penalty(hyp_len: int, ref_len: int) -> float:
    if hyp_len >= ref_len:
        return 1.0
    # an empty hypothesis side is scored as length 1; bp must stay positive
    return max(math.exp(1 - ref_len / max(hyp_len, 1)), sys.float_info.min)


def report_from_stats(stats: NgramStats) -> BleuReport:
    order = len(stats.matches)
    bp = brevity_penalty(stats.hyp_len, stats.ref_len)
    if all(m > 0 for m in stats.matches):
        log_mean = sum(math.log(m / t) for m, t in zip(stats.matches, stats.totals)) / order
        score = min(1.0, bp * math.exp(log_mean))
    else:
        score = 0.0
    return BleuReport(
        precisions=tuple(zip(stats.matches, stats.totals)),
        bp=bp,
        hyp_len=stats.hyp_len,
        ref_len=stats.ref_len,
        score=score,
        order=order,
    )


def corpus_bleu(pairs: Sequence[tuple[Sequence[str], Sequence[str]]], order: int = 4) -> BleuReport:
    if not pairs:
        raise InputError("BLEU needs at least one hypothesis/reference pair")
    if order < 1:
        raise UsageError(f"BLEU order must be at least 1, got {order}")
    total = NgramStats(matches=(0,) * order, totals=(0,) * order, hyp_len=0, ref_len=0)
    for hyp, ref in pairs:
        total = total + sentence_stats(hyp, ref, order)
    return report_from_stats(total)


def format_report(report: BleuReport) -> str:
    precisions = "/".join(f"{100 * p:.1f}" for p in report.precision_values)
    return (f"BLEU = {100 * report.score:.2f}, {precisions} "
            f"(BP={report.bp:.3f}, ratio={report.ratio:.3f}, hyp_len={report.hyp_len}, ref_len={report.ref_len})")
