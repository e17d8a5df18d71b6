"""Content evaluation: tiered factoid pyramids, n-gram agreement kappa, ROUGE-N.

The pyramid weighs each factoid by the number of sentences that mention it;
a summary scores the weight it covers against the best weight any summary
with as many sentences could cover.  Kappa measures two annotators' span
markings over n-gram windows.  ROUGE-N is recall of reference n-grams, with
optional leave-one-reference-out jackknifing.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .corpus import CitationSet, DataError, FactoidAnnotation, NuggetSpanAnnotation
from .summarize import Summary


@dataclass(frozen=True)
class Pyramid:
    """tiers[i] = factoids mentioned in exactly i sentences; n is the top tier."""

    tiers: dict[int, frozenset[str]]
    n: int

    def weight(self, factoid: str) -> int:
        for tier, members in self.tiers.items():
            if factoid in members:
                return tier
        return 0

    @property
    def factoid_count(self) -> int:
        return sum(len(members) for members in self.tiers.values())


@dataclass(frozen=True)
class EvalReport:
    """One evaluation cell: a method/budget pair with its scores."""

    method: str
    budget: int
    pyramid_score: float
    covered_factoids: int
    weight_covered: int
    weight_optimal: int
    rouge: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        payload = {
            "method": self.method,
            "budget": self.budget,
            "pyramid": self.pyramid_score,
            "covered_factoids": self.covered_factoids,
            "D": self.weight_covered,
            "Max": self.weight_optimal,
        }
        if self.rouge:
            payload["rouge"] = {f"rouge_{n}": v for n, v in sorted(self.rouge.items())}
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def build_pyramid(ann: FactoidAnnotation) -> Pyramid:
    """Tier each factoid by its sentence-occurrence count; unmentioned factoids drop out."""
    counts: Counter[str] = Counter()
    for facts in ann.sentence_factoids.values():
        counts.update(facts)
    tiers: dict[int, set[str]] = {}
    for factoid, count in counts.items():
        tiers.setdefault(count, set()).add(factoid)
    return Pyramid(
        tiers={t: frozenset(members) for t, members in tiers.items()},
        n=max(tiers) if tiers else 0,
    )


def optimal_weight(pyr: Pyramid, size: int) -> int:
    """Best achievable factoid weight for a summary of ``size`` sentences.

    Walks tiers top-down: all factoids above the pivot tier, then fills the
    remainder at the pivot weight.  When size exceeds the factoid inventory,
    the whole pyramid's weight is the cap.
    """
    if size <= 0:
        return 0
    remaining = size
    total = 0
    for tier in sorted(pyr.tiers, reverse=True):
        members = len(pyr.tiers[tier])
        take = min(members, remaining)
        total += tier * take
        remaining -= take
        if remaining == 0:
            break
    return total


def pyramid_score(summary: Summary, ann: FactoidAnnotation, pyr: Pyramid) -> EvalReport:
    """Covered-factoid weight over the optimal weight at equal sentence count.

    Each distinct covered factoid counts once at its tier weight; the ideal
    summary is assumed to contribute one new top-tier factoid per sentence,
    so coverage is capped at the optimum and the score stays in [0,1].
    A zero optimum (empty pyramid or empty summary) scores 1.0 by convention.
    """
    unknown = [sid for sid in summary.sentence_ids if sid not in ann.sentence_factoids]
    if unknown:
        raise DataError(f"summary sentence(s) missing from annotation: {unknown}")
    covered: set[str] = set()
    for sid in summary.sentence_ids:
        covered |= ann.factoids_of(sid)
    d = sum(pyr.weight(f) for f in covered)
    max_weight = optimal_weight(pyr, len(summary.sentence_ids))
    d = min(d, max_weight)
    score = 1.0 if max_weight == 0 else d / max_weight
    return EvalReport(
        method=summary.method,
        budget=summary.budget,
        pyramid_score=score,
        covered_factoids=len(covered),
        weight_covered=d,
        weight_optimal=max_weight,
    )


def _token_byte_offsets(text: str) -> list[tuple[int, int]]:
    """Whitespace tokens as (start, end) byte ranges into the UTF-8 text."""
    offsets = []
    byte_pos = 0
    char_pos = 0
    for token in text.split():
        char_start = text.index(token, char_pos)
        byte_pos += len(text[char_pos:char_start].encode("utf-8"))
        token_bytes = len(token.encode("utf-8"))
        offsets.append((byte_pos, byte_pos + token_bytes))
        byte_pos += token_bytes
        char_pos = char_start + len(token)
    return offsets


def _window_labels(
    annotation: NuggetSpanAnnotation, cs: CitationSet, n: int
) -> list[bool]:
    """One in/out label per n-gram token window, pooled over all sentences.

    A token is inside a nugget iff its full byte range lies within one span;
    a window is inside iff all of its tokens are.
    """
    labels: list[bool] = []
    for sentence in cs.sentences:
        spans = annotation.spans_of(sentence.id)
        tokens = _token_byte_offsets(sentence.text)
        in_nugget = [
            any(start <= ts and te <= end for start, end in spans) for ts, te in tokens
        ]
        for i in range(len(tokens) - n + 1):
            labels.append(all(in_nugget[i : i + n]))
    return labels


def ngram_kappa(
    a: NuggetSpanAnnotation,
    b: NuggetSpanAnnotation,
    cs: CitationSet,
    n: int = 1,
    chance_model: str = "cohen",
) -> float:
    """Chance-corrected agreement on in/out-of-nugget labels of n-gram windows.

    ``chance_model`` picks how expected agreement is computed from the label
    frequencies: per-annotator marginals ("cohen", default), pooled marginals
    ("scott"), or a flat 1/2 ("uniform").  Symmetric in the two annotators;
    1.0 when expected agreement is already total.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    labels_a = _window_labels(a, cs, n)
    labels_b = _window_labels(b, cs, n)
    total = len(labels_a)
    if total == 0:
        raise DataError("no units: no sentence has enough tokens for this n-gram size")
    observed = sum(la == lb for la, lb in zip(labels_a, labels_b)) / total
    pa_in = sum(labels_a) / total
    pb_in = sum(labels_b) / total
    if chance_model == "cohen":
        expected = pa_in * pb_in + (1 - pa_in) * (1 - pb_in)
    elif chance_model == "scott":
        pooled = (pa_in + pb_in) / 2
        expected = pooled * pooled + (1 - pooled) * (1 - pooled)
    elif chance_model == "uniform":
        expected = 0.5
    else:
        raise ValueError(f"unknown chance model {chance_model!r}")
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


def _ngrams(text: str, n: int) -> Counter:
    tokens = [t.lower() for t in text.split()]
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _single_reference_recall(cand: Counter, ref: Counter) -> float:
    ref_total = sum(ref.values())
    if ref_total == 0:
        return 0.0
    clipped = sum(min(count, cand[gram]) for gram, count in ref.items())
    return clipped / ref_total


def rouge_n(
    candidate: str,
    references: list[str],
    n: int = 2,
    jackknife: bool = False,
) -> float:
    """ROUGE-N recall of a candidate against reference summaries.

    Without jackknifing, clipped matches and reference counts pool over all
    references.  With jackknifing (needs >= 2 references), each reference is
    held out in turn, the best single-reference score among the rest is
    taken, and the holdout scores are averaged; this keeps automatic scores
    comparable to human-vs-human numbers.
    """
    if not references:
        raise DataError("at least one reference summary is required")
    if any(not ref.strip() for ref in references):
        raise DataError("empty reference summary")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand = _ngrams(candidate, n)
    refs = [_ngrams(ref, n) for ref in references]

    if not jackknife:
        total = sum(sum(ref.values()) for ref in refs)
        if total == 0:
            return 0.0
        clipped = sum(
            sum(min(count, cand[gram]) for gram, count in ref.items()) for ref in refs
        )
        return clipped / total

    if len(references) < 2:
        raise DataError("jackknifing requires at least two references")
    holdout_scores = []
    for held_out in range(len(refs)):
        held_in = [ref for i, ref in enumerate(refs) if i != held_out]
        holdout_scores.append(max(_single_reference_recall(cand, ref) for ref in held_in))
    return sum(holdout_scores) / len(holdout_scores)


def report_to_tsv(reports: list[EvalReport]) -> str:
    """Rows = methods, columns = metrics; fixed six-decimal formatting."""
    columns = ["method", "budget", "pyramid", "covered_factoids", "D", "Max"]
    rouge_ns = sorted({n for report in reports for n in report.rouge})
    columns += [f"rouge_{n}" for n in rouge_ns]
    lines = ["\t".join(columns)]
    for report in reports:
        row = [
            report.method,
            str(report.budget),
            f"{report.pyramid_score:.6f}",
            str(report.covered_factoids),
            str(report.weight_covered),
            str(report.weight_optimal),
        ]
        row += [
            f"{report.rouge[n]:.6f}" if n in report.rouge else ""
            for n in rouge_ns
        ]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"
