"""Token-level micro precision/recall/F1 under IO labeling.

Both corpora are converted to IO before counting. For each entity type t,
a token with gold g and prediction p contributes tp when g = p = t, fp when
p = t but g differs, and fn when g = t but p differs; overall counts are
the sums over types. Empty denominators score 1.0 (no predictions gives
perfect precision, no gold gives perfect recall).
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from itertools import zip_longest
from typing import Iterator, Mapping

from .conll_io import ENTITY_TYPES, Corpus, split_label, to_io
from .errors import AlignmentError


@dataclass(frozen=True)
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0


@dataclass(frozen=True)
class TokenCounts:
    per_type: Mapping[str, Counts]
    overall: Counts


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalResult:
    metrics: Metrics
    counts: TokenCounts
    type_filter: str | None = None

    def per_type_metrics(self) -> dict[str, Metrics]:
        return {t: metrics_from_counts(c) for t, c in self.counts.per_type.items()}


@dataclass(frozen=True)
class Disagreement:
    """One token where the IO-collapsed gold and predicted types differ."""

    doc_index: int
    sentence_index: int
    token_index: int
    surface: str
    gold: str
    pred: str


def metrics_from_counts(counts: Counts) -> Metrics:
    precision = 1.0 if counts.tp + counts.fp == 0 else counts.tp / (counts.tp + counts.fp)
    recall = 1.0 if counts.tp + counts.fn == 0 else counts.tp / (counts.tp + counts.fn)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return Metrics(precision, recall, f1)


def format_percent(value: float) -> str:
    """Render a [0, 1] metric as a percentage with 1 decimal, rounding half up."""
    return str((Decimal(str(value)) * 100).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def _positions(corpus: Corpus) -> Iterator[tuple[int, int, int, str]]:
    for doc in corpus.documents:
        for s_i, sentence in enumerate(doc.sentences):
            for t_i, token in enumerate(sentence.tokens):
                yield doc.doc_index, s_i, t_i, token.surface


def check_alignment(gold: Corpus, pred: Corpus) -> None:
    """Gold and prediction must share the exact token surface sequence."""
    sentinel = (None, None, None, None)
    for index, (g, p) in enumerate(zip_longest(_positions(gold), _positions(pred), fillvalue=sentinel)):
        if g[:3] != p[:3] or g[3] != p[3]:
            where = f"document {g[0]}, sentence {g[1]}, token {g[2]}" if g[0] is not None else "end of gold"
            raise AlignmentError(
                f"token mismatch at flat index {index} ({where}): "
                f"gold {g[3]!r} vs prediction {p[3]!r}"
            )


def _token_type(label: str) -> str | None:
    return split_label(label)[1]


def evaluate(gold: Corpus, pred: Corpus, type_filter: str | None = None) -> EvalResult:
    """Score a prediction corpus against gold.

    ``type_filter`` restricts the reported metrics to one entity type; the
    full per-type and overall tallies are always returned alongside.
    """
    if type_filter is not None and type_filter not in ENTITY_TYPES:
        raise ValueError(f"type_filter must be one of {ENTITY_TYPES}, got {type_filter!r}")
    check_alignment(gold, pred)
    gold_io, pred_io = to_io(gold), to_io(pred)

    tallies = {t: [0, 0, 0] for t in ENTITY_TYPES}  # tp, fp, fn
    for (g_doc, g_sent), (p_doc, p_sent) in zip(
        ((d, s) for d in gold_io.documents for s in d.sentences),
        ((d, s) for d in pred_io.documents for s in d.sentences),
    ):
        for g_tok, p_tok in zip(g_sent.tokens, p_sent.tokens):
            g_type = _token_type(g_tok.label)
            p_type = _token_type(p_tok.label)
            if g_type == p_type:
                if g_type is not None:
                    tallies[g_type][0] += 1
            else:
                if p_type is not None:
                    tallies[p_type][1] += 1
                if g_type is not None:
                    tallies[g_type][2] += 1

    per_type = {t: Counts(*tallies[t]) for t in ENTITY_TYPES}
    overall = Counts(
        sum(c.tp for c in per_type.values()),
        sum(c.fp for c in per_type.values()),
        sum(c.fn for c in per_type.values()),
    )
    counts = TokenCounts(per_type, overall)
    base = per_type[type_filter] if type_filter else overall
    return EvalResult(metrics_from_counts(base), counts, type_filter)


def disagreements(gold: Corpus, pred: Corpus) -> list[Disagreement]:
    """Raw dump of every token whose gold and predicted type differ.

    Input for manual error analysis; no aggregation or interpretation.
    """
    check_alignment(gold, pred)
    gold_io, pred_io = to_io(gold), to_io(pred)
    found = []
    for g_doc, p_doc in zip(gold_io.documents, pred_io.documents):
        for s_i, (g_sent, p_sent) in enumerate(zip(g_doc.sentences, p_doc.sentences)):
            for t_i, (g_tok, p_tok) in enumerate(zip(g_sent.tokens, p_sent.tokens)):
                g_type = _token_type(g_tok.label) or "O"
                p_type = _token_type(p_tok.label) or "O"
                if g_type != p_type:
                    found.append(
                        Disagreement(g_doc.doc_index, s_i, t_i, g_tok.surface, g_type, p_type)
                    )
    return found
