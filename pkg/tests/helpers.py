"""Builders, independent oracles, and hypothesis strategies shared by the tests."""
from __future__ import annotations

import string

from hypothesis import strategies as st

from entityswitch.conll_io import (
    ENTITY_TYPES,
    Corpus,
    Document,
    Sentence,
    Token,
    split_label,
)

AUX_POOL = ("NNP", "VBD", "DT", "IN", "JJ", "I-NP", "I-VP", "O")


def mk_sentence(pairs, n_aux=0):
    """Build a Sentence from (surface, label) pairs with filler aux columns."""
    return Sentence(
        tuple(Token(surface, tuple(AUX_POOL[i % 2] for i in range(n_aux)), label)
              for surface, label in pairs)
    )


def mk_doc(doc_index, sentence_specs, n_aux=0, docstart=None):
    return Document(
        doc_index,
        tuple(mk_sentence(pairs, n_aux) for pairs in sentence_specs),
        docstart,
    )


def mk_corpus(doc_specs, scheme="IO", n_aux=0, docstarts=None):
    """doc_specs: list of documents, each a list of sentences of (surface, label)."""
    docstarts = docstarts or [None] * len(doc_specs)
    docs = tuple(
        mk_doc(i, spec, n_aux, docstarts[i]) for i, spec in enumerate(doc_specs)
    )
    return Corpus(docs, scheme, 2 + n_aux)


# ---------------------------------------------------------------------------
# Independent oracles


def naive_spans(labels):
    """Brute-force span scan: maximal runs of one type, split at B- tags.

    Returns (start, end, etype) triples; independent of extract_mentions.
    """
    spans = []
    i = 0
    while i < len(labels):
        prefix, etype = split_label(labels[i])
        if etype is None:
            i += 1
            continue
        j = i + 1
        while j < len(labels):
            p2, t2 = split_label(labels[j])
            if t2 != etype or p2 == "B":
                break
            j += 1
        spans.append((i, j, etype))
        i = j
    return spans


def merge_adjacent(spans):
    """IO view of a BIO span list: adjacent same-type spans collapse."""
    merged = []
    for span in spans:
        if merged and merged[-1][2] == span[2] and merged[-1][1] == span[0]:
            merged[-1] = (merged[-1][0], span[1], span[2])
        else:
            merged.append(tuple(span))
    return merged


def flat_o_tokens(document):
    """O-labeled tokens of a document in order; switching never touches them."""
    return [t for s in document.sentences for t in s.tokens if t.label == "O"]


def naive_token_tally(gold_labels, pred_labels):
    """Independent token-level tally over plain label lists.

    Collapses any B-/I- prefix to the bare type and counts tp/fp/fn per
    type plus micro totals. Returns {type: (tp, fp, fn), "overall": ...}.
    """
    def bare(label):
        if label == "O":
            return "O"
        if label.startswith(("B-", "I-")):
            return label[2:]
        return label

    table = {t: [0, 0, 0] for t in ENTITY_TYPES}
    for g, p in zip(gold_labels, pred_labels):
        g, p = bare(g), bare(p)
        for t in ENTITY_TYPES:
            if g == t and p == t:
                table[t][0] += 1
            if p == t and g != t:
                table[t][1] += 1
            if g == t and p != t:
                table[t][2] += 1
    out = {t: tuple(v) for t, v in table.items()}
    out["overall"] = tuple(sum(v[i] for v in table.values()) for i in range(3))
    return out


def naive_prf(tp, fp, fn):
    p = 1.0 if tp + fp == 0 else tp / (tp + fp)
    r = 1.0 if tp + fn == 0 else tp / (tp + fn)
    f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f1


# ---------------------------------------------------------------------------
# Seeded random generation (plain random module, for exact-count loops)

WORDS = [
    "the", "a", "match", "win", "goal", "team", "city", "derby", "minute",
    "header", "crowd", "press", "cup", "league", "striker", "keeper",
    "report", "on", "met", "said", "visited", "beat", "against", "after",
]
NAME_TOKENS = [
    "Alda", "Boro", "Cram", "Dena", "Elio", "Fara", "Gozo", "Hale", "Ivo",
    "Juno", "Kite", "Lore", "Mira", "Nero", "Oola", "Pia", "Quin", "Rud",
    "Silo", "Tova", "Ugo", "Vena", "Wim", "Xilo", "Yara", "Zed",
]


def random_labels(rng, n, scheme):
    labels = []
    prev_type = None
    for _ in range(n):
        roll = rng.random()
        if roll < 0.55 or (scheme == "BIO" and prev_type is None and roll < 0.6):
            labels.append("O")
            prev_type = None
            continue
        etype = rng.choice(ENTITY_TYPES)
        if scheme == "BIO":
            if prev_type == etype and rng.random() < 0.6:
                labels.append(f"I-{etype}")
            else:
                labels.append(f"B-{etype}")
        else:
            labels.append(f"I-{etype}" if rng.random() < 0.8 else etype)
        prev_type = etype
    return labels


def random_corpus(rng, n_docs=3, scheme="BIO", n_aux=2, max_sentences=5, max_tokens=12):
    docs = []
    for d in range(n_docs):
        sentences = []
        for _ in range(rng.randint(1, max_sentences)):
            n = rng.randint(1, max_tokens)
            surfaces = [rng.choice(WORDS + NAME_TOKENS) for _ in range(n)]
            labels = random_labels(rng, n, scheme)
            sentences.append(list(zip(surfaces, labels)))
        docstart = "-DOCSTART- " + " ".join(["-X-"] * n_aux) + " O"
        docs.append((sentences, None if (d == 0 and rng.random() < 0.5) else docstart))
    specs = [spec for spec, _ in docs]
    starts = [start for _, start in docs]
    return mk_corpus(specs, scheme=scheme, n_aux=n_aux, docstarts=starts)


def random_gold_pred_pair(rng):
    """Aligned corpora with independent random labelings."""
    scheme = rng.choice(["BIO", "IO"])
    n_docs = rng.randint(1, 3)
    specs_gold, specs_pred = [], []
    for _ in range(n_docs):
        g_doc, p_doc = [], []
        for _ in range(rng.randint(1, 4)):
            n = rng.randint(1, 10)
            surfaces = [rng.choice(WORDS) for _ in range(n)]
            g_doc.append(list(zip(surfaces, random_labels(rng, n, scheme))))
            p_doc.append(list(zip(surfaces, random_labels(rng, n, scheme))))
        specs_gold.append(g_doc)
        specs_pred.append(p_doc)
    return (
        mk_corpus(specs_gold, scheme=scheme, n_aux=0),
        mk_corpus(specs_pred, scheme=scheme, n_aux=0),
    )


# ---------------------------------------------------------------------------
# Hypothesis strategies

_SURFACE_ALPHABET = string.ascii_lowercase + string.digits + ".,'-"


@st.composite
def surfaces(draw):
    value = draw(st.text(alphabet=_SURFACE_ALPHABET, min_size=1, max_size=8))
    return value


@st.composite
def label_sequences(draw, n, scheme):
    labels = []
    prev_type = None
    for _ in range(n):
        choices = ["O"]
        for etype in ENTITY_TYPES:
            if scheme == "BIO":
                choices.append(f"B-{etype}")
                if prev_type == etype:
                    choices.append(f"I-{etype}")
            else:
                choices.append(f"I-{etype}")
                choices.append(etype)
        label = draw(st.sampled_from(choices))
        labels.append(label)
        prev_type = split_label(label)[1]
    return labels


@st.composite
def corpora(draw, scheme=None, max_docs=3):
    scheme = scheme or draw(st.sampled_from(["BIO", "IO"]))
    n_aux = draw(st.integers(min_value=0, max_value=2))
    n_docs = draw(st.integers(min_value=0, max_value=max_docs))
    specs, starts = [], []
    for d in range(n_docs):
        n_sents = draw(st.integers(min_value=0, max_value=3))
        docstart = "-DOCSTART- " + " ".join(["-X-"] * n_aux) + " O"
        if n_sents == 0:
            starts.append(docstart)  # an empty document needs its marker
        else:
            starts.append(None if (d == 0 and draw(st.booleans())) else docstart)
        doc = []
        for _ in range(n_sents):
            n = draw(st.integers(min_value=1, max_value=6))
            toks = [draw(surfaces()) for _ in range(n)]
            labels = draw(label_sequences(n, scheme))
            doc.append(list(zip(toks, labels)))
        specs.append(doc)
    return mk_corpus(specs, scheme=scheme, n_aux=n_aux, docstarts=starts)
