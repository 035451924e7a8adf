"""Column-format NER corpus parsing, serialization, and mention extraction.

The container format is the CoNLL-2003 one: one token per line with
whitespace-separated columns (surface, zero or more auxiliary columns such
as POS and chunk tags, and the entity label last), a blank line between
sentences, and lines whose first field is ``-DOCSTART-`` delimiting
documents. Two labeling schemes are supported: BIO (``O``/``B-X``/``I-X``)
and IO (``O``/``I-X``/bare ``X``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError

ENTITY_TYPES = ("PER", "LOC", "ORG", "MISC")
SCHEMES = ("BIO", "IO")
DOCSTART = "-DOCSTART-"


@dataclass(frozen=True)
class Token:
    surface: str
    aux: tuple[str, ...]
    label: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]


@dataclass(frozen=True)
class Document:
    doc_index: int
    sentences: tuple[Sentence, ...]
    #: Verbatim -DOCSTART- line from the source (None for an implicit document).
    docstart: str | None = None


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    scheme: str = "BIO"
    column_count: int = 4


@dataclass(frozen=True)
class Mention:
    """A maximal contiguous labeled span. ``token_end`` is exclusive."""

    doc_index: int
    sentence_index: int
    token_start: int
    token_end: int
    etype: str
    surface: str


def split_label(label: str) -> tuple[str, str | None]:
    """Return (prefix, entity type); the prefix is one of "O", "B", "I".

    A bare type tag (IO style) reads as an inside tag.
    """
    if label == "O":
        return "O", None
    if label.startswith("B-"):
        return "B", label[2:]
    if label.startswith("I-"):
        return "I", label[2:]
    return "I", label


def _check_label(label: str, scheme: str, lineno: int) -> None:
    if label == "O":
        return
    prefix, etype = split_label(label)
    prefixed = label.startswith(("B-", "I-"))
    valid = etype in ENTITY_TYPES and (
        (scheme == "BIO" and prefixed) or (scheme == "IO" and not label.startswith("B-"))
    )
    if not valid:
        raise ParseError(f"unknown label {label!r} for scheme {scheme}", lineno)


def parse_corpus(
    text: str,
    column_count: int = 4,
    scheme: str = "BIO",
    lenient: bool = False,
) -> Corpus:
    """Parse column-format text into a :class:`Corpus`.

    ``-DOCSTART-`` lines are kept verbatim as document metadata, never as
    tokens. In BIO mode a label transition violation (``I-X`` at sentence
    start, after ``O``, or after a different type) is a hard error unless
    ``lenient`` is set, in which case the stray ``I-X`` is coerced to
    ``B-X``. Empty input yields an empty corpus.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if column_count < 2:
        raise ValueError(f"column_count must be >= 2, got {column_count}")

    docs: list[tuple[str | None, list[Sentence]]] = []
    cur_docstart: str | None = None
    cur_sentences: list[Sentence] = []
    cur_tokens: list[Token] = []
    doc_open = False
    prev: tuple[str, str | None] | None = None

    def close_sentence() -> None:
        nonlocal cur_tokens, prev
        if cur_tokens:
            cur_sentences.append(Sentence(tuple(cur_tokens)))
            cur_tokens = []
        prev = None

    def close_document() -> None:
        nonlocal cur_docstart, cur_sentences, doc_open
        close_sentence()
        if doc_open or cur_sentences:
            docs.append((cur_docstart, cur_sentences))
        cur_docstart, cur_sentences, doc_open = None, [], False

    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            close_sentence()
            continue
        fields = raw.split()
        if fields[0] == DOCSTART:
            close_document()
            cur_docstart = raw
            doc_open = True
            continue
        if len(fields) != column_count:
            raise ParseError(
                f"expected {column_count} columns, got {len(fields)}: {raw!r}", lineno
            )
        label = fields[-1]
        _check_label(label, scheme, lineno)
        if scheme == "BIO":
            prefix, etype = split_label(label)
            if prefix == "I":
                prev_type = prev[1] if prev else None
                if prev_type != etype:
                    if lenient:
                        label = "B-" + etype
                    else:
                        before = "sentence start" if prev is None else f"label {_join(prev)!r}"
                        raise ParseError(f"I-{etype} cannot follow {before}", lineno)
            prev = split_label(label)
        cur_tokens.append(Token(fields[0], tuple(fields[1:-1]), label))
    close_document()

    documents = tuple(
        Document(i, tuple(sentences), docstart) for i, (docstart, sentences) in enumerate(docs)
    )
    return Corpus(documents, scheme, column_count)


def _join(parsed: tuple[str, str | None]) -> str:
    prefix, etype = parsed
    return prefix if etype is None else f"{prefix}-{etype}"


def serialize_corpus(corpus: Corpus) -> str:
    """Render a corpus back to column-format text.

    Columns are joined with a single space; every sentence and every
    ``-DOCSTART-`` line is followed by one blank line. The output re-parses
    to an equal corpus. An empty corpus serializes to "".
    """
    lines: list[str] = []
    for doc in corpus.documents:
        if doc.docstart is not None:
            lines.append(doc.docstart)
            lines.append("")
        for sentence in doc.sentences:
            for tok in sentence.tokens:
                lines.append(" ".join((tok.surface, *tok.aux, tok.label)))
            lines.append("")
    return "\n".join(lines) + "\n" if lines else ""


def extract_mentions(document: Document) -> list[Mention]:
    """Maximal, non-overlapping labeled spans of a document, in order.

    ``B-`` tags always open a new span; in IO data adjacent same-type tokens
    form a single span. Spans never cross sentence boundaries.
    """
    mentions: list[Mention] = []
    for s_i, sentence in enumerate(document.sentences):
        start: int | None = None
        cur_type: str | None = None

        def close(end: int) -> None:
            nonlocal start, cur_type
            if start is not None and cur_type is not None:
                surface = " ".join(t.surface for t in sentence.tokens[start:end])
                mentions.append(
                    Mention(document.doc_index, s_i, start, end, cur_type, surface)
                )
            start, cur_type = None, None

        for t_i, tok in enumerate(sentence.tokens):
            prefix, etype = split_label(tok.label)
            if etype is None:
                close(t_i)
            elif start is not None and etype == cur_type and prefix != "B":
                continue
            else:
                close(t_i)
                start, cur_type = t_i, etype
        close(len(sentence.tokens))
    return mentions


def iter_mentions(corpus: Corpus) -> Iterator[Mention]:
    for doc in corpus.documents:
        yield from extract_mentions(doc)


def to_io(corpus: Corpus) -> Corpus:
    """Convert to IO labeling: every ``B-X`` becomes ``I-X``.

    Lossy by design for adjacent same-type mentions, which merge into one.
    Surfaces and auxiliary columns are untouched; an IO corpus is returned
    unchanged.
    """
    if corpus.scheme == "IO":
        return corpus
    documents = []
    for doc in corpus.documents:
        sentences = []
        for sentence in doc.sentences:
            tokens = tuple(
                Token(t.surface, t.aux, "I-" + t.label[2:]) if t.label.startswith("B-") else t
                for t in sentence.tokens
            )
            sentences.append(Sentence(tokens))
        documents.append(Document(doc.doc_index, tuple(sentences), doc.docstart))
    return Corpus(tuple(documents), "IO", corpus.column_count)
