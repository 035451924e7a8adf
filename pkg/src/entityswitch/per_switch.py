"""Replace PER mentions with one target name, keeping name roles consistent.

Within a document, every multi-token PER mention is treated as a full name
whose first word is the first name and whose remaining words are the last
name. Other occurrences are matched against those parts case-insensitively,
so that full names map to the full target, first names to the target's
first token, and last names to its remaining tokens. A multi-word name
contained in a longer name is never split out on its own; it resolves
against the longer name.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .conll_io import Corpus, Document, Mention, Sentence, Token, extract_mentions
from .inventory import CountryInventory, construct_full_names

log = logging.getLogger(__name__)

DEFAULT_AUX_PLACEHOLDERS = ("NNP", "I-NP")

Key = tuple[str, ...]


class NameRole(Enum):
    FULL_NAME = "full_name"
    FIRST_ONLY = "first_only"
    LAST_ONLY = "last_only"
    UNSEEN_SINGLE = "unseen_single"


@dataclass(frozen=True)
class AliasTable:
    """Per-document index of full names and their first/last parts.

    Keys are case-folded token tuples; ``full_names`` keeps the original
    casing in registration order (longest first, then first occurrence).
    """

    full_names: tuple[tuple[str, ...], ...]
    full_keys: frozenset[Key]
    first_of: Mapping[Key, Key]
    last_of: Mapping[Key, Key]


def _key(tokens: Iterable[str]) -> Key:
    return tuple(t.casefold() for t in tokens)


def _contains(longer: Key, shorter: Key) -> bool:
    if len(shorter) > len(longer):
        return False
    return any(
        longer[i : i + len(shorter)] == shorter
        for i in range(len(longer) - len(shorter) + 1)
    )


def build_alias_table(document: Document) -> AliasTable:
    """Register the document's multi-token PER mentions as full names.

    Registration runs longest-surface-first so a name contained in a longer
    one is not registered separately. When two registered names share a
    first- or last-name part, the earlier registration keeps the part.
    """
    multi: list[tuple[str, ...]] = []
    for mention in extract_mentions(document):
        if mention.etype == "PER":
            tokens = tuple(mention.surface.split())
            if len(tokens) >= 2:
                multi.append(tokens)
    ordered = sorted(multi, key=lambda toks: -len(toks))  # stable: doc order within a length

    full_names: list[tuple[str, ...]] = []
    full_keys: set[Key] = set()
    first_of: dict[Key, Key] = {}
    last_of: dict[Key, Key] = {}
    for tokens in ordered:
        key = _key(tokens)
        if key in full_keys:
            continue
        if any(_contains(existing, key) for existing in full_keys):
            continue
        full_names.append(tokens)
        full_keys.add(key)
        for part_map, part in ((first_of, key[:1]), (last_of, key[1:])):
            owner = part_map.get(part)
            if owner is None:
                part_map[part] = key
            elif owner != key:
                log.warning(
                    "name part %r is shared by %r and %r; resolving to the earlier name",
                    " ".join(part), " ".join(owner), " ".join(key),
                )
    return AliasTable(tuple(full_names), frozenset(full_keys), first_of, last_of)


def resolve_alias(mention: Mention, table: AliasTable) -> tuple[NameRole, Key]:
    """Role of a PER mention plus the case-folded key of the name it belongs to.

    Unseen single tokens own themselves. A multi-token mention contained in
    a registered longer name resolves to that name: as a last name when it
    is a suffix, otherwise as a first-name reference.
    """
    tokens = tuple(mention.surface.split())
    key = _key(tokens)
    if len(key) >= 2:
        if key in table.full_keys:
            return NameRole.FULL_NAME, key
        for full in table.full_names:
            owner = _key(full)
            if _contains(owner, key):
                if owner[len(owner) - len(key):] == key:
                    return NameRole.LAST_ONLY, owner
                return NameRole.FIRST_ONLY, owner
        return NameRole.FULL_NAME, key
    single = key[:1]
    if single in table.first_of:
        return NameRole.FIRST_ONLY, table.first_of[single]
    if single in table.last_of:
        return NameRole.LAST_ONLY, table.last_of[single]
    return NameRole.UNSEEN_SINGLE, key


def classify_role(mention: Mention, table: AliasTable) -> NameRole:
    if mention.etype != "PER":
        raise ValueError(f"classify_role expects a PER mention, got {mention.etype}")
    return resolve_alias(mention, table)[0]


def replacement_tokens(
    target_tokens: tuple[str, ...], role: NameRole, unseen_single: str = "first"
) -> tuple[str, ...]:
    """Slice of the target name that a mention with ``role`` receives.

    A single-token target fills every role with its sole token. Unseen
    single names read as given names by default (``unseen_single="last"``
    switches them to the last-name slice).
    """
    if role is NameRole.UNSEEN_SINGLE:
        role = NameRole.LAST_ONLY if unseen_single == "last" else NameRole.FIRST_ONLY
    if role is NameRole.FULL_NAME or len(target_tokens) == 1:
        return target_tokens if role is NameRole.FULL_NAME else target_tokens[:1]
    if role is NameRole.FIRST_ONLY:
        return target_tokens[:1]
    return target_tokens[1:]


def fit_aux(placeholders: tuple[str, ...], n_aux: int) -> tuple[str, ...]:
    if n_aux == 0:
        return ()
    if not placeholders:
        return ("-X-",) * n_aux
    return tuple(placeholders[min(i, len(placeholders) - 1)] for i in range(n_aux))


def make_span_tokens(
    surfaces: tuple[str, ...],
    etype: str,
    scheme: str,
    n_aux: int,
    aux_placeholders: tuple[str, ...] = DEFAULT_AUX_PLACEHOLDERS,
) -> tuple[Token, ...]:
    """Tokens for an inserted entity span, labeled as one maximal mention."""
    aux = fit_aux(aux_placeholders, n_aux)
    tokens = []
    for i, surface in enumerate(surfaces):
        if scheme == "BIO":
            label = f"B-{etype}" if i == 0 else f"I-{etype}"
        else:
            label = f"I-{etype}"
        tokens.append(Token(surface, aux, label))
    return tuple(tokens)


def splice_spans(
    document: Document,
    replacements: Mapping[int, list[tuple[int, int, tuple[Token, ...]]]],
) -> Document:
    """Rebuild sentences with ``(start, end, tokens)`` spans swapped in."""
    if not replacements:
        return document
    sentences = []
    for s_i, sentence in enumerate(document.sentences):
        spans = sorted(replacements.get(s_i, ()), key=lambda span: span[0])
        if not spans:
            sentences.append(sentence)
            continue
        rebuilt: list[Token] = []
        cursor = 0
        for start, end, tokens in spans:
            rebuilt.extend(sentence.tokens[cursor:start])
            rebuilt.extend(tokens)
            cursor = end
        rebuilt.extend(sentence.tokens[cursor:])
        sentences.append(Sentence(tuple(rebuilt)))
    return Document(document.doc_index, tuple(sentences), document.docstart)


def _replace_document(
    document: Document,
    scheme: str,
    n_aux: int,
    target_tokens: tuple[str, ...],
    aux_placeholders: tuple[str, ...],
    unseen_single: str,
) -> Document:
    table = build_alias_table(document)
    replacements: dict[int, list[tuple[int, int, tuple[Token, ...]]]] = {}
    for mention in extract_mentions(document):
        if mention.etype != "PER":
            continue
        role, _ = resolve_alias(mention, table)
        surfaces = replacement_tokens(target_tokens, role, unseen_single)
        original = tuple(
            t.surface
            for t in document.sentences[mention.sentence_index].tokens[
                mention.token_start : mention.token_end
            ]
        )
        if surfaces == original:
            continue  # surface identity: keep original tokens and columns
        tokens = make_span_tokens(surfaces, "PER", scheme, n_aux, aux_placeholders)
        replacements.setdefault(mention.sentence_index, []).append(
            (mention.token_start, mention.token_end, tokens)
        )
    return splice_spans(document, replacements)


def replace_per(
    corpus: Corpus,
    target: str,
    aux_placeholders: tuple[str, ...] = DEFAULT_AUX_PLACEHOLDERS,
    unseen_single: str = "first",
) -> Corpus:
    """Replace every PER mention with ``target``, honoring name roles.

    Non-PER tokens are untouched. Inserted tokens carry placeholder
    auxiliary columns and a single maximal PER span in the corpus scheme.
    """
    target_tokens = tuple(target.split())
    if not target_tokens:
        raise ValueError("target name must be non-empty")
    n_aux = corpus.column_count - 2
    documents = tuple(
        _replace_document(doc, corpus.scheme, n_aux, target_tokens, aux_placeholders, unseen_single)
        for doc in corpus.documents
    )
    return Corpus(documents, corpus.scheme, corpus.column_count)


def generate_per_variants(
    corpus: Corpus,
    inv: CountryInventory,
    seed: int,
    aux_placeholders: tuple[str, ...] = DEFAULT_AUX_PLACEHOLDERS,
    unseen_single: str = "first",
) -> list[tuple[str, Corpus]]:
    """One switched corpus per constructed full name, in name order."""
    names = construct_full_names(inv, seed)
    return [
        (name, replace_per(corpus, name, aux_placeholders, unseen_single)) for name in names
    ]
