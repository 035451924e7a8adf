"""Switch every PER, LOC, and ORG mention to country-specific entities.

Replacements are sampled i.i.d. from the inventory, constrained to the
annotated LOC granularity or ORG sub-category, and held consistent within a
document: the first occurrence of a surface draws its replacement, later
occurrences reuse it. MISC mentions are never touched; ORG mentions
annotated ``others`` (or left unannotated) stay verbatim.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from ._util import derive_rng, parallel_map
from .conll_io import Corpus, Document, Token, extract_mentions
from .errors import AnnotationError, SamplingError
from .inventory import CountryInventory, Granularity, OrgSubcategory, sample_entity, sample_full_name
from .per_switch import (
    DEFAULT_AUX_PLACEHOLDERS,
    build_alias_table,
    make_span_tokens,
    replacement_tokens,
    resolve_alias,
    splice_spans,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrgAnnotation:
    surface: str
    subcategory: OrgSubcategory  # OTHERS means "leave the mention as is"


@dataclass(frozen=True)
class LocAnnotation:
    surface: str
    granularity: Granularity


def parse_org_annotations(text: str) -> list[OrgAnnotation]:
    return _parse_annotations(text, OrgSubcategory, OrgAnnotation)


def parse_loc_annotations(text: str) -> list[LocAnnotation]:
    return _parse_annotations(text, Granularity, LocAnnotation)


def load_org_annotations(source: str | os.PathLike) -> list[OrgAnnotation]:
    return parse_org_annotations(_annotation_text(source))


def load_loc_annotations(source: str | os.PathLike) -> list[LocAnnotation]:
    return parse_loc_annotations(_annotation_text(source))


def _annotation_text(source: str | os.PathLike) -> str:
    if isinstance(source, str) and ("\n" in source or "\t" in source):
        return source
    return Path(source).read_text(encoding="utf-8")


def _parse_annotations(text: str, enum_cls, ann_cls) -> list:
    """Two tab-separated columns per line (surface, category); '#' comments."""
    out = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in raw.split("\t")]
        parts = [p for p in parts if p]
        if len(parts) != 2:
            raise AnnotationError(
                f"expected 'surface<TAB>category', got {raw!r}", lineno
            )
        surface, category = parts
        try:
            value = enum_cls(category.strip().lower().replace("-", "_").replace(" ", "_"))
        except ValueError:
            allowed = ", ".join(e.value for e in enum_cls)
            raise AnnotationError(
                f"unknown category {category!r} (expected one of {allowed})", lineno
            ) from None
        key = surface.casefold()
        if key in seen:
            raise AnnotationError(
                f"duplicate surface {surface!r} (first on line {seen[key]})", lineno
            )
        seen[key] = lineno
        out.append(ann_cls(surface, value))
    return out


def list_unannotated_orgs(corpus: Corpus, annotations: list[OrgAnnotation]) -> list[str]:
    """Distinct ORG mention surfaces with no annotation, case-insensitively
    deduplicated (first-seen casing kept), sorted."""
    known = {a.surface.casefold() for a in annotations}
    found: dict[str, str] = {}
    for doc in corpus.documents:
        for mention in extract_mentions(doc):
            if mention.etype == "ORG" and mention.surface.casefold() not in known:
                found.setdefault(mention.surface.casefold(), mention.surface)
    return [found[key] for key in sorted(found)]


def _switch_document(
    document: Document,
    inv: CountryInventory,
    org_by_key: dict[str, OrgSubcategory],
    loc_by_key: dict[str, Granularity],
    seed: int,
    scheme: str,
    n_aux: int,
    aux_placeholders: tuple[str, ...],
    unseen_single: str,
) -> Document:
    rng = derive_rng(seed, document.doc_index)
    table = build_alias_table(document)
    per_names: dict[tuple[str, ...], tuple[str, ...]] = {}
    loc_map: dict[str, str] = {}
    org_map: dict[str, str] = {}
    warned: set[str] = set()
    replacements: dict[int, list[tuple[int, int, tuple[Token, ...]]]] = {}

    for mention in extract_mentions(document):
        if mention.etype == "MISC":
            continue
        if mention.etype == "PER":
            role, owner = resolve_alias(mention, table)
            if owner not in per_names:
                per_names[owner] = tuple(sample_full_name(inv, rng).split())
            surfaces = replacement_tokens(per_names[owner], role, unseen_single)
        elif mention.etype == "LOC":
            key = mention.surface.casefold()
            if key not in loc_map:
                granularity = loc_by_key.get(key, Granularity.ANY)
                try:
                    loc_map[key] = sample_entity(inv, "LOC", granularity, rng)
                except SamplingError as exc:
                    raise SamplingError(
                        f"document {document.doc_index}: LOC {mention.surface!r}: {exc}"
                    ) from None
            surfaces = tuple(loc_map[key].split())
        else:  # ORG
            key = mention.surface.casefold()
            subcategory = org_by_key.get(key)
            if subcategory is None:
                if key not in warned:
                    warned.add(key)
                    log.warning(
                        "document %d: ORG %r has no sub-category annotation; "
                        "treating as 'others' and leaving it unreplaced",
                        document.doc_index, mention.surface,
                    )
                continue
            if subcategory is OrgSubcategory.OTHERS:
                continue
            if key not in org_map:
                try:
                    org_map[key] = sample_entity(inv, "ORG", subcategory, rng)
                except SamplingError as exc:
                    raise SamplingError(
                        f"document {document.doc_index}: ORG {mention.surface!r}: {exc}"
                    ) from None
            surfaces = tuple(org_map[key].split())

        original = tuple(
            t.surface
            for t in document.sentences[mention.sentence_index].tokens[
                mention.token_start : mention.token_end
            ]
        )
        if surfaces == original:
            continue
        tokens = make_span_tokens(surfaces, mention.etype, scheme, n_aux, aux_placeholders)
        replacements.setdefault(mention.sentence_index, []).append(
            (mention.token_start, mention.token_end, tokens)
        )
    return splice_spans(document, replacements)


def switch_all(
    corpus: Corpus,
    inv: CountryInventory,
    org_annotations: list[OrgAnnotation] = (),
    loc_annotations: list[LocAnnotation] = (),
    *,
    seed: int,
    num_threads: int = 1,
    aux_placeholders: tuple[str, ...] = DEFAULT_AUX_PLACEHOLDERS,
    unseen_single: str = "first",
) -> Corpus:
    """Replace all PER/LOC/ORG mentions with seeded country-specific draws.

    Each document draws from its own random stream keyed by (seed,
    doc_index), so output bytes do not depend on ``num_threads`` or
    processing order.
    """
    org_by_key = {a.surface.casefold(): a.subcategory for a in org_annotations}
    loc_by_key = {a.surface.casefold(): a.granularity for a in loc_annotations}
    n_aux = corpus.column_count - 2

    def work(document: Document) -> Document:
        return _switch_document(
            document, inv, org_by_key, loc_by_key, seed,
            corpus.scheme, n_aux, aux_placeholders, unseen_single,
        )

    documents = parallel_map(work, corpus.documents, num_threads)
    return Corpus(tuple(documents), corpus.scheme, corpus.column_count)
