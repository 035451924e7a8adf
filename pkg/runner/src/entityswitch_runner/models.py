"""Token-classification backends and tag mapping.

Model tags are mapped onto the audit's canonical set {O, PER, LOC, ORG,
MISC}: a B-/I-/E-/S- prefix is stripped and the remainder matched
case-insensitively; explicit overrides win; anything else maps to O with a
warning. Word-level labels are taken from each word's first subword.
"""
from __future__ import annotations

import logging
import re

from .errors import LengthMismatch, RunnerError

log = logging.getLogger(__name__)

CANONICAL_TYPES = ("PER", "LOC", "ORG", "MISC")
_PREFIXED = re.compile(r"^([BIES])-(.+)$")


def build_tag_map(tags, overrides: dict[str, str] | None = None) -> dict[str, tuple[str, bool]]:
    """Map each model tag to (canonical type or "O", begins-a-span flag)."""
    mapping: dict[str, tuple[str, bool]] = {}
    for tag in tags:
        match = _PREFIXED.match(tag)
        begin = bool(match) and match.group(1) in ("B", "S")
        if overrides and tag in overrides:
            value = overrides[tag]
            if value not in CANONICAL_TYPES and value != "O":
                raise RunnerError(
                    f"label map value for {tag!r} must be one of O, "
                    f"{', '.join(CANONICAL_TYPES)}; got {value!r}"
                )
            mapping[tag] = (value, begin)
            continue
        if tag == "O":
            mapping[tag] = ("O", False)
            continue
        body = (match.group(2) if match else tag).upper()
        if body in CANONICAL_TYPES:
            mapping[tag] = (body, begin)
        else:
            mapping[tag] = ("O", False)
            log.warning("model tag %r has no mapping; treating it as O", tag)
    return mapping


def emit_tags(word_types: list[tuple[str, bool]], scheme: str) -> list[str]:
    """Render (type, begin) pairs in the gold file's labeling scheme."""
    out = []
    prev = None
    for etype, begin in word_types:
        if etype == "O":
            out.append("O")
            prev = None
            continue
        if scheme == "BIO":
            out.append(("B-" if begin or prev != etype else "I-") + etype)
        else:
            out.append("I-" + etype)
        prev = etype
    return out


class HFTokenClassifier:
    """transformers-backed word labeler (first-subword label selection)."""

    def __init__(self, model_id: str, device: str = "cpu",
                 label_overrides: dict[str, str] | None = None):
        try:
            import torch
            from transformers import AutoModelForTokenClassification, AutoTokenizer
        except ImportError as exc:
            raise RunnerError(
                "torch and transformers are required for model inference; "
                "install the [hf] extra"
            ) from exc
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(model_id)
            self.model = AutoModelForTokenClassification.from_pretrained(model_id)
        except Exception as exc:
            raise RunnerError(f"cannot load model {model_id!r}: {exc}") from exc
        if not getattr(self.tokenizer, "is_fast", False):
            raise RunnerError("a fast tokenizer is required for word alignment")
        self._torch = torch
        self.device = torch.device(device)
        self.model.to(self.device)
        self.model.eval()
        self.id2label = {int(k): v for k, v in self.model.config.id2label.items()}
        self.tag_map = build_tag_map(self.id2label.values(), label_overrides)

    def label_sentences(self, batch: list[list[str]]) -> list[list[tuple[str, bool]]]:
        encoding = self.tokenizer(
            batch, is_split_into_words=True, padding=True, truncation=True,
            return_tensors="pt",
        )
        inputs = {k: v.to(self.device) for k, v in encoding.items()}
        with self._torch.no_grad():
            logits = self.model(**inputs).logits
        predictions = logits.argmax(dim=-1).tolist()
        results = []
        for i, words in enumerate(batch):
            word_ids = encoding.word_ids(batch_index=i)
            first_subword: dict[int, int] = {}
            for position, word_id in enumerate(word_ids):
                if word_id is not None and word_id not in first_subword:
                    first_subword[word_id] = position
            if len(first_subword) != len(words):
                raise LengthMismatch(
                    f"only {len(first_subword)} of {len(words)} words survived "
                    "tokenization (truncation or empty pieces)"
                )
            tags = [self.id2label[predictions[i][first_subword[w]]] for w in range(len(words))]
            results.append([self.tag_map[tag] for tag in tags])
        return results
