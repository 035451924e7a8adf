"""Run a token-classification model over every gold variant in a manifest
and write prediction files at the expected paths.

``stub:echo`` copies the gold labels through unchanged; it exists to smoke
test the audit pipeline end to end. Any other model id is loaded as a
Hugging Face token-classification checkpoint.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .conll_files import (
    atomic_write_text,
    read_column_file,
    render_with_labels,
    words_of,
)
from .errors import LengthMismatch
from .manifest import read_manifest
from .models import HFTokenClassifier, emit_tags

log = logging.getLogger(__name__)

STUB_ECHO = "stub:echo"


@dataclass(frozen=True)
class RunnerConfig:
    model: str
    batch_size: int = 16
    label_map: dict[str, str] | None = None
    device: str = "cpu"


@dataclass
class RunReport:
    written: list[str] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)  # (gold path, reason)


def run(manifest_path: str | Path, config: RunnerConfig,
        pred_dir: str | Path | None = None) -> RunReport:
    """Produce one prediction file per manifest entry (and the baseline).

    Entries whose words cannot be aligned with the model's tokenization are
    skipped and reported. Returns the list of written and skipped files.
    """
    manifest = read_manifest(manifest_path)
    base = Path(manifest_path).resolve().parent
    out_base = Path(pred_dir) if pred_dir is not None else base

    jobs = [(e.gold_variant_path, e.expected_pred_path) for e in manifest.entries]
    if manifest.baseline_gold_path and manifest.baseline_pred_path:
        jobs.append((manifest.baseline_gold_path, manifest.baseline_pred_path))
    report = RunReport()
    if not jobs:
        return report

    model = None
    if config.model != STUB_ECHO:
        model = HFTokenClassifier(config.model, config.device, config.label_map)

    for gold_rel, pred_rel in jobs:
        column_file = read_column_file(base / gold_rel)
        labels_by_line: dict[int, str] = {}
        try:
            if model is not None:
                sentences = column_file.sentences
                for start in range(0, len(sentences), config.batch_size):
                    batch = sentences[start : start + config.batch_size]
                    batch_words = [words_of(column_file, s) for s in batch]
                    batch_types = model.label_sentences(batch_words)
                    for sentence, word_types in zip(batch, batch_types):
                        tags = emit_tags(word_types, manifest.scheme)
                        labels_by_line.update(zip(sentence, tags))
        except LengthMismatch as exc:
            log.warning("skipping %s: %s", gold_rel, exc)
            report.skipped.append((gold_rel, str(exc)))
            continue
        atomic_write_text(out_base / pred_rel, render_with_labels(column_file, labels_by_line))
        report.written.append(pred_rel)
    return report
