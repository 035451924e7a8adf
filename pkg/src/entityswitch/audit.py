"""Audit orchestration: generate variant corpora with a manifest, score
externally produced prediction files, and render per-country report tables.

The manifest is the contract between the generate phase and the report
phase: it lists every variant, where its gold file lives (relative to the
manifest), and where its prediction file is expected (relative to the
prediction directory, which defaults to the manifest's directory).
"""
from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ._util import atomic_write_text, parallel_map, slugify
from .conll_io import Corpus, parse_corpus, serialize_corpus
from .errors import AuditError
from .evaluation import Metrics, disagreements, evaluate, format_percent
from .full_switch import LocAnnotation, OrgAnnotation, switch_all
from .inventory import CountryInventory, construct_full_names
from .per_switch import DEFAULT_AUX_PLACEHOLDERS, replace_per

MODE_PER_ONLY = "per_only"
MODE_ALL_TYPES = "all_types"
MODES = (MODE_PER_ONLY, MODE_ALL_TYPES)

BASELINE_LABEL = "Original"


@dataclass(frozen=True)
class ManifestEntry:
    country_id: str
    variant_index: int
    name_or_seed: str | int
    gold_variant_path: str
    expected_pred_path: str


@dataclass(frozen=True)
class Manifest:
    audit_id: str
    mode: str
    scheme: str
    column_count: int
    seed: int
    entries: tuple[ManifestEntry, ...]
    baseline_gold_path: str | None = None
    baseline_pred_path: str | None = None


@dataclass(frozen=True)
class VariantResult:
    entry: ManifestEntry
    metrics: Metrics | None  # None when the prediction file is missing


@dataclass(frozen=True)
class CountryRow:
    country_id: str
    precision: float | None
    recall: float | None
    f1: float | None
    scored: int
    missing: int

    @property
    def available(self) -> bool:
        return self.scored > 0


@dataclass(frozen=True)
class AuditReport:
    audit_id: str
    mode: str
    rows: tuple[CountryRow, ...]
    baseline: CountryRow | None
    variants: tuple[VariantResult, ...]


def manifest_to_json(manifest: Manifest) -> str:
    payload = {
        "audit_id": manifest.audit_id,
        "mode": manifest.mode,
        "scheme": manifest.scheme,
        "column_count": manifest.column_count,
        "seed": manifest.seed,
        "baseline_gold_path": manifest.baseline_gold_path,
        "baseline_pred_path": manifest.baseline_pred_path,
        "entries": [
            {
                "country_id": e.country_id,
                "variant_index": e.variant_index,
                "name_or_seed": e.name_or_seed,
                "gold_variant_path": e.gold_variant_path,
                "expected_pred_path": e.expected_pred_path,
            }
            for e in manifest.entries
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def manifest_from_json(text: str) -> Manifest:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AuditError(f"invalid manifest JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise AuditError("manifest must be a JSON object")
    try:
        entries = tuple(
            ManifestEntry(
                country_id=str(e["country_id"]),
                variant_index=int(e["variant_index"]),
                name_or_seed=e["name_or_seed"],
                gold_variant_path=str(e["gold_variant_path"]),
                expected_pred_path=str(e["expected_pred_path"]),
            )
            for e in payload.get("entries", [])
        )
        manifest = Manifest(
            audit_id=str(payload["audit_id"]),
            mode=str(payload["mode"]),
            scheme=str(payload.get("scheme", "BIO")),
            column_count=int(payload.get("column_count", 4)),
            seed=int(payload.get("seed", 0)),
            entries=entries,
            baseline_gold_path=payload.get("baseline_gold_path"),
            baseline_pred_path=payload.get("baseline_pred_path"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise AuditError(f"malformed manifest: {exc}") from None
    _validate_manifest(manifest)
    return manifest


def _validate_manifest(manifest: Manifest) -> None:
    if manifest.mode not in MODES:
        raise AuditError(f"manifest mode must be one of {MODES}, got {manifest.mode!r}")
    gold_paths = [e.gold_variant_path for e in manifest.entries]
    pred_paths = [e.expected_pred_path for e in manifest.entries]
    if manifest.baseline_gold_path:
        gold_paths.append(manifest.baseline_gold_path)
    if manifest.baseline_pred_path:
        pred_paths.append(manifest.baseline_pred_path)
    for kind, paths in (("gold", gold_paths), ("prediction", pred_paths)):
        if len(set(paths)) != len(paths):
            raise AuditError(f"manifest {kind} paths are not unique")
    seen = set()
    for entry in manifest.entries:
        if entry.variant_index < 0:
            raise AuditError(f"negative variant index in entry {entry.gold_variant_path}")
        key = (entry.country_id, entry.variant_index)
        if key in seen:
            raise AuditError(f"duplicate (country, variant_index) {key}")
        seen.add(key)


def read_manifest(path: str | Path) -> Manifest:
    return manifest_from_json(Path(path).read_text(encoding="utf-8"))


def _pred_path_for(gold_name: str) -> str:
    stem = gold_name[: -len(".conll")] if gold_name.endswith(".conll") else gold_name
    return f"{stem}.pred.conll"


def generate_audit(
    corpus: Corpus,
    inventories: Sequence[CountryInventory] | Mapping[str, CountryInventory],
    countries: Sequence[str],
    mode: str,
    variants_per_country: int | None,
    seed: int,
    out_dir: str | Path,
    *,
    org_annotations: Sequence[OrgAnnotation] = (),
    loc_annotations: Sequence[LocAnnotation] = (),
    audit_id: str = "audit",
    aux_placeholders: tuple[str, ...] = DEFAULT_AUX_PLACEHOLDERS,
    unseen_single: str = "first",
    num_threads: int = 1,
) -> Manifest:
    """Write gold variant files plus ``manifest.json`` into ``out_dir``.

    per_only mode produces one variant per constructed full name;
    all_types mode runs the whole-corpus switch with per-variant seeds
    (master seed + variant index). Byte-identical on reruns with the same
    inputs. The unswitched corpus is written as ``original.conll`` so the
    baseline row can be scored.
    """
    if mode not in MODES:
        raise AuditError(f"mode must be one of {MODES}, got {mode!r}")
    if isinstance(inventories, Mapping):
        by_id = dict(inventories)
    else:
        by_id = {inv.country_id: inv for inv in inventories}
    missing = [c for c in countries if c not in by_id]
    if missing:
        raise AuditError(f"countries not in inventory file: {', '.join(missing)}")
    if not countries:
        raise AuditError("no countries requested")
    if variants_per_country is not None and variants_per_country < 1:
        raise AuditError(f"variants_per_country must be >= 1, got {variants_per_country}")

    tasks: list[tuple[str, int, str | int, str]] = []  # country, index, name_or_seed, filename
    for country in countries:
        inv = by_id[country]
        if mode == MODE_PER_ONLY:
            names = construct_full_names(inv, seed)
            count = len(names) if variants_per_country is None else variants_per_country
            if count > len(names):
                raise AuditError(
                    f"country {country!r}: {count} variants requested but only "
                    f"{len(names)} names can be constructed"
                )
            for i, name in enumerate(names[:count]):
                tasks.append((country, i, name, f"{country}_{i:02d}_{slugify(name)}.conll"))
        else:
            count = 1 if variants_per_country is None else variants_per_country
            for i in range(count):
                variant_seed = seed + i
                tasks.append((country, i, variant_seed, f"{country}_{i:02d}_seed{variant_seed}.conll"))

    def build(task: tuple[str, int, str | int, str]) -> str:
        country, _, name_or_seed, _ = task
        inv = by_id[country]
        if mode == MODE_PER_ONLY:
            variant = replace_per(corpus, str(name_or_seed), aux_placeholders, unseen_single)
        else:
            variant = switch_all(
                corpus, inv, list(org_annotations), list(loc_annotations),
                seed=int(name_or_seed), aux_placeholders=aux_placeholders,
                unseen_single=unseen_single,
            )
        return serialize_corpus(variant)

    rendered = parallel_map(build, tasks, num_threads)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for (country, index, name_or_seed, filename), text in zip(tasks, rendered):
        atomic_write_text(out / filename, text)
        entries.append(
            ManifestEntry(country, index, name_or_seed, filename, _pred_path_for(filename))
        )

    baseline_gold = "original.conll"
    atomic_write_text(out / baseline_gold, serialize_corpus(corpus))
    manifest = Manifest(
        audit_id=audit_id,
        mode=mode,
        scheme=corpus.scheme,
        column_count=corpus.column_count,
        seed=seed,
        entries=tuple(entries),
        baseline_gold_path=baseline_gold,
        baseline_pred_path=_pred_path_for(baseline_gold),
    )
    _validate_manifest(manifest)
    atomic_write_text(out / "manifest.json", manifest_to_json(manifest))
    return manifest


def _mean(values: list[float]) -> float:
    return float(statistics.mean(values))  # exact (Fraction-based), so mean of equal values is that value


def aggregate(
    manifest: Manifest,
    base_dir: str | Path,
    pred_dir: str | Path | None = None,
) -> AuditReport:
    """Score every manifest entry and average per country.

    Gold files resolve against ``base_dir`` (the manifest's directory),
    predictions against ``pred_dir`` (default: ``base_dir``). Missing
    predictions are excluded from the means and flagged; a country with no
    scored variant is reported unavailable. per_only audits score PER only,
    all_types audits score all entity types.
    """
    base = Path(base_dir)
    preds = Path(pred_dir) if pred_dir is not None else base
    type_filter = "PER" if manifest.mode == MODE_PER_ONLY else None

    def score(gold_rel: str, pred_rel: str) -> Metrics | None:
        pred_path = preds / pred_rel
        if not pred_path.is_file():
            return None
        gold = parse_corpus(
            (base / gold_rel).read_text(encoding="utf-8"),
            manifest.column_count, manifest.scheme,
        )
        pred = parse_corpus(
            pred_path.read_text(encoding="utf-8"),
            manifest.column_count, manifest.scheme, lenient=True,
        )
        return evaluate(gold, pred, type_filter).metrics

    variants = tuple(
        VariantResult(entry, score(entry.gold_variant_path, entry.expected_pred_path))
        for entry in manifest.entries
    )

    country_order: list[str] = []
    for entry in manifest.entries:
        if entry.country_id not in country_order:
            country_order.append(entry.country_id)
    rows = []
    for country in country_order:
        scored = [v.metrics for v in variants if v.entry.country_id == country and v.metrics]
        n_missing = sum(
            1 for v in variants if v.entry.country_id == country and v.metrics is None
        )
        if scored:
            row = CountryRow(
                country,
                _mean([m.precision for m in scored]),
                _mean([m.recall for m in scored]),
                _mean([m.f1 for m in scored]),
                len(scored),
                n_missing,
            )
        else:
            row = CountryRow(country, None, None, None, 0, n_missing)
        rows.append(row)

    baseline = None
    if manifest.baseline_gold_path and manifest.baseline_pred_path:
        metrics = score(manifest.baseline_gold_path, manifest.baseline_pred_path)
        if metrics is not None:
            baseline = CountryRow(
                BASELINE_LABEL, metrics.precision, metrics.recall, metrics.f1, 1, 0
            )
    return AuditReport(manifest.audit_id, manifest.mode, tuple(rows), baseline, variants)


def dump_disagreements(
    manifest: Manifest,
    base_dir: str | Path,
    pred_dir: str | Path | None = None,
    out_dir: str | Path | None = None,
) -> list[str]:
    """Write one raw disagreement dump (TSV) per scored variant.

    Each row is a token whose gold and predicted types differ; the dumps
    feed manual error analysis and carry no aggregation. Returns the
    written file names.
    """
    base = Path(base_dir)
    preds = Path(pred_dir) if pred_dir is not None else base
    out = Path(out_dir) if out_dir is not None else preds
    jobs = [(e.gold_variant_path, e.expected_pred_path) for e in manifest.entries]
    if manifest.baseline_gold_path and manifest.baseline_pred_path:
        jobs.append((manifest.baseline_gold_path, manifest.baseline_pred_path))
    written = []
    for gold_rel, pred_rel in jobs:
        pred_path = preds / pred_rel
        if not pred_path.is_file():
            continue
        gold = parse_corpus(
            (base / gold_rel).read_text(encoding="utf-8"),
            manifest.column_count, manifest.scheme,
        )
        pred = parse_corpus(
            pred_path.read_text(encoding="utf-8"),
            manifest.column_count, manifest.scheme, lenient=True,
        )
        lines = ["document\tsentence\ttoken\tsurface\tgold\tpred"]
        for d in disagreements(gold, pred):
            lines.append(
                f"{d.doc_index}\t{d.sentence_index}\t{d.token_index}\t{d.surface}\t{d.gold}\t{d.pred}"
            )
        stem = pred_rel[: -len(".conll")] if pred_rel.endswith(".conll") else pred_rel
        name = f"{stem}.disagreements.tsv"
        atomic_write_text(out / name, "\n".join(lines) + "\n")
        written.append(name)
    return written


_HEADER = ("Country", "P", "R", "F1", "Variants", "Missing")


def _row_cells(row: CountryRow) -> tuple[str, str, str, str, str, str]:
    if row.available:
        p, r, f1 = (format_percent(v) for v in (row.precision, row.recall, row.f1))
    else:
        p = r = f1 = "-"
    return (row.country_id, p, r, f1, str(row.scored), str(row.missing))


def render_report(report: AuditReport, fmt: str = "md") -> str:
    """Render the per-country table as Markdown, CSV, or JSON.

    Percentages carry 1 decimal (round half up); the baseline row, when
    scored, comes first.
    """
    rows = ([report.baseline] if report.baseline else []) + list(report.rows)
    if fmt == "md":
        lines = ["| " + " | ".join(_HEADER) + " |", "| " + " | ".join("---" for _ in _HEADER) + " |"]
        lines += ["| " + " | ".join(_row_cells(row)) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(_HEADER)
        for row in rows:
            writer.writerow(_row_cells(row))
        return buffer.getvalue()
    if fmt == "json":
        def row_obj(row: CountryRow) -> dict:
            return {
                "country": row.country_id,
                "precision": float(format_percent(row.precision)) if row.available else None,
                "recall": float(format_percent(row.recall)) if row.available else None,
                "f1": float(format_percent(row.f1)) if row.available else None,
                "variants": row.scored,
                "missing": row.missing,
                "available": row.available,
            }
        payload = {
            "audit_id": report.audit_id,
            "mode": report.mode,
            "baseline": row_obj(report.baseline) if report.baseline else None,
            "rows": [row_obj(row) for row in report.rows],
        }
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"format must be md, csv, or json, got {fmt!r}")
