"""Reader for the audit manifest contract (JSON).

Only the fields the runner needs are modeled; paths are relative, gold to
the manifest's directory and predictions to the prediction directory.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import RunnerError


@dataclass(frozen=True)
class ManifestEntry:
    country_id: str
    variant_index: int
    gold_variant_path: str
    expected_pred_path: str


@dataclass(frozen=True)
class Manifest:
    audit_id: str
    mode: str
    scheme: str
    column_count: int
    entries: tuple[ManifestEntry, ...]
    baseline_gold_path: str | None = None
    baseline_pred_path: str | None = None


def read_manifest(path: str | Path) -> Manifest:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise RunnerError(f"cannot read manifest: {exc}") from None
    except json.JSONDecodeError as exc:
        raise RunnerError(f"invalid manifest JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise RunnerError("manifest must be a JSON object")
    try:
        entries = tuple(
            ManifestEntry(
                country_id=str(e["country_id"]),
                variant_index=int(e["variant_index"]),
                gold_variant_path=str(e["gold_variant_path"]),
                expected_pred_path=str(e["expected_pred_path"]),
            )
            for e in payload.get("entries", [])
        )
        scheme = str(payload.get("scheme", "BIO"))
        if scheme not in ("BIO", "IO"):
            raise ValueError(f"unknown scheme {scheme!r}")
        return Manifest(
            audit_id=str(payload.get("audit_id", "audit")),
            mode=str(payload.get("mode", "per_only")),
            scheme=scheme,
            column_count=int(payload.get("column_count", 4)),
            entries=entries,
            baseline_gold_path=payload.get("baseline_gold_path"),
            baseline_pred_path=payload.get("baseline_pred_path"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise RunnerError(f"malformed manifest: {exc}") from None
