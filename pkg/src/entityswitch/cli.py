"""Command-line interface.

Subcommands: switch-per, switch-all, evaluate, audit generate, audit report,
annotate-orgs, validate-inventory. Exit codes: 0 success, 1 input or
validation error, 2 internal error. Diagnostics go to stderr; data goes to
files or stdout.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ._util import atomic_write_text, num_threads_from_env, slugify
from .audit import (
    MODE_ALL_TYPES,
    MODE_PER_ONLY,
    Manifest,
    ManifestEntry,
    aggregate,
    dump_disagreements,
    generate_audit,
    manifest_to_json,
    read_manifest,
    render_report,
)
from .conll_io import parse_corpus, serialize_corpus
from .errors import EntitySwitchError
from .evaluation import disagreements, evaluate, format_percent
from .full_switch import (
    list_unannotated_orgs,
    load_loc_annotations,
    load_org_annotations,
    switch_all,
)
from .inventory import inventory_warnings, load_inventories
from .per_switch import generate_per_variants, replace_per


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise EntitySwitchError(f"cannot read {path}: {exc}") from None


def _corpus_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scheme", choices=("BIO", "IO"), default="BIO",
                        help="labeling scheme of the input (default: BIO)")
    parser.add_argument("--columns", type=int, default=4, metavar="N",
                        help="columns per token line (default: 4)")
    parser.add_argument("--lenient", action="store_true",
                        help="repair stray I-X labels to B-X instead of failing")


def _aux_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--aux-placeholders", default="NNP,I-NP", metavar="LIST",
                        help="comma-separated auxiliary column values for inserted "
                             "tokens (default: NNP,I-NP)")
    parser.add_argument("--unseen-single", choices=("first", "last"), default="first",
                        help="role for single names matching no full name (default: first)")


def _load_corpus(args) -> "parse_corpus":
    return parse_corpus(_read_text(args.input), args.columns, args.scheme, args.lenient)


def _aux(args) -> tuple[str, ...]:
    return tuple(p for p in args.aux_placeholders.split(",") if p)


def _load_annotations(args):
    org = load_org_annotations(args.org_annotations) if getattr(args, "org_annotations", None) else []
    loc = load_loc_annotations(args.loc_annotations) if getattr(args, "loc_annotations", None) else []
    return org, loc


def _inventory_for(args, country: str):
    inventories = load_inventories(args.inventory)
    for inv in inventories:
        if inv.country_id == country:
            return inv
    raise EntitySwitchError(f"country {country!r} not found in {args.inventory}")


def _cmd_switch_per(args) -> int:
    if args.name is not None and not args.name.strip():
        args.parser.error("--name must be non-empty")
    if not args.name and (not args.country or not args.inventory or args.seed is None):
        args.parser.error("provide --name, or --country with --inventory and --seed")
    corpus = _load_corpus(args)
    out_dir = Path(args.out_dir)
    entries = []
    if args.name:
        variants = [(args.name, replace_per(corpus, args.name, _aux(args), args.unseen_single))]
        country = "custom"
    else:
        inv = _inventory_for(args, args.country)
        variants = generate_per_variants(corpus, inv, args.seed, _aux(args), args.unseen_single)
        country = args.country
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, (name, variant) in enumerate(variants):
        filename = f"{country}_{i:02d}_{slugify(name)}.conll"
        atomic_write_text(out_dir / filename, serialize_corpus(variant))
        stem = filename[: -len(".conll")]
        entries.append(ManifestEntry(country, i, name, filename, f"{stem}.pred.conll"))
    atomic_write_text(out_dir / "original.conll", serialize_corpus(corpus))
    manifest = Manifest(
        audit_id=args.audit_id, mode=MODE_PER_ONLY, scheme=corpus.scheme,
        column_count=corpus.column_count, seed=args.seed or 0, entries=tuple(entries),
        baseline_gold_path="original.conll", baseline_pred_path="original.pred.conll",
    )
    atomic_write_text(out_dir / "manifest.json", manifest_to_json(manifest))
    print(f"wrote {len(entries)} variant file(s) and manifest.json to {out_dir}", file=sys.stderr)
    return 0


def _cmd_switch_all(args) -> int:
    corpus = _load_corpus(args)
    inv = _inventory_for(args, args.country)
    org_ann, loc_ann = _load_annotations(args)
    switched = switch_all(
        corpus, inv, org_ann, loc_ann, seed=args.seed,
        num_threads=num_threads_from_env(), aux_placeholders=_aux(args),
        unseen_single=args.unseen_single,
    )
    atomic_write_text(args.out, serialize_corpus(switched))
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_evaluate(args) -> int:
    gold = parse_corpus(_read_text(args.gold), args.columns, args.scheme, args.lenient)
    pred = parse_corpus(_read_text(args.pred), args.columns, args.scheme, lenient=True)
    result = evaluate(gold, pred, args.type)
    scope = args.type or "overall"
    counts = result.counts.per_type[args.type] if args.type else result.counts.overall
    metrics = result.metrics
    print(
        f"P={format_percent(metrics.precision)} R={format_percent(metrics.recall)} "
        f"F1={format_percent(metrics.f1)} ({scope}: tp={counts.tp} fp={counts.fp} fn={counts.fn})"
    )
    if not args.type:
        for etype, type_metrics in result.per_type_metrics().items():
            c = result.counts.per_type[etype]
            print(
                f"{etype}: P={format_percent(type_metrics.precision)} "
                f"R={format_percent(type_metrics.recall)} F1={format_percent(type_metrics.f1)} "
                f"(tp={c.tp} fp={c.fp} fn={c.fn})"
            )
    if args.out:
        import json

        payload = {
            "type_filter": args.type,
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f1": metrics.f1,
            "counts": {
                "overall": vars(result.counts.overall),
                **{t: vars(c) for t, c in result.counts.per_type.items()},
            },
            "disagreements": [vars(d) for d in disagreements(gold, pred)],
        }
        atomic_write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return 0


def _cmd_annotate_orgs(args) -> int:
    corpus = _load_corpus(args)
    annotations = load_org_annotations(args.annotations) if args.annotations else []
    for surface in list_unannotated_orgs(corpus, annotations):
        print(surface)
    return 0


def _cmd_validate_inventory(args) -> int:
    inventories = load_inventories(args.inventory)
    warnings = inventory_warnings(inventories)
    print(f"ok: {len(inventories)} countries ({', '.join(i.country_id for i in inventories)})")
    for warning in warnings:
        print(f"warning: {warning}")
    return 0


def _cmd_audit_generate(args) -> int:
    corpus = _load_corpus(args)
    inventories = load_inventories(args.inventory)
    countries = (
        [c.strip() for c in args.countries.split(",") if c.strip()]
        if args.countries
        else [inv.country_id for inv in inventories]
    )
    mode = MODE_PER_ONLY if args.mode == "per" else MODE_ALL_TYPES
    org_ann, loc_ann = _load_annotations(args)
    manifest = generate_audit(
        corpus, inventories, countries, mode, args.variants_per_country, args.seed,
        args.out_dir, org_annotations=org_ann, loc_annotations=loc_ann,
        audit_id=args.audit_id, aux_placeholders=_aux(args),
        unseen_single=args.unseen_single, num_threads=num_threads_from_env(),
    )
    print(
        f"wrote {len(manifest.entries)} gold variant file(s), original.conll and "
        f"manifest.json to {args.out_dir}",
        file=sys.stderr,
    )
    return 0


def _cmd_audit_report(args) -> int:
    manifest = read_manifest(args.manifest)
    base_dir = Path(args.manifest).parent
    report = aggregate(manifest, base_dir, args.pred_dir)
    rendered = render_report(report, args.format)
    if args.out:
        atomic_write_text(args.out, rendered)
    else:
        sys.stdout.write(rendered)
    if args.dump_disagreements:
        written = dump_disagreements(manifest, base_dir, args.pred_dir, args.dump_disagreements)
        print(f"wrote {len(written)} disagreement dump(s) to {args.dump_disagreements}", file=sys.stderr)
    unavailable = [row.country_id for row in report.rows if not row.available]
    if unavailable:
        print(
            f"no predictions found for: {', '.join(unavailable)}", file=sys.stderr
        )
        return 1
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="entityswitch",
                     description="Audit NER robustness with entity-switched corpora.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("switch-per", help="replace every PER mention with a single name")
    p.add_argument("--input", required=True, help="gold corpus file")
    p.add_argument("--name", help="one replacement full name (no sampling)")
    p.add_argument("--country", help="country id from the inventory file")
    p.add_argument("--inventory", help="inventory JSON file")
    p.add_argument("--seed", type=int, help="seed for family-name pairing")
    p.add_argument("--out-dir", required=True, help="directory for variant files + manifest")
    p.add_argument("--audit-id", default="audit")
    _corpus_options(p)
    _aux_option(p)
    p.set_defaults(func=_cmd_switch_per, parser=p)

    p = sub.add_parser("switch-all", help="replace all PER/LOC/ORG mentions from one country")
    p.add_argument("--input", required=True)
    p.add_argument("--country", required=True)
    p.add_argument("--inventory", required=True)
    p.add_argument("--org-annotations", help="ORG sub-category annotation file")
    p.add_argument("--loc-annotations", help="LOC granularity annotation file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output corpus file")
    _corpus_options(p)
    _aux_option(p)
    p.set_defaults(func=_cmd_switch_all)

    p = sub.add_parser("evaluate", help="token-level IO micro P/R/F1 of a prediction file")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--type", choices=("PER", "LOC", "ORG", "MISC"),
                   help="restrict reported metrics to one entity type")
    p.add_argument("--out", help="also write a JSON report here")
    _corpus_options(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("annotate-orgs", help="list ORG surfaces that still need annotations")
    p.add_argument("--input", required=True)
    p.add_argument("--annotations", help="existing ORG annotation file")
    _corpus_options(p)
    p.set_defaults(func=_cmd_annotate_orgs)

    p = sub.add_parser("validate-inventory", help="validate an inventory file and print warnings")
    p.add_argument("--inventory", required=True)
    p.set_defaults(func=_cmd_validate_inventory)

    audit = sub.add_parser("audit", help="two-phase audit: generate variants, report on predictions")
    audit_sub = audit.add_subparsers(dest="audit_command", parser_class=_Parser)

    p = audit_sub.add_parser("generate", help="write per-country gold variants and a manifest")
    p.add_argument("--input", required=True)
    p.add_argument("--inventory", required=True)
    p.add_argument("--countries", help="comma-separated country ids (default: all in the file)")
    p.add_argument("--mode", choices=("per", "all"), default="per",
                   help="per = PER-only single-name variants, all = switch all types")
    p.add_argument("--variants-per-country", type=int, default=None, metavar="N",
                   help="default: one per constructed name (per mode) or 1 (all mode)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--org-annotations")
    p.add_argument("--loc-annotations")
    p.add_argument("--audit-id", default="audit")
    _corpus_options(p)
    _aux_option(p)
    p.set_defaults(func=_cmd_audit_generate)

    p = audit_sub.add_parser("report", help="score prediction files listed in a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--pred-dir", help="where prediction files live (default: manifest directory)")
    p.add_argument("--format", choices=("md", "csv", "json"), default="md")
    p.add_argument("--out", help="write the rendered report here instead of stdout")
    p.add_argument("--dump-disagreements", metavar="DIR",
                   help="also write per-variant token disagreement dumps (TSV) to DIR")
    p.set_defaults(func=_cmd_audit_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    func = getattr(args, "func", None)
    if func is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return func(args) or 0
    except SystemExit as exc:  # argparse usage errors raised inside commands
        return int(exc.code or 0)
    except EntitySwitchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
