"""CLI: ``entityswitch-runner run --manifest <file> --model <id> [...]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import RunnerError
from .runner import RunnerConfig, run


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="entityswitch-runner",
        description="Write model predictions for every gold variant in an audit manifest.",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("run", help="run a model over a manifest")
    p.add_argument("--manifest", required=True, help="manifest.json from 'entityswitch audit generate'")
    p.add_argument("--model", required=True,
                   help="Hugging Face model id or path, or stub:echo (copies gold labels)")
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--device", default="cpu", help="torch device hint (default: cpu)")
    p.add_argument("--label-map",
                   help="JSON file mapping model tags to O/PER/LOC/ORG/MISC")
    p.add_argument("--pred-dir", help="where to write predictions (default: manifest directory)")
    p.set_defaults(func=_cmd_run)
    return parser


def _cmd_run(args) -> int:
    label_map = None
    if args.label_map:
        try:
            label_map = json.loads(Path(args.label_map).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise RunnerError(f"cannot read label map: {exc}") from None
        if not isinstance(label_map, dict):
            raise RunnerError("label map must be a JSON object of tag -> type")
    config = RunnerConfig(
        model=args.model, batch_size=args.batch_size,
        label_map=label_map, device=args.device,
    )
    report = run(args.manifest, config, args.pred_dir)
    for path, reason in report.skipped:
        print(f"skipped {path}: {reason}", file=sys.stderr)
    print(
        f"wrote {len(report.written)} prediction file(s), skipped {len(report.skipped)}",
        file=sys.stderr,
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s %(message)s")
    func = getattr(args, "func", None)
    if func is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return func(args) or 0
    except SystemExit as exc:
        return int(exc.code or 0)
    except RunnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
