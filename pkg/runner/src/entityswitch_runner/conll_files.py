"""Line-oriented access to column-format gold files.

Prediction files are the gold file with only the label column rewritten, so
token surfaces, sentence boundaries, and -DOCSTART- lines stay byte-aligned.
"""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import RunnerError

DOCSTART = "-DOCSTART-"


@dataclass(frozen=True)
class ColumnFile:
    lines: tuple[str, ...]  # verbatim, without newlines
    sentences: tuple[tuple[int, ...], ...]  # token line indices per sentence


def read_column_file(path: str | Path) -> ColumnFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RunnerError(f"cannot read gold file: {exc}") from None
    lines = text.splitlines()
    sentences: list[tuple[int, ...]] = []
    current: list[int] = []
    for index, line in enumerate(lines):
        fields = line.split()
        if not fields or fields[0] == DOCSTART:
            if current:
                sentences.append(tuple(current))
                current = []
            continue
        current.append(index)
    if current:
        sentences.append(tuple(current))
    return ColumnFile(tuple(lines), tuple(sentences))


def words_of(cf: ColumnFile, sentence: tuple[int, ...]) -> list[str]:
    return [cf.lines[i].split()[0] for i in sentence]


def gold_labels_of(cf: ColumnFile, sentence: tuple[int, ...]) -> list[str]:
    return [cf.lines[i].split()[-1] for i in sentence]


def render_with_labels(cf: ColumnFile, labels_by_line: dict[int, str]) -> str:
    out = []
    for index, line in enumerate(cf.lines):
        if index in labels_by_line:
            fields = line.split()
            out.append(" ".join(fields[:-1] + [labels_by_line[index]]))
        else:
            out.append(line)
    return "\n".join(out) + "\n" if out else ""


def atomic_write_text(path: str | Path, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
