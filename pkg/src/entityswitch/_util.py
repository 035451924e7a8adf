"""Small shared plumbing: atomic file writes, slugs, seeded streams, fan-out."""
from __future__ import annotations

import os
import random
import re
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import EntitySwitchError

T = TypeVar("T")
U = TypeVar("U")


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file + rename so a failure never leaves a partial file."""
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


def slugify(text: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-").lower()
    return slug or "x"


def derive_rng(*parts: object) -> random.Random:
    """Independent random stream keyed by the given parts.

    String seeding hashes the key, so streams are stable across runs,
    platforms, and worker scheduling order.
    """
    return random.Random("/".join(str(p) for p in parts))


def num_threads_from_env(environ: dict | None = None) -> int:
    """Resolve ES_NUM_THREADS: unset -> 1 (sequential), 0 -> auto, n -> n."""
    env = os.environ if environ is None else environ
    raw = env.get("ES_NUM_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise EntitySwitchError(f"ES_NUM_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise EntitySwitchError(f"ES_NUM_THREADS must be >= 0, got {value}")
    if value == 0:
        return os.cpu_count() or 1
    return value


def parallel_map(fn: Callable[[T], U], items: Iterable[T], num_threads: int = 1) -> list[U]:
    """Map preserving input order; fans out over threads when num_threads > 1."""
    work: Sequence[T] = list(items)
    if num_threads <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=num_threads) as pool:
        return list(pool.map(fn, work))
