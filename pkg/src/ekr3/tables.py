"""CSV/JSON table output, run manifests and the append-only search cache."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from . import __version__

log = logging.getLogger(__name__)

CACHE_ENV = "EKR_CACHE_DIR"


def jsonable(obj: Any) -> Any:
    """JSON-ready copy; fractions become ``a/b`` strings.

    Exact counts that may exceed 53 bits are stringified by the callers.
    """
    if obj is None or isinstance(obj, (str, int, float)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return str(obj)


def approx(x: Any) -> float:
    """Float view of an exact value, rounded to 15 significant digits."""
    return float(format(float(x), ".15g"))


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def csv_text(rows: Iterable[dict[str, Any]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["" if row.get(c) is None else jsonable(row.get(c)) for c in columns])
    return buf.getvalue()


def emit_table(
    outdir: Path,
    name: str,
    rows: list[dict[str, Any]],
    columns: Sequence[str],
    argv: Sequence[str],
    params: dict[str, Any],
) -> list[Path]:
    """Write ``name.csv``, ``name.json`` and ``name.manifest.json`` under ``outdir``."""
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{name}.csv"
    json_path = outdir / f"{name}.json"
    csv_path.write_text(csv_text(rows, columns))
    json_path.write_text(dumps({"columns": list(columns), "rows": rows}))
    manifest = {
        "command": list(argv),
        "params": params,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "outputs": {
            p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in (csv_path, json_path)
        },
    }
    man_path = outdir / f"{name}.manifest.json"
    man_path.write_text(dumps(manifest))
    return [csv_path, json_path, man_path]


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ekr3"


@dataclass(frozen=True)
class SearchKey:
    n: int
    k: int
    r: int
    t: int
    nontrivial: bool
    shifted: bool = False

    def text(self) -> str:
        return f"{self.n},{self.k},{self.r},{self.t},{int(self.nontrivial)},{int(self.shifted)}"


class SearchCache:
    """JSON-lines store of finished searches; later lines win, bad lines are skipped."""

    def __init__(self, directory: Optional[Path] = None):
        self.path = (directory or cache_dir()) / "search.jsonl"

    def _load(self) -> dict[str, dict[str, Any]]:
        entries: dict[str, dict[str, Any]] = {}
        if not self.path.exists():
            return entries
        with self.path.open() as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    entries[rec["key"]] = rec["result"]
                except (ValueError, KeyError, TypeError):
                    log.warning("skipping corrupt cache line %s:%d", self.path, lineno)
        return entries

    def get(self, key: SearchKey) -> Optional[dict[str, Any]]:
        return self._load().get(key.text())

    def put(self, key: SearchKey, result: dict[str, Any]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        line = json.dumps({"key": key.text(), "result": result}, sort_keys=True) + "\n"
        # one write call per record keeps appends atomic on POSIX
        with self.path.open("a") as fh:
            fh.write(line)
