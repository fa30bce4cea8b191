"""Append-only NDJSON store of verification runs, with regression diffs."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .errors import StoreError

STORE_ENV = "QPLANE_STORE"
DEFAULT_STORE = "qplane-runs.ndjson"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def resolve_store_path(flag: Optional[str] = None) -> Path:
    return Path(flag or os.environ.get(STORE_ENV) or DEFAULT_STORE)


@dataclass
class RunRecord:
    suite: str
    config: dict
    payload: dict
    passed: bool
    version: str
    timestamp: str = ""
    config_hash: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        if not self.config_hash:
            self.config_hash = config_hash(self.config)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(**{k: d[k] for k in ("suite", "config", "payload", "passed", "version",
                                        "timestamp", "config_hash")})


class RunStore:
    def __init__(self, path):
        self.path = Path(path)

    def records(self) -> list[RunRecord]:
        if not self.path.exists():
            return []
        out = []
        try:
            lines = self.path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise StoreError(f"cannot read {self.path}: {exc}") from exc
        for lineno, line in enumerate(lines, 1):
            try:
                out.append(RunRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise StoreError(f"{self.path}:{lineno}: corrupt record ({exc})") from exc
        return out

    def append(self, record: RunRecord) -> int:
        """Persist ``record``; its id is its 1-based line number."""
        existing = len(self.records())
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(canonical_json(asdict(record)) + "\n")
        except OSError as exc:
            raise StoreError(f"cannot write {self.path}: {exc}") from exc
        return existing + 1

    def get(self, run_id: int) -> RunRecord:
        recs = self.records()
        if not 1 <= run_id <= len(recs):
            raise StoreError(f"no run with id {run_id} in {self.path} ({len(recs)} runs)")
        return recs[run_id - 1]


def append_run(record: RunRecord, path=None) -> int:
    return RunStore(resolve_store_path(path)).append(record)


def _flatten(obj, prefix="") -> dict:
    """Integer leaves of a payload keyed by dotted paths; booleans are kept apart."""
    out = {}
    if isinstance(obj, dict):
        for k in sorted(obj):
            out.update(_flatten(obj[k], f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}[{i}]"))
    elif isinstance(obj, int) and not isinstance(obj, bool):
        out[prefix] = obj
    return out


@dataclass
class RunDiff:
    id_a: int
    id_b: int
    config_mismatch: bool
    suite_mismatch: bool
    status: str
    changes: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (self.config_mismatch or self.suite_mismatch or self.changes
                    or self.status == "pass->fail")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["clean"] = self.clean
        return d


def diff_runs(id_a: int, id_b: int, path=None) -> RunDiff:
    store = RunStore(resolve_store_path(path))
    a, b = store.get(id_a), store.get(id_b)
    ia, ib = _flatten(a.payload), _flatten(b.payload)
    changes = []
    for key in sorted(set(ia) | set(ib)):
        va, vb = ia.get(key), ib.get(key)
        if va != vb:
            delta = None if va is None or vb is None else vb - va
            changes.append({"key": key, "a": va, "b": vb, "delta": delta})
    status = {(True, True): "pass", (False, False): "fail",
              (True, False): "pass->fail", (False, True): "fail->pass"}[(a.passed, b.passed)]
    return RunDiff(id_a, id_b, a.config_hash != b.config_hash, a.suite != b.suite, status, changes)
