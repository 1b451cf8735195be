"""Content-addressed on-disk cache of expansions, one JSON file per (n, u, v).

Writes go to a temporary file that is atomically renamed into place, so
concurrent readers never observe a partial file.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

DEFAULT_DIR = ".schubert-cache"
ENV_VAR = "SCHUBERT_CACHE_DIR"


def resolve_dir(flag: str | None) -> Path:
    return Path(flag or os.environ.get(ENV_VAR) or DEFAULT_DIR)


def cache_key(n: int, u, v) -> str:
    blob = json.dumps({"n": n, "u": list(u), "v": list(v)}, separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


class ExpansionStore:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path(self, n: int, u, v) -> Path:
        return self.root / f"{cache_key(n, u, v)}.json"

    def get(self, n: int, u, v) -> dict | None:
        path = self.path(n, u, v)
        try:
            data = json.loads(path.read_text())
        except (FileNotFoundError, json.JSONDecodeError):
            return None
        if data.get("n") != n or data.get("u") != list(u) or data.get("v") != list(v):
            return None
        return data

    def put(self, data: dict) -> Path:
        path = self.path(data["n"], data["u"], data["v"])
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh, separators=(",", ":"))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path
