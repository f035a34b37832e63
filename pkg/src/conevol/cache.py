"""Optional on-disk cache of flat and basis enumerations.

Enabled by setting ``CONEVOL_CACHE_DIR``.  Entries are keyed by a sha256 of
the configuration's vectors in canonical rational form, so any change to the
input gives a fresh key.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .matroid import LinearMatroid, VectorConfiguration

ENV_VAR = "CONEVOL_CACHE_DIR"
FORMAT = 1


def config_key(config: VectorConfiguration) -> str:
    canon = json.dumps([[str(c) for c in v] for v in config.vectors], separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def cache_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


def attach(M: LinearMatroid, directory: Path | None = None) -> bool:
    """Load cached structure into M, or compute and store it.

    Returns True on a cache hit.  Without a cache directory this is a no-op
    returning False.
    """
    directory = directory or cache_dir()
    if directory is None:
        return False
    path = Path(directory) / f"{config_key(M.config)}.json"
    if path.exists():
        try:
            data = json.loads(path.read_text())
            if data.get("format") == FORMAT and data.get("n") == M.n and data.get("N") == M.N:
                M.load_structure(data["flats"], data["bases"])
                return True
        except (OSError, ValueError, KeyError):
            pass  # unreadable entry: rebuild and overwrite
    data = {
        "format": FORMAT, "n": M.n, "N": M.N,
        "flats": [[list(F.indices), F.rank] for F in M.flats()],
        "bases": [list(B) for B in M.bases()],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(data, fh, sort_keys=True)
    os.replace(tmp, path)
    return False
