"""
Run manifests and failure markers.

Every command records what it ran with in `manifest.json`; a command that
raises leaves a `FAILED` file next to whatever partial output it produced.
"""
import datetime
import hashlib
import json
import logging
import os
import platform
from contextlib import contextmanager
from importlib import metadata
from typing import Any, Dict, Iterator, List, Optional

from pydantic import BaseModel, Field

from encoding.vocab import VOCAB_VERSION
from gnn.checkpoint import CHECKPOINT_VERSION

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
FAILED_MARKER = "FAILED"
PACKAGE_NAME = "switchgraph"


class DataDigest(BaseModel):
    path: str
    sha256: str


class RunManifest(BaseModel):
    command: str
    argv: List[str]
    config: Dict[str, Any] = Field(default_factory=dict, description="Resolved config values")
    data: Dict[str, DataDigest] = Field(default_factory=dict)
    seeds: List[int] = Field(default_factory=list)
    versions: Dict[str, str] = Field(default_factory=dict)
    started_at: str
    finished_at: Optional[str] = None
    status: str = "running"
    wall_clock_seconds: Dict[str, float] = Field(default_factory=dict)

    def add_data(self, role: str, path: str) -> None:
        self.data[role] = DataDigest(path=os.fspath(path), sha256=file_digest(path))


def file_digest(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _version(dist: str) -> str:
    try:
        return metadata.version(dist)
    except metadata.PackageNotFoundError:
        return "unknown"


def artifact_versions() -> Dict[str, str]:
    versions = {name: _version(name) for name in (PACKAGE_NAME, "numpy", "scipy", "scikit-learn", "pydantic")}
    versions["python"] = platform.python_version()
    versions["vocab"] = str(VOCAB_VERSION)
    versions["checkpoint"] = str(CHECKPOINT_VERSION)
    return versions


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def write_manifest(manifest: RunManifest, out_dir: str) -> str:
    path = os.path.join(out_dir, MANIFEST_NAME)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(manifest.model_dump(mode="json"), f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def read_manifest(path: str) -> RunManifest:
    with open(path, "r", encoding="utf-8") as f:
        return RunManifest.model_validate_json(f.read())


@contextmanager
def run_context(command: str, argv: List[str], out_dir: str) -> Iterator[RunManifest]:
    """Yields the manifest to fill in; writes it on exit and marks failures"""
    os.makedirs(out_dir, exist_ok=True)
    marker = os.path.join(out_dir, FAILED_MARKER)
    if os.path.exists(marker):
        os.remove(marker)

    manifest = RunManifest(command=command, argv=list(argv), versions=artifact_versions(), started_at=_now())
    try:
        yield manifest
    except BaseException as e:
        manifest.status = "failed"
        with open(marker, "w", encoding="utf-8") as f:
            f.write(f"{type(e).__name__}: {e}\n")
        logger.error(f"{command} failed: {e}")
        raise
    else:
        manifest.status = "completed"
    finally:
        manifest.finished_at = _now()
        write_manifest(manifest, out_dir)
