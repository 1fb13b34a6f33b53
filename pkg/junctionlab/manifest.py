"""Run manifests: what produced an output file."""

import hashlib
import logging
from collections.abc import Iterable, Mapping
from datetime import datetime, timezone
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from junctionlab import env
from junctionlab.export import dump_kv

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.kv"


class RunManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    subcommand: str
    version: str
    timestamp: str = Field(description="UTC time of the run in ISO 8601.")
    config: dict[str, str] = Field(default_factory=dict, description="Every resolved config key.")
    inputs: dict[str, str] = Field(default_factory=dict, description="SHA-256 digest per input file name.")


def file_digest(path: Path) -> str:
    """Get the SHA-256 hex digest of a file."""
    digest = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(subcommand: str, config: Mapping[str, str], inputs: Iterable[Path] = ()) -> RunManifest:
    """Describe a run of a subcommand with its resolved config and input files."""
    return RunManifest(
        subcommand=subcommand,
        version=env.get_version(),
        timestamp=datetime.now(tz=timezone.utc).isoformat(timespec="seconds"),
        config=dict(config),
        inputs={path.name: file_digest(path) for path in inputs},
    )


def manifest_path(out_path: Path) -> Path:
    return out_path.with_name(out_path.name + MANIFEST_SUFFIX)


def write_manifest(manifest: RunManifest, out_path: Path) -> Path:
    """Write the manifest next to an output file as <out>.manifest.kv and return its path."""
    path = manifest_path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_kv(manifest), encoding="utf-8")
    logger.debug("Wrote manifest %s", path)
    return path
