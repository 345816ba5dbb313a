"""On-disk store layout: versioned JSON manifest plus JSONL segment files.

Later segments override earlier ones by liaison_id, so a refresh appends one
delta segment and atomically replaces the manifest.  A crash before the
manifest swap leaves the previous state fully intact.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from ..errors import StoreError
from ..records import LiaisonRecord, record_from_dict, record_to_dict
from .engine import ParagraphStore

MANIFEST = "manifest.json"
FORMAT = "liaisonkit-store"
FORMAT_VERSION = 1


def _read_manifest(path: Path) -> dict:
    manifest_path = path / MANIFEST
    if not manifest_path.exists():
        raise StoreError(f"no store manifest at {manifest_path}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format") != FORMAT:
        raise StoreError(f"not a {FORMAT} directory: {path}")
    if manifest.get("format_version") != FORMAT_VERSION:
        raise StoreError(f"unsupported store format version {manifest.get('format_version')}")
    return manifest


def _write_manifest(path: Path, snapshot_version: int, segments: list[str]) -> None:
    manifest = {
        "format": FORMAT,
        "format_version": FORMAT_VERSION,
        "snapshot_version": snapshot_version,
        "segments": segments,
    }
    tmp = path / (MANIFEST + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path / MANIFEST)


def _write_segment(path: Path, name: str, records: list[LiaisonRecord]) -> None:
    tmp = path / (name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(record_to_dict(rec), ensure_ascii=False) + "\n")
    os.replace(tmp, path / name)


def init_store(path: str | Path, records: list[LiaisonRecord]) -> ParagraphStore:
    """Create a store directory with one full segment."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    _write_segment(path, "seg-000001.jsonl", records)
    _write_manifest(path, 1, ["seg-000001.jsonl"])
    return load_store(path)


def append_segment(path: str | Path, store: ParagraphStore, delta: list[LiaisonRecord]) -> int:
    """Commit a delta to the in-memory store and persist it as a new segment."""
    path = Path(path)
    manifest = _read_manifest(path)
    version = store.upsert_many(delta)
    if version == manifest["snapshot_version"]:
        return version  # idempotent delta, nothing to write
    segments = list(manifest["segments"])
    name = f"seg-{len(segments) + 1:06d}.jsonl"
    _write_segment(path, name, delta)
    segments.append(name)
    _write_manifest(path, version, segments)
    return version


def load_store(path: str | Path) -> ParagraphStore:
    path = Path(path)
    manifest = _read_manifest(path)
    records: dict[str, LiaisonRecord] = {}
    for name in manifest["segments"]:
        seg = path / name
        if not seg.exists():
            raise StoreError(f"manifest references missing segment {name}")
        with open(seg, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = record_from_dict(json.loads(line))
                records[rec.liaison_id] = rec
    return ParagraphStore(records, version=manifest["snapshot_version"])
