"""Deterministic CSV/JSON artifact writing and the run manifest.

Floats are rendered with repr-faithful precision ('%.17g', '.' decimal, no
locale), so re-running a command from its manifest reproduces byte-identical
files. The manifest stores the fully resolved configuration, the seed, and a
sha256 checksum per artifact.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

MANIFEST_NAME = "manifest.json"


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def write_json_rows(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    payload = [dict(zip(header, row)) for row in rows]
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def write_table(out_dir: Path, stem: str, header: list[str], rows, fmt: str = "csv") -> Path:
    rows = [list(r) for r in rows]
    if fmt == "json":
        return write_json_rows(Path(out_dir) / f"{stem}.json", header, rows)
    return write_csv(Path(out_dir) / f"{stem}.csv", header, rows)


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(out_dir: Path, command: str, config: dict, artifacts: list[Path]) -> Path:
    out_dir = Path(out_dir)
    manifest = {
        "tool": "dimerchain",
        "command": command,
        "config": config,
        "time_units": "1/strong",
        "artifacts": {p.name: sha256_of(p) for p in sorted(artifacts, key=lambda p: p.name)},
    }
    path = out_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def load_manifest(path: Path) -> dict:
    return json.loads(Path(path).read_text())
