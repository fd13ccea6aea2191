"""Access to the bundled read-only data files."""

from __future__ import annotations

import csv
import hashlib
import io
import os
from pathlib import Path

from .permaction import OrbitalProfile

CHECKSUM_FILE = "SHA256SUMS"


def data_dir() -> Path:
    override = os.environ.get("GQSCREEN_DATA_DIR")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def data_path(name: str) -> Path:
    return data_dir() / name


def read_tsv(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh, delimiter="\t"))


def write_tsv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, columns, delimiter="\t", lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in columns})
    return buf.getvalue()


def load_profile(name: str) -> OrbitalProfile:
    return OrbitalProfile.from_json(data_path(f"profiles/{name}.json").read_text(encoding="utf-8"))


def _data_files(root: Path) -> list[Path]:
    return sorted(p for p in root.rglob("*") if p.is_file() and p.name != CHECKSUM_FILE and "__pycache__" not in p.parts)


def compute_checksums(root: Path | None = None) -> dict[str, str]:
    root = root or data_dir()
    return {p.relative_to(root).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest() for p in _data_files(root)}


def recorded_checksums(root: Path | None = None) -> dict[str, str]:
    root = root or data_dir()
    out = {}
    for line in (root / CHECKSUM_FILE).read_text(encoding="utf-8").splitlines():
        digest, _, name = line.partition("  ")
        out[name] = digest
    return out


def verify_checksums(root: Path | None = None) -> list[str]:
    """Names of files whose contents differ from the recorded checksum (or are missing/unlisted)."""
    now = compute_checksums(root)
    rec = recorded_checksums(root)
    return sorted(name for name in set(now) | set(rec) if now.get(name) != rec.get(name))


def write_checksums(root: Path | None = None) -> None:
    root = root or data_dir()
    lines = [f"{d}  {n}" for n, d in sorted(compute_checksums(root).items())]
    (root / CHECKSUM_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")
