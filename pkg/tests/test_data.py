import shutil

import pytest

from gqscreen.data import (
    compute_checksums,
    data_dir,
    load_profile,
    read_tsv,
    recorded_checksums,
    verify_checksums,
    write_checksums,
    write_tsv,
)


def test_checksums_match_bundled_files():
    assert verify_checksums() == []
    assert set(recorded_checksums()) == set(compute_checksums())


def test_checksum_detects_edit(tmp_path):
    root = tmp_path / "data"
    shutil.copytree(data_dir(), root)
    assert verify_checksums(root) == []
    p = root / "expected_table5.tsv"
    p.write_text(p.read_text() + "x\n")
    assert verify_checksums(root) == ["expected_table5.tsv"]
    write_checksums(root)
    assert verify_checksums(root) == []


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("GQSCREEN_DATA_DIR", str(tmp_path))
    assert data_dir() == tmp_path


def test_tsv_round_trip(tmp_path):
    rows = [{"a": "1", "b": "x y"}, {"a": "2", "b": ""}]
    text = write_tsv(rows, ["a", "b"])
    p = tmp_path / "t.tsv"
    p.write_text(text)
    assert read_tsv(p) == rows


@pytest.mark.parametrize("name", ["psl32-a7", "asl32-a8", "m10-a10", "pgammal29-s10", "m11-a11", "m12-a12", "ru-188500"])
def test_bundled_profiles_balanced_with_provenance(name):
    p = load_profile(name)
    assert p.balanced
    assert p.provenance.startswith("transcribed")
