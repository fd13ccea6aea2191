import pytest

from gqscreen.data import load_profile
from gqscreen.designs import affine_space_planes, computed_profile, derived, fano_plane, is_steiner, witt_12
from gqscreen.permaction import subdegrees_by_pairs


def test_constructions_are_steiner_systems():
    assert is_steiner(fano_plane(), 7, 2, 3)
    assert is_steiner(affine_space_planes(), 8, 3, 4)
    w12 = witt_12()
    assert len(w12) == 132 and is_steiner(w12, 12, 5, 6)
    w11 = derived(w12, 11)
    assert is_steiner(w11, 11, 4, 5)
    assert is_steiner(derived(w11, 10), 10, 3, 4)


def test_non_design_rejected():
    assert not is_steiner(frozenset({frozenset({0, 1, 2})}), 7, 2, 3)


PROFILES = [
    ("PSL(3,2)<=A7", "psl32-a7"),
    ("ASL(3,2)<=A8", "asl32-a8"),
    ("M10<=A10", "m10-a10"),
    ("PGammaL(2,9)<=S10", "pgammal29-s10"),
    ("M11<=A11", "m11-a11"),
    ("M12<=A12", "m12-a12"),
]


@pytest.mark.parametrize("key,name", PROFILES)
def test_computed_matches_transcribed(key, name):
    action, prof = computed_profile(key)
    assert prof.balanced
    assert prof.subdegrees == load_profile(name).subdegrees
    assert subdegrees_by_pairs(action).subdegrees == prof.subdegrees
