import random

import numpy as np
import pytest

from gqscreen.benson import BensonData, benson_consistent
from gqscreen.errors import ResourceLimitError
from gqscreen.gq import GqOrder, srg_params
from gqscreen.graphs import cycle_graph, is_strongly_regular, strong_regularity
from gqscreen.incidence import (
    FIXED_TAGS,
    GqValidationError,
    IncidenceStructure,
    automorphism_group_order,
    benson_counts,
    build_w2,
    check_gq,
    classify_fixed,
    collinearity_graph,
    dual,
    find_isomorphism,
    grid,
    induced_automorphism,
    iter_automorphisms,
    single_line,
    validate_gq,
)


@pytest.fixture(scope="module")
def w2():
    return build_w2()


@pytest.fixture(scope="module")
def w2_auts(w2):
    return list(iter_automorphisms(w2))


def test_w2_shape(w2):
    assert w2.n_points == 15 and len(w2.lines) == 15
    assert validate_gq(w2) == GqOrder(2, 2)


def test_w2_collinearity_matches_srg_formulas(w2):
    adj = collinearity_graph(w2)
    assert adj.sum(axis=1).tolist() == [6] * 15
    got = is_strongly_regular(adj)
    assert got.params == (15, 6, 1, 3) == srg_params(GqOrder(2, 2)).params


def test_grid_is_not_thick():
    chk = check_gq(grid(3, 3))
    assert chk.is_gq and chk.reason == "not-thick"
    with pytest.raises(GqValidationError):
        validate_gq(grid(3, 3))


def test_deleted_line_has_witness(w2):
    broken = IncidenceStructure(15, w2.lines[1:])
    chk = check_gq(broken)
    assert not chk.is_gq and chk.reason == "no-collinear-point"
    p, line = chk.witness
    assert p not in broken.lines[line]
    assert not any(q in broken.lines[line] for q in range(15) if q != p and _collinear(broken, p, q))


def _collinear(structure, p, q):
    return any(p in L and q in L for L in structure.lines)


def test_triangle_is_reported():
    s = IncidenceStructure(3, ((0, 1), (1, 2), (0, 2)))
    chk = check_gq(s)
    assert not chk.is_gq
    assert chk.axiom_form == chk.graph_form


def test_structure_validation():
    with pytest.raises(ValueError):
        IncidenceStructure(3, ((0,),))
    with pytest.raises(ValueError):
        IncidenceStructure(3, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        IncidenceStructure(3, ((0, 5),))


def test_json_round_trip(w2):
    assert IncidenceStructure.from_json(w2.to_json()) == w2


def test_collinearity_small_cases():
    assert collinearity_graph(single_line(3)).sum() == 6
    two = IncidenceStructure(6, ((0, 1, 2), (3, 4, 5)))
    adj = collinearity_graph(two)
    assert adj[:3, :3].sum() == 6 and adj[:3, 3:].sum() == 0


def test_five_cycle_is_srg():
    assert is_strongly_regular(cycle_graph(5)).params == (5, 2, 0, 1)


def test_six_cycle_has_witness():
    res = strong_regularity(cycle_graph(6))
    assert res.kind == "mu"


@pytest.mark.parametrize("structure,order", [(build_w2(), 720), (grid(3, 3), 72), (single_line(3), 6)])
def test_automorphism_group_orders(structure, order):
    assert automorphism_group_order(structure)[0] == order


def test_search_limit():
    big = IncidenceStructure(201, tuple((i, i + 1) for i in range(200)))
    with pytest.raises(ResourceLimitError):
        automorphism_group_order(big)


def test_all_automorphisms_preserve_incidence(w2, w2_auts):
    assert len(w2_auts) == 720
    lines = {frozenset(L) for L in w2.lines}
    for a in w2_auts:
        for i, L in enumerate(w2.lines):
            img = frozenset(a.point_map[p] for p in L)
            assert img in lines
            assert w2.lines[a.line_map[i]] == tuple(sorted(img)) or frozenset(w2.lines[a.line_map[i]]) == img


def test_benson_on_every_automorphism(w2, w2_auts):
    for a in w2_auts:
        f, g = benson_counts(w2, a)
        assert benson_consistent(BensonData(GqOrder(2, 2), f, g))


def test_every_automorphism_classifies(w2, w2_auts):
    tags = {}
    for a in w2_auts:
        c = classify_fixed(w2, a)
        assert c.tag in FIXED_TAGS
        tags[c.tag] = tags.get(c.tag, 0) + 1
    assert sum(tags.values()) == 720
    assert tags.get("AllPointsOnLine", 0) + tags.get("AllLinesThroughPoint", 0) > 0
    assert tags.get("NoPoints", 0) + tags.get("NoLines", 0) > 0


def test_identity_is_non_proper_subquadrangle(w2):
    ident = induced_automorphism(w2, tuple(range(15)))
    c = classify_fixed(w2, ident)
    assert c.tag == "Subquadrangle" and c.sub_order == GqOrder(2, 2) and not c.proper


def test_order3_fixed_point_free_exists(w2, w2_auts):
    found = False
    for a in w2_auts:
        pm = np.array(a.point_map)
        if (pm[pm[pm]] == np.arange(15)).all() and (pm != np.arange(15)).all():
            assert classify_fixed(w2, a).tag in ("NoPoints", "NoLines")
            found = True
    assert found


def test_dual(w2):
    d = dual(w2)
    assert validate_gq(d) == GqOrder(2, 2)
    assert find_isomorphism(dual(d), w2) is not None
    assert check_gq(dual(grid(3, 3))).reason == "not-thick"


def _mutate(structure, rng):
    lines = [list(L) for L in structure.lines]
    op = rng.randrange(3)
    if op == 0 and len(lines) > 1:
        lines.pop(rng.randrange(len(lines)))
    elif op == 1:
        L = rng.randrange(len(lines))
        p = rng.randrange(structure.n_points)
        if p not in lines[L]:
            lines[L][rng.randrange(len(lines[L]))] = p
    else:
        a, b = rng.sample(range(structure.n_points), 2)
        lines.append([a, b])
    uniq = []
    for L in lines:
        t = tuple(sorted(set(L)))
        if len(t) >= 2 and t not in uniq:
            uniq.append(t)
    return IncidenceStructure(structure.n_points, tuple(uniq))


def test_axiom_and_graph_forms_agree_on_mutations():
    rng = random.Random(20261016)
    bases = [build_w2(), grid(3, 3), grid(2, 4), dual(grid(3, 3))]
    for _ in range(1000):
        s = rng.choice(bases)
        for _ in range(rng.randrange(1, 3)):
            s = _mutate(s, rng)
        chk = check_gq(s)  # raises if the two forms disagree
        assert chk.axiom_form == chk.graph_form
