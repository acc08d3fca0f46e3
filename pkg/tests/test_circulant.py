import math

import pytest
from hypothesis import given, settings, strategies as st

from obi.circulant import (
    UNREACHABLE,
    CirculantSpec,
    DistanceTable,
    Family,
    InvalidCirculantError,
    RegimeError,
    RegimeTag,
    all_pairs,
    build_graph,
    circulant,
    classify_regime,
    closed_form_diameter,
    closed_form_distance,
    distance,
    distance_row,
    in_distance_regime,
    multiplier_isomorphism,
    normalize_spec,
)


def two_step_pairs(max_n):
    return [(n, a) for n in range(4, max_n + 1) for a in range(2, n - 1)]


@st.composite
def two_step(draw, max_n=40):
    n = draw(st.integers(4, max_n))
    a = draw(st.integers(2, n - 2))
    return n, a


def test_build_graph_out_degree_two():
    g = circulant(12, 1, 4)
    assert all(len(g.out_neighbours(v)) == 2 for v in range(12))
    assert set(g.arcs()) == {(i, (i + s) % 12) for i in range(12) for s in (1, 4)}


@pytest.mark.parametrize(
    "n, steps",
    [(12, (1, 4, 8)), (12, (1, 11)), (9, (0, 1)), (9, (1, 10)), (2, (1,)), (10, (3, 7))],
)
def test_build_graph_rejects(n, steps):
    with pytest.raises(InvalidCirculantError):
        build_graph(CirculantSpec(n, steps))


def test_half_step_allowed_alone():
    # C(2a; 1, a) carries an exact value, so the step n/2 is accepted
    assert circulant(10, 1, 5).table.diameter == 5


def test_signed_step_is_normalized():
    assert build_graph(CirculantSpec(9, (1, -4))).arcs() == build_graph(CirculantSpec(9, (1, 5))).arcs()
    assert normalize_spec(CirculantSpec(12, (1, -8))) == CirculantSpec(12, (1, 4))
    assert normalize_spec(CirculantSpec(9, (5, 1))) == CirculantSpec(9, (1, 5))


@given(two_step())
def test_normalize_idempotent_and_signed_form(na):
    n, a = na
    s = normalize_spec(CirculantSpec(n, (1, a)))
    assert normalize_spec(s) == s
    assert normalize_spec(CirculantSpec(n, (1, a - n))) == s


def test_distance_row_a2_is_ceiling_half():
    row = distance_row(circulant(12, 1, 2), 0)
    assert row == [math.ceil(i / 2) for i in range(12)]


def test_distance_examples():
    g = circulant(20, 1, 7)
    for i in range(20):
        assert g.table((i + 6) % 20, i) == 2
        assert g.table(i, i) == 0
    assert all_pairs(circulant(8, 1, 4)).diameter == 4
    assert all_pairs(circulant(12, 1, 4)).diameter == 5


@given(two_step(30))
@settings(max_examples=60)
def test_all_pairs_matches_per_source_bfs(na):
    n, a = na
    g = circulant(n, 1, a)
    table = all_pairs(g)
    for s in range(n):
        assert table.row(s) == distance_row(g, s)
    assert table.is_rotation_invariant()


@given(two_step(24))
@settings(max_examples=40)
def test_table_invariants(na):
    n, a = na
    t = circulant(n, 1, a).table
    for i in range(n):
        assert t(i, i) == 0
        assert t.eccentricity(i) == t.diameter
        for j in range(n):
            assert t(i, j) == t(0, (j - i) % n)
            for k in range(n):
                assert t(i, k) <= t(i, j) + t(j, k)


def test_unreachable_marker_for_general_steps():
    g = circulant(8, 2)
    assert g.table(0, 1) == UNREACHABLE
    assert g.table(0, 2) == 1


def test_closed_form_examples():
    assert closed_form_distance(12, 4, 0, 11) == 5
    assert closed_form_distance(20, 7, 0, 19) == 7
    assert closed_form_distance(15, 4, 3, 3) == 0
    assert closed_form_diameter(14, 2) == 7
    assert closed_form_diameter(15, 4) == 5


def test_closed_form_outside_regime_is_an_error():
    with pytest.raises(RegimeError):
        closed_form_distance(12, 3, 0, 1)
    with pytest.raises(RegimeError):
        closed_form_distance(17, 8, 0, 1)
    with pytest.raises(RegimeError):
        closed_form_diameter(9, 3)


def test_distance_reports_path():
    assert distance(circulant(12, 1, 4), 0, 11) == (5, "closed-form")
    assert distance(circulant(12, 1, 3), 0, 11) == (circulant(12, 1, 3).table(0, 11), "bfs")


@pytest.mark.parametrize("n, a", [(n, a) for n, a in two_step_pairs(60) if in_distance_regime(n, a)][::7])
def test_closed_form_matches_bfs_sample(n, a):
    t = circulant(n, 1, a).table
    assert [closed_form_distance(n, a, 0, j) for j in range(n)] == t.row(0)
    assert closed_form_diameter(n, a) == t.diameter


def test_multiplier_isomorphism():
    assert multiplier_isomorphism(CirculantSpec(9, (1, 2)), CirculantSpec(9, (1, 5))) == 5
    assert multiplier_isomorphism(CirculantSpec(12, (1, 4)), CirculantSpec(12, (1, 4))) == 1
    assert multiplier_isomorphism(CirculantSpec(8, (1, 4)), CirculantSpec(8, (1, 3))) is None


@pytest.mark.parametrize("a", range(3, 12))
def test_2a_minus_1_isomorphic_to_a2(a):
    n = 2 * a - 1
    m = multiplier_isomorphism(CirculantSpec(n, (1, a)), CirculantSpec(n, (1, 2)))
    assert m is not None
    src, dst = build_graph(CirculantSpec(n, (1, a))), build_graph(CirculantSpec(n, (1, 2)))
    assert {((m * u) % n, (m * v) % n) for u, v in src.arcs()} == set(dst.arcs())


def test_classify_examples():
    tag = classify_regime(12, 4)
    assert tag.family is Family.QA_SPECIAL and tag.params["q"] == 3 and tag.params["k"] == 1
    assert classify_regime(11, 4).family is Family.N_EQ_3A_MINUS_1
    assert classify_regime(17, 5).family is Family.GENERAL
    assert classify_regime(8, 4).family is Family.N_EQ_2A
    assert classify_regime(12, 2).family is Family.A2


def test_regime_tag_identity_checked():
    with pytest.raises(AssertionError):
        RegimeTag(Family.QA_SPECIAL, {"n": 13, "a": 4, "q": 3})


@given(two_step(80))
def test_classify_is_total(na):
    tag = classify_regime(*na)
    assert isinstance(tag.family, Family)


def test_distance_table_lookup_shapes():
    t = DistanceTable(4, row=[0, 1, 2, 3])
    assert t(3, 0) == 1 and t[1, 0] == 3
    assert t.matrix()[2] == [2, 3, 0, 1]
    with pytest.raises(ValueError):
        DistanceTable(3, row=[0, 1])
