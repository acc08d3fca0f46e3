import pytest
from hypothesis import given, settings, strategies as st

from obi.broadcast import Broadcast, check_independent
from obi.circulant import CirculantSpec, DistanceTable, circulant
from obi.solver import (
    CapProvenance,
    SolveOptions,
    beta_b,
    branch_and_bound_beta,
    brute_force_beta,
    select_cap,
    undirected_beta,
    undirected_table,
)


def table(n, a):
    return circulant(n, 1, a).table


def test_brute_force_examples():
    assert brute_force_beta(table(8, 4), 4).beta == 4
    assert brute_force_beta(table(9, 5), 4).beta == 4
    assert brute_force_beta(table(8, 4), 0).beta == 0


def test_assignment_mode_matches_support_mode():
    for n in range(5, 9):
        for a in range(2, n - 1):
            t = table(n, a)
            x = brute_force_beta(t, t.diameter, assignments=True)
            y = brute_force_beta(t, t.diameter)
            assert (x.beta, x.witness) == (y.beta, y.witness)


@pytest.mark.parametrize("n, a, cap, beta", [(12, 4, 3, 8), (14, 2, 7, 7), (9, 4, 3, 6)])
def test_bnb_examples(n, a, cap, beta):
    r = branch_and_bound_beta(table(n, a), SolveOptions(value_cap=cap))
    assert r.optimal and r.beta == beta
    assert check_independent(table(n, a), r.witness) == []


@given(st.integers(5, 13), st.data())
@settings(max_examples=50, deadline=None)
def test_bnb_matches_brute(n, data):
    a = data.draw(st.integers(2, n - 2))
    sym = data.draw(st.booleans())
    t = table(n, a)
    cap = data.draw(st.integers(1, t.diameter))
    x = brute_force_beta(t, cap)
    y = branch_and_bound_beta(t, SolveOptions(value_cap=cap, symmetry_breaking=sym))
    assert (x.beta, x.witness) == (y.beta, y.witness)


def test_beta_b_cap_selection():
    r, rep = beta_b(CirculantSpec(12, (1, 4)))
    assert (r.cap, r.cap_provenance, r.beta) == (3, CapProvenance.LEMMA_A_MINUS_1, 8)
    r, rep = beta_b(CirculantSpec(21, (1, 7)))
    assert (r.cap, r.cap_provenance, r.beta) == (3, CapProvenance.LEMMA_Q, 14)
    assert beta_b(CirculantSpec(11, (1, 4)))[0].beta == 5
    assert select_cap(8, 4) == (4, CapProvenance.DIAMETER)


def test_user_cap_and_general_steps():
    r, rep = beta_b(CirculantSpec(12, (1, 4)), cap=2)
    assert r.cap_provenance is CapProvenance.USER and r.beta == 8
    r, rep = beta_b(CirculantSpec(13, (1, 3, 9)))
    assert rep is None and r.optimal
    t = circulant(13, 1, 3, 9).table
    assert brute_force_beta(t, t.diameter).beta == r.beta


def test_budget_exhaustion_returns_best_so_far():
    r, rep = beta_b(CirculantSpec(24, (1, 5)), node_limit=1)
    assert not r.optimal
    assert r.beta == rep.best_lower
    assert check_independent(table(24, 5), r.witness) == []
    t = table(14, 3)
    r = branch_and_bound_beta(t, SolveOptions(value_cap=t.diameter, node_limit=3))
    assert not r.optimal and r.nodes_explored <= 4


def test_zero_time_budget():
    r, _ = beta_b(CirculantSpec(22, (1, 5)), time_limit=0)
    assert not r.optimal


def test_incumbent_history_monotone():
    r = branch_and_bound_beta(table(16, 3), SolveOptions(value_cap=8, symmetry_breaking=False))
    assert r.incumbents == sorted(r.incumbents) and r.incumbents[-1] == r.beta


def test_parallel_is_deterministic():
    spec = CirculantSpec(26, (1, 6))
    one, _ = beta_b(spec, workers=1, use_sigma_bounds=False, cap=7)
    four, _ = beta_b(spec, workers=4, use_sigma_bounds=False, cap=7)
    assert (one.beta, one.witness) == (four.beta, four.witness)


def test_options_validation():
    with pytest.raises(ValueError):
        SolveOptions(value_cap=-1)
    with pytest.raises(ValueError):
        SolveOptions(value_cap=3, node_limit=0)
    with pytest.raises(ValueError):
        SolveOptions(value_cap=3, sigma_regime="QA")
    with pytest.raises(ValueError):
        SolveOptions(value_cap=1, incumbent=Broadcast((2, 0, 0)))


def test_symmetry_needs_rotation_invariance():
    t = DistanceTable.from_rows([[0, 1, 2], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(ValueError):
        branch_and_bound_beta(t, SolveOptions(value_cap=2))


def test_undirected():
    ut = undirected_table(CirculantSpec(8, (1, 4)))
    assert ut.is_symmetric()
    ub = undirected_beta(ut)
    assert ub.beta <= 4
    assert undirected_beta(ut, method="bnb").beta == ub.beta
    assert undirected_beta(undirected_table(CirculantSpec(12, (1, 2)))).beta <= 6
    assert undirected_beta(DistanceTable(1, row=[0])).beta == 0
    with pytest.raises(ValueError):
        undirected_beta(table(8, 3))


def test_json():
    r, _ = beta_b(CirculantSpec(12, (1, 4)))
    d = r.to_dict()
    assert d["witness_compact"] == "0:2,3:2,6:2,9:2" and d["cap_provenance"] == "LEMMA_A_MINUS_1"
