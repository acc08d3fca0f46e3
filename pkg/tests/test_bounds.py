import pytest

from obi.bounds import (
    Bound,
    applicable_predictions,
    bound_report,
    global_upper_bound,
    lower_bounds,
    predicted_beta,
    sigma_regime,
    upper_bound_formulas,
    upper_bound_sigma,
)
from obi.circulant import CirculantSpec, InvalidCirculantError, normalize_spec
from obi.solver import beta_b, undirected_beta, undirected_table


@pytest.mark.parametrize(
    "n, a, value, source",
    [(12, 4, 8, "exact:n=qa"), (21, 7, 14, "exact:n=qa"), (15, 4, 10, "exact:n=qa+a-1"), (11, 4, 5, "exact:n=3a-1")],
)
def test_predicted(n, a, value, source):
    b = predicted_beta(n, a)
    assert b.value == value and b.source.startswith(source)


def test_general_has_no_prediction():
    assert predicted_beta(17, 5) is None


def test_invalid_parameters():
    with pytest.raises(InvalidCirculantError):
        predicted_beta(12, 11)


def test_upper_sigma_examples():
    assert upper_bound_sigma(9, 4, "A_MINUS_1", 3, 0) == 6
    assert upper_bound_sigma(21, 7, "QA", 7, 0) == 14
    assert upper_bound_formulas(9, 4, "A_MINUS_1", 0, 0)[0].value == 9
    with pytest.raises(ValueError):
        upper_bound_sigma(9, 4, "A_MINUS_1", 1, 2)
    with pytest.raises(ValueError):
        upper_bound_sigma(9, 4, "A_MINUS_1", -1, 0)


@pytest.mark.parametrize("n, a, ub", [(9, 4, 6), (21, 7, 14), (12, 4, 8)])
def test_global_upper(n, a, ub):
    assert global_upper_bound(n, a) == ub


def test_trivial_upper_when_nothing_applies():
    assert sigma_regime(17, 8) is None
    assert global_upper_bound(17, 8) == 16


def test_lower_bound_examples():
    assert max(b.value for b in lower_bounds(12, 2)) == 6
    values = {b.source: b.value for b in lower_bounds(9, 4)}
    assert values["lower:construction-k(a-1)+s"] == 6 and "lower:diameter" in values
    assert max(b.value for b in lower_bounds(17, 6)) == 8
    assert all(b.source != "lower:undirected-beta" for b in lower_bounds(12, 4))


def test_undirected_term_only_when_given():
    ub = undirected_beta(undirected_table(CirculantSpec(12, (1, 4)))).beta
    srcs = [b.source for b in lower_bounds(12, 4, undirected_beta=ub)]
    assert "lower:undirected-beta" in srcs


def test_report_consistency_and_json():
    for n in range(5, 41):
        for a in range(2, n - 1):
            rep = bound_report(n, a)
            assert rep.consistent(), rep.to_dict()
    assert '"exact"' in bound_report(12, 4).to_json()


def test_observation_normalized_call():
    # C(n; 1, a) and C(n; 1, -(n-a)) normalize to the same spec, hence the same call
    for n, a in [(12, 4), (21, 7), (15, 4)]:
        assert normalize_spec(CirculantSpec(n, (1, a - n))).steps == (1, a)


def test_sandwich_and_exact_up_to_24():
    for n in range(5, 25):
        for a in range(2, n - 1):
            result, rep = beta_b(CirculantSpec(n, (1, a)))
            assert result.optimal
            assert rep.best_lower <= result.beta <= rep.best_upper
            if rep.exact is not None:
                assert result.beta == rep.exact.value == rep.best_lower == rep.best_upper, (n, a)


def test_bound_ordering():
    assert Bound(3, "x") < Bound(4, "a")
