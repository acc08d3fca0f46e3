"""Closed-form exact values and upper/lower bounds for beta_b(C(n; 1, a)).

Every bound carries a source tag naming the argument it comes from, so a
report can show which statement produced which number.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .circulant import (
    Family,
    _qr,
    check_two_step,
    classify_regime,
    k_times_a_minus_1,
    lemma_a_minus_1_applies,
    lemma_q_applies,
    special_qa,
    special_qa_plus,
)
from .constructions import constructions_for


@dataclass(frozen=True, order=True)
class Bound:
    value: int
    source: str

    def to_dict(self):
        return {"value": self.value, "source": self.source}


@dataclass
class BoundReport:
    n: int
    a: int
    regime: str
    lower: list[Bound] = field(default_factory=list)
    upper: list[Bound] = field(default_factory=list)
    exact: Bound | None = None
    predictions: list[Bound] = field(default_factory=list)

    @property
    def best_lower(self) -> int:
        return max(b.value for b in self.lower)

    @property
    def best_upper(self) -> int:
        return min(b.value for b in self.upper)

    def consistent(self) -> bool:
        if self.best_lower > self.best_upper:
            return False
        if self.exact is not None and not self.best_lower <= self.exact.value <= self.best_upper:
            return False
        return len({p.value for p in self.predictions}) <= 1

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "regime": self.regime,
            "lower": [b.to_dict() for b in self.lower],
            "upper": [b.to_dict() for b in self.upper],
            "exact": self.exact.to_dict() if self.exact else None,
            "predictions": [b.to_dict() for b in self.predictions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _qa_value(d: dict, a: int) -> int:
    q, k = d["q"], d["k"]
    return (q + k) * (a - 2) if d["case"] == "q=k(a-1)" else a * (q - 1)


def _qa_plus_value(d: dict, a: int) -> int:
    q, k = d["q"], d["k"]
    return (q + k + 1) * (a - 2) if d["case"] == "q=k(a-1)" else (a + k) * (q - 1)


def applicable_predictions(n: int, a: int) -> list[Bound]:
    """Every exact-value statement whose hypotheses hold for (n, a), in precedence order."""
    check_two_step(n, a)
    out = []
    if a == 2:
        out.append(Bound(n // 2, "exact:a=2"))
    if a == 3:
        out.append(Bound(n // 2, "exact:a=3"))
    if n == 2 * a:
        out.append(Bound(a, "exact:n=2a"))
    if n == 2 * a - 1:
        out.append(Bound((2 * a - 1) // 2, "exact:n=2a-1"))
    if n == 3 * a - 1 and a >= 4:
        out.append(Bound(n // 2, "exact:n=3a-1"))
    if (d := special_qa(n, a)) is not None:
        out.append(Bound(_qa_value(d, a), f"exact:n=qa,{d['case']}"))
    if (d := special_qa_plus(n, a)) is not None:
        out.append(Bound(_qa_plus_value(d, a), f"exact:n=qa+a-1,{d['case']}"))
    if (d := k_times_a_minus_1(n, a)) is not None:
        out.append(Bound((a - 2) * d["k"], "exact:n=k(a-1)"))
    return out


_FAMILY_SOURCE = {
    Family.A2: "exact:a=2",
    Family.A3: "exact:a=3",
    Family.N_EQ_2A: "exact:n=2a",
    Family.N_EQ_2A_MINUS_1: "exact:n=2a-1",
    Family.N_EQ_3A_MINUS_1: "exact:n=3a-1",
    Family.QA_SPECIAL: "exact:n=qa",
    Family.QA_PLUS_A_MINUS_1_SPECIAL: "exact:n=qa+a-1",
    Family.K_TIMES_A_MINUS_1: "exact:n=k(a-1)",
}


def predicted_beta(n: int, a: int) -> Bound | None:
    """Exact value of beta_b(C(n; 1, a)) for the family picked by ``classify_regime``."""
    tag = classify_regime(n, a)
    if tag.family is Family.GENERAL:
        return None
    prefix = _FAMILY_SOURCE[tag.family]
    for b in applicable_predictions(n, a):
        if b.source.startswith(prefix):
            return b
    raise AssertionError(f"no prediction found for {tag}")


def sigma_regime(n: int, a: int) -> str | None:
    """Which family of region-counting bounds applies: A_MINUS_1, QA, QA_PLUS or None."""
    if a < 4 or a >= n:
        return None
    if lemma_a_minus_1_applies(n, a):
        return "A_MINUS_1"
    if lemma_q_applies(n, a):
        return "QA" if n % a == 0 else "QA_PLUS"
    return None


def sigma_cap(n: int, a: int, regime: str) -> int:
    """Value cap that defines the 'top' class V1 for the regime's counting bounds."""
    if regime == "A_MINUS_1":
        return a - 1
    q, _ = _qr(n, a)
    return q


def upper_bound_formulas(n: int, a: int, regime: str, support_size: int, v1_size: int) -> list[Bound]:
    """The region-counting upper bounds on sigma(f) for the given class sizes.

    A_MINUS_1 (cap a-1):  n - |V+| - (a-1)|V1|  and  floor((a-2)(n-|V1|)/(a-1)) - (a-3)|V1|.
    QA (n = qa, cap q):   n - |V2| - q|V1|      and  floor((q-1)n/q) - (q-2)|V1|.
    QA_PLUS (cap q):      n - |V+| - q|V1|      and  floor((q-1)(n-|V1|)/q) - (q-2)|V1|.
    """
    if support_size < 0 or v1_size < 0 or v1_size > support_size:
        raise ValueError(f"inconsistent counts: support={support_size}, v1={v1_size}")
    s, t = support_size, v1_size
    if regime == "A_MINUS_1":
        return [
            Bound(n - s - (a - 1) * t, "upper:regions-a-1"),
            Bound(((a - 2) * (n - t)) // (a - 1) - (a - 3) * t, "upper:weighted-regions-a-1"),
        ]
    q, _ = _qr(n, a)
    if regime == "QA":
        return [
            Bound(n - (s - t) - q * t, "upper:regions-q"),
            Bound(((q - 1) * n) // q - (q - 2) * t, "upper:weighted-regions-q"),
        ]
    if regime == "QA_PLUS":
        return [
            Bound(n - s - q * t, "upper:regions-q"),
            Bound(((q - 1) * (n - t)) // q - (q - 2) * t, "upper:weighted-regions-q"),
        ]
    raise ValueError(f"unknown regime {regime!r}")


def upper_bound_sigma(n: int, a: int, regime: str, support_size: int, v1_size: int) -> int:
    return min(b.value for b in upper_bound_formulas(n, a, regime, support_size, v1_size))


def _region_size_a(n: int, a: int, regime: str) -> int:
    if regime == "A_MINUS_1":
        return 2 * a - 1
    q, _ = _qr(n, a)
    return 2 * q if regime == "QA" else 2 * q + 1


def _max_over_counts(n: int, a: int, regime: str) -> int:
    size_a = _region_size_a(n, a, regime)
    best = 0
    for s in range(0, n // 2 + 1):
        for t in range(0, s + 1):
            # each B region has at least 2 vertices
            if t * size_a + 2 * (s - t) > n:
                break
            best = max(best, upper_bound_sigma(n, a, regime, s, t))
    return best


def upper_bounds(n: int, a: int) -> list[Bound]:
    """Every applicable upper-bound argument for (n, a)."""
    check_two_step(n, a)
    out = []
    half = n // 2
    if a == 2:
        # one broadcast vertex gives at most diam = floor(n/2); two or more at most floor((n-2)/2)
        out.append(Bound(half, "upper:a=2"))
    if a == 3:
        out.append(Bound((n + half) // 3, "upper:a=3-intervals"))
    if n == 2 * a:
        out.append(Bound(n // 2, "upper:n=2a-regions"))
    if n == 2 * a - 1:
        out.append(Bound(half, "upper:n=2a-1-isomorphic-to-a=2"))
    if n == 3 * a - 1 and a >= 4:
        out.append(Bound((n + half) // 3, "upper:n=3a-1-L-regions"))
    regime = sigma_regime(n, a)
    if regime is not None:
        out.append(Bound(_max_over_counts(n, a, regime), f"upper:regions-{regime}"))
    if not out:
        out.append(Bound(n - 1, "upper:trivial"))
    return out


def global_upper_bound(n: int, a: int) -> int:
    return min(b.value for b in upper_bounds(n, a))


def lower_bounds(n: int, a: int, undirected_beta: int | None = None) -> list[Bound]:
    """Diameter, every in-range construction, and the undirected value when supplied."""
    out = []
    for rec in constructions_for(n, a):
        out.append(Bound(rec.cost, rec.source))
    if undirected_beta is not None:
        out.append(Bound(undirected_beta, "lower:undirected-beta"))
    return out


def bound_report(n: int, a: int, undirected_beta: int | None = None) -> BoundReport:
    return BoundReport(
        n=n,
        a=a,
        regime=str(classify_regime(n, a)),
        lower=lower_bounds(n, a, undirected_beta),
        upper=upper_bounds(n, a),
        exact=predicted_beta(n, a),
        predictions=applicable_predictions(n, a),
    )
