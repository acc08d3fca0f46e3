"""Explicit independent broadcasts on C(n; 1, a) with known cost.

Each builder returns a ``ConstructionRecord``: the broadcast, the cost it is
expected to have, and the parameter family it belongs to.  Builders never
call the solver; ``ConstructionRecord.violations`` checks a record against
BFS distances.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .broadcast import Broadcast, Violation, check_independent
from .circulant import CirculantSpec, RegimeError, build_graph, check_two_step


class ConstructionCollision(ValueError):
    """Two clauses of a construction assign a value to the same vertex."""


@dataclass(frozen=True)
class ConstructionRecord:
    family: str
    params: dict
    broadcast: Broadcast
    predicted_cost: int
    source: str
    notes: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.params["n"]

    @property
    def a(self) -> int:
        return self.params["a"]

    @property
    def cost(self) -> int:
        return self.broadcast.cost

    def spec(self) -> CirculantSpec:
        return CirculantSpec(self.n, (1, self.a))

    def violations(self) -> list[Violation]:
        return check_independent(build_graph(self.spec()).table, self.broadcast)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "broadcast": self.broadcast.to_compact(),
            "predicted_cost": self.predicted_cost,
            "cost": self.cost,
            "source": self.source,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _place(n: int, entries) -> Broadcast:
    vals = [0] * n
    owner = {}
    for idx, value, clause in entries:
        i = idx % n
        if i in owner:
            raise ConstructionCollision(
                f"v{i} assigned by both {owner[i]!r} and {clause!r} (n={n})"
            )
        owner[i] = clause
        vals[i] = value
    return Broadcast(tuple(vals))


def single_vertex_diam(n: int, a: int) -> ConstructionRecord:
    check_two_step(n, a)
    diam = build_graph(CirculantSpec(n, (1, a))).diameter
    f = Broadcast.from_support(n, {0: diam})
    return ConstructionRecord("single-vertex", {"n": n, "a": a}, f, diam, "lower:diameter")


def construct_3a_minus_1(a: int) -> ConstructionRecord:
    """Cost floor(n/2) on C(3a-1; 1, a), a >= 4."""
    if a < 4:
        raise RegimeError(f"needs a >= 4, got a={a}")
    n = 3 * a - 1
    if a % 2:
        f = _place(n, ((i, 1, "even") for i in range(0, n, 2)))
        predicted = n // 2
    else:
        entries = [(0, 2, "origin")]
        entries += [(i, 1, "first") for i in range(3, a, 2)]
        entries += [(i, 1, "middle") for i in range(a + 2, 2 * a - 1, 2)]
        entries += [(i, 1, "last") for i in range(2 * a + 1, 3 * a - 2, 2)]
        f = _place(n, entries)
        predicted = (n - 1) // 2
    return ConstructionRecord("3a-1", {"n": n, "a": a}, f, predicted, "lower:construction-3a-1")


def construct_a3(n: int) -> ConstructionRecord:
    """Cost floor(n/2) on C(n; 1, 3)."""
    if n < 5:
        raise RegimeError(f"C(n; 1, 3) needs n >= 5 (a = n-1 is excluded); got n={n}")
    if n % 2 == 0:
        f = _place(n, ((i, 1, "even") for i in range(0, n, 2)))
        return ConstructionRecord("a3", {"n": n, "a": 3}, f, n // 2, "lower:construction-a3")
    if n == 5:
        # The odd pattern needs n >= 7; one vertex of value diam = 2 reaches floor(5/2).
        rec = single_vertex_diam(5, 3)
        return ConstructionRecord(
            "a3", rec.params, rec.broadcast, n // 2, "lower:construction-a3",
            ("n=5 falls back to a single vertex of value diam",),
        )
    entries = [(i, 1, "even") for i in range(0, n - 6, 2)] + [(n - 5, 2, "tail")]
    f = _place(n, entries)
    return ConstructionRecord("a3", {"n": n, "a": 3}, f, (n - 1) // 2, "lower:construction-a3")


def k_a_minus_1_in_range(a: int, k: int, s: int) -> bool:
    return a >= 4 and 0 <= s <= min(a, k) - 2


def construct_k_a_minus_1(a: int, k: int, s: int) -> ConstructionRecord:
    """Lower-bound broadcast on C(k(a-1)+s; 1, a)."""
    if not k_a_minus_1_in_range(a, k, s):
        raise RegimeError(f"needs a >= 4 and 0 <= s <= min(a, k) - 2; got a={a}, k={k}, s={s}")
    n = k * (a - 1) + s
    m = a - 1
    if s == 0:
        entries = [(p * m, a - 2, "main") for p in range(k)]
        predicted = k * (a - 2)
    elif s == 1:
        entries = [(p * m, a - 2, "main") for p in range(k - 2)]
        entries.append(((k - 2) * m, a - 1, "top"))
        predicted = (k - 1) * (a - 2) + 1
    else:
        entries = [(p * m, a - 2, "main") for p in range(k - s)]
        entries += [(p * m, s - 1, "tail") for p in range(k - s, k + 1)]
        predicted = (k - s) * (a - 2) + (s - 1) * (s + 1)
    f = _place(n, entries)
    params = {"n": n, "a": a, "k": k, "s": s}
    return ConstructionRecord("k(a-1)", params, f, predicted, "lower:construction-k(a-1)+s")


def qa_in_range(a: int, q: int, k: int, s: int) -> bool:
    return 3 <= q < a - 1 and k >= 1 and 0 <= s <= q - 1 and a == k * q + 1 + s


def _diagonals(a: int, q: int, k: int, alphas: range):
    return [alpha * (a - 1) - beta * q for alpha in alphas for beta in range(k)]


def construct_qa(a: int, q: int, k: int, s: int) -> ConstructionRecord:
    """Lower-bound broadcast on C(qa; 1, a) with a = kq + 1 + s."""
    if not qa_in_range(a, q, k, s):
        raise RegimeError(
            f"needs 3 <= q < a-1, k >= 1, 0 <= s <= q-1, a = kq+1+s; got a={a}, q={q}, k={k}, s={s}"
        )
    n = q * a
    if s == 0:
        entries = [(i, q - 1, "mod-q") for i in range(0, n, q)]
        predicted = a * (q - 1)
    elif s == 1:
        entries = [(0, q, "origin")]
        entries += [(i, q - 1, "diagonal") for i in _diagonals(a, q, k, range(1, q + 1))]
        predicted = (a - 1) * (q - 1) + 1
    else:
        entries = [(0, q - 1, "origin")]
        entries += [(i, q - 1, "diagonal") for i in _diagonals(a, q, k, range(1, q + 1))]
        entries += [((q - p) * a + p, s - 1, "tail") for p in range(1, s + 1)]
        predicted = (a - s) * (q - 1) + s * (s - 1)
    f = _place(n, entries)
    params = {"n": n, "a": a, "q": q, "k": k, "s": s}
    return ConstructionRecord("qa", params, f, predicted, "lower:construction-qa")


def construct_qa_plus(a: int, q: int, k: int, s: int) -> ConstructionRecord:
    """Lower-bound broadcast on C(qa + a - 1; 1, a) with a = kq + 1 + s."""
    if not qa_in_range(a, q, k, s):
        raise RegimeError(
            f"needs 3 <= q < a-1, k >= 1, 0 <= s <= q-1, a = kq+1+s; got a={a}, q={q}, k={k}, s={s}"
        )
    n = q * a + a - 1
    if s == 0:
        entries = [(i, q - 1, "mod-q") for i in range(0, n, q)]
        predicted = (a + k) * (q - 1)
    elif s == 1:
        entries = [(0, q, "origin")]
        entries += [(i, q - 1, "diagonal") for i in _diagonals(a, q, k, range(1, q + 2))]
        predicted = (a + k - 1) * (q - 1) + 1
    else:
        entries = [(0, q - 1, "origin")]
        entries += [(i, q - 1, "diagonal") for i in _diagonals(a, q, k, range(1, q + 2))]
        entries += [((q - p) * a + p, s - 1, "tail") for p in range(0, s + 1)]
        predicted = (a + k - s) * (q - 1) + (s - 1) * (s + 1)
    f = _place(n, entries)
    params = {"n": n, "a": a, "q": q, "k": k, "s": s}
    return ConstructionRecord("qa+a-1", params, f, predicted, "lower:construction-qa+a-1")


FAMILIES = ("3a-1", "a3", "k(a-1)", "qa", "qa+a-1", "single-vertex")


def construct(family: str, **params) -> ConstructionRecord:
    """Dispatch by family name (the names used on the command line)."""
    builders = {
        "3a-1": lambda p: construct_3a_minus_1(p["a"]),
        "a3": lambda p: construct_a3(p["n"]),
        "k(a-1)": lambda p: construct_k_a_minus_1(p["a"], p["k"], p["s"]),
        "qa": lambda p: construct_qa(p["a"], p["q"], p["k"], p["s"]),
        "qa+a-1": lambda p: construct_qa_plus(p["a"], p["q"], p["k"], p["s"]),
        "single-vertex": lambda p: single_vertex_diam(p["n"], p["a"]),
    }
    if family not in builders:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    try:
        return builders[family](params)
    except KeyError as exc:
        raise ValueError(f"family {family!r} needs parameter {exc.args[0]!r}") from None


def constructions_for(n: int, a: int) -> list[ConstructionRecord]:
    """Every construction whose parameter hypotheses match C(n; 1, a)."""
    check_two_step(n, a)
    out = [single_vertex_diam(n, a)]
    if a == 3:
        out.append(construct_a3(n))
    if a >= 4 and n == 3 * a - 1:
        out.append(construct_3a_minus_1(a))
    if a >= 4:
        k, s = divmod(n, a - 1)
        if k_a_minus_1_in_range(a, k, s):
            out.append(construct_k_a_minus_1(a, k, s))
        if n % a == 0:
            q = n // a
            if q >= 1:
                k2, s2 = divmod(a - 1, q)
                if qa_in_range(a, q, k2, s2):
                    out.append(construct_qa(a, q, k2, s2))
        if (n + 1) % a == 0:
            q = (n + 1) // a - 1
            if q >= 1:
                k2, s2 = divmod(a - 1, q)
                if qa_in_range(a, q, k2, s2):
                    out.append(construct_qa_plus(a, q, k2, s2))
    return out


def all_parameter_tuples(max_n: int):
    """(family, params) for every in-range tuple with n <= max_n."""
    for a in range(4, max_n):
        if 3 * a - 1 <= max_n:
            yield "3a-1", {"a": a}
    for n in range(5, max_n + 1):
        yield "a3", {"n": n}
    for a in range(4, max_n):
        for k in range(2, max_n):
            for s in range(0, min(a, k) - 1):
                if k * (a - 1) + s <= max_n:
                    yield "k(a-1)", {"a": a, "k": k, "s": s}
    for q in range(3, max_n):
        for a in range(q + 2, max_n):
            k, s = divmod(a - 1, q)
            if not qa_in_range(a, q, k, s):
                continue
            if q * a <= max_n:
                yield "qa", {"a": a, "q": q, "k": k, "s": s}
            if q * a + a - 1 <= max_n:
                yield "qa+a-1", {"a": a, "q": q, "k": k, "s": s}
