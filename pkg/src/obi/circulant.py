"""Oriented circulant graphs C(n; s_1, ..., s_k) and their one-directional distances.

Vertices are 0..n-1, with an arc i -> i+s (mod n) for every step s.  The
distance d(u, v) is the length of a shortest directed path from u to v only;
the reverse direction is never consulted.

Two-step graphs C(n; 1, a) get extra machinery: a closed-form distance and
diameter valid in a proven parameter range, and ``classify_regime`` which
sorts (n, a) into the parameter families that carry exact values.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

UNREACHABLE = math.inf


class InvalidCirculantError(ValueError):
    """Raised for step sets that do not define an oriented circulant graph."""


class RegimeError(ValueError):
    """Raised when a closed form is asked for outside the range where it holds."""


@dataclass(frozen=True)
class CirculantSpec:
    n: int
    steps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))

    @classmethod
    def two_step(cls, n: int, a: int) -> "CirculantSpec":
        return cls(n, (1, a))

    def two_step_parameter(self) -> int | None:
        """Return a if the normalized spec is C(n; 1, a) with 2 <= a <= n-2."""
        norm = normalize_spec(self)
        if len(norm.steps) == 2 and norm.steps[0] == 1 and 2 <= norm.steps[1] <= norm.n - 2:
            return norm.steps[1]
        return None

    def __str__(self):
        return f"C({self.n}; {', '.join(map(str, self.steps))})"


def validate_spec(spec: CirculantSpec) -> None:
    n = spec.n
    if n < 3:
        raise InvalidCirculantError(f"need n >= 3, got n={n}")
    if not spec.steps:
        raise InvalidCirculantError("at least one step is required")
    residues = [s % n for s in spec.steps]
    if 0 in residues:
        raise InvalidCirculantError(f"step congruent to 0 mod {n} in {list(spec.steps)}")
    if len(set(residues)) != len(residues):
        raise InvalidCirculantError(f"duplicate steps mod {n} in {list(spec.steps)}")
    # A step equal to n/2 is allowed on its own: C(2a; 1, a) is part of the theory.
    for x in range(len(residues)):
        for y in range(x + 1, len(residues)):
            if (residues[x] + residues[y]) % n == 0:
                raise InvalidCirculantError(
                    f"steps {spec.steps[x]} and {spec.steps[y]} sum to 0 mod {n} (opposite arcs)"
                )


def normalize_spec(spec: CirculantSpec) -> CirculantSpec:
    """Reduce steps to least non-negative residues and sort them.

    C(n; 1, a) and C(n; 1, -(n-a)) have the same arc set and normalize alike.
    """
    return CirculantSpec(spec.n, tuple(sorted({s % spec.n for s in spec.steps})))


class DistanceTable:
    """Read-only n x n table of one-directional hop counts.

    Circulant tables keep a single row and answer d(i, j) = row[(j - i) mod n];
    arbitrary tables (e.g. undirected distances handed to the solver) keep
    every row.
    """

    def __init__(self, n: int, *, row: list | None = None, rows: list[list] | None = None):
        if (row is None) == (rows is None):
            raise ValueError("give exactly one of row= or rows=")
        self.n = n
        if row is not None:
            if len(row) != n:
                raise ValueError("row length must equal n")
            self._row = tuple(row)
            self._rows = None
        else:
            if len(rows) != n or any(len(r) != n for r in rows):
                raise ValueError("rows must form an n x n table")
            self._row = None
            self._rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_rows(cls, rows) -> "DistanceTable":
        return cls(len(rows), rows=[list(r) for r in rows])

    @property
    def rotational(self) -> bool:
        """True when the table is stored as one row plus rotation."""
        return self._row is not None

    def __call__(self, i: int, j: int):
        if self._row is not None:
            return self._row[(j - i) % self.n]
        return self._rows[i][j]

    def __getitem__(self, ij):
        i, j = ij
        return self(i, j)

    def row(self, i: int) -> list:
        if self._row is not None:
            n = self.n
            return [self._row[(j - i) % n] for j in range(n)]
        return list(self._rows[i])

    def matrix(self) -> list[list]:
        return [self.row(i) for i in range(self.n)]

    def eccentricity(self, v: int):
        if self._row is not None:
            return self.diameter
        return max(self._rows[v])

    @cached_property
    def diameter(self):
        if self._row is not None:
            return max(self._row)
        return max(max(r) for r in self._rows)

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self(i, j) == self(j, i) for i in range(n) for j in range(i + 1, n))

    def is_rotation_invariant(self) -> bool:
        if self._row is not None:
            return True
        n = self.n
        return all(self(i, j) == self(0, (j - i) % n) for i in range(n) for j in range(n))

    def __eq__(self, other):
        if not isinstance(other, DistanceTable):
            return NotImplemented
        return self.n == other.n and self.matrix() == other.matrix()

    def __repr__(self):
        kind = "rotational" if self.rotational else "dense"
        return f"DistanceTable(n={self.n}, {kind}, diameter={self.diameter})"


@dataclass(frozen=True)
class CirculantGraph:
    """Validated, immutable oriented circulant graph."""

    spec: CirculantSpec
    _table: DistanceTable | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def steps(self) -> tuple[int, ...]:
        return self.spec.steps

    def arcs(self) -> list[tuple[int, int]]:
        n = self.n
        return [(i, (i + s) % n) for i in range(n) for s in self.steps]

    def out_neighbours(self, v: int) -> list[int]:
        return [(v + s) % self.n for s in self.steps]

    @cached_property
    def table(self) -> DistanceTable:
        return all_pairs(self)

    @property
    def diameter(self):
        return self.table.diameter


def build_graph(spec: CirculantSpec) -> CirculantGraph:
    validate_spec(spec)
    return CirculantGraph(normalize_spec(spec))


def circulant(n: int, *steps: int) -> CirculantGraph:
    """Shorthand: ``circulant(12, 1, 4)`` builds C(12; 1, 4)."""
    return build_graph(CirculantSpec(n, steps))


def distance_row(graph: CirculantGraph, source: int) -> list:
    """Breadth-first hop counts from ``source`` along out-arcs."""
    n = graph.n
    dist = [UNREACHABLE] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in graph.out_neighbours(u):
            if dist[w] == UNREACHABLE:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_pairs(graph: CirculantGraph) -> DistanceTable:
    # Row 0 plus rotation; equal to per-source BFS because i -> i+c is an automorphism.
    return DistanceTable(graph.n, row=distance_row(graph, 0))


def _qr(n: int, a: int) -> tuple[int, int]:
    return divmod(n, a)


def in_distance_regime(n: int, a: int) -> bool:
    """Parameter range in which the closed-form distance for C(n; 1, a) is proven."""
    if a < 4 or a >= n:
        return False
    q, r = _qr(n, a)
    if r == 0:
        return q >= 3
    return q >= 2 and a <= r + q + 1


def closed_form_distance(n: int, a: int, i: int, j: int) -> int:
    """d(v_i, v_j) on C(n; 1, a) as floor(D/a)(1-a) + D with D = (j - i) mod n."""
    if not in_distance_regime(n, a):
        raise RegimeError(f"closed-form distance not established for n={n}, a={a}")
    delta = (j - i) % n
    return (delta // a) * (1 - a) + delta


def distance(graph: CirculantGraph, i: int, j: int) -> tuple[int, str]:
    """Distance with the closed form when it applies, BFS otherwise.

    Returns ``(d, path)`` where path is ``"closed-form"`` or ``"bfs"``.
    """
    a = graph.spec.two_step_parameter()
    if a is not None and in_distance_regime(graph.n, a):
        return closed_form_distance(graph.n, a, i, j), "closed-form"
    return graph.table(i, j), "bfs"


def diameter(graph: CirculantGraph):
    return graph.table.diameter


def closed_form_diameter(n: int, a: int) -> int:
    if a == 2 and n >= 4:
        return n // 2
    if not in_distance_regime(n, a):
        raise RegimeError(f"closed-form diameter not established for n={n}, a={a}")
    q = n // a
    return q + a - 2


def multiplier_isomorphism(spec1: CirculantSpec, spec2: CirculantSpec) -> int | None:
    """Least m coprime to n mapping the step set of ``spec1`` onto that of ``spec2``.

    The map v_i -> v_{m i} is then an isomorphism, and it is checked arc by arc
    before being returned.  ``None`` only means no multiplier works; the graphs
    may still be isomorphic through some other bijection.
    """
    n = spec1.n
    if spec2.n != n:
        raise ValueError("specs must have the same n")
    validate_spec(spec1)
    validate_spec(spec2)
    s1 = {s % n for s in spec1.steps}
    s2 = {s % n for s in spec2.steps}
    if len(s1) != len(s2):
        return None
    for m in range(1, n):
        if math.gcd(m, n) != 1:
            continue
        if {(m * s) % n for s in s1} == s2:
            arcs1 = {((m * u) % n, (m * v) % n) for u, v in build_graph(spec1).arcs()}
            arcs2 = set(build_graph(spec2).arcs())
            if arcs1 != arcs2:
                raise AssertionError(f"multiplier {m} passed the step test but not the arc test")
            return m
    return None


class Family(enum.Enum):
    A2 = "A2"
    A3 = "A3"
    N_EQ_2A = "N_EQ_2A"
    N_EQ_2A_MINUS_1 = "N_EQ_2A_MINUS_1"
    N_EQ_3A_MINUS_1 = "N_EQ_3A_MINUS_1"
    QA_SPECIAL = "QA_SPECIAL"
    QA_PLUS_A_MINUS_1_SPECIAL = "QA_PLUS_A_MINUS_1_SPECIAL"
    K_TIMES_A_MINUS_1 = "K_TIMES_A_MINUS_1"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class RegimeTag:
    family: Family
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.params
        n, a = p.get("n"), p.get("a")
        if self.family is Family.QA_SPECIAL:
            assert n == p["q"] * a
        elif self.family is Family.QA_PLUS_A_MINUS_1_SPECIAL:
            assert n == p["q"] * a + a - 1
        elif self.family is Family.K_TIMES_A_MINUS_1:
            assert n == p["k"] * (a - 1)

    def __str__(self):
        extra = ",".join(f"{k}={v}" for k, v in self.params.items() if k not in ("n", "a"))
        return f"{self.family.value}({extra})" if extra else self.family.value


def check_two_step(n: int, a: int) -> None:
    if n < 3 or not (2 <= a <= n - 2):
        raise InvalidCirculantError(f"need n > a >= 2 with a not in {{1, n-1}}; got n={n}, a={a}")


def special_qa(n: int, a: int) -> dict | None:
    """Decomposition for the n = qa exact-value formula, or None.

    Covers q = k(a-1) with k >= 1 and a = kq + 1 with k >= 2, for q >= 3, a >= 4.
    """
    if a < 4 or n % a:
        return None
    q = n // a
    if q < 3:
        return None
    if q % (a - 1) == 0:
        return {"q": q, "r": 0, "k": q // (a - 1), "case": "q=k(a-1)"}
    if (a - 1) % q == 0 and (a - 1) // q >= 2:
        return {"q": q, "r": 0, "k": (a - 1) // q, "case": "a=kq+1"}
    return None


def special_qa_plus(n: int, a: int) -> dict | None:
    """Same as ``special_qa`` for n = qa + a - 1."""
    if a < 4 or (n + 1) % a:
        return None
    q = (n + 1) // a - 1
    if q < 3:
        return None
    if q % (a - 1) == 0:
        return {"q": q, "r": a - 1, "k": q // (a - 1), "case": "q=k(a-1)"}
    if (a - 1) % q == 0 and (a - 1) // q >= 2:
        return {"q": q, "r": a - 1, "k": (a - 1) // q, "case": "a=kq+1"}
    return None


def k_times_a_minus_1(n: int, a: int) -> dict | None:
    if a < 4 or n % (a - 1):
        return None
    k = n // (a - 1)
    return {"k": k, "s": 0} if k >= 3 else None


def classify_regime(n: int, a: int) -> RegimeTag:
    """Most specific exact-value family for C(n; 1, a).

    Families overlap (n = 2a is also n = qa with q = 2, and n = qa with
    q = k(a-1) is also n = k'(a-1)), so precedence is fixed:
    A2, A3, N_EQ_2A, N_EQ_2A_MINUS_1, N_EQ_3A_MINUS_1, QA_SPECIAL,
    QA_PLUS_A_MINUS_1_SPECIAL, K_TIMES_A_MINUS_1, GENERAL.
    """
    check_two_step(n, a)
    base = {"n": n, "a": a}
    if a == 2:
        return RegimeTag(Family.A2, base)
    if a == 3:
        return RegimeTag(Family.A3, base)
    if n == 2 * a:
        return RegimeTag(Family.N_EQ_2A, {**base, "q": 2, "r": 0})
    if n == 2 * a - 1:
        return RegimeTag(Family.N_EQ_2A_MINUS_1, {**base, "q": 1, "r": a - 1})
    if n == 3 * a - 1 and a >= 4:
        return RegimeTag(Family.N_EQ_3A_MINUS_1, {**base, "q": 2, "r": a - 1})
    if (d := special_qa(n, a)) is not None:
        return RegimeTag(Family.QA_SPECIAL, {**base, **d})
    if (d := special_qa_plus(n, a)) is not None:
        return RegimeTag(Family.QA_PLUS_A_MINUS_1_SPECIAL, {**base, **d})
    if (d := k_times_a_minus_1(n, a)) is not None:
        return RegimeTag(Family.K_TIMES_A_MINUS_1, {**base, **d})
    q, r = _qr(n, a)
    return RegimeTag(Family.GENERAL, {**base, "q": q, "r": r})


def lemma_a_minus_1_applies(n: int, a: int) -> bool:
    """Whether C(n; 1, a) is known to admit an (a-1)-bounded optimal broadcast.

    n = qa + r with q >= 2 and either 4 <= a <= q + r + 1, r <= a - 2, or
    a <= q + 1, r = a - 1.  The n = qa and n = qa + a - 1 lemmas with
    a - 1 <= q reduce to this case.
    """
    if a < 4:
        return False
    q, r = _qr(n, a)
    if q < 2:
        return False
    if r <= a - 2:
        return a <= q + r + 1
    return a <= q + 1


def lemma_q_applies(n: int, a: int) -> bool:
    """Whether C(n; 1, a) is known to admit a q-bounded optimal broadcast (q < a - 1)."""
    if a < 4:
        return False
    q, r = _qr(n, a)
    if q >= a - 1:
        return False
    if r == 0:
        return q >= 3
    if r == a - 1:
        return q >= 2
    return False
