"""Rewrites that shrink large broadcast values without lowering the cost.

``bound_to_a_minus_1`` and ``bound_to_q`` replace every oversized value by a
fixed pattern of smaller values placed inside the ball the old value covered.
``equalize_pair`` rewrites a local configuration around v_i and v_{i+a-1}.

Nothing here repairs a bad outcome.  A placement landing on an occupied
vertex raises ``RewriteCollision``; an output that fails the independence
check or loses cost raises ``LemmaGapError`` carrying the violations.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .broadcast import Broadcast, RegionVariant, Violation, check_independent
from .circulant import (
    CirculantGraph,
    DistanceTable,
    RegimeError,
    _qr,
    lemma_a_minus_1_applies,
)


class TransformError(ValueError):
    pass


class InvalidInputError(TransformError):
    pass


class RewriteCollision(TransformError):
    def __init__(self, message, vertex, trace):
        super().__init__(message)
        self.vertex = vertex
        self.trace = trace


class LemmaGapError(TransformError):
    """The rewritten broadcast is not independent or is cheaper than the input."""

    def __init__(self, message, output, violations, trace):
        super().__init__(message)
        self.output = output
        self.violations = violations
        self.trace = trace


class UncoveredCaseError(TransformError):
    pass


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    vertex: int
    old_value: int
    placed: tuple[tuple[int, int], ...]

    def to_dict(self):
        return {
            "rule": self.rule,
            "vertex": self.vertex,
            "old_value": self.old_value,
            "placed": [list(p) for p in self.placed],
        }


@dataclass
class RewriteTrace:
    steps: list[RewriteStep] = field(default_factory=list)
    input_cost: int = 0
    output_cost: int = 0

    def to_dict(self):
        return {
            "steps": [s.to_dict() for s in self.steps],
            "input_cost": self.input_cost,
            "output_cost": self.output_cost,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _table(graph: CirculantGraph, dist: DistanceTable | None) -> DistanceTable:
    return graph.table if dist is None else dist


def _two_step(graph: CirculantGraph) -> tuple[int, int]:
    a = graph.spec.two_step_parameter()
    if a is None:
        raise RegimeError(f"{graph.spec} is not of the form C(n; 1, a)")
    return graph.n, a


def _require_independent(dist: DistanceTable, f: Broadcast):
    if len(f) != dist.n:
        raise InvalidInputError(f"broadcast has length {len(f)}, graph has {dist.n} vertices")
    bad = check_independent(dist, f)
    if bad:
        raise InvalidInputError(f"input is not an independent broadcast: {bad[0]}")


def _finish(dist, f, g, trace, cap=None) -> tuple[Broadcast, RewriteTrace]:
    out = Broadcast(tuple(g))
    trace.input_cost = f.cost
    trace.output_cost = out.cost
    bad: list[Violation] = check_independent(dist, out)
    if bad:
        raise LemmaGapError(f"rewritten broadcast is not independent: {bad[0]}", out, bad, trace)
    if out.cost < f.cost:
        raise LemmaGapError(f"cost dropped from {f.cost} to {out.cost}", out, [], trace)
    if cap is not None and out.max_value() > cap:
        raise LemmaGapError(f"value {out.max_value()} left above cap {cap}", out, [], trace)
    return out, trace


def _rewrite_all(n, f, trace, oversized, pattern):
    """Zero each oversized vertex (ascending) and place its pattern."""
    g = list(f.values)
    for i in oversized:
        rule, placements = pattern(i, f.values[i])
        g[i] = 0
        placed = []
        for j, v in placements:
            j %= n
            if g[j] > 0:
                trace.steps.append(RewriteStep(rule, i, f.values[i], tuple(placed)))
                raise RewriteCollision(
                    f"rewrite of v{i} ({rule}) hits v{j}, which already carries {g[j]}", j, trace
                )
            g[j] = v
            placed.append((j, v))
        trace.steps.append(RewriteStep(rule, i, f.values[i], tuple(placed)))
    return g


def bound_to_a_minus_1(graph: CirculantGraph, dist: DistanceTable | None, f: Broadcast):
    """Rewrite ``f`` into an (a-1)-bounded independent broadcast of no smaller cost.

    A value a <= f(v_i) <= 2a-3 becomes (a-2, f(v_i)-(a-1), 1) at offsets
    0, a-1, 2a-2.  A value with p(a-1) <= f(v_i) < (p+1)(a-1), p >= 2, becomes
    a-2 at offsets m(a-1) for m = 0 .. 4p-5.
    """
    n, a = _two_step(graph)
    if not lemma_a_minus_1_applies(n, a):
        q, r = _qr(n, a)
        raise RegimeError(
            f"(a-1)-bounding needs n = qa + r, a >= 4, q >= 2 and "
            f"(a <= q+r+1, r <= a-2) or (a <= q+1, r = a-1); got n={n}, a={a} (q={q}, r={r})"
        )
    dist = _table(graph, dist)
    _require_independent(dist, f)
    m = a - 1

    def pattern(i, fv):
        if fv <= 2 * a - 3:
            return "a-1:item1", [(i, a - 2), (i + m, fv - m), (i + 2 * m, 1)]
        p = fv // m
        return f"a-1:item2(p={p})", [(i + t * m, a - 2) for t in range(4 * p - 4)]

    trace = RewriteTrace()
    oversized = [i for i, v in enumerate(f.values) if v > m]
    g = _rewrite_all(n, f, trace, oversized, pattern)
    return _finish(dist, f, g, trace, cap=m)


def bound_to_q(graph: CirculantGraph, dist: DistanceTable | None, f: Broadcast, variant):
    """Rewrite ``f`` into a q-bounded independent broadcast of no smaller cost.

    ``variant`` is QA (n = qa) or QA_PLUS (n = qa + a - 1); 3 <= q < a-1.
    The diagonal vertices are v_{i+(q-k)a+k}, with k starting at 1 for QA
    and at 0 for QA_PLUS.
    """
    n, a = _two_step(graph)
    variant = RegionVariant(variant)
    if variant is RegionVariant.QA:
        if n % a:
            raise RegimeError(f"QA needs n = qa; got n={n}, a={a}")
        q, k0 = n // a, 1
    elif variant is RegionVariant.QA_PLUS:
        if (n + 1) % a:
            raise RegimeError(f"QA_PLUS needs n = qa + a - 1; got n={n}, a={a}")
        q, k0 = (n + 1) // a - 1, 0
    else:
        raise RegimeError("q-bounding takes QA or QA_PLUS")
    if not 3 <= q < a - 1:
        raise RegimeError(f"q-bounding needs 3 <= q < a-1; got q={q}, a={a}")
    dist = _table(graph, dist)
    _require_independent(dist, f)

    def diag(i, k):
        return i + (q - k) * a + k

    def pattern(i, fv):
        if fv <= 2 * q - 1:
            d = fv - q
            return "q:item-a", [(i, q - 1)] + [(diag(i, k), d) for k in range(k0, k0 + d + 1)]
        p = fv // q
        cells = [(i, q - 1)]
        for k in range(k0, q + 1):
            cells += [(diag(i, k) + t * q, q - 1) for t in range(p - 1)]
        return f"q:item-b(p={p})", cells

    trace = RewriteTrace()
    oversized = [i for i, v in enumerate(f.values) if v > q]
    g = _rewrite_all(n, f, trace, oversized, pattern)
    return _finish(dist, f, g, trace, cap=q)


def _dominators(dist: DistanceTable, f: Broadcast, v: int) -> list[int]:
    return [u for u in f.support if u != v and dist(u, v) <= f.values[u]]


def equalize_pair(graph: CirculantGraph, dist: DistanceTable | None, f: Broadcast, i: int, ell: int):
    """Give v_i and v_{i+a-1} equal values by a local rewrite.

    Needs f independent and ell-bounded, f(v_i) = ell - 1 and
    d(v_{i+a-1}, v_i) >= ell.  With p = f(v_{i+a-1}) and
    q = f(v_{i+(p+2)a-1}) the rewrite picks one of the cases below; the
    p = 0 case (ell < a-1) raises v_i to ell instead.
    """
    n, a = _two_step(graph)
    if a < 4 or not 2 <= ell <= a - 1:
        raise RegimeError(f"needs a >= 4 and 2 <= ell <= a-1; got a={a}, ell={ell}")
    dist = _table(graph, dist)
    _require_independent(dist, f)
    if f.max_value() > ell:
        raise InvalidInputError(f"input is not {ell}-bounded (max value {f.max_value()})")
    i %= n
    if f[i] != ell - 1:
        raise InvalidInputError(f"f(v{i}) = {f[i]}, expected ell - 1 = {ell - 1}")
    partner = (i + a - 1) % n
    if dist(partner, i) < ell:
        raise InvalidInputError(f"d(v{partner}, v{i}) = {dist(partner, i)} < ell = {ell}")

    p = f[partner]
    trace = RewriteTrace(input_cost=f.cost, output_cost=f.cost)
    if p == ell - 1:
        return f, trace
    far = (i + (p + 2) * a - 1) % n
    q = f[far]
    tail = (i + (p + 2) * a + (a - 3 - p)) % n
    g = list(f.values)

    def put(j, v):
        g[j % n] = v

    if ell == a - 1:
        if not 0 <= p < a - 2 or q > a - 2:
            raise InvalidInputError(f"case ell = a-1 needs 0 <= p < a-2 and q <= a-2; got p={p}, q={q}")
        if q <= a - 3 - p:
            rule = "equalize:a-1(a)"
            put(i, a - 2), put(partner, q + p + 1), put(far, 0)
        else:
            rule = "equalize:a-1(b)"
            _check_free(g, tail, far, rule, trace)
            put(i, a - 2), put(partner, a - 2), put(far, 0), put(tail, q - (a - 2 - p))
    else:
        if not 0 <= p < ell - 1:
            raise InvalidInputError(f"case ell < a-1 needs 0 <= p < ell-1; got p={p}")
        if p > 0:
            if q <= ell - p - 2:
                rule = "equalize:l(a)"
                put(i, ell - 1), put(partner, q + p + 1), put(far, 0)
            elif ell - p + 1 <= q <= ell:
                rule = "equalize:l(b)"
                _check_free(g, tail, far, rule, trace)
                put(i, ell - 1), put(partner, ell - 1), put(far, 0), put(tail, q - (ell - 1 - p))
            else:
                raise UncoveredCaseError(
                    f"uncovered case: ell={ell}, p={p}, q={q} lies between ell-p-2 and ell-p+1"
                )
        else:
            if q > ell - 1:
                raise UncoveredCaseError(f"uncovered case: p=0 needs q <= ell-1; got q={q}")
            doms = _dominators(dist, f, partner)
            if not doms:
                rule = "equalize:l(c)(i)"
            else:
                near = [k for k in doms if 0 < (k - i) % n < a]
                if len(doms) != 1 or not near:
                    raise UncoveredCaseError(
                        f"v{partner} is dominated by {doms}, not by a single v_k with i < k < i+a"
                    )
                rule = "equalize:l(c)(ii)"
                put(near[0], f[near[0]] - 1)
            put(i, ell), put(partner, q + 1), put(far, 0)
    placed = tuple((j, g[j]) for j in range(n) if g[j] != f.values[j])
    trace.steps.append(RewriteStep(rule, i, f[i], placed))
    return _finish(dist, f, g, trace)


def _check_free(g, tail, far, rule, trace):
    if tail != far and g[tail] > 0:
        raise RewriteCollision(f"{rule}: v{tail} already carries {g[tail]}", tail, trace)
