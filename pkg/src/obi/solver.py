"""Exact computation of the broadcast independence number.

Two independent routes:

* ``brute_force_beta`` enumerates supports.  Once the support S is fixed the
  constraints separate per vertex, so the best broadcast on S is
  f(u) = min(cap, e(u), min_{w in S, w != u} d(u, w) - 1).  Every support with
  all such values >= 1 is visited.
* ``branch_and_bound_beta`` assigns values vertex by vertex in index order,
  highest value first, and prunes with an admissible bound.

Both return the lexicographically greatest value vector among the optimal
broadcasts, so their witnesses can be compared directly.
"""
from __future__ import annotations

import enum
import itertools
import json
import multiprocessing
import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bounds import BoundReport, bound_report, sigma_cap, sigma_regime, upper_bound_sigma
from .broadcast import Broadcast
from .circulant import (
    UNREACHABLE,
    CirculantSpec,
    DistanceTable,
    _qr,
    build_graph,
    lemma_a_minus_1_applies,
    lemma_q_applies,
)
from .constructions import constructions_for

DEFAULT_NODE_LIMIT = 10_000_000
DEFAULT_TIME_LIMIT = 30.0


class CapProvenance(enum.Enum):
    DIAMETER = "DIAMETER"
    LEMMA_A_MINUS_1 = "LEMMA_A_MINUS_1"
    LEMMA_Q = "LEMMA_Q"
    USER = "USER"


@dataclass
class SolveOptions:
    value_cap: int
    cap_provenance: CapProvenance = CapProvenance.USER
    node_limit: int = DEFAULT_NODE_LIMIT
    time_limit: float = DEFAULT_TIME_LIMIT
    symmetry_breaking: bool = True
    # region-counting pruning; only set when its hypotheses hold for the instance
    sigma_regime: str | None = None
    a: int | None = None
    # known independent broadcast (within the cap); returned if the budget runs out first
    incumbent: Broadcast | None = None
    workers: int = 1

    def __post_init__(self):
        if self.value_cap < 0:
            raise ValueError("value_cap must be >= 0")
        if self.node_limit <= 0 or self.time_limit < 0:
            raise ValueError("limits must be positive")
        if self.sigma_regime is not None and self.a is None:
            raise ValueError("sigma_regime needs a")
        if self.incumbent is not None and self.incumbent.max_value() > self.value_cap:
            raise ValueError("incumbent exceeds value_cap")

    @property
    def lower_bound_hint(self) -> int:
        return self.incumbent.cost if self.incumbent is not None else 0


@dataclass
class SolveResult:
    beta: int
    witness: Broadcast
    optimal: bool
    nodes_explored: int
    elapsed: float
    cap: int | None = None
    cap_provenance: CapProvenance | None = None
    incumbents: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "witness": list(self.witness.values),
            "witness_compact": self.witness.to_compact(),
            "optimal": self.optimal,
            "nodes": self.nodes_explored,
            "elapsed": round(self.elapsed, 6),
            "cap": self.cap,
            "cap_provenance": self.cap_provenance.value if self.cap_provenance else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _dense(dist: DistanceTable) -> list[list]:
    return dist.matrix()


def _effective_cap(dist: DistanceTable, v: int, cap: int) -> int:
    e = dist.eccentricity(v)
    return cap if e == UNREACHABLE else min(cap, e)


def brute_force_beta(
    dist: DistanceTable,
    value_cap: int,
    *,
    node_limit: int | None = None,
    assignments: bool = False,
) -> SolveResult:
    """Exhaustive optimum over all broadcasts with values <= ``value_cap``.

    With ``assignments=True`` every vector in {0..cap}^n is enumerated
    literally (tiny instances only); otherwise supports are enumerated.
    """
    start = time.perf_counter()
    n = dist.n
    D = _dense(dist)
    caps = [_effective_cap(dist, v, value_cap) for v in range(n)]
    best_key = (0, (0,) * n)
    visited = 0
    optimal = True

    if assignments:
        for vals in itertools.product(*(range(c + 1) for c in caps)):
            visited += 1
            if node_limit is not None and visited > node_limit:
                optimal = False
                break
            support = [i for i in range(n) if vals[i]]
            if all(D[u][w] > vals[u] for u in support for w in support if u != w):
                key = (sum(vals), vals)
                if key > best_key:
                    best_key = key
    else:
        # depth-first over supports in index order; lim[u] tracks min_w d(u, w) - 1
        def visit(start_idx, members, lim):
            nonlocal best_key, visited, optimal
            visited += 1
            if node_limit is not None and visited > node_limit:
                optimal = False
                raise _Budget
            vals = [0] * n
            for u in members:
                vals[u] = lim[u]
            key = (sum(vals), tuple(vals))
            if key > best_key:
                best_key = key
            for u in range(start_idx, n):
                if caps[u] < 1:
                    continue
                new_lim = dict(lim)
                lu = caps[u]
                ok = True
                for w in members:
                    lu = min(lu, D[u][w] - 1)
                    lw = min(new_lim[w], D[w][u] - 1)
                    if lw < 1:
                        ok = False
                        break
                    new_lim[w] = lw
                if not ok or lu < 1:
                    continue
                new_lim[u] = lu
                visit(u + 1, members + [u], new_lim)

        try:
            visit(0, [], {})
        except _Budget:
            pass

    beta, vals = best_key
    return SolveResult(
        beta=beta,
        witness=Broadcast(vals),
        optimal=optimal,
        nodes_explored=visited,
        elapsed=time.perf_counter() - start,
        cap=value_cap,
    )


class _Budget(Exception):
    pass


class _Search:
    """Depth-first search state shared by the serial and parallel drivers."""

    def __init__(self, D, caps, options: SolveOptions):
        n = len(D)
        self.n = n
        self.caps = caps
        self.cap = max(caps, default=0)
        self.opts = options
        self.fwd = [D[j][j + 1:] for j in range(n)]
        self.back = [[D[u][j] - 1 for u in range(j + 1, n)] for j in range(n)]
        # skip[j][v]: first index u > j with d(j, u) > v; indices in between can't broadcast
        self.skip = []
        for j in range(n):
            row = [j + 1]
            for v in range(1, self.cap + 1):
                u = j + 1
                while u < n and D[j][u] <= v:
                    u += 1
                row.append(u)
            self.skip.append(row)
        self.sigma = None
        if options.sigma_regime is not None:
            regime, a = options.sigma_regime, options.a
            self.sigma_top = sigma_cap(n, a, regime)
            if self.cap > self.sigma_top:
                raise ValueError("region-counting bounds need cap <= the regime's cap")
            self.sigma = lambda s, t: upper_bound_sigma(n, a, regime, s, t)
        self.nodes = 0
        self.best = -1
        self.best_vals = None
        self.incumbents = []
        self.deadline = None
        self.shared = None

    def _suffix_bound(self, j, allow):
        # longest-path packing over positions j..n-1 using only forward blocking
        n = self.n
        g = [0] * (n - j + 1)
        skip = self.skip
        for t in range(n - 1, j - 1, -1):
            rel = t - j
            best = g[rel + 1]
            cap_t = allow[rel]
            if cap_t:
                sk = skip[t]
                for v in range(1, cap_t + 1):
                    cand = v + g[sk[v] - j]
                    if cand > best:
                        best = cand
            g[rel] = best
        return g[0]

    def _prune(self, bound):
        if bound <= self.best:
            return True
        shared = self.shared
        return shared is not None and bound < shared.value

    def rec(self, j, cost, allow, vals, support, top):
        self.nodes += 1
        if self.nodes > self.opts.node_limit:
            raise _Budget
        if self.deadline is not None and (self.nodes & 1023) == 1 and time.perf_counter() > self.deadline:
            raise _Budget
        n = self.n
        if j == n:
            if cost > self.best:
                self.best = cost
                self.best_vals = tuple(vals)
                self.incumbents.append(cost)
                if self.shared is not None:
                    with self.shared.get_lock():
                        if cost > self.shared.value:
                            self.shared.value = cost
            return
        if self._prune(cost + sum(allow)):
            return
        if self.sigma is not None and self._prune(self.sigma(support, top)):
            return
        if self._prune(cost + self._suffix_bound(j, allow)):
            return
        rest = allow[1:]
        fwd, back = self.fwd[j], self.back[j]
        sigma_top = self.sigma_top if self.sigma is not None else None
        for v in range(allow[0], 0, -1):
            new = [0 if fd <= v else (x if x < b else b) for fd, x, b in zip(fwd, rest, back)]
            vals[j] = v
            self.rec(j + 1, cost + v, new, vals, support + 1, top + (v == sigma_top))
        vals[j] = 0
        self.rec(j + 1, cost, rest, vals, support, top)

    def run_root(self, v0: int | None, symmetry: bool):
        """Search the subtree with f(v_0) = v0 (or everything when v0 is None)."""
        n = self.n
        vals = [0] * n
        allow = list(self.caps)
        if v0 is None:
            self.rec(0, 0, allow, vals, 0, 0)
            return
        if v0 > allow[0]:
            return
        if symmetry:
            # rotate the largest value to v_0: no other vertex exceeds it
            allow = [min(x, v0) for x in allow]
        new = [0 if fd <= v0 else (x if x < b else b) for fd, x, b in zip(self.fwd[0], allow[1:], self.back[0])]
        vals[0] = v0
        top = 1 if self.sigma is not None and v0 == self.sigma_top else 0
        self.rec(1, v0, new, vals, 1, top)


_WORKER_SHARED = None


def _init_worker(shared):
    global _WORKER_SHARED
    _WORKER_SHARED = shared


def _run_worker(D, caps, options, v0, symmetry):
    search = _Search(D, caps, options)
    search.shared = _WORKER_SHARED
    search.best = options.lower_bound_hint - 1
    search.deadline = time.perf_counter() + options.time_limit
    finished = True
    try:
        search.run_root(v0, symmetry)
    except _Budget:
        finished = False
    return v0, search.best, search.best_vals, search.nodes, finished


def branch_and_bound_beta(dist: DistanceTable, options: SolveOptions) -> SolveResult:
    """Optimal broadcast by depth-first branch and bound.

    Values are tried from high to low in index order, so the first optimum
    reached is the lexicographically greatest one.  With symmetry breaking on
    (rotation-invariant tables only) the search is restricted to broadcasts
    whose largest value sits on v_0; the all-zero broadcast is handled apart.
    """
    start = time.perf_counter()
    n = dist.n
    symmetry = options.symmetry_breaking
    if symmetry and not dist.is_rotation_invariant():
        raise ValueError("symmetry breaking needs a rotation-invariant distance table")
    D = _dense(dist)
    caps = [_effective_cap(dist, v, options.value_cap) for v in range(n)]

    if n == 0 or max(caps, default=0) == 0:
        return SolveResult(0, Broadcast.zeros(n), True, 1, time.perf_counter() - start,
                           options.value_cap, options.cap_provenance, [0])

    roots = list(range(caps[0], 0, -1)) if symmetry else [None]
    workers = max(1, options.workers)
    if symmetry and workers > 1 and len(roots) > 1:
        ctx = multiprocessing.get_context("fork")
        shared = ctx.Value("q", options.lower_bound_hint - 1)
        with ProcessPoolExecutor(
            max_workers=min(workers, len(roots)), mp_context=ctx,
            initializer=_init_worker, initargs=(shared,),
        ) as pool:
            outcomes = list(pool.map(_run_worker, *zip(*[(D, caps, options, v0, True) for v0 in roots])))
        nodes = sum(o[3] for o in outcomes)
        optimal = all(o[4] for o in outcomes)
        # deterministic re-selection: highest cost, then larger f(v_0) (lexicographically greater)
        found = [o for o in outcomes if o[2] is not None]
        best_cost, best_vals = -1, None
        for _, cost, vals, _, _ in sorted(found, key=lambda o: -o[0]):
            if cost > best_cost:
                best_cost, best_vals = cost, vals
        incumbents = sorted({o[1] for o in found})
    else:
        search = _Search(D, caps, options)
        search.best = options.lower_bound_hint - 1
        search.deadline = start + options.time_limit
        optimal = True
        try:
            for v0 in roots:
                search.run_root(v0, symmetry)
        except _Budget:
            optimal = False
        nodes = search.nodes
        best_cost, best_vals = search.best, search.best_vals
        incumbents = search.incumbents

    if best_vals is None:
        if optimal and options.lower_bound_hint > 0:
            raise ValueError(f"incumbent of cost {options.lower_bound_hint} is not a valid broadcast here")
        if options.incumbent is not None:
            best_cost, best_vals = options.incumbent.cost, options.incumbent.values
        else:
            best_cost, best_vals = 0, (0,) * n
    return SolveResult(
        beta=best_cost,
        witness=Broadcast(best_vals),
        optimal=optimal,
        nodes_explored=nodes,
        elapsed=time.perf_counter() - start,
        cap=options.value_cap,
        cap_provenance=options.cap_provenance,
        incumbents=list(incumbents),
    )


def select_cap(n: int, a: int) -> tuple[int, CapProvenance]:
    """Smallest value cap known not to lose optimality on C(n; 1, a)."""
    diam = build_graph(CirculantSpec(n, (1, a))).diameter
    options = [(diam, CapProvenance.DIAMETER)]
    if lemma_a_minus_1_applies(n, a):
        options.append((a - 1, CapProvenance.LEMMA_A_MINUS_1))
    if lemma_q_applies(n, a):
        options.append((_qr(n, a)[0], CapProvenance.LEMMA_Q))
    cap, prov = min(options, key=lambda t: t[0])
    return min(cap, diam), prov


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("OBI_THREADS", "1")))
    except ValueError:
        return 1


def beta_b(
    spec: CirculantSpec,
    *,
    node_limit: int = DEFAULT_NODE_LIMIT,
    time_limit: float = DEFAULT_TIME_LIMIT,
    workers: int | None = None,
    cap: int | None = None,
    use_sigma_bounds: bool = True,
) -> tuple[SolveResult, BoundReport | None]:
    """Solve one instance with the tightest justified value cap.

    For C(n; 1, a) the cap comes from ``select_cap`` and the report carries the
    closed-form prediction, if any.  Other step sets search up to the diameter.
    Passing ``cap`` overrides the choice (provenance USER).
    """
    graph = build_graph(spec)
    table = graph.table
    a = spec.two_step_parameter()
    workers = default_workers() if workers is None else workers
    report = None
    incumbent = None
    regime = None
    if a is not None:
        chosen, prov = select_cap(spec.n, a)
        report = bound_report(spec.n, a)
        regime = sigma_regime(spec.n, a) if use_sigma_bounds else None
    else:
        chosen, prov = table.diameter, CapProvenance.DIAMETER
    if cap is not None:
        chosen, prov = cap, CapProvenance.USER
    if regime is not None and (prov is CapProvenance.USER or chosen > sigma_cap(spec.n, a, regime)):
        regime = None
    if a is not None:
        fitting = [r.broadcast for r in constructions_for(spec.n, a) if r.broadcast.max_value() <= chosen]
        incumbent = max(fitting, key=lambda b: b.cost, default=None)
    options = SolveOptions(
        value_cap=chosen,
        cap_provenance=prov,
        node_limit=node_limit,
        time_limit=time_limit,
        sigma_regime=regime,
        a=a,
        incumbent=incumbent,
        workers=workers,
        symmetry_breaking=True,
    )
    return branch_and_bound_beta(table, options), report


def undirected_table(spec: CirculantSpec) -> DistanceTable:
    """Distances of the underlying undirected circulant (steps taken both ways)."""
    n = spec.n
    moves = {s % n for s in spec.steps} | {(-s) % n for s in spec.steps}
    row = [UNREACHABLE] * n
    row[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for s in moves:
            v = (u + s) % n
            if row[v] == UNREACHABLE:
                row[v] = row[u] + 1
                queue.append(v)
    return DistanceTable(n, row=row)


def undirected_beta(dist: DistanceTable, cap: int | None = None, *, method: str = "auto") -> SolveResult:
    """beta_b of an undirected graph given by its symmetric distance table."""
    if not dist.is_symmetric():
        raise ValueError("undirected_beta needs a symmetric distance table")
    cap = dist.diameter if cap is None else cap
    if method == "auto":
        method = "brute" if dist.n <= 12 else "bnb"
    if method == "brute":
        return brute_force_beta(dist, cap)
    opts = SolveOptions(value_cap=cap, symmetry_breaking=dist.is_rotation_invariant())
    return branch_and_bound_beta(dist, opts)
