"""Broadcast functions, the independence test, and the counting regions.

A broadcast is a vector f of non-negative integers indexed by vertex.  It is
independent when f(v) <= e(v) for every v and d(u, v) > f(u) for every ordered
pair of distinct broadcast vertices.

The region helpers (``region_L``, ``region_A``, ``region_B``) are pure index
arithmetic modulo n.  They describe the vertex sets charged to each broadcast
vertex in the counting arguments behind the upper bounds.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .circulant import DistanceTable, RegimeError


@dataclass(frozen=True)
class Broadcast:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError("broadcast values must be non-negative")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, n: int) -> "Broadcast":
        return cls((0,) * n)

    @classmethod
    def from_support(cls, n: int, support: dict[int, int]) -> "Broadcast":
        vals = [0] * n
        for i, v in support.items():
            vals[i % n] = v
        return cls(tuple(vals))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def cost(self) -> int:
        return sum(self.values)

    @property
    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v > 0]

    def __getitem__(self, i: int) -> int:
        return self.values[i % len(self.values)]

    def __len__(self):
        return len(self.values)

    def max_value(self) -> int:
        return max(self.values, default=0)

    def to_json(self) -> str:
        return json.dumps(list(self.values))

    @classmethod
    def from_json(cls, text: str) -> "Broadcast":
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(v, int) for v in data):
            raise ValueError("expected a JSON array of integers")
        return cls(tuple(data))

    def to_compact(self) -> str:
        """Support-only text form, e.g. ``"0:2,3:2,6:2,9:2"``."""
        return ",".join(f"{i}:{v}" for i, v in enumerate(self.values) if v > 0)

    @classmethod
    def from_compact(cls, text: str, n: int) -> "Broadcast":
        support = {}
        for item in filter(None, (t.strip() for t in text.split(","))):
            i, _, v = item.partition(":")
            idx, val = int(i), int(v)
            if not 0 <= idx < n:
                raise ValueError(f"vertex {idx} out of range for n={n}")
            if idx in support:
                raise ValueError(f"vertex {idx} listed twice")
            support[idx] = val
        return cls.from_support(n, support)

    def __str__(self):
        return self.to_compact() or "(empty)"


class ViolationKind(enum.Enum):
    VALUE_EXCEEDS_ECCENTRICITY = "VALUE_EXCEEDS_ECCENTRICITY"
    DOMINATION = "DOMINATION"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    source: int
    target: int | None = None

    def __str__(self):
        if self.kind is ViolationKind.DOMINATION:
            return f"v{self.source} dominates broadcast vertex v{self.target}"
        return f"f(v{self.source}) exceeds e(v{self.source})"


def check_independent(dist: DistanceTable, f: Broadcast) -> list[Violation]:
    """Every violation of independence; an empty list means ``f`` is independent."""
    if len(f) != dist.n:
        raise ValueError(f"broadcast has length {len(f)}, graph has {dist.n} vertices")
    out = []
    vals = f.values
    support = f.support
    for v in support:
        if vals[v] > dist.eccentricity(v):
            out.append(Violation(ViolationKind.VALUE_EXCEEDS_ECCENTRICITY, v, None))
    for u in support:
        fu = vals[u]
        for v in support:
            if u != v and dist(u, v) <= fu:
                out.append(Violation(ViolationKind.DOMINATION, u, v))
    return out


def is_independent(dist: DistanceTable, f: Broadcast) -> bool:
    return not check_independent(dist, f)


def dominated_ball(dist: DistanceTable, v: int, radius: int) -> set[int]:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    return {u for u in range(dist.n) if dist(v, u) <= radius}


@dataclass(frozen=True)
class BroadcastStats:
    cost: int
    support: tuple[int, ...]
    v1: tuple[int, ...]
    v2: tuple[int, ...]
    cap: int


def stats(f: Broadcast, cap: int) -> BroadcastStats:
    """Cost, support, and the split of the support into value == cap / below cap."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    support = tuple(f.support)
    v1 = tuple(i for i in support if f.values[i] == cap)
    v2 = tuple(i for i in support if f.values[i] < cap)
    return BroadcastStats(f.cost, support, v1, v2, cap)


def _block(n: int, start: int, stop: int) -> list[int]:
    # inclusive index range, empty when stop < start
    return [(start + t) % n for t in range(stop - start + 1)]


def region_L(n: int, a: int, i: int, fv: int) -> set[int]:
    """Vertices charged to v_i on C(3a-1; 1, a): three blocks of sizes fv+1, fv-1, fv-1."""
    if n != 3 * a - 1 or a < 4:
        raise RegimeError(f"region L needs n = 3a - 1 with a >= 4; got n={n}, a={a}")
    if fv < 1:
        raise ValueError("fv must be >= 1")
    return set(
        _block(n, i, i + fv)
        + _block(n, i + a + 1, i + a + fv - 1)
        + _block(n, i + 2 * a, i + 2 * a + fv - 2)
    )


class RegionVariant(enum.Enum):
    A_MINUS_1 = "A_MINUS_1"
    QA = "QA"
    QA_PLUS = "QA_PLUS"


def region_A(n: int, a: int, i: int, variant: RegionVariant | str) -> set[int]:
    """Region of a broadcast vertex carrying the cap value.

    A_MINUS_1: the 2a-1 consecutive vertices v_i .. v_{i+2a-2}.
    QA (n = qa): v_i .. v_{i+q} plus v_{i+pa+q-p} for 1 <= p <= q-1  (2q vertices).
    QA_PLUS (n = qa+a-1): as QA with 1 <= p <= q  (2q+1 vertices).
    """
    variant = RegionVariant(variant)
    if a < 4:
        raise RegimeError("region A needs a >= 4")
    if variant is RegionVariant.A_MINUS_1:
        if 2 * a - 1 > n:
            raise RegimeError(f"2a-1 = {2 * a - 1} exceeds n = {n}")
        return set(_block(n, i, i + 2 * a - 2))
    if variant is RegionVariant.QA:
        if n % a:
            raise RegimeError(f"QA region needs n = qa; got n={n}, a={a}")
        q = n // a
        last_p = q - 1
    else:
        if (n + 1) % a:
            raise RegimeError(f"QA_PLUS region needs n = qa + a - 1; got n={n}, a={a}")
        q = (n + 1) // a - 1
        last_p = q
    if q < 2 or q >= a - 1:
        raise RegimeError(f"q-regions need 2 <= q < a-1; got q={q}, a={a}")
    cells = _block(n, i, i + q) + [(i + p * a + q - p) % n for p in range(1, last_p + 1)]
    return set(cells)


def region_B(n: int, j: int, fv: int) -> set[int]:
    """The fv+1 consecutive vertices v_j .. v_{j+fv}."""
    if fv < 0 or fv + 1 > n:
        raise ValueError(f"fv out of range: {fv}")
    return set(_block(n, j, j + fv))


def region_sets(n: int, a: int, f: Broadcast, variant: RegionVariant | str) -> dict[int, set[int]]:
    """Region of every broadcast vertex: A for value == cap, B for smaller values."""
    variant = RegionVariant(variant)
    if variant is RegionVariant.A_MINUS_1:
        cap = a - 1
    elif variant is RegionVariant.QA:
        cap = n // a
    else:
        cap = (n + 1) // a - 1
    out = {}
    for i in f.support:
        fv = f.values[i]
        if fv > cap:
            raise ValueError(f"f(v{i}) = {fv} exceeds the cap {cap}")
        out[i] = region_A(n, a, i, variant) if fv == cap else region_B(n, i, fv)
    return out


def random_independent(dist: DistanceTable, rng, max_value: int | None = None) -> Broadcast:
    """A random maximal independent broadcast, built greedily in a shuffled order.

    ``rng`` is a ``random.Random``.  Each vertex takes a uniform value between
    1 and the largest value it can still carry, or stays 0 if that is 0.
    """
    n = dist.n
    order = list(range(n))
    rng.shuffle(order)
    vals = [0] * n
    placed = []
    for v in order:
        if any(dist(u, v) <= vals[u] for u in placed):
            continue
        room = dist.eccentricity(v)
        for u in placed:
            room = min(room, dist(v, u) - 1)
        if max_value is not None:
            room = min(room, max_value)
        if room >= 1:
            vals[v] = rng.randint(1, room)
            placed.append(v)
    return Broadcast(tuple(vals))
