"""Hypergraph union counts and divisible subgraphs of multigraphs.

Counting always enumerates raw subsets (or weightings) of a fixed graph.
Each count is compared with the zero-sum count of the incidence sequence,
or through a restricted system for hypergraphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .chainring import SubsetSpec, is_prime, make_chain_ring
from .errors import BudgetExceeded, ConditionError, ConsistencyError
from .mbound import m_bound_clamped
from .mpoly import MPoly
from .warning import RestrictedSystem, count_restricted_solutions
from .zerosum import (GroupTable, GSequence, PGroup, _factorize, count_weighted_sums,
                      davenport, little_d)

MAX_SUBSET_BITS = 25
MAX_WEIGHTINGS = 10 ** 8


def _popcount(arr: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(arr).astype(np.int64)
    out = np.zeros(arr.shape, dtype=np.int64)
    a = arr.copy()
    while a.any():
        out += (a & 1).astype(np.int64)
        a >>= 1
    return out


def prime_power(m: int) -> tuple[int, int] | None:
    """(p, v) with m = p^v, else None."""
    f = _factorize(m)
    if len(f) != 1:
        return None
    (p, v), = f.items()
    return p, v


# -- hypergraphs ---------------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        if not self.sets:
            raise ValueError("a hypergraph needs at least one set")

    @property
    def length(self) -> int:
        return len(self.sets)

    @property
    def ground(self) -> list:
        return sorted(set().union(*self.sets))

    def max_degree(self) -> int:
        return max((sum(x in s for s in self.sets) for x in self.ground), default=0)

    def union_size(self, J: Iterable[int]) -> int:
        return len(set().union(*(self.sets[i] for i in J)))


def union_sizes(H: Hypergraph) -> np.ndarray:
    """#(union of F_i, i in J) for every J, indexed by bitmask (bit i = F_{i+1})."""
    n = H.length
    if n > MAX_SUBSET_BITS:
        raise BudgetExceeded(2 ** n, 2 ** MAX_SUBSET_BITS, "subset enumeration")
    ground = {x: k for k, x in enumerate(H.ground)}
    if len(ground) <= 63:
        masks = [sum(1 << ground[x] for x in s) for s in H.sets]
        unions = np.zeros(1, dtype=np.uint64)
        for m in masks:
            unions = np.concatenate([unions, unions | np.uint64(m)])
        return _popcount(unions)
    unions = [frozenset()]
    for s in H.sets:
        unions = unions + [u | s for u in unions]
    return np.array([len(u) for u in unions], dtype=np.int64)


def inclusion_exclusion_poly(H: Hypergraph, ring) -> MPoly:
    """h(t) = sum_{J nonempty} (-1)^{#J+1} #(intersection of F_j, j in J) prod t_j;
    on {0,1}^n it returns the size of the union of the selected sets."""
    n = H.length
    coeffs: dict = {}
    for x in H.ground:
        owners = [i for i, s in enumerate(H.sets) if x in s]
        for k in range(1, len(owners) + 1):
            for J in itertools.combinations(owners, k):
                e = tuple(int(i in J) for i in range(n))
                coeffs[e] = coeffs.get(e, 0) + (-1) ** (k + 1)
    return MPoly(ring, n, coeffs)


@dataclass(frozen=True)
class HypergraphReport:
    count: int
    nonempty_count: int
    bound: int | None
    vacuous: bool | None
    reduced_count: int | None

    @property
    def holds(self) -> bool | None:
        if self.bound is None:
            return None
        return self.count == 0 or self.count >= self.bound

    def as_dict(self) -> dict:
        return {"count": self.count, "nonempty_count": self.nonempty_count, "bound": self.bound,
                "vacuous": self.vacuous, "reduced_count": self.reduced_count, "holds": self.holds}


def hypergraph_count(H: Hypergraph, m: int, B: Iterable[int]) -> HypergraphReport:
    """N_F(m, B): subfamilies (the empty one included) whose union size is in B mod m.

    When m = p^v and B has distinct residues mod p the count is also taken
    through the inclusion-exclusion polynomial on {0,1}^n and the bound
    2^{n - d (p^v - #B)} is attached.
    """
    if m < 1:
        raise ValueError("m must be positive")
    targets = sorted({b % m for b in B})
    if not targets:
        raise ValueError("B must be nonempty")
    sizes = union_sizes(H) % m
    hit = np.isin(sizes, targets)
    count = int(hit.sum())
    nonempty = count - int(hit[0])
    pp = prime_power(m)
    if pp is None or len({b % pp[0] for b in targets}) < len(targets):
        return HypergraphReport(count, nonempty, None, None, None)
    p, v = pp
    n, d = H.length, H.max_degree()
    ring = make_chain_ring(p, 1, v)
    binary = SubsetSpec([ring.zero, ring.one], ring)
    sys = RestrictedSystem(ring, [binary] * n, [inclusion_exclusion_poly(H, ring)], [v],
                           [SubsetSpec([ring.element(b) for b in targets], ring)])
    reduced = count_restricted_solutions(sys)
    if reduced != count:
        raise ConsistencyError(f"union count {count} != inclusion-exclusion count {reduced}")
    bound, vacuous = m_bound_clamped([2] * n, 2 * n - d * (m - len(targets)))
    return HypergraphReport(count, nonempty, bound, vacuous, reduced)


def schmitt_construction(b: int, d: int, m: int, a: int) -> tuple[Hypergraph, list[int]]:
    """Sets A_{ij} + V_i for 1 <= i <= m-b, 1 <= j <= d: the A_{ij} have m
    elements, the V_i have a elements, all pairwise disjoint.  Targets are
    B = {-k a mod m : 0 <= k < b}.  No nonempty subfamily has union size in B."""
    if b < 1 or d < 1 or a < 1:
        raise ValueError("b, d, a must be positive")
    if m <= b:
        raise ValueError("need m > b")
    if math.gcd(a, m) != 1:
        raise ValueError("need gcd(a, m) = 1")
    counter = itertools.count()
    sets = []
    for _ in range(m - b):
        shared = {next(counter) for _ in range(a)}
        for _ in range(d):
            sets.append(frozenset({next(counter) for _ in range(m)} | shared))
    targets = sorted({(-k * a) % m for k in range(b)})
    return Hypergraph(tuple(sets)), targets


# -- multigraphs -----------------------------------------------------------------

TOPOLOGIST = "topologist"
ALGEBRAIST = "algebraist"


@dataclass(frozen=True)
class MultiGraph:
    r: int
    edges: tuple[tuple[int, int], ...]
    loop_convention: str = TOPOLOGIST

    def __post_init__(self):
        edges = tuple(tuple(sorted((int(u), int(v)))) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.r < 1:
            raise ValueError("need at least one vertex")
        for u, v in edges:
            if not (1 <= u <= self.r and 1 <= v <= self.r):
                raise ValueError(f"edge {u}-{v} outside vertices 1..{self.r}")
        if self.loop_convention not in (TOPOLOGIST, ALGEBRAIST):
            raise ValueError(f"unknown loop convention {self.loop_convention!r}")

    @classmethod
    def parse(cls, text: str, r: int | None = None, loop_convention: str = TOPOLOGIST) -> "MultiGraph":
        """``"1-2,2-3"``; loops as ``"u-u"``.  Vertex count defaults to the largest label."""
        edges = []
        for tok in text.split(","):
            tok = tok.strip()
            if tok:
                u, v = tok.split("-")
                edges.append((int(u), int(v)))
        if r is None:
            r = max((max(e) for e in edges), default=1)
        return cls(r, tuple(edges), loop_convention)

    @property
    def n(self) -> int:
        return len(self.edges)

    def column(self, e: tuple[int, int]) -> list[int]:
        """Degree contribution of one edge."""
        col = [0] * self.r
        u, v = e
        if u == v:
            col[u - 1] += 2 if self.loop_convention == TOPOLOGIST else 1
        else:
            col[u - 1] += 1
            col[v - 1] += 1
        return col

    def degrees(self, weights: Sequence[int] | None = None) -> list[int]:
        weights = [1] * self.n if weights is None else weights
        deg = [0] * self.r
        for (u, v), w in zip(self.edges, weights):
            if u == v:
                deg[u - 1] += w * (2 if self.loop_convention == TOPOLOGIST else 1)
            else:
                deg[u - 1] += w
                deg[v - 1] += w
        return deg

    def __str__(self):
        return ",".join(f"{u}-{v}" for u, v in self.edges)


@dataclass(frozen=True)
class DivisibilitySpec:
    """Moduli (q_1 | ... | q_r), a target type g, and optional edge weights
    and per-vertex target sets (replacing g)."""

    q: tuple[int, ...]
    g: tuple[int, ...] | None = None
    weights: tuple | None = None
    targets: tuple | None = None

    def __post_init__(self):
        q = tuple(int(x) for x in self.q)
        object.__setattr__(self, "q", q)
        PGroup(q)
        g = tuple(0 for _ in q) if self.g is None else tuple(int(x) % m for x, m in zip(self.g, q))
        if len(g) != len(q):
            raise ValueError("target type must have one coordinate per vertex")
        object.__setattr__(self, "g", g)
        if self.targets is not None:
            ts = tuple(tuple(sorted({int(b) % m for b in Bj})) for Bj, m in zip(self.targets, q))
            if len(ts) != len(q) or any(not t for t in ts):
                raise ValueError("need one nonempty target set per vertex")
            object.__setattr__(self, "targets", ts)

    @classmethod
    def uniform(cls, r: int, q: int, g=None, **kw) -> "DivisibilitySpec":
        return cls((q,) * r, g, **kw)

    @property
    def group(self) -> PGroup:
        return PGroup(self.q)

    def target_set(self) -> list[tuple[int, ...]]:
        if self.targets is None:
            return [self.g]
        return list(itertools.product(*self.targets))


def parity_subgroup_applies(G: MultiGraph, spec: DivisibilitySpec) -> bool:
    return spec.q[0] % 2 == 0 and G.loop_convention == TOPOLOGIST


def reduced_moduli(q: Sequence[int]) -> tuple[int, ...]:
    """q' = (q_1 / 2, q_2, ..., q_r)."""
    if q[0] % 2:
        raise ValueError("q_1 must be even")
    return (q[0] // 2,) + tuple(q[1:])


def parity_embed(y: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """G(q') -> G'(q): (y_1, ..., y_r) -> (2 y_1 + sum_{j>=2} y_j, y_2, ..., y_r)."""
    first = (2 * y[0] + sum(y[1:])) % q[0]
    return (first,) + tuple(c % m for c, m in zip(y[1:], q[1:]))


def parity_project(x: Sequence[int], q: Sequence[int]) -> tuple[int, ...] | None:
    """Inverse of :func:`parity_embed`; None when x has odd coordinate sum."""
    if sum(x) % 2:
        return None
    twice = (x[0] - sum(x[1:])) % q[0]
    return ((twice // 2) % (q[0] // 2),) + tuple(x[1:])


@dataclass(frozen=True)
class IncidenceData:
    sequence: GSequence
    parity_ok: bool | None
    reduced: tuple[int, ...] | None
    reduced_sequence: GSequence | None


def _group_from_moduli(moduli: Sequence[int]) -> PGroup:
    return PGroup(tuple(m for m in moduli if m > 1))


def _drop_trivial(x: Sequence[int], moduli: Sequence[int]) -> tuple[int, ...]:
    return tuple(c for c, m in zip(x, moduli) if m > 1)


def incidence_sequence(G: MultiGraph, spec: DivisibilitySpec) -> IncidenceData:
    """Incidence columns in G(q); with q_1 even and the topologist convention,
    also their images in G(q') under the inverse of :func:`parity_embed`."""
    if len(spec.q) != G.r:
        raise ValueError("spec must have one modulus per vertex")
    group = spec.group
    seq = GSequence(group, [G.column(e) for e in G.edges])
    if spec.q[0] % 2:
        return IncidenceData(seq, None, None, None)
    parity_ok = all(sum(x) % 2 == 0 for x in seq.terms)
    if G.loop_convention != TOPOLOGIST:
        return IncidenceData(seq, parity_ok, None, None)
    if not parity_ok:
        raise ConsistencyError("an incidence column has odd coordinate sum")
    qr = reduced_moduli(spec.q)
    if all(m == 1 for m in qr):
        return IncidenceData(seq, parity_ok, qr, None)
    reduced = GSequence(_group_from_moduli(qr),
                        [_drop_trivial(parity_project(x, spec.q), qr) for x in seq.terms])
    return IncidenceData(seq, parity_ok, qr, reduced)


def check_parity_isomorphism(q: Sequence[int]) -> bool:
    """parity_embed is a bijective homomorphism G(q') -> G'(q)."""
    q = tuple(q)
    Gq = PGroup(q)
    qr = reduced_moduli(q)
    src = list(itertools.product(*(range(m) for m in qr)))
    images = [parity_embed(y, q) for y in src]
    kernel = [x for x in Gq.elements() if sum(x) % 2 == 0]
    if sorted(images) != sorted(kernel) or len(set(images)) != len(src):
        return False
    for y1 in src:
        for y2 in src:
            s = tuple((a + b) % m for a, b, m in zip(y1, y2, qr))
            if parity_embed(s, q) != Gq.add(parity_embed(y1, q), parity_embed(y2, q)):
                return False
    return all(parity_project(parity_embed(y, q), q) == y for y in src)


def _weight_lists(spec: DivisibilitySpec, n: int) -> list[list[int]]:
    if spec.weights is None:
        return [[0, 1]] * n
    w = list(spec.weights)
    if w and all(isinstance(a, int) for a in w):
        return [sorted(set(w))] * n
    if len(w) != n:
        raise ValueError(f"need {n} weight sets")
    return [sorted(set(int(a) for a in x)) for x in w]


def count_divisible_subgraphs_direct(G: MultiGraph, spec: DivisibilitySpec) -> int:
    """Enumerate weightings (plain subsets by default) and test vertex degrees."""
    weights = _weight_lists(spec, G.n)
    total = math.prod(len(w) for w in weights)
    if spec.weights is None and G.n > MAX_SUBSET_BITS or total > MAX_WEIGHTINGS:
        raise BudgetExceeded(total, MAX_WEIGHTINGS, "weighting enumeration")
    q = np.array(spec.q, dtype=np.int64)
    deg = np.zeros((1, G.r), dtype=np.int64)
    for e, w in zip(G.edges, weights):
        col = np.array(G.column(e), dtype=np.int64)
        deg = np.concatenate([deg + a * col for a in w]) % q
    if spec.targets is None:
        return int(np.all(deg == np.array(spec.g), axis=1).sum())
    ok = np.ones(deg.shape[0], dtype=bool)
    for j, Bj in enumerate(spec.targets):
        ok &= np.isin(deg[:, j], Bj)
    return int(ok.sum())


def count_divisible_subgraphs_zerosum(G: MultiGraph, spec: DivisibilitySpec) -> int:
    """N_A^B of the incidence sequence, taken in G(q') when the parity
    reduction applies."""
    data = incidence_sequence(G, spec)
    weights = _weight_lists(spec, G.n)
    targets = spec.target_set()
    if data.reduced_sequence is None:
        return count_weighted_sums(data.sequence, weights, targets)
    projected = [parity_project(t, spec.q) for t in targets]
    projected = [_drop_trivial(t, data.reduced) for t in projected if t is not None]
    if not projected:
        return 0
    return count_weighted_sums(data.reduced_sequence, weights, projected)


def count_divisible_subgraphs(G: MultiGraph, spec: DivisibilitySpec) -> int:
    direct = count_divisible_subgraphs_direct(G, spec)
    via_sums = count_divisible_subgraphs_zerosum(G, spec)
    if direct != via_sums:
        raise ConsistencyError(f"direct subgraph count {direct} != zero-sum count {via_sums}")
    return direct


# -- the constants E(r, q) ---------------------------------------------------------

def script_E(r: int, q: int) -> int:
    """(q-1) r + 1 for odd q, (q-1) r - q/2 + 1 for even q."""
    if r < 3:
        raise ValueError("defined for r >= 3 (E(2, q) = q)")
    if q < 1:
        raise ValueError("q must be positive")
    if q % 2:
        return (q - 1) * r + 1
    return (q - 1) * r - q // 2 + 1


def graph_group(r: int, q: int) -> PGroup:
    """G(r, q): r copies of Z/q, with one replaced by Z/(q/2) for even q."""
    if q % 2:
        return PGroup.from_cyclic([q] * r)
    return PGroup.from_cyclic([q] * (r - 1) + [q // 2])


def graph_davenport(r: int, q: int, max_order: int | None = None) -> int:
    """D(r, q) = D(G(r, q)) by exhaustive search."""
    from . import zerosum
    G = graph_group(r, q)
    if max_order is not None and G.order > zerosum.MAX_SEARCH_ORDER:
        old = zerosum.MAX_SEARCH_ORDER
        zerosum.MAX_SEARCH_ORDER = max_order
        try:
            return davenport(G)
        finally:
            zerosum.MAX_SEARCH_ORDER = old
    return davenport(G)


def _pairs(r: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, r + 1), 2))


def _canonical(r: int, edges: tuple) -> tuple:
    best = None
    for perm in itertools.permutations(range(1, r + 1)):
        relabel = tuple(sorted(tuple(sorted((perm[u - 1], perm[v - 1]))) for u, v in edges))
        if best is None or relabel < best:
            best = relabel
    return best


def is_atomic(G: MultiGraph, q: int) -> bool:
    """No nonempty subgraph has every degree divisible by q."""
    table = PGroup((q,) * G.r).table
    idx = table.index
    sums = 0
    for e in G.edges:
        c = idx[tuple(x % q for x in G.column(e))]
        new = table.translate(sums | 1, c)
        if new & 1:
            return False
        sums |= new
    return True


def search_atomic_graph(r: int, q: int, n: int, max_candidates: int = 10 ** 6) -> MultiGraph | None:
    """Lexicographically first q-atomic loopless multigraph with n edges, up to
    vertex relabelling, or None when none exists.

    Edge multiplicities are capped at q - 1, since q parallel edges already
    form a q-divisible subgraph.
    """
    if r < 2 or q < 2 or n < 0:
        raise ValueError("need r >= 2, q >= 2, n >= 0")
    pairs = _pairs(r)
    seen = set()
    checked = 0
    for combo in itertools.combinations_with_replacement(pairs, n):
        if any(combo.count(e) >= q for e in set(combo)):
            continue
        canon = _canonical(r, combo)
        if canon != combo or canon in seen:
            continue
        seen.add(canon)
        checked += 1
        if checked > max_candidates:
            raise BudgetExceeded(checked, max_candidates, "atomic-graph candidates")
        G = MultiGraph(r, combo)
        if is_atomic(G, q):
            return G
    return None


def atomic_threshold(r: int, q: int, start: int = 1) -> tuple[int, MultiGraph | None]:
    """E(r, q) as one more than the largest n admitting a q-atomic graph
    (atomicity is inherited by subgraphs, so the sizes form an interval).
    Returns the value and a largest atomic witness."""
    n, witness = start, None
    while True:
        G = search_atomic_graph(r, q, n)
        if G is None:
            return n, witness
        witness = G
        n += 1
