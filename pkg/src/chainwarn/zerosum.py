"""Zero-sum theory in finite abelian groups.

Groups are kept in invariant-factor form ``Z/n_1 + ... + Z/n_r`` with
``n_1 | ... | n_r``.  Elements are coordinate tuples; internally they are
indexed by mixed radix (last coordinate fastest) and sets of elements are
Python-int bitmasks.

Davenport-type constants are computed by an exact search for the longest
"bad" sequence: one with no nonzero weighted subsequence summing into the
target.  The search state is the set of weighted subsequence sums reached so
far; the answer depends only on that set, so it is memoized on it.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .chainring import SubsetSpec, make_chain_ring
from .errors import BudgetExceeded, ConditionError, ConsistencyError
from .mbound import m_bound_clamped
from .mpoly import MPoly
from .warning import RestrictedSystem, VerificationReport, bound_report, verify_main_theorem

MAX_SEARCH_ORDER = 64


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(cyclic_orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant-factor form of ``+ Z/m`` over the given orders (1s dropped)."""
    powers: dict[int, list[int]] = {}
    for m in cyclic_orders:
        if m < 1:
            raise ValueError(f"bad cyclic order {m}")
        for p, e in _factorize(m).items():
            powers.setdefault(p, []).append(p ** e)
    if not powers:
        return ()
    width = max(len(v) for v in powers.values())
    out = [1] * width
    for p, v in powers.items():
        v.sort()
        for k, pe in enumerate(v):
            out[width - len(v) + k] *= pe
    return tuple(out)


@dataclass(frozen=True)
class PGroup:
    """A finite abelian group ``Z/n_1 + ... + Z/n_r`` with ``1 < n_1 | ... | n_r``.

    The name reflects its main use; any invariant chain is accepted.
    """

    invariants: tuple[int, ...]

    def __post_init__(self):
        inv = tuple(int(n) for n in self.invariants)
        object.__setattr__(self, "invariants", inv)
        if not inv:
            raise ValueError("rank must be at least 1")
        if inv[0] < 2:
            raise ValueError("invariant factors must exceed 1")
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"{inv} is not a divisibility chain")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int]) -> "PGroup":
        return cls(invariant_factors(orders))

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    @property
    def exponent(self) -> int:
        return self.invariants[-1]

    @property
    def prime(self) -> int | None:
        """The prime p if this is a p-group, else None."""
        primes = _factorize(self.order)
        return next(iter(primes)) if len(primes) == 1 else None

    def valuations(self) -> tuple[int, ...]:
        p = self.prime
        if p is None:
            raise ValueError(f"{self} is not a p-group")
        return tuple(_factorize(n)[p] for n in self.invariants)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, x) -> tuple[int, ...]:
        if isinstance(x, int):
            x = (x,)
        x = tuple(x)
        if len(x) != self.rank:
            raise ValueError(f"{x} has {len(x)} coordinates, group has rank {self.rank}")
        return tuple(c % n for c, n in zip(x, self.invariants))

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(n) for n in self.invariants)))

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.invariants))

    def scale(self, a: int, x) -> tuple[int, ...]:
        return tuple((a * c) % n for c, n in zip(x, self.invariants))

    @cached_property
    def table(self) -> "GroupTable":
        return GroupTable.from_group(self)

    def __str__(self):
        return " + ".join(f"Z/{n}" for n in self.invariants)


def little_d(G: PGroup) -> int:
    """1 + sum (n_i - 1), the lower bound from the standard basis sequence."""
    return 1 + sum(n - 1 for n in G.invariants)


class GroupTable:
    """Cayley table of a finite abelian group, elements indexed 0..order-1
    with index 0 the identity.  Subsets are int bitmasks."""

    def __init__(self, labels: list, add: list[list[int]]):
        self.labels = labels
        self.index = {x: i for i, x in enumerate(labels)}
        self.order = len(labels)
        self.add = add
        self.neg = [row.index(0) for row in add]
        self._byte_tables: dict[int, list[list[int]]] = {}

    @classmethod
    def from_group(cls, G: PGroup) -> "GroupTable":
        labels = G.elements()
        index = {x: i for i, x in enumerate(labels)}
        add = [[index[G.add(x, y)] for y in labels] for x in labels]
        return cls(labels, add)

    def scale(self, a: int, i: int) -> int:
        """a * element i for an integer a (negative allowed)."""
        if a < 0:
            a, i = -a, self.neg[i]
        out, base = 0, i
        while a:
            if a & 1:
                out = self.add[out][base]
            base = self.add[base][base]
            a >>= 1
        return out

    def mask(self, idxs: Iterable[int]) -> int:
        out = 0
        for i in idxs:
            out |= 1 << i
        return out

    def members(self, mask: int) -> list[int]:
        return [i for i in range(self.order) if mask >> i & 1]

    def translate(self, mask: int, h: int) -> int:
        """``mask + h`` via byte lookup tables."""
        tables = self._byte_tables.get(h)
        if tables is None:
            tables = []
            for start in range(0, self.order, 8):
                row = []
                for byte in range(256):
                    m = 0
                    for b in range(8):
                        if byte >> b & 1 and start + b < self.order:
                            m |= 1 << self.add[start + b][h]
                    row.append(m)
                tables.append(row)
            self._byte_tables[h] = tables
        out = 0
        k = 0
        while mask:
            out |= tables[k][mask & 0xFF]
            mask >>= 8
            k += 1
        return out

    def subgroup_closure(self, gens: Iterable[int]) -> int:
        mask, frontier = 1, [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add[x][g]
                    if not mask >> y & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def subgroups(self) -> list[int]:
        """All subgroups, as bitmasks, sorted by (size, mask)."""
        seen = {1}
        frontier = [1]
        while frontier:
            nxt = []
            for H in frontier:
                for g in range(self.order):
                    if not H >> g & 1:
                        K = self.subgroup_closure(self.members(H) + [g])
                        if K not in seen:
                            seen.add(K)
                            nxt.append(K)
            frontier = nxt
        return sorted(seen, key=lambda m: (bin(m).count("1"), m))

    def quotient(self, H: int) -> "GroupTable":
        """The quotient by subgroup ``H``; cosets labelled by their least index."""
        hs = self.members(H)
        if not (H & 1) or any(not H >> self.add[a][b] & 1 for a in hs for b in hs):
            raise ValueError("not a subgroup")
        rep = {}
        for x in range(self.order):
            if x not in rep:
                for h in hs:
                    rep[self.add[x][h]] = x
        reps = sorted(set(rep.values()))
        pos = {r: k for k, r in enumerate(reps)}
        add = [[pos[rep[self.add[a][b]]] for b in reps] for a in reps]
        return GroupTable([self.labels[r] for r in reps], add)


# -- exact searches -----------------------------------------------------------

@dataclass
class BadSequenceSearch:
    """Longest sequence with no nonzero ``weights``-weighted subsequence sum in ``target``.

    ``weights`` are integers; the zero weight is implicit (leaving an index
    out).  A weight that kills an element still counts as a nonzero choice,
    matching the integer-vector reading of "nonzero weighting".
    """

    table: GroupTable
    weights: tuple[int, ...]
    target: int
    state_budget: int = 2_000_000
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.weights = tuple(sorted({a for a in self.weights if a != 0}))
        t = self.table
        self._shifts = [sorted({t.scale(a, g) for a in self.weights}) for g in range(t.order)]

    def _step(self, S: int, g: int) -> int | None:
        """Sum set after appending g, or None when it hits the target."""
        base = S | 1
        new = 0
        for h in self._shifts[g]:
            new |= self.table.translate(base, h)
        if new & self.target:
            return None
        return S | new

    def _best(self, S: int) -> int:
        memo = self._memo
        if S in memo:
            return memo[S][0]
        if len(memo) >= self.state_budget:
            raise BudgetExceeded(len(memo) + 1, self.state_budget, "sum-set states")
        best, arg = 0, None
        for g in range(self.table.order):
            S2 = self._step(S, g)
            if S2 is None:
                continue
            length = 1 + self._best(S2)
            if length > best:
                best, arg = length, g
        memo[S] = (best, arg)
        return best

    def run(self) -> tuple[int, list[int]]:
        """(length, witness as element indices)."""
        length = self._best(0)
        witness, S = [], 0
        while True:
            _, g = self._memo[S]
            if g is None:
                break
            witness.append(g)
            S = self._step(S, g)
        return length, witness


def _check_search_size(order: int):
    if order > MAX_SEARCH_ORDER:
        raise BudgetExceeded(order, MAX_SEARCH_ORDER, "group order for exhaustive search")


def davenport_of_table(table: GroupTable) -> int:
    _check_search_size(table.order)
    length, _ = BadSequenceSearch(table, (1,), 1).run()
    return length + 1


def davenport(G: PGroup) -> int:
    """Exact D(G): one more than the longest zero-sum-free sequence."""
    return davenport_with_witness(G)[0]


def davenport_with_witness(G: PGroup) -> tuple[int, list[tuple[int, ...]]]:
    _check_search_size(G.order)
    t = G.table
    length, wit = BadSequenceSearch(t, (1,), 1).run()
    return length + 1, [t.labels[i] for i in wit]


def _normalize_targets(G: PGroup, B) -> list[tuple[int, ...]]:
    return sorted({G.reduce(b) for b in B})


def fat_davenport(G: PGroup, A: Iterable[int], B) -> int:
    """D_A^B(G) with the same weight set A at every index."""
    A = sorted(set(int(a) for a in A))
    targets = _normalize_targets(G, B)
    if 0 not in A or not any(a % G.exponent for a in A):
        raise ConditionError("A must contain 0 and an element not divisible by exp G")
    if G.zero not in targets:
        raise ConditionError("B must contain 0")
    _check_search_size(G.order)
    t = G.table
    length, _ = BadSequenceSearch(t, tuple(A), t.mask(t.index[b] for b in targets)).run()
    return length + 1


def weighted_davenport(G: PGroup, A: Iterable[int]) -> int:
    return fat_davenport(G, A, [G.zero])


def plus_minus_davenport(G: PGroup) -> int:
    return fat_davenport(G, (-1, 0, 1), [G.zero])


def subgroup_quotient_davenport(G: PGroup, H: int) -> int:
    """D(G/H) for a subgroup bitmask H of ``G.table``."""
    return davenport_of_table(G.table.quotient(H))


# -- weighted subsequence counts --------------------------------------------

@dataclass(frozen=True)
class GSequence:
    group: PGroup
    terms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.group.reduce(x) for x in self.terms))

    def __len__(self):
        return len(self.terms)

    def total(self) -> tuple[int, ...]:
        out = self.group.zero
        for x in self.terms:
            out = self.group.add(out, x)
        return out


def _weight_sets(A, n: int) -> list[list[int]]:
    """Either one set reused for every index or a list of n sets."""
    A = list(A)
    if A and all(isinstance(a, int) for a in A):
        sets = [sorted(set(A))] * n
    else:
        sets = [sorted(set(int(x) for x in a)) for a in A]
    if len(sets) != n:
        raise ValueError(f"need {n} weight sets, got {len(sets)}")
    if any(not a for a in sets):
        raise ValueError("weight sets must be nonempty")
    return sets


def sum_distribution(g: GSequence, A) -> Counter:
    """Counter: group element -> number of weight vectors with that weighted sum."""
    G = g.group
    dist = Counter({G.zero: 1})
    for x, Ai in zip(g.terms, _weight_sets(A, len(g))):
        nxt: Counter = Counter()
        shifts = Counter(G.scale(a, x) for a in Ai)
        for s, c in dist.items():
            for h, k in shifts.items():
                nxt[G.add(s, h)] += c * k
        dist = nxt
    return dist


def count_weighted_sums(g: GSequence, A, B, exclude_empty: bool = False) -> int:
    """N_A^B(g) = #{a in prod A_i : sum a_i g_i in B}.

    The all-zero weighting is counted when it qualifies unless
    ``exclude_empty`` is set.
    """
    G = g.group
    targets = _normalize_targets(G, B)
    dist = sum_distribution(g, A)
    count = sum(dist[b] for b in targets)
    if exclude_empty and G.zero in targets and all(0 in a for a in _weight_sets(A, len(g))):
        count -= 1
    return count


def subsequence_sums(g: GSequence) -> set[tuple[int, ...]]:
    """Sigma(g): sums over all index subsets, the empty one included."""
    return set(sum_distribution(g, (0, 1)))


def olson_bound(n: int, D: int) -> Fraction:
    """2^{n+1-D} as an exact rational."""
    return Fraction(2) ** (n + 1 - D)


def multisets(G: PGroup, n: int) -> Iterable[GSequence]:
    for combo in itertools.combinations_with_replacement(G.elements(), n):
        yield GSequence(G, combo)


# -- reductions to restricted systems --------------------------------------------

def _p_group_setup(G: PGroup):
    p = G.prime
    if p is None:
        raise ValueError(f"{G} is not a p-group")
    vs = G.valuations()
    return p, vs, make_chain_ring(p, 1, vs[-1])


def _condition_f_mod_p(values: Sequence[int], p: int, what: str):
    residues = [x % p for x in values]
    if len(set(residues)) != len(residues):
        raise ConditionError(f"{what} {sorted(values)} has two elements congruent mod {p}")


def _coordinate_targets(G: PGroup, B) -> list[list[int]]:
    B = list(B)
    if len(B) != G.rank:
        raise ValueError(f"need {G.rank} per-coordinate target sets")
    return [sorted({int(b) % n for b in Bj}) for Bj, n in zip(B, G.invariants)]


def fat_bound_system(g: GSequence, A, B) -> RestrictedSystem:
    """The linear system f_j = sum_i g_i^{(j)} t_i over Z/p^{v_r} with
    exponents v_j and targets B_j."""
    G = g.group
    p, vs, ring = _p_group_setup(G)
    sets = _weight_sets(A, len(g))
    for a in sets:
        _condition_f_mod_p(a, p, "weight set")
    targets = _coordinate_targets(G, B)
    for b in targets:
        _condition_f_mod_p(b, p, "target set")
    n = len(g)
    inputs = [SubsetSpec([ring.element(a) for a in Ai], ring) for Ai in sets]
    polys = [MPoly(ring, n, {tuple(int(i == k) for i in range(n)): x[j] for k, x in enumerate(g.terms)})
             for j in range(G.rank)]
    outputs = [SubsetSpec([ring.element(b) for b in Bj], ring) for Bj in targets]
    return RestrictedSystem(ring, inputs, polys, vs, outputs)


def _product_targets(G: PGroup, targets: list[list[int]]) -> list[tuple[int, ...]]:
    return list(itertools.product(*targets))


@dataclass(frozen=True)
class FatBoundReport:
    """The displayed bound for weighted subsequence sums in a product target,
    together with the restricted-system report of the reduced linear system."""

    count: int
    bound: int
    vacuous: bool
    argument: int
    system_report: VerificationReport

    @property
    def holds(self) -> bool:
        return self.count == 0 or self.count >= self.bound

    def as_dict(self) -> dict:
        return {"count": self.count, "bound": self.bound, "vacuous": self.vacuous,
                "argument": self.argument, "holds": self.holds,
                "system": self.system_report.as_dict()}


def verify_fat_bound(g: GSequence, A, B) -> FatBoundReport:
    """Count of weightings with sum in prod B_j, against
    m(#A_i; sum #A_i - sum_j (p^{v_j} - #B_j)).

    The count comes from the restricted-system reduction and must match the direct
    distribution count.
    """
    G = g.group
    sys = fat_bound_system(g, A, B)
    report = verify_main_theorem(sys)
    targets = _coordinate_targets(G, B)
    direct = count_weighted_sums(g, A, _product_targets(G, targets))
    if direct != report.count:
        raise ConsistencyError(f"weighted count {direct} != reduced system count {report.count}")
    p, vs, _ = _p_group_setup(G)
    sizes = [len(a) for a in _weight_sets(A, len(g))]
    arg = sum(sizes) - sum(p ** v - len(b) for v, b in zip(vs, targets))
    bound, vacuous = m_bound_clamped(sizes, arg)
    return FatBoundReport(report.count, bound, vacuous, arg, report)


def egz_count(g: GSequence, A, B, k: int) -> VerificationReport:
    """Weightings with sum in prod B_j whose support size is divisible by p^k,
    against m(#A_i; sum #A_i - sum_j (p^{v_j} - #B_j) - (a_M - 1)(p^k - 1))."""
    G = g.group
    p, vs, _ = _p_group_setup(G)
    if k < 0:
        raise ValueError("k must be nonnegative")
    sets = _weight_sets(A, len(g))
    for a in sets:
        if 0 not in a:
            raise ConditionError("every weight set must contain 0")
        _condition_f_mod_p(a, p, "weight set")
    targets = _coordinate_targets(G, B)
    for b in targets:
        _condition_f_mod_p(b, p, "target set")
    modulus = p ** k
    dist = Counter({(G.zero, 0): 1})
    for x, Ai in zip(g.terms, sets):
        nxt: Counter = Counter()
        for (s, supp), c in dist.items():
            for a in Ai:
                nxt[G.add(s, G.scale(a, x)), (supp + (a != 0)) % modulus] += c
        dist = nxt
    wanted = set(_product_targets(G, targets))
    count = sum(c for (s, supp), c in dist.items() if supp == 0 and s in wanted)
    sizes = [len(a) for a in sets]
    arg = (sum(sizes) - sum(p ** v - len(b) for v, b in zip(vs, targets))
           - (max(sizes) - 1) * (modulus - 1))
    return bound_report(count, sizes, arg)
