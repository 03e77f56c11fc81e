"""Restricted-input / restricted-output solution counting over chain rings.

A :class:`RestrictedSystem` carries input sets ``A_1..A_n``, polynomials
``f_1..f_r``, exponents ``v_j`` and output sets ``B_j``.  Its solution set is

    Z = { x in A_1 x ... x A_n : f_j(x) in B_j (mod p^{v_j}) for every j },

and the bound asserts ``#Z == 0`` or
``#Z >= m(#A_1..#A_n; sum #A_i - sum_j (q^{v_j} - #B_j) deg f_j)``.

Two independent routes count ``Z``: direct membership tests
(:func:`count_restricted_solutions`) and the nonvanishing of the fat-target
product ``Q = prod_j prod_{y in S(v_j) minus B_j} (f_j - y)`` computed in a
ring of length ``c + 1`` (:func:`count_fat_target_nonvanishing`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .chainring import ChainRing, RingElement, SubsetSpec, check_condition, make_chain_ring
from .errors import BudgetExceeded, ConditionError
from .mbound import m_bound_clamped
from .mpoly import MPoly, parse_poly

DEFAULT_BUDGET = 10 ** 8
BLOCK = 1 << 15


def c_budget(qsize: int, vj: int) -> int:
    """sum_{i=1}^{vj-1} (q^i - 1)."""
    if vj < 1:
        raise ValueError("vj must be positive")
    return sum(qsize ** i - 1 for i in range(1, vj))


@dataclass(frozen=True)
class VerificationReport:
    count: int
    bound: int
    vacuous: bool
    argument: int | None = None

    @property
    def holds(self) -> bool:
        return self.count == 0 or self.count >= self.bound

    def as_dict(self) -> dict:
        return {"count": self.count, "bound": self.bound, "vacuous": self.vacuous,
                "argument": self.argument, "holds": self.holds}


def bound_report(count: int, sizes: Sequence[int], argument: int) -> VerificationReport:
    bound, vacuous = m_bound_clamped(sizes, argument)
    return VerificationReport(count, bound, vacuous, argument)


@dataclass(frozen=True)
class RestrictedSystem:
    ring: ChainRing
    inputs: tuple[SubsetSpec, ...]
    polys: tuple[MPoly, ...]
    exponents: tuple[int, ...]
    outputs: tuple[SubsetSpec, ...]

    def __post_init__(self):
        for name in ("inputs", "polys", "exponents", "outputs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.inputs:
            raise ValueError("need at least one variable")
        if not (len(self.polys) == len(self.exponents) == len(self.outputs)):
            raise ValueError("polys, exponents and outputs must have equal length")
        for s in self.inputs + self.outputs:
            if s.ring != self.ring:
                raise ValueError("all sets must live in the system's ring")
            if not check_condition(s, "F"):
                raise ConditionError(f"{s} fails Condition (F)")
        for f in self.polys:
            if f.ring != self.ring or f.nvars != self.n:
                raise ValueError("polynomial ring or arity does not match the system")
        for vj in self.exponents:
            if not 1 <= vj <= self.ring.v:
                raise ValueError(f"exponent {vj} outside [1, {self.ring.v}]")

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def r(self) -> int:
        return len(self.polys)

    @property
    def grid_size(self) -> int:
        return math.prod(len(a) for a in self.inputs)

    def degree_cost(self) -> int:
        """sum_j (q^{v_j} - #B_j) * deg f_j, with the zero polynomial costing 0."""
        q = self.ring.q
        return sum((q ** vj - len(B)) * (f.total_degree() or 0)
                   for f, vj, B in zip(self.polys, self.exponents, self.outputs))

    def bound_argument(self) -> int:
        return sum(len(a) for a in self.inputs) - self.degree_cost()

    @classmethod
    def from_config(cls, cfg: dict) -> "RestrictedSystem":
        """Build from ``{p, ell, v, A, polys, vj, B}``; elements are integers
        or coefficient lists."""
        ring = make_chain_ring(int(cfg["p"]), int(cfg.get("ell", 1)), int(cfg.get("v", 1)))
        inputs = [SubsetSpec([ring.element(x) for x in A], ring) for A in cfg["A"]]
        n = len(inputs)
        polys = [p if isinstance(p, MPoly) else parse_poly(p, ring, n) for p in cfg["polys"]]
        outputs = [SubsetSpec([ring.element(x) for x in B], ring) for B in cfg["B"]]
        vj = cfg.get("vj", [ring.v] * len(polys))
        return cls(ring, inputs, polys, vj, outputs)

    def to_config(self) -> dict:
        def enc(x):
            return x.coeffs[0] if self.ring.ell == 1 else list(x.coeffs)
        return {"p": self.ring.p, "ell": self.ring.ell, "v": self.ring.v,
                "A": [[enc(x) for x in A] for A in self.inputs],
                "polys": [str(f) for f in self.polys],
                "vj": list(self.exponents),
                "B": [[enc(x) for x in B] for B in self.outputs]}


# -- grid enumeration --------------------------------------------------------

def grid_blocks(inputs: Sequence[SubsetSpec], start: int = 0, stop: int | None = None,
                block: int = BLOCK, dtype=None) -> Iterator[np.ndarray]:
    """Points of ``prod A_i`` with linear index in ``[start, stop)``, in
    ``itertools.product`` order, as arrays of shape ``(M, n, ell)``."""
    sizes = tuple(len(a) for a in inputs)
    total = math.prod(sizes)
    stop = total if stop is None else min(stop, total)
    arrays = [a.array() for a in inputs]
    if dtype is not None:
        arrays = [arr.astype(dtype) for arr in arrays]
    for lo in range(start, stop, block):
        idx = np.arange(lo, min(stop, lo + block))
        coords = np.unravel_index(idx, sizes)
        yield np.stack([arrays[i][coords[i]] for i in range(len(sizes))], axis=1)


def _check_budget(total: int, budget: int):
    if total > budget:
        raise BudgetExceeded(total, budget, "grid enumeration")


def in_target_mask(ring: ChainRing, values: np.ndarray, targets: SubsetSpec, vj: int) -> np.ndarray:
    """``values[k] in targets (mod p^vj)``, tested as exists b: ord(value - b) >= vj."""
    hit = np.zeros(values.shape[0], dtype=bool)
    for b in targets.array():
        hit |= ring.vval(ring.vsub(values, b)) >= vj
    return hit


def solution_mask(sys: RestrictedSystem, pts: np.ndarray) -> np.ndarray:
    ok = np.ones(pts.shape[0], dtype=bool)
    for f, vj, B in zip(sys.polys, sys.exponents, sys.outputs):
        ok &= in_target_mask(sys.ring, f.evaluate_many(pts), B, vj)
    return ok


def count_restricted_solutions(sys: RestrictedSystem, budget: int = DEFAULT_BUDGET,
                               start: int = 0, stop: int | None = None) -> int:
    """Exact ``#Z``; ``start``/``stop`` restrict to a range of grid indices so
    callers can partition the work."""
    _check_budget(sys.grid_size, budget)
    return sum(int(solution_mask(sys, pts).sum())
               for pts in grid_blocks(sys.inputs, start, stop))


def restricted_solutions(sys: RestrictedSystem, budget: int = DEFAULT_BUDGET) -> list[tuple]:
    """The solutions themselves, as tuples of ring elements."""
    _check_budget(sys.grid_size, budget)
    out = []
    for x in itertools.product(*(a.elements for a in sys.inputs)):
        if all(any((f(x) - b).valuation() >= vj for b in B)
               for f, vj, B in zip(sys.polys, sys.exponents, sys.outputs)):
            out.append(x)
    return out


# -- the fat-target polynomial -----------------------------------------------

def _reduce_mod(x: RingElement, a: int) -> tuple[int, ...]:
    pa = x.ring.p ** a
    return tuple(c % pa for c in x.coeffs)


def missing_representatives(ring: ChainRing, vj: int, targets: SubsetSpec) -> list[RingElement]:
    """``S(vj)`` minus the image of ``targets`` modulo ``p^vj``."""
    hit = {_reduce_mod(b, vj) for b in targets}
    return [y for y in ring.coset_representatives(vj) if y.coeffs not in hit]


@dataclass(frozen=True)
class FatTargetPolynomial:
    """``Q`` kept in factored form: one ``(j, y)`` per linear shift ``f_j - y``."""

    system: RestrictedSystem
    factors: tuple[tuple[int, RingElement], ...]

    @property
    def formal_degree(self) -> int:
        return sum(self.system.polys[j].total_degree() or 0 for j, _ in self.factors)

    def evaluate(self, point) -> RingElement:
        values = [f(point) for f in self.system.polys]
        out = self.system.ring.one
        for j, y in self.factors:
            out = out * (values[j] - y)
            if not out:
                break
        return out

    def expand(self) -> MPoly:
        sys = self.system
        out = MPoly.constant(sys.ring, sys.n, 1)
        for j, y in self.factors:
            out = out * (sys.polys[j] - y)
        return out


def build_fat_target_polynomial(sys: RestrictedSystem, ring: ChainRing | None = None) -> FatTargetPolynomial:
    """Factors of Q over ``ring`` (default: the system's ring)."""
    if ring is not None and ring != sys.ring:
        sys = lift_system(sys, ring)
    factors = tuple((j, y) for j, (vj, B) in enumerate(zip(sys.exponents, sys.outputs))
                    for y in missing_representatives(sys.ring, vj, B))
    return FatTargetPolynomial(sys, factors)


def lift_system(sys: RestrictedSystem, ring: ChainRing) -> RestrictedSystem:
    """Canonical lift to a ring of length at least the system's."""
    if ring.v < sys.ring.v:
        raise ValueError("can only lift to a longer ring")

    def lift_set(s):
        return SubsetSpec([ring.lift(x) for x in s], ring)

    return RestrictedSystem(ring, [lift_set(a) for a in sys.inputs],
                            [f.lift(ring) for f in sys.polys], sys.exponents,
                            [lift_set(b) for b in sys.outputs])


def fat_target_threshold(sys: RestrictedSystem) -> int:
    """c = sum_j c(v_j)."""
    return sum(c_budget(sys.ring.q, vj) for vj in sys.exponents)


def count_fat_target_nonvanishing(sys: RestrictedSystem, budget: int = DEFAULT_BUDGET,
                                  check_every: int = 8) -> int:
    """#{x in grid : ord Q(x) <= c}, with Q evaluated in the canonical lift to
    a ring of length max(v, c + 1).

    Q is never expanded; points whose running product already has valuation
    above ``c`` are dropped early.
    """
    _check_budget(sys.grid_size, budget)
    c = fat_target_threshold(sys)
    big = sys.ring.with_length(max(sys.ring.v, c + 1))
    lifted = lift_system(sys, big)
    fat = build_fat_target_polynomial(lifted)
    shifts = [np.array(y.coeffs, dtype=big.dtype) for _, y in fat.factors]
    owners = [j for j, _ in fat.factors]
    total = 0
    for pts in grid_blocks(lifted.inputs, dtype=big.dtype):
        values = [f.evaluate_many(pts) for f in lifted.polys]
        alive = np.arange(pts.shape[0])
        prod = np.zeros((pts.shape[0], big.ell), dtype=big.dtype)
        prod[:, 0] = 1
        for k, (j, y) in enumerate(zip(owners, shifts)):
            prod = big.vmul(prod, big.vsub(values[j][alive], y))
            if (k + 1) % check_every == 0:
                keep = big.vval(prod) <= c
                alive, prod = alive[keep], prod[keep]
                if alive.size == 0:
                    break
        total += int((big.vval(prod) <= c).sum())
    return total


def verify_main_theorem(sys: RestrictedSystem, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    count = count_restricted_solutions(sys, budget)
    return bound_report(count, [len(a) for a in sys.inputs], sys.bound_argument())


# -- valuation of the fat-target factors -----------------------------

def afk_valuation(ring: ChainRing, x: RingElement, vj: int, T: SubsetSpec) -> tuple[int, bool]:
    """``ord prod_{y in S(vj) minus T} (x - y)`` and whether x lies in T mod p^vj.

    The product is formed in the ring of length ``max(v, c(vj) + vj + 1)``
    so that truncation at the length cannot hide a strict inequality.
    """
    if not 1 <= vj <= ring.v:
        raise ValueError(f"vj={vj} outside [1, {ring.v}]")
    if T.ring != ring or not check_condition(T, "F"):
        raise ConditionError(f"{T} fails Condition (F) in {ring!r}")
    c = c_budget(ring.q, vj)
    big = ring.with_length(max(ring.v, c + vj + 1))
    xb = big.lift(ring.element(x))
    t_bar = {_reduce_mod(t, vj) for t in T}
    prod = big.one
    for y in big.coset_representatives(vj):
        if y.coeffs in t_bar:
            continue
        prod = prod * (xb - y)
        if not prod:
            break
    flag = any((xb - big.element(t)).valuation() >= vj for t in t_bar)
    return prod.valuation(), flag


def condition_f_subsets(ring: ChainRing, reps: Sequence[RingElement], max_size: int) -> Iterator[tuple[int, ...]]:
    """Index tuples of subsets of ``reps`` with pairwise distinct residues."""
    residues = [ring.residue(y) for y in reps]
    for k in range(1, max_size + 1):
        for combo in itertools.combinations(range(len(reps)), k):
            if len({residues[i] for i in combo}) == k:
                yield combo


@dataclass
class LemmaSweepResult:
    p: int
    ell: int
    vj: int
    c: int
    checks: int
    exceptions: list


def afk_lemma_sweep(p: int, ell: int, vj: int, max_t: int = 3) -> LemmaSweepResult:
    """Check both valuation claims for every x in S(2 vj) and every
    Condition-(F) subset T of S(vj) with at most ``max_t`` elements.

    Factor valuations are tabulated once and summed per (x, T); the direct
    product route is :func:`afk_valuation`.
    """
    base = make_chain_ring(p, ell, 1)
    q = base.q
    c = c_budget(q, vj)
    length = max(2 * vj, c + vj + 1)
    big = base.with_length(length)
    xs = big.asarray(big.coset_representatives(2 * vj))
    reps = big.coset_representatives(vj)
    ys = big.asarray(reps)
    ords = big.vval(big.vsub(xs[:, None, :], ys[None, :, :]))
    total = ords.sum(axis=1)
    checks, exceptions = 0, []
    for combo in condition_f_subsets(big, reps, max_t):
        sub = ords[:, combo]
        val = np.minimum(total - sub.sum(axis=1), length)
        flag = (sub >= vj).any(axis=1)
        bad = (val < c) | ((val == c) != flag)
        checks += len(val)
        if bad.any():
            for i in np.flatnonzero(bad)[:5]:
                exceptions.append((tuple(int(u) for u in xs[i]), combo, int(val[i]), bool(flag[i])))
    return LemmaSweepResult(p, ell, vj, c, checks, exceptions)


# -- Alon-Furedi over a ring ----------------------------------------------

def count_nonvanishing(f: MPoly, grid: Sequence[SubsetSpec], budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """#{x in prod A_i : f(x) != 0} against m(a; sum a_i - deg f)."""
    if len(grid) != f.nvars:
        raise ValueError("grid dimension does not match the polynomial")
    for a in grid:
        if a.ring != f.ring or not check_condition(a, "D"):
            raise ConditionError(f"{a} fails Condition (D)")
    total = math.prod(len(a) for a in grid)
    _check_budget(total, budget)
    count = 0
    if f:
        for pts in grid_blocks(grid):
            count += int(np.any(f.evaluate_many(pts) != 0, axis=1).sum())
    sizes = [len(a) for a in grid]
    return bound_report(count, sizes, sum(sizes) - (f.total_degree() or 0))


def sharp_alon_furedi_instance(grid: Sequence[SubsetSpec], y: Sequence[int]) -> MPoly:
    """prod_i prod_{x in A_i minus Y_i} (t_i - x) with Y_i the first y_i
    elements of A_i: nonzero exactly on prod Y_i (prod y_i points), degree
    sum (#A_i - y_i)."""
    if len(y) != len(grid):
        raise ValueError("need one y_i per grid set")
    for yi, a in zip(y, grid):
        if not 1 <= yi <= len(a):
            raise ValueError(f"y_i={yi} outside [1, {len(a)}]")
        if not check_condition(a, "D"):
            raise ConditionError(f"{a} fails Condition (D)")
    ring, n = grid[0].ring, len(grid)
    f = MPoly.constant(ring, n, 1)
    for i, (yi, a) in enumerate(zip(y, grid)):
        t = MPoly.variable(ring, n, i)
        for x in a.elements[yi:]:
            f = f * (t - x)
    return f
