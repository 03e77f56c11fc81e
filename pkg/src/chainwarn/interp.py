"""Polynomial interpolation with restricted coefficients and fat targets.

A problem fixes a basis f_1..f_n, coefficient sets A_i, nodes x_j with
exponents v_j and targets B_j.  Its solution set is

    S = { sum c_i f_i : c_i in A_i, f(x_j) in B_j (mod p^{v_j}) }.

Evaluation at a node is linear in the coefficients, so counting S is a
restricted system with linear polynomials in the c_i.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .chainring import ChainRing, RingElement, SubsetSpec, check_condition, make_chain_ring
from .errors import BudgetExceeded, ConditionError, ConsistencyError
from .mbound import m_bound_clamped
from .mpoly import MPoly
from .warning import (DEFAULT_BUDGET, RestrictedSystem, VerificationReport, grid_blocks,
                      solution_mask, verify_main_theorem)

DIRECT_BUDGET = 10 ** 5
INDEPENDENCE_BUDGET = 10 ** 7


def _residue_null_vector(ring: ChainRing, basis: Sequence[MPoly]) -> tuple | None:
    """A nonzero residue-field combination of ``basis`` whose coefficients all
    lie in the maximal ideal, or None.

    Over a finite chain ring the f_i are independent exactly when no such
    combination exists: a residue relation c times pi^{v-1} is a nonzero
    relation in the ring.
    """
    n = len(basis)
    reps = ring.coset_representatives(1)
    if len(reps) ** n > INDEPENDENCE_BUDGET:
        raise BudgetExceeded(len(reps) ** n, INDEPENDENCE_BUDGET, "independence check")
    monos = sorted(set().union(*(f.terms for f in basis)))
    for c in itertools.product(reps, repeat=n):
        if not any(c):
            continue
        if all(sum((ci * f.terms.get(m, ring.zero) for ci, f in zip(c, basis)), ring.zero).valuation() >= 1
               for m in monos):
            return c
    return None


def is_linearly_independent(basis: Sequence[MPoly]) -> bool:
    if not basis:
        return True
    if any(not f for f in basis):
        return False
    return _residue_null_vector(basis[0].ring, basis) is None


@dataclass(frozen=True)
class InterpolationProblem:
    ring: ChainRing
    basis: tuple[MPoly, ...]
    coeff_sets: tuple[SubsetSpec, ...]
    nodes: tuple[tuple[RingElement, ...], ...]
    exponents: tuple[int, ...]
    targets: tuple[SubsetSpec, ...]
    check_independence: bool = True

    def __post_init__(self):
        ring = self.ring
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "coeff_sets", tuple(self.coeff_sets))
        object.__setattr__(self, "nodes", tuple(tuple(ring.element(x) for x in node) for node in self.nodes))
        object.__setattr__(self, "exponents", tuple(int(v) for v in self.exponents))
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.basis:
            raise ValueError("basis must be nonempty")
        N = self.basis[0].nvars
        for f in self.basis:
            if f.ring != ring or f.nvars != N:
                raise ValueError("basis polynomials must share ring and arity")
        if len(self.coeff_sets) != len(self.basis):
            raise ValueError("need one coefficient set per basis element")
        if not (len(self.nodes) == len(self.exponents) == len(self.targets)):
            raise ValueError("nodes, exponents and targets must have equal length")
        for node in self.nodes:
            if len(node) != N:
                raise ValueError(f"node {node} does not have {N} coordinates")
        for s in self.coeff_sets + self.targets:
            if s.ring != ring or not check_condition(s, "F"):
                raise ConditionError(f"{s} fails Condition (F)")
        if self.check_independence and not is_linearly_independent(self.basis):
            raise ValueError("basis is not linearly independent")

    @property
    def n(self) -> int:
        return len(self.basis)

    def displayed_argument(self) -> int:
        q = self.ring.q
        return (sum(len(a) for a in self.coeff_sets)
                - sum(q ** v - len(b) for v, b in zip(self.exponents, self.targets)))

    def evaluation_system(self) -> RestrictedSystem:
        """L_j(c) = sum_i c_i f_i(x_j), one linear form per node."""
        n = self.n
        forms = []
        for node in self.nodes:
            vals = [f(node) for f in self.basis]
            forms.append(MPoly(self.ring, n, {tuple(int(i == k) for i in range(n)): v
                                              for k, v in enumerate(vals)}))
        return RestrictedSystem(self.ring, self.coeff_sets, forms, self.exponents, self.targets)

    def combine(self, c: Sequence[RingElement]) -> MPoly:
        out = MPoly.constant(self.ring, self.basis[0].nvars, 0)
        for ci, f in zip(c, self.basis):
            out = out + f * ci
        return out

    def accepts(self, c: Sequence[RingElement]) -> bool:
        """Membership of sum c_i f_i, tested by building and evaluating it."""
        f = self.combine(c)
        return all(any((f(node) - b).valuation() >= v for b in B)
                   for node, v, B in zip(self.nodes, self.exponents, self.targets))

    @classmethod
    def from_config(cls, cfg: dict) -> "InterpolationProblem":
        """``{p, ell, v, nvars, basis, A, nodes, vj, B}`` with polynomials as text."""
        from .mpoly import parse_poly
        ring = make_chain_ring(int(cfg["p"]), int(cfg.get("ell", 1)), int(cfg.get("v", 1)))
        N = int(cfg.get("nvars", 1))
        basis = [parse_poly(f, ring, N) for f in cfg["basis"]]

        def subset(xs):
            return SubsetSpec([ring.element(x) for x in xs], ring)

        nodes = [[ring.element(x) for x in (node if isinstance(node, list) and N > 1 else [node])]
                 for node in cfg["nodes"]]
        return cls(ring, basis, [subset(a) for a in cfg["A"]], nodes,
                   cfg.get("vj", [ring.v] * len(nodes)), [subset(b) for b in cfg["B"]])


@dataclass(frozen=True)
class InterpReport:
    count: int
    bound: int
    vacuous: bool
    argument: int
    direct_count: int | None
    system_report: VerificationReport

    @property
    def holds(self) -> bool:
        return self.count == 0 or self.count >= self.bound

    def as_dict(self) -> dict:
        return {"count": self.count, "bound": self.bound, "vacuous": self.vacuous,
                "argument": self.argument, "direct_count": self.direct_count,
                "holds": self.holds}


def count_interpolants_direct(P: InterpolationProblem) -> int:
    """Build each candidate polynomial and evaluate it at the nodes."""
    total = math.prod(len(a) for a in P.coeff_sets)
    if total > DIRECT_BUDGET:
        raise BudgetExceeded(total, DIRECT_BUDGET, "direct interpolant enumeration")
    return sum(P.accepts(c) for c in itertools.product(*(a.elements for a in P.coeff_sets)))


def interp_count(P: InterpolationProblem) -> InterpReport:
    """#S through the linear-form system, with the bound
    m(#A_i; sum #A_i - sum_j (q^{v_j} - #B_j)); the direct count is attached
    when the space is small enough and must agree."""
    report = verify_main_theorem(P.evaluation_system())
    direct = None
    if math.prod(len(a) for a in P.coeff_sets) <= DIRECT_BUDGET:
        direct = count_interpolants_direct(P)
        if direct != report.count:
            raise ConsistencyError(f"linear-form count {report.count} != direct count {direct}")
    arg = P.displayed_argument()
    bound, vacuous = m_bound_clamped([len(a) for a in P.coeff_sets], arg)
    return InterpReport(report.count, bound, vacuous, arg, direct, report)


def existence_guaranteed(P: InterpolationProblem) -> bool:
    return P.displayed_argument() > P.n


def find_nonzero_interpolant(P: InterpolationProblem, budget: int = DEFAULT_BUDGET) -> tuple | None:
    """First nonzero coefficient vector (in the product order of the A_i) whose
    polynomial meets every node constraint."""
    zero = P.ring.zero
    if any(zero not in a for a in P.coeff_sets) or any(zero not in b for b in P.targets):
        raise ConditionError("0 must lie in every coefficient set and every target")
    sys = P.evaluation_system()
    total = sys.grid_size
    if total > budget:
        raise BudgetExceeded(total, budget, "coefficient enumeration")
    offset = 0
    for pts in grid_blocks(sys.inputs):
        mask = solution_mask(sys, pts) & np.any(pts != 0, axis=(1, 2))
        hits = np.flatnonzero(mask)
        if hits.size:
            k = offset + int(hits[0])
            coords = np.unravel_index(k, [len(a) for a in sys.inputs])
            return tuple(a.elements[int(i)] for a, i in zip(sys.inputs, coords))
        offset += pts.shape[0]
    if existence_guaranteed(P):
        raise ConsistencyError("no nonzero interpolant although one is guaranteed")
    return None


# -- the univariate degree bound over a finite field -------------------------

@dataclass(frozen=True)
class DegreeBoundResult:
    q: int
    target_mass: int
    displayed_bound: Fraction
    criterion_degree: int
    min_degree: int
    witness: MPoly

    @property
    def criterion_holds(self) -> bool:
        return self.min_degree <= self.criterion_degree

    @property
    def displayed_bound_holds(self) -> bool:
        return self.min_degree <= self.displayed_bound

    def as_dict(self) -> dict:
        return {"q": self.q, "target_mass": self.target_mass,
                "displayed_bound": str(self.displayed_bound),
                "criterion_degree": self.criterion_degree, "min_degree": self.min_degree,
                "witness": str(self.witness), "criterion_holds": self.criterion_holds,
                "displayed_bound_holds": self.displayed_bound_holds}


def field_of_order(q: int) -> ChainRing:
    from .graphdiv import prime_power
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    return make_chain_ring(pp[0], pp[1], 1)


def field_element(field: ChainRing, x) -> RingElement:
    """Integers name field elements by index, so ``2`` in F_4 is the generator."""
    if isinstance(x, int):
        if not 0 <= x < field.size:
            raise ValueError(f"{x} is not an element index of {field!r}")
        return field.from_index(x)
    return field.element(x)


def criterion_degree(q: int, target_mass: int) -> int:
    """Least n with (n + 1)(q - 1) > (q - 1)(q + 1) - sum #B_x."""
    n = 0
    while (n + 1) * (q - 1) <= (q - 1) * (q + 1) - target_mass:
        n += 1
    return n


def _vanishing_basis(field: ChainRing) -> list[list[RingElement]]:
    """Coefficient lists (low to high, length q) of 1 - (t - x)^{q-1} for x != 0."""
    q = field.q
    t = MPoly.variable(field, 1, 0)
    out = []
    for x in list(field.elements())[1:]:
        g = 1 - (t - x) ** (q - 1)
        out.append([g.terms.get((k,), field.zero) for k in range(q)])
    return out


def troi_zannier(q: int, targets: Mapping, budget: int = DEFAULT_BUDGET) -> DegreeBoundResult:
    """Least degree of a nonzero f in F_q[t] with f(0) = 0 and f(x) in B_x for
    every x != 0, with the closed-form rational bound and the integer
    criterion it comes from.

    Functions with f(0) = 0 are enumerated through their values; each has a
    unique representative of degree < q.  When only the zero function is
    allowed, t^q - t is the least-degree nonzero polynomial.
    """
    field = field_of_order(q)
    elems = list(field.elements())
    nonzero = elems[1:]
    sets = []
    keyed = {field_element(field, k): v for k, v in targets.items()}
    if set(keyed) != set(nonzero):
        raise ValueError("need a target set for every nonzero field element")
    for x in nonzero:
        B = SubsetSpec([field_element(field, b) for b in keyed[x]], field)
        if field.zero not in B:
            raise ConditionError(f"target at {x} must contain 0")
        sets.append(B)
    mass = sum(len(b) for b in sets)
    total = math.prod(len(b) for b in sets)
    if total > budget:
        raise BudgetExceeded(total, budget, "target value enumeration")
    basis = field.asarray([c for row in _vanishing_basis(field) for c in row]).reshape(q - 1, q, field.ell)
    best_deg, best_vals = None, None
    offset = 0
    for vals in grid_blocks(sets, dtype=field.dtype):
        coeffs = np.zeros((vals.shape[0], q, field.ell), dtype=field.dtype)
        for k in range(q - 1):
            coeffs = field.vadd(coeffs, field.vmul(vals[:, k, None, :], basis[None, k]))
        nonzero_coef = np.any(coeffs != 0, axis=2)
        live = nonzero_coef.any(axis=1)
        deg = np.where(live, q - 1 - np.argmax(nonzero_coef[:, ::-1], axis=1), q + 1)
        k = int(np.argmin(deg))
        if deg[k] <= q - 1 and (best_deg is None or deg[k] < best_deg):
            best_deg, best_vals = int(deg[k]), offset + k
        offset += vals.shape[0]
    t = MPoly.variable(field, 1, 0)
    if best_deg is None:
        witness = t ** q - t
        min_degree = q
    else:
        coords = np.unravel_index(best_vals, [len(b) for b in sets])
        witness = MPoly.constant(field, 1, 0)
        for x, B, i in zip(nonzero, sets, coords):
            witness = witness + (1 - (t - x) ** (q - 1)) * B.elements[int(i)]
        min_degree = best_deg
        if witness.total_degree() != min_degree:
            raise ConsistencyError("interpolant degree disagrees with the vectorized search")
    displayed = q - Fraction(mass - 1, q - 1)
    return DegreeBoundResult(q, mass, displayed, criterion_degree(q, mass), min_degree, witness)
