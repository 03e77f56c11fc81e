import itertools
import random
from fractions import Fraction

import pytest

from chainwarn import interp
from chainwarn.chainring import SubsetSpec, make_chain_ring
from chainwarn.errors import ConditionError
from chainwarn.mpoly import MPoly, parse_poly


def problem(cfg):
    return interp.InterpolationProblem.from_config(cfg)


def test_linear_independence_over_chain_ring():
    z4 = make_chain_ring(2, 1, 2)
    assert interp.is_linearly_independent([parse_poly("1", z4, 1), parse_poly("t1", z4, 1)])
    assert not interp.is_linearly_independent([parse_poly("1", z4, 1), parse_poly("2*t1", z4, 1)])
    assert not interp.is_linearly_independent([parse_poly("t1", z4, 1), parse_poly("t1 + 2", z4, 1)])
    # 2 (t + 1) + 2 (t + 3) = 0 in Z/4
    assert not interp.is_linearly_independent([parse_poly("t1 + 1", z4, 1), parse_poly("t1 + 3", z4, 1)])
    assert interp.is_linearly_independent([parse_poly("t1 + 1", z4, 1), parse_poly("t1 + 2", z4, 1) * 3])


def test_dependent_basis_rejected():
    with pytest.raises(ValueError):
        problem({"p": 2, "v": 2, "basis": ["t1", "3*t1"], "A": [[0, 1], [0, 1]],
                 "nodes": [0], "B": [[0]]})


def test_count_examples():
    P = problem({"p": 2, "basis": ["1", "t1"], "A": [[0, 1], [0, 1]], "nodes": [0, 1],
                 "B": [[0], [0, 1]]})
    r = interp.interp_count(P)
    assert (r.count, r.bound, r.direct_count) == (2, 2, 2)
    P = problem({"p": 3, "basis": ["1", "t1", "t1^2"], "A": [[0, 1, 2]] * 3, "nodes": [0, 1, 2],
                 "B": [[0], [0, 1], [0]]})
    r = interp.interp_count(P)
    assert (r.count, r.bound, r.argument) == (2, 2, 4) and r.holds


def test_nonzero_interpolant():
    P = problem({"p": 3, "basis": ["1", "t1", "t1^2"], "A": [[0, 1, 2]] * 3, "nodes": [0, 1, 2],
                 "B": [[0], [0, 1], [0]]})
    assert interp.existence_guaranteed(P)
    c = interp.find_nonzero_interpolant(P)
    assert any(c) and P.accepts(c)
    assert str(P.combine(c)) == "2*t1^2 + 2*t1"


def test_nonzero_interpolant_needs_zero():
    P = problem({"p": 3, "basis": ["1"], "A": [[1, 2]], "nodes": [0], "B": [[0]]})
    with pytest.raises(ConditionError):
        interp.find_nonzero_interpolant(P)


def test_random_problems_over_galois_ring():
    rng = random.Random(1)
    ring = make_chain_ring(2, 2, 2)
    t = MPoly.variable(ring, 1, 0)
    reps = ring.coset_representatives(1)
    for _ in range(20):
        n = rng.randint(1, 3)
        A = [SubsetSpec(rng.sample(reps, rng.randint(1, 3)), ring) for _ in range(n)]
        nodes = [[ring.from_index(rng.randrange(16))] for _ in range(2)]
        B = [SubsetSpec(rng.sample(reps, rng.randint(1, 4)), ring) for _ in range(2)]
        P = interp.InterpolationProblem(ring, [t ** k for k in range(n)], A, nodes,
                                        [rng.randint(1, 2) for _ in range(2)], B)
        r = interp.interp_count(P)
        assert r.count == r.direct_count and r.holds


@pytest.mark.parametrize("q,targets,min_degree,criterion", [
    (2, {1: [0, 1]}, 1, 1),
    (3, {1: [0, 1], 2: [0]}, 2, 2),
    (3, {1: [0, 1, 2], 2: [0, 1, 2]}, 1, 1),
    (3, {1: [0], 2: [0]}, 3, 3),
])
def test_troi_zannier_examples(q, targets, min_degree, criterion):
    res = interp.troi_zannier(q, targets)
    assert res.min_degree == min_degree and res.criterion_degree == criterion
    assert res.criterion_holds
    assert res.witness.total_degree() == min_degree


def test_troi_zannier_displayed_bound():
    res = interp.troi_zannier(2, {1: [0, 1]})
    assert res.displayed_bound == Fraction(1)
    # unconstrained targets over F_3: closed form 1/2 sits below the true degree 1
    res = interp.troi_zannier(3, {1: [0, 1, 2], 2: [0, 1, 2]})
    assert res.displayed_bound == Fraction(1, 2) and not res.displayed_bound_holds


def test_troi_zannier_f4_uses_element_indices():
    field = interp.field_of_order(4)
    res = interp.troi_zannier(4, {1: [0, 1], 2: [0, 2], 3: [0, 3]})
    # f = t takes x into {0, x}: degree 1
    assert res.min_degree == 1
    for x in list(field.elements())[1:]:
        assert field.index(res.witness([x])) in (0, field.index(x))


def test_troi_zannier_validation():
    with pytest.raises(ConditionError):
        interp.troi_zannier(3, {1: [1], 2: [0]})
    with pytest.raises(ValueError):
        interp.troi_zannier(3, {1: [0]})
    with pytest.raises(ValueError):
        interp.field_of_order(6)
